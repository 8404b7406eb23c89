#pragma once

#include <cstdint>
#include <optional>

#include "nashtk/bimatrix.hpp"

namespace nashtk {

// Exhaustive support enumeration. Support pairs are visited by increasing
// total size; ties are broken by smaller row-support size, then by
// lexicographic order of the row support (as a sorted index list), then of
// the column support. For each pair the indifference system is solved
// exactly: supported strategies tie at a payoff level, unsupported ones do
// not exceed it. Returns the first exact equilibrium in that order.
MixedProfile support_enumeration(const BimatrixGame& g);

// Complementary pivoting on the pair of best-response polyhedra of a
// positively shifted copy of the game, starting from the artificial origin
// and dropping initial_label (1..m for rows, m+1..m+n for columns).
// Degeneracy is resolved with a lexicographic ratio test, so the pivot path
// is unique and finite. Throws BudgetError when max_pivots runs out; never
// returns anything but an exact equilibrium.
MixedProfile lemke_howson(const BimatrixGame& g, std::size_t initial_label,
                          std::optional<std::uint64_t> max_pivots = std::nullopt);

}  // namespace nashtk
