#pragma once

#include <cstdint>
#include <functional>
#include <string>

#include "nashtk/linalg.hpp"

namespace nashtk {

// Which normalization a game's entries have been verified to satisfy.
//   raw        - no promise
//   normalized - every entry in [-1, 1]
//   positive   - every entry in [0, 1]
enum class NormTag { raw, normalized, positive };

std::string to_string(NormTag tag);
NormTag norm_tag_from_string(const std::string& s);

// Two-player game in strategic form: row player payoff A, column player
// payoff B, both m x n. Construct through make(), which validates dimensions
// and checks the entries against the claimed normalization tag.
struct BimatrixGame {
  std::size_t m = 0, n = 0;
  RatMatrix A, B;
  NormTag tag = NormTag::raw;

  static BimatrixGame make(RatMatrix A, RatMatrix B, NormTag tag = NormTag::raw);
};

// A pair of mixed strategies. Entries nonnegative, each vector sums to 1;
// validated wherever a profile meets a game (check_profile).
struct MixedProfile {
  RatVector x, y;
};

void check_profile(const BimatrixGame& g, const MixedProfile& p);

// How far a profile is from equilibrium, in both the additive and the
// relative sense. The additive defect is the best payoff gain available to
// that player through any deviation (the maximum is attained at a pure
// strategy). The relative defect is 1 - payoff / best when best > 0; when
// best <= 0 it is reported as 0 with relative_degenerate set.
struct DefectReport {
  Rational row_additive, col_additive;
  Rational row_relative, col_relative;
  bool relative_degenerate = false;

  bool is_exact() const {
    return row_additive == Rational(0) && col_additive == Rational(0);
  }
  Rational additive() const { return max(row_additive, col_additive); }
};

DefectReport equilibrium_defects(const BimatrixGame& g, const MixedProfile& p);

// True iff every strategy played with positive probability is within eps of
// the best pure response (both players), under exact comparisons.
bool is_well_supported(const BimatrixGame& g, const MixedProfile& p,
                       const Rational& eps);

// Converts an (eps^2/8)-approximate profile of a positively normalized game
// into an eps-well-supported one: drop every pure strategy beaten by at least
// eps/2, then renormalize the surviving mass proportionally. The
// approximation precondition is checked and its violation is an input error.
MixedProfile well_supported_from_approx(const BimatrixGame& g,
                                        const MixedProfile& p,
                                        const Rational& eps);

struct NormalizeResult {
  BimatrixGame game;  // positively normalized
  // entry = normalized * scale + shift recovers the original, per matrix
  Rational scaleA, shiftA, scaleB, shiftB;
};

// Affine map per matrix onto [0, 1]: (a - min) / (max - min). A constant
// matrix maps to all zeros (scale recorded as 1 so inversion still works).
NormalizeResult positively_normalize(const BimatrixGame& g);

// Keep only the first P binary-fraction bits of every entry (floor to a
// multiple of 2^-P), then renormalize each vector by its exact 1-norm.
// An all-zero truncated vector is an error naming the smallest workable P.
MixedProfile truncate_profile(const MixedProfile& p, unsigned P);

struct PadGameResult {
  BimatrixGame padded;      // size n'' x n''
  std::size_t original_n, padded_n;

  // Restrict to the first original_n coordinates and renormalize.
  MixedProfile recover(const MixedProfile& big) const;
};

// Grow an n x n positively normalized game so that weaker approximations of
// the big game map back to stronger approximations of the original. First
// each column of A (row of B) is shifted so its maximum becomes 1, then the
// game is embedded as the top-left block of an n'' x n'' game, with ones in
// the off-diagonal blocks and zeros in the bottom-right block, where
// n'' = ceil(n^(2c/c')).
PadGameResult pad_game(const BimatrixGame& g, const Rational& c,
                       const Rational& cprime);

// Add to every entry an independent uniform draw from the dyadic grid
// {k * 2^-30} intersected with [-sigma, sigma]. Deterministic per seed.
BimatrixGame perturb_uniform(const BimatrixGame& g, const Rational& sigma,
                             std::uint64_t seed);

using SolverFn = std::function<MixedProfile(const BimatrixGame&)>;

// Perturb with magnitude eps/2, solve the perturbed game exactly, and return
// that equilibrium; on a normalized game it is eps-approximate for the
// original because each player's payoff error is at most eps/2.
MixedProfile approx_by_perturbation(const BimatrixGame& g, const Rational& eps,
                                    std::uint64_t seed, const SolverFn& solver);

}  // namespace nashtk
