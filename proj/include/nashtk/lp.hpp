#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "nashtk/linalg.hpp"

namespace nashtk {

// One linear constraint over num_vars free variables:
//   coeffs . x  (= or >=)  rhs
// The relation is chosen by which argument list of lp_feasible it is passed in.
struct LinearConstraint {
  RatVector coeffs;
  Rational rhs;
};

// Exact feasibility test for {equalities: c.x = r} union {inequalities: c.x >= r}
// over num_vars unconstrained rational variables. Returns an exact feasible
// point, or nullopt when the system is infeasible. Deterministic: phase-one
// simplex with the smallest-index (Bland) anti-cycling pivot rule.
std::optional<RatVector> lp_feasible(
    const std::vector<LinearConstraint>& equalities,
    const std::vector<LinearConstraint>& inequalities, std::size_t num_vars);

}  // namespace nashtk
