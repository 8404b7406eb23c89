#include "nashtk/lp.hpp"

#include <cstddef>

#include "nashtk/errors.hpp"

namespace nashtk {

// Phase-one simplex on the standard-form system obtained by
//   * splitting each free variable x_i into x_i = p_i - n_i with p_i, n_i >= 0,
//   * subtracting a surplus variable from every ">=" row,
//   * flipping rows so every right-hand side is nonnegative, and
//   * adding one artificial variable per row.
// The artificials start basic; minimizing their sum with Bland's rule
// terminates without cycling, and the system is feasible iff the minimum is 0.
std::optional<RatVector> lp_feasible(
    const std::vector<LinearConstraint>& equalities,
    const std::vector<LinearConstraint>& inequalities, std::size_t num_vars) {
  if (num_vars < 1) throw InputError("lp_feasible: num_vars must be >= 1");
  for (const auto& c : equalities)
    if (c.coeffs.size() != num_vars)
      throw InputError("lp_feasible: equality with wrong arity");
  for (const auto& c : inequalities)
    if (c.coeffs.size() != num_vars)
      throw InputError("lp_feasible: inequality with wrong arity");

  const std::size_t rows = equalities.size() + inequalities.size();
  if (rows == 0) return RatVector(num_vars);  // anything works; return 0

  // Column layout: [p_0..p_{v-1} | n_0..n_{v-1} | s_0..s_{k-1} | a_0..a_{r-1}]
  const std::size_t n_split = 2 * num_vars;
  const std::size_t n_surplus = inequalities.size();
  const std::size_t n_cols = n_split + n_surplus + rows;

  // tab has one row per constraint plus a cost row at index `rows`;
  // column n_cols holds the right-hand side.
  std::vector<RatVector> tab(rows + 1, RatVector(n_cols + 1));
  std::vector<std::size_t> basis(rows);

  std::size_t r = 0;
  auto load_row = [&](const LinearConstraint& c, bool is_ineq,
                      std::size_t surplus_idx) {
    RatVector& row = tab[r];
    for (std::size_t j = 0; j < num_vars; ++j) {
      row[j] = c.coeffs[j];
      row[num_vars + j] = -c.coeffs[j];
    }
    if (is_ineq) row[n_split + surplus_idx] = Rational(-1);
    row[n_cols] = c.rhs;
    if (row[n_cols] < Rational(0))
      for (auto& e : row) e = -e;
    row[n_split + n_surplus + r] = Rational(1);  // artificial
    basis[r] = n_split + n_surplus + r;
    ++r;
  };
  for (const auto& c : equalities) load_row(c, false, 0);
  for (std::size_t k = 0; k < inequalities.size(); ++k)
    load_row(inequalities[k], true, k);

  // Cost row: minimize the sum of artificials. Start with cost 1 on each
  // artificial, then eliminate the basic columns so reduced costs are direct.
  RatVector& cost = tab[rows];
  for (std::size_t i = 0; i < rows; ++i) cost[n_split + n_surplus + i] = Rational(1);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j <= n_cols; ++j) cost[j] -= tab[i][j];

  auto pivot = [&](std::size_t pr, std::size_t pc) {
    RatVector& prow = tab[pr];
    const Rational piv = prow[pc];
    for (auto& e : prow) e /= piv;
    for (std::size_t i = 0; i <= rows; ++i) {
      if (i == pr) continue;
      const Rational f = tab[i][pc];
      if (f == Rational(0)) continue;
      for (std::size_t j = 0; j <= n_cols; ++j) tab[i][j] -= f * prow[j];
    }
    basis[pr] = pc;
  };

  for (;;) {
    // Entering column: smallest index with negative reduced cost.
    std::size_t enter = n_cols;
    for (std::size_t j = 0; j < n_cols; ++j)
      if (cost[j] < Rational(0)) {
        enter = j;
        break;
      }
    if (enter == n_cols) break;  // optimal

    // Leaving row: minimum ratio; ties broken by smallest basic index.
    std::size_t leave = rows;
    Rational best;
    for (std::size_t i = 0; i < rows; ++i) {
      if (tab[i][enter] <= Rational(0)) continue;
      Rational ratio = tab[i][n_cols] / tab[i][enter];
      if (leave == rows || ratio < best ||
          (ratio == best && basis[i] < basis[leave])) {
        leave = i;
        best = ratio;
      }
    }
    // The phase-one objective is bounded below by 0, so a descending column
    // always admits a blocking row.
    if (leave == rows) throw std::logic_error("lp_feasible: unbounded phase one");
    pivot(leave, enter);
  }

  // Optimal value of sum(artificials) is -cost[rhs].
  if (cost[n_cols] != Rational(0)) return std::nullopt;

  RatVector x(num_vars);
  for (std::size_t i = 0; i < rows; ++i) {
    const std::size_t b = basis[i];
    if (b < num_vars)
      x[b] += tab[i][n_cols];
    else if (b < n_split)
      x[b - num_vars] -= tab[i][n_cols];
    // surplus and zero-level artificial variables do not affect x
  }
  return x;
}

}  // namespace nashtk
