#include "nashtk/solve.hpp"

#include <algorithm>
#include <vector>

#include "nashtk/errors.hpp"
#include "nashtk/lp.hpp"

namespace nashtk {

namespace {

// All k-subsets of {0..n-1} in lexicographic order (as sorted index lists).
void for_each_subset(std::size_t n, std::size_t k,
                     const std::function<bool(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = i;
  for (;;) {
    if (fn(idx)) return;
    // advance to the next combination
    std::size_t i = k;
    while (i > 0) {
      --i;
      if (idx[i] != i + n - k) {
        ++idx[i];
        for (std::size_t j = i + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
        i = 1;  // marker: advanced
        break;
      }
      if (i == 0) return;  // exhausted
    }
    if (i == 0) return;
  }
}

// A support pair admits no equilibrium when some candidate row is strictly
// dominated by another row on every candidate column: any y carried by those
// columns then pays the dominating row strictly more, yet the indifference
// system caps every row at the supported rows' common payoff. Rejecting such
// pairs (and the symmetric column case) skips the exact feasibility solve
// without changing which support pair is accepted first.
bool strictly_dominated(const BimatrixGame& g,
                        const std::vector<std::size_t>& sx,
                        const std::vector<std::size_t>& sy) {
  for (std::size_t i : sx) {
    for (std::size_t r = 0; r < g.m; ++r) {
      if (r == i) continue;
      bool dom = true;
      for (std::size_t j : sy) {
        if (g.A.at(r, j) <= g.A.at(i, j)) {
          dom = false;
          break;
        }
      }
      if (dom) return true;
    }
  }
  for (std::size_t j : sy) {
    for (std::size_t c = 0; c < g.n; ++c) {
      if (c == j) continue;
      bool dom = true;
      for (std::size_t i : sx) {
        if (g.B.at(i, c) <= g.B.at(i, j)) {
          dom = false;
          break;
        }
      }
      if (dom) return true;
    }
  }
  return false;
}

// Solve the indifference system for one support pair; empty optional when the
// pair admits no equilibrium.
std::optional<MixedProfile> try_support(const BimatrixGame& g,
                                        const std::vector<std::size_t>& sx,
                                        const std::vector<std::size_t>& sy) {
  // variables: x over sx, y over sy, then payoff levels u (row), v (column)
  const std::size_t nx = sx.size(), ny = sy.size();
  const std::size_t nv = nx + ny + 2;
  const std::size_t iu = nx + ny, iv = nx + ny + 1;
  std::vector<LinearConstraint> eqs, ineqs;

  auto fresh = [&] {
    return LinearConstraint{RatVector(nv), Rational(0)};
  };

  {  // sum x = 1, sum y = 1
    auto c = fresh();
    for (std::size_t i = 0; i < nx; ++i) c.coeffs[i] = Rational(1);
    c.rhs = Rational(1);
    eqs.push_back(c);
    auto d = fresh();
    for (std::size_t j = 0; j < ny; ++j) d.coeffs[nx + j] = Rational(1);
    d.rhs = Rational(1);
    eqs.push_back(d);
  }

  // row payoffs: supported rows tie at u, others stay at or below u
  for (std::size_t i = 0; i < g.m; ++i) {
    auto c = fresh();
    for (std::size_t j = 0; j < ny; ++j) c.coeffs[nx + j] = g.A.at(i, sy[j]);
    bool in = std::binary_search(sx.begin(), sx.end(), i);
    if (in) {
      c.coeffs[iu] = Rational(-1);  // a_i . y - u = 0
      eqs.push_back(c);
    } else {
      for (auto& e : c.coeffs) e = -e;
      c.coeffs[iu] = Rational(1);  // u - a_i . y >= 0
      ineqs.push_back(c);
    }
  }
  // column payoffs symmetrically
  for (std::size_t j = 0; j < g.n; ++j) {
    auto c = fresh();
    for (std::size_t i = 0; i < nx; ++i) c.coeffs[i] = g.B.at(sx[i], j);
    bool in = std::binary_search(sy.begin(), sy.end(), j);
    if (in) {
      c.coeffs[iv] = Rational(-1);
      eqs.push_back(c);
    } else {
      for (auto& e : c.coeffs) e = -e;
      c.coeffs[iv] = Rational(1);
      ineqs.push_back(c);
    }
  }
  // nonnegativity of the support variables
  for (std::size_t i = 0; i < nx + ny; ++i) {
    auto c = fresh();
    c.coeffs[i] = Rational(1);
    ineqs.push_back(c);
  }

  auto sol = lp_feasible(eqs, ineqs, nv);
  if (!sol) return std::nullopt;
  MixedProfile p;
  p.x.assign(g.m, Rational(0));
  p.y.assign(g.n, Rational(0));
  for (std::size_t i = 0; i < nx; ++i) p.x[sx[i]] = (*sol)[i];
  for (std::size_t j = 0; j < ny; ++j) p.y[sy[j]] = (*sol)[nx + j];
  return p;
}

void assert_exact(const BimatrixGame& g, const MixedProfile& p,
                  const char* who) {
  if (!equilibrium_defects(g, p).is_exact())
    throw std::logic_error(std::string(who) + " produced a non-equilibrium");
}

}  // namespace

MixedProfile support_enumeration(const BimatrixGame& g) {
  for (std::size_t total = 2; total <= g.m + g.n; ++total) {
    for (std::size_t kx = 1; kx + 1 <= total && kx <= g.m; ++kx) {
      std::size_t ky = total - kx;
      if (ky < 1 || ky > g.n) continue;
      std::optional<MixedProfile> found;
      for_each_subset(g.m, kx, [&](const std::vector<std::size_t>& sx) {
        bool done = false;
        for_each_subset(g.n, ky, [&](const std::vector<std::size_t>& sy) {
          if (strictly_dominated(g, sx, sy)) return false;
          auto p = try_support(g, sx, sy);
          if (p) {
            found = std::move(p);
            done = true;
          }
          return done;
        });
        return done;
      });
      if (found) {
        assert_exact(g, *found, "support_enumeration");
        return *found;
      }
    }
  }
  throw std::logic_error("support_enumeration found no equilibrium");
}

namespace {

// One side of the complementary pivoting system. Columns: the side's own
// strategy variables (count `own`), then the slack variables (count `slk`),
// then the right-hand side. Rows are indexed by basic variable.
struct Tableau {
  std::size_t own, slk;
  std::vector<RatVector> rows;     // each of length own + slk + 1
  std::vector<std::size_t> basis;  // variable id per row; ids: 0..own-1 own,
                                   // own..own+slk-1 slack

  std::size_t rhs_col() const { return own + slk; }

  // Pivot the entering variable in; returns the leaving variable id.
  // Lexicographic ratio test over (rhs, slack columns) guarantees a unique
  // blocking row even on degenerate polyhedra.
  std::size_t pivot_in(std::size_t enter) {
    const std::size_t R = rows.size();
    std::size_t best = R;
    for (std::size_t i = 0; i < R; ++i) {
      if (rows[i][enter] <= Rational(0)) continue;
      if (best == R) {
        best = i;
        continue;
      }
      // compare row i against current best lexicographically
      int cmp = 0;
      for (std::size_t c = 0; c <= slk && cmp == 0; ++c) {
        std::size_t col = (c == 0) ? rhs_col() : own + (c - 1);
        Rational lhs = rows[i][col] / rows[i][enter];
        Rational rhs = rows[best][col] / rows[best][enter];
        if (lhs < rhs) cmp = -1;
        else if (lhs > rhs) cmp = 1;
      }
      if (cmp == 0)
        throw std::logic_error("lexicographic ratio test tie");
      if (cmp < 0) best = i;
    }
    if (best == R)
      throw std::logic_error("complementary pivot column is unbounded");

    RatVector& prow = rows[best];
    const Rational piv = prow[enter];
    for (auto& e : prow) e /= piv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == best) continue;
      const Rational f = rows[i][enter];
      if (f == Rational(0)) continue;
      for (std::size_t c = 0; c < prow.size(); ++c)
        rows[i][c] -= f * prow[c];
    }
    std::size_t leaving = basis[best];
    basis[best] = enter;
    return leaving;
  }

  RatVector own_values() const {
    RatVector v(own, Rational(0));
    for (std::size_t i = 0; i < rows.size(); ++i)
      if (basis[i] < own) v[basis[i]] = rows[i][rhs_col()];
    return v;
  }
};

}  // namespace

MixedProfile lemke_howson(const BimatrixGame& g, std::size_t initial_label,
                          std::optional<std::uint64_t> max_pivots) {
  const std::size_t m = g.m, n = g.n;
  if (initial_label < 1 || initial_label > m + n)
    throw InputError("initial label must lie in 1..m+n");

  // shift both payoff matrices strictly positive; equilibria are unaffected
  Rational lo = min(min_entry(g.A), min_entry(g.B));
  Rational shift = Rational(1) + lo.abs();
  auto S = [&](const Rational& v) { return v + shift; };

  // P-side: rows are the n column-slacks of  B^T x <= 1, x >= 0.
  Tableau P;
  P.own = m;
  P.slk = n;
  P.rows.assign(n, RatVector(m + n + 1));
  P.basis.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < m; ++i) P.rows[j][i] = S(g.B.at(i, j));
    P.rows[j][m + j] = Rational(1);
    P.rows[j][P.rhs_col()] = Rational(1);
    P.basis[j] = m + j;
  }
  // Q-side: rows are the m row-slacks of  A y <= 1, y >= 0.
  Tableau Q;
  Q.own = n;
  Q.slk = m;
  Q.rows.assign(m, RatVector(n + m + 1));
  Q.basis.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) Q.rows[i][j] = S(g.A.at(i, j));
    Q.rows[i][n + i] = Rational(1);
    Q.rows[i][Q.rhs_col()] = Rational(1);
    Q.basis[i] = n + i;
  }

  // Variable labels: x_i and the Q-slack r_i carry label i+1; y_j and the
  // P-slack s_j carry label m+j+1. Dropping a label means entering the
  // corresponding strategy variable; a step that makes the dropped label's
  // variable leave a basis closes the path.
  bool in_P = initial_label <= m;
  std::size_t enter = in_P ? initial_label - 1 : initial_label - m - 1;
  std::uint64_t steps = 0;
  for (;;) {
    if (max_pivots && steps >= *max_pivots)
      throw BudgetError("pivot budget exhausted after " +
                        std::to_string(steps) + " pivots");
    ++steps;
    std::size_t leaving = in_P ? P.pivot_in(enter) : Q.pivot_in(enter);
    std::size_t label;
    if (in_P)
      label = leaving + 1;  // x_i (id i) -> i+1, s_j (id m+j) -> m+j+1
    else
      label = leaving < n ? m + leaving + 1 : leaving - n + 1;
    if (label == initial_label) break;
    // complement of the leaving variable enters the other tableau
    if (in_P)
      enter = leaving < m ? n + leaving : leaving - m;  // x_i -> r_i, s_j -> y_j
    else
      enter = leaving < n ? m + leaving : leaving - n;  // y_j -> s_j, r_i -> x_i
    in_P = !in_P;
  }

  RatVector xhat = P.own_values(), yhat = Q.own_values();
  Rational sx = vec_sum(xhat), sy = vec_sum(yhat);
  if (sx == Rational(0) || sy == Rational(0))
    throw std::logic_error("pivoting terminated at the artificial origin");
  MixedProfile p;
  p.x = std::move(xhat);
  p.y = std::move(yhat);
  for (auto& e : p.x) e /= sx;
  for (auto& e : p.y) e /= sy;
  assert_exact(g, p, "lemke_howson");
  return p;
}

}  // namespace nashtk
