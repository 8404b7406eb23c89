#include "nashtk/bimatrix.hpp"

#include <cstddef>

#include "nashtk/errors.hpp"
#include "nashtk/rng.hpp"

namespace nashtk {

std::string to_string(NormTag tag) {
  switch (tag) {
    case NormTag::raw: return "raw";
    case NormTag::normalized: return "normalized";
    case NormTag::positive: return "positive";
  }
  throw std::logic_error("unreachable");
}

NormTag norm_tag_from_string(const std::string& s) {
  if (s == "raw") return NormTag::raw;
  if (s == "normalized") return NormTag::normalized;
  if (s == "positive") return NormTag::positive;
  throw InputError("unknown normalization tag: " + s);
}

static void check_range(const RatMatrix& m, const Rational& lo,
                        const Rational& hi, const char* what) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (m.at(i, j) < lo || m.at(i, j) > hi)
        throw InputError(std::string("entry outside ") + what +
                         " range despite tag");
}

BimatrixGame BimatrixGame::make(RatMatrix A, RatMatrix B, NormTag tag) {
  if (A.rows() == 0 || A.cols() == 0)
    throw InputError("game must have at least one row and column");
  if (A.rows() != B.rows() || A.cols() != B.cols())
    throw InputError("payoff matrices must have identical dimensions");
  if (tag == NormTag::normalized) {
    check_range(A, Rational(-1), Rational(1), "[-1,1]");
    check_range(B, Rational(-1), Rational(1), "[-1,1]");
  } else if (tag == NormTag::positive) {
    check_range(A, Rational(0), Rational(1), "[0,1]");
    check_range(B, Rational(0), Rational(1), "[0,1]");
  }
  BimatrixGame g;
  g.m = A.rows();
  g.n = A.cols();
  g.A = std::move(A);
  g.B = std::move(B);
  g.tag = tag;
  return g;
}

void check_profile(const BimatrixGame& g, const MixedProfile& p) {
  if (p.x.size() != g.m || p.y.size() != g.n)
    throw InputError("profile dimensions do not match the game");
  if (!is_probability_vector(p.x) || !is_probability_vector(p.y))
    throw InputError("profile vectors must be nonnegative and sum to 1");
}

DefectReport equilibrium_defects(const BimatrixGame& g, const MixedProfile& p) {
  check_profile(g, p);
  RatVector Ay = mat_vec(g.A, p.y);   // row player's payoff per pure row
  RatVector xB = vec_mat(p.x, g.B);   // column player's payoff per pure column
  Rational bestRow = Ay[0], bestCol = xB[0];
  for (const auto& v : Ay) bestRow = max(bestRow, v);
  for (const auto& v : xB) bestCol = max(bestCol, v);
  Rational payRow = dot(p.x, Ay);
  Rational payCol = dot(xB, p.y);

  DefectReport r;
  r.row_additive = bestRow - payRow;
  r.col_additive = bestCol - payCol;
  if (bestRow > Rational(0)) {
    r.row_relative = Rational(1) - payRow / bestRow;
  } else {
    r.row_relative = Rational(0);
    r.relative_degenerate = true;
  }
  if (bestCol > Rational(0)) {
    r.col_relative = Rational(1) - payCol / bestCol;
  } else {
    r.col_relative = Rational(0);
    r.relative_degenerate = true;
  }
  return r;
}

bool is_well_supported(const BimatrixGame& g, const MixedProfile& p,
                       const Rational& eps) {
  check_profile(g, p);
  if (eps < Rational(0)) throw InputError("eps must be nonnegative");
  RatVector Ay = mat_vec(g.A, p.y);
  RatVector xB = vec_mat(p.x, g.B);
  for (std::size_t j = 0; j < g.m; ++j)
    for (std::size_t k = 0; k < g.m; ++k)
      if (Ay[j] > Ay[k] + eps && p.x[k] > Rational(0)) return false;
  for (std::size_t j = 0; j < g.n; ++j)
    for (std::size_t k = 0; k < g.n; ++k)
      if (xB[j] > xB[k] + eps && p.y[k] > Rational(0)) return false;
  return true;
}

MixedProfile well_supported_from_approx(const BimatrixGame& g,
                                        const MixedProfile& p,
                                        const Rational& eps) {
  check_profile(g, p);
  if (g.tag != NormTag::positive)
    throw InputError("well_supported_from_approx needs a positively normalized game");
  if (eps < Rational(0) || eps > Rational(1))
    throw InputError("eps must lie in [0, 1]");
  DefectReport d = equilibrium_defects(g, p);
  Rational bound = eps * eps / Rational(8);
  if (d.row_additive > bound || d.col_additive > bound)
    throw InputError("profile is not an (eps^2/8)-approximate equilibrium");

  RatVector Ay = mat_vec(g.A, p.y);
  RatVector xB = vec_mat(p.x, g.B);
  Rational half = eps / Rational(2);
  MixedProfile out = p;
  // drop every row beaten by at least eps/2, then every column likewise
  for (std::size_t j = 0; j < g.m; ++j)
    for (std::size_t i = 0; i < g.m; ++i)
      if (Ay[i] >= Ay[j] + half) {
        out.x[j] = Rational(0);
        break;
      }
  for (std::size_t k = 0; k < g.n; ++k)
    for (std::size_t i = 0; i < g.n; ++i)
      if (xB[i] >= xB[k] + half) {
        out.y[k] = Rational(0);
        break;
      }
  Rational sx = vec_sum(out.x), sy = vec_sum(out.y);
  if (sx == Rational(0) || sy == Rational(0))
    throw std::logic_error("surviving support empty despite precondition");
  for (auto& e : out.x) e /= sx;
  for (auto& e : out.y) e /= sy;
  return out;
}

static void normalize_matrix(const RatMatrix& in, RatMatrix& out,
                             Rational& scale, Rational& shift) {
  Rational lo = min_entry(in), hi = max_entry(in);
  shift = lo;
  scale = (hi == lo) ? Rational(1) : hi - lo;
  out = RatMatrix(in.rows(), in.cols());
  for (std::size_t i = 0; i < in.rows(); ++i)
    for (std::size_t j = 0; j < in.cols(); ++j)
      out.at(i, j) = (in.at(i, j) - shift) / scale;
}

NormalizeResult positively_normalize(const BimatrixGame& g) {
  NormalizeResult r;
  RatMatrix A2, B2;
  normalize_matrix(g.A, A2, r.scaleA, r.shiftA);
  normalize_matrix(g.B, B2, r.scaleB, r.shiftB);
  r.game = BimatrixGame::make(std::move(A2), std::move(B2), NormTag::positive);
  return r;
}

static unsigned min_viable_bits(const RatVector& v) {
  Rational hi(0);
  for (const auto& e : v) hi = max(hi, e);
  Rational grid(1);
  for (unsigned P = 1; P <= 1u << 20; ++P) {
    grid /= Rational(2);
    if (grid <= hi) return P;
  }
  throw std::logic_error("vector too small to truncate at any practical P");
}

static RatVector truncate_vector(const RatVector& v, unsigned P) {
  Rational scale = pow2(static_cast<long>(P));
  RatVector t(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    t[i] = Rational((v[i] * scale).floor()) / scale;
  Rational s = vec_sum(t);
  if (s == Rational(0))
    throw InputError("truncation wiped the vector; smallest workable P is " +
                     std::to_string(min_viable_bits(v)));
  for (auto& e : t) e /= s;
  return t;
}

MixedProfile truncate_profile(const MixedProfile& p, unsigned P) {
  if (P < 1) throw InputError("P must be >= 1");
  if (!is_probability_vector(p.x) || !is_probability_vector(p.y))
    throw InputError("profile vectors must be nonnegative and sum to 1");
  return {truncate_vector(p.x, P), truncate_vector(p.y, P)};
}

// smallest integer >= n^(p/q) for n >= 1, p, q >= 1
static mpz_class ceil_pow_frac(const mpz_class& n, const mpz_class& p,
                               const mpz_class& q) {
  if (!p.fits_ulong_p() || !q.fits_ulong_p())
    throw InputError("padding exponent too large");
  mpz_class npow = ipow(n, p.get_ui());
  mpz_class root;
  int exact = mpz_root(root.get_mpz_t(), npow.get_mpz_t(), q.get_ui());
  return exact ? root : root + 1;
}

PadGameResult pad_game(const BimatrixGame& g, const Rational& c,
                       const Rational& cprime) {
  if (g.tag != NormTag::positive)
    throw InputError("pad_game needs a positively normalized game");
  if (g.m != g.n) throw InputError("pad_game needs a square game");
  if (g.n < 2) throw InputError("pad_game needs n >= 2");
  if (c < Rational(2)) throw InputError("pad_game needs c >= 2");
  if (cprime <= Rational(0) || cprime >= c)
    throw InputError("pad_game needs 0 < c' < c");

  const std::size_t n = g.n;
  // shift each column of A (row of B) so its maximum becomes exactly 1
  RatMatrix A1(n, n), B1(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Rational colmax = g.A.at(0, j);
    for (std::size_t i = 1; i < n; ++i) colmax = max(colmax, g.A.at(i, j));
    for (std::size_t i = 0; i < n; ++i)
      A1.at(i, j) = g.A.at(i, j) + (Rational(1) - colmax);
  }
  for (std::size_t i = 0; i < n; ++i) {
    Rational rowmax = g.B.at(i, 0);
    for (std::size_t j = 1; j < n; ++j) rowmax = max(rowmax, g.B.at(i, j));
    for (std::size_t j = 0; j < n; ++j)
      B1.at(i, j) = g.B.at(i, j) + (Rational(1) - rowmax);
  }

  Rational expo = Rational(2) * c / cprime;
  mpz_class nn = ceil_pow_frac(mpz_class(static_cast<long>(n)), expo.num(),
                               expo.den());
  if (!nn.fits_ulong_p() || nn.get_ui() > (1u << 22))
    throw InputError("padded size " + nn.get_str() + " is impractically large");
  const std::size_t n2 = nn.get_ui();
  if (n2 <= n) throw std::logic_error("padded size did not grow");

  RatMatrix A2(n2, n2), B2(n2, n2);
  for (std::size_t i = 0; i < n2; ++i)
    for (std::size_t j = 0; j < n2; ++j) {
      if (i < n && j < n) {
        A2.at(i, j) = A1.at(i, j);
        B2.at(i, j) = B1.at(i, j);
      } else if (i < n && j >= n) {
        A2.at(i, j) = Rational(1);
      } else if (i >= n && j < n) {
        B2.at(i, j) = Rational(1);
      }
    }

  PadGameResult r;
  r.padded = BimatrixGame::make(std::move(A2), std::move(B2), NormTag::positive);
  r.original_n = n;
  r.padded_n = n2;
  return r;
}

MixedProfile PadGameResult::recover(const MixedProfile& big) const {
  if (big.x.size() != padded_n || big.y.size() != padded_n)
    throw InputError("profile does not match the padded game");
  MixedProfile small;
  small.x.assign(big.x.begin(), big.x.begin() + static_cast<long>(original_n));
  small.y.assign(big.y.begin(), big.y.begin() + static_cast<long>(original_n));
  Rational sx = vec_sum(small.x), sy = vec_sum(small.y);
  if (sx == Rational(0) || sy == Rational(0))
    throw InputError("profile carries no mass on the original block");
  for (auto& e : small.x) e /= sx;
  for (auto& e : small.y) e /= sy;
  return small;
}

BimatrixGame perturb_uniform(const BimatrixGame& g, const Rational& sigma,
                             std::uint64_t seed) {
  if (sigma < Rational(0)) throw InputError("sigma must be nonnegative");
  if (sigma == Rational(0)) return g;

  // grid points k * 2^-30 with |k| <= floor(sigma * 2^30)
  mpz_class F = (sigma * pow2(30)).floor();
  mpz_class range = 2 * F + 1;
  if (!range.fits_ulong_p())
    throw InputError("sigma too large for the dyadic perturbation grid");
  const std::uint64_t span = range.get_ui();
  const Rational grid = pow2(-30);

  SplitMix64 rng(seed);
  auto noisy = [&](const RatMatrix& in) {
    RatMatrix out(in.rows(), in.cols());
    for (std::size_t i = 0; i < in.rows(); ++i)
      for (std::size_t j = 0; j < in.cols(); ++j) {
        mpz_class k = mpz_class(rng.next_below(span)) - F;
        out.at(i, j) = in.at(i, j) + Rational(k) * grid;
      }
    return out;
  };
  RatMatrix A2 = noisy(g.A), B2 = noisy(g.B);
  return BimatrixGame::make(std::move(A2), std::move(B2), NormTag::raw);
}

MixedProfile approx_by_perturbation(const BimatrixGame& g, const Rational& eps,
                                    std::uint64_t seed, const SolverFn& solver) {
  if (g.tag == NormTag::raw)
    throw InputError("approx_by_perturbation needs a normalized game");
  if (eps <= Rational(0)) throw InputError("eps must be positive");
  BimatrixGame noisy = perturb_uniform(g, eps / Rational(2), seed);
  MixedProfile p = solver(noisy);
  check_profile(g, p);
  DefectReport d = equilibrium_defects(g, p);
  if (d.row_additive > eps || d.col_additive > eps)
    throw VerifyError("perturbation solve produced defects above eps");
  return p;
}

}  // namespace nashtk
