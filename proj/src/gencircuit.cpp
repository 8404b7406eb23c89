#include "nashtk/gencircuit.hpp"

#include <algorithm>
#include <set>

#include "nashtk/errors.hpp"
#include "nashtk/lp.hpp"
#include "nashtk/rng.hpp"

namespace nashtk {

std::string to_string(GateType t) {
  switch (t) {
    case GateType::Zeta: return "Gzeta";
    case GateType::TimesZeta: return "Gtimes";
    case GateType::Copy: return "G=";
    case GateType::Plus: return "G+";
    case GateType::Minus: return "G-";
    case GateType::Less: return "G<";
    case GateType::And: return "Gand";
    case GateType::Or: return "Gor";
    case GateType::Not: return "Gnot";
  }
  throw std::logic_error("unreachable");
}

GateType gate_type_from_string(const std::string& s) {
  if (s == "Gzeta") return GateType::Zeta;
  if (s == "Gtimes") return GateType::TimesZeta;
  if (s == "G=") return GateType::Copy;
  if (s == "G+") return GateType::Plus;
  if (s == "G-") return GateType::Minus;
  if (s == "G<") return GateType::Less;
  if (s == "Gand") return GateType::And;
  if (s == "Gor") return GateType::Or;
  if (s == "Gnot") return GateType::Not;
  throw InputError("unknown gate type: " + s);
}

static bool one_input(GateType t) {
  return t == GateType::TimesZeta || t == GateType::Copy || t == GateType::Not;
}
static bool two_inputs(GateType t) {
  return t == GateType::Plus || t == GateType::Minus || t == GateType::Less ||
         t == GateType::And || t == GateType::Or;
}

void GeneralizedCircuit::validate() const {
  if (K < 1) throw InputError("circuit needs at least one node");
  std::set<NodeId> outputs;
  auto in_range = [&](NodeId id) {
    if (mpz_class(static_cast<unsigned long>(id)) >= K)
      throw InputError("node id " + std::to_string(id) + " out of range");
  };
  for (const auto& g : gates) {
    if (g.type == GateType::Zeta) {
      if (g.v1 || g.v2)
        throw InputError("constant gate takes no inputs");
      if (!g.alpha) throw InputError("constant gate needs alpha");
      if (*g.alpha < Rational(0) || *g.alpha > cap())
        throw InputError("constant gate alpha must lie in [0, 1/K]");
    } else if (one_input(g.type)) {
      if (!g.v1 || g.v2)
        throw InputError(to_string(g.type) + " takes exactly one input");
    } else {
      if (!g.v1 || !g.v2)
        throw InputError(to_string(g.type) + " takes two inputs");
      if (*g.v1 == *g.v2)
        throw InputError("binary gate inputs must be distinct nodes");
    }
    if (g.type == GateType::TimesZeta) {
      if (!g.alpha) throw InputError("scale gate needs alpha");
      if (*g.alpha < Rational(0) || *g.alpha > Rational(1))
        throw InputError("scale gate alpha must lie in [0, 1]");
    }
    if (g.type != GateType::Zeta && g.type != GateType::TimesZeta && g.alpha)
      throw InputError("alpha is only meaningful on constant and scale gates");
    if (g.v1) in_range(*g.v1);
    if (g.v2) in_range(*g.v2);
    in_range(g.v);
    if (!outputs.insert(g.v).second)
      throw InputError("two gates share output node " + std::to_string(g.v));
  }
}

std::vector<NodeId> GeneralizedCircuit::wired_nodes() const {
  std::set<NodeId> s;
  for (const auto& g : gates) {
    if (g.v1) s.insert(*g.v1);
    if (g.v2) s.insert(*g.v2);
    s.insert(g.v);
  }
  return {s.begin(), s.end()};
}

BoolValue boolean_value(const Rational& x, const mpz_class& K,
                        const Rational& eps) {
  Rational cap(mpz_class(1), K);
  if (cap - eps <= x && x <= cap + eps) return BoolValue::one;
  if (Rational(0) <= x && x <= eps) return BoolValue::zero;
  return BoolValue::indeterminate;
}

static bool is_one(const Rational& x, const Rational& cap, const Rational& eps) {
  return cap - eps <= x && x <= cap + eps;
}
static bool is_zero(const Rational& x, const Rational& eps) {
  return Rational(0) <= x && x <= eps;
}

bool check_gate(const Gate& g, const Assignment& x, const Rational& eps,
                const mpz_class& K) {
  const Rational cap(mpz_class(1), K);
  const Rational x1 = g.v1 ? x.get(*g.v1) : Rational(0);
  const Rational x2 = g.v2 ? x.get(*g.v2) : Rational(0);
  const Rational xv = x.get(g.v);
  auto near = [&](const Rational& target) {
    return target - eps <= xv && xv <= target + eps;
  };
  switch (g.type) {
    case GateType::Zeta:
      return near(*g.alpha);
    case GateType::TimesZeta:
      return near(min(*g.alpha * x1, cap));
    case GateType::Copy:
      return near(min(x1, cap));
    case GateType::Plus:
      return near(min(x1 + x2, cap));
    case GateType::Minus: {
      Rational d = x1 - x2;
      return min(d, cap) - eps <= xv && xv <= max(d, Rational(0)) + eps;
    }
    case GateType::Less: {
      if (x1 < x2 - eps && !is_one(xv, cap, eps)) return false;
      if (x1 > x2 + eps && !is_zero(xv, eps)) return false;
      return true;
    }
    case GateType::Or: {
      if ((is_one(x1, cap, eps) || is_one(x2, cap, eps)) &&
          !is_one(xv, cap, eps))
        return false;
      if (is_zero(x1, eps) && is_zero(x2, eps) && !is_zero(xv, eps))
        return false;
      return true;
    }
    case GateType::And: {
      if ((is_zero(x1, eps) || is_zero(x2, eps)) && !is_zero(xv, eps))
        return false;
      if (is_one(x1, cap, eps) && is_one(x2, cap, eps) && !is_one(xv, cap, eps))
        return false;
      return true;
    }
    case GateType::Not: {
      if (is_one(x1, cap, eps) && !is_zero(xv, eps)) return false;
      if (is_zero(x1, eps) && !is_one(xv, cap, eps)) return false;
      return true;
    }
  }
  throw std::logic_error("unreachable");
}

SolutionReport check_solution(const GeneralizedCircuit& c, const Assignment& x,
                              const Rational& eps) {
  c.validate();
  SolutionReport rep;
  const Rational hi = c.cap() + eps;
  for (const auto& [id, val] : x.entries()) {
    if (mpz_class(static_cast<unsigned long>(id)) >= c.K)
      throw InputError("assignment mentions node id beyond the circuit");
    if (val < Rational(0) || val > hi) {
      rep.ok = false;
      rep.global_violations.push_back(id);
    }
  }
  for (std::size_t i = 0; i < c.gates.size(); ++i)
    if (!check_gate(c.gates[i], x, eps, c.K)) {
      rep.ok = false;
      rep.gate_violations.push_back(i);
    }
  return rep;
}

PadCircuitResult pad_circuit(const GeneralizedCircuit& c, const Rational& cexp) {
  c.validate();
  if (c.K < 2) throw InputError("padding needs at least two nodes");
  if (cexp < Rational(3))
    throw InputError("padding exponent must be at least 3");
  mpz_class b = ((cexp - Rational(1)) / Rational(2)).ceil();
  if (!b.fits_ulong_p()) throw InputError("padding exponent too large");
  const unsigned long bu = b.get_ui();

  PadCircuitResult r;
  r.original_K = c.K;
  r.factor = ipow(c.K, bu - 1);
  r.circuit = c;
  r.circuit.K = ipow(c.K, bu);
  if (bu > 1) {
    // the new node count dilutes values by K^(b-1); constants must follow
    Rational scale(mpz_class(1), r.factor);
    for (auto& g : r.circuit.gates)
      if (g.type == GateType::Zeta) *g.alpha *= scale;
  }
  r.circuit.validate();
  return r;
}

Assignment PadCircuitResult::pull_back(const Assignment& padded) const {
  Assignment out;
  const Rational f{factor};
  for (const auto& [id, val] : padded.entries())
    if (mpz_class(static_cast<unsigned long>(id)) < original_K)
      out.set(id, val * f);
  return out;
}

namespace {

Rational clamp01cap(const Rational& v, const Rational& cap) {
  if (v < Rational(0)) return Rational(0);
  if (v > cap) return cap;
  return v;
}

// Round to the nearest multiple of 2^-prec, then clamp into [0, cap]. Damped
// averaging grows denominators by one bit per sweep; keeping stored values on
// a fixed grid far finer than eps stops that without disturbing convergence.
Rational round_coarse(const Rational& x, long prec, const Rational& cap) {
  Rational shifted = x * pow2(prec) + Rational(1, 2);
  return clamp01cap(Rational(shifted.floor()) * pow2(-prec), cap);
}

// --- exact finishing step ---------------------------------------------------
//
// Freeze every gate at a branch compatible with the current iterate, write
// all node values as affine forms over the few genuinely free variables, and
// test the frozen system for feasibility exactly. Every imposed constraint
// is at least as strong as the true gate constraint on the chosen branch, so
// a feasible point is a real solution; it is re-verified before being
// returned regardless.
//
// Free variables appear only where a branch leaves a value open: nodes read
// without ever being driven, comparator outputs inside the dead zone, and
// logic outputs whose inputs put them under no constraint. Everything else
// is substituted away, which keeps the program tiny even for circuits with
// hundreds of gates.

struct Affine {
  Rational c;
  std::map<std::size_t, Rational> coef;  // variable id -> coefficient
  bool constant() const { return coef.empty(); }
};

enum class Band { zero, one, middle };

class FrozenSystem {
 public:
  FrozenSystem(const GeneralizedCircuit& c, const Assignment& cur,
               const Rational& eps, const std::set<std::size_t>& forced_dead)
      : c_(c), cur_(cur), eps_(eps), cap_(c.cap()), forced_dead_(forced_dead) {}

  std::optional<Assignment> solve() {
    for (std::size_t i = 0; i < c_.gates.size() && !bad_; ++i)
      freeze_gate(i, c_.gates[i]);
    if (bad_) return std::nullopt;
    for (std::size_t t = 0; t < nvars_; ++t) {
      require_ge(var_form(t));                        // t >= 0
      require_ge(diff(constant(cap_), var_form(t)));  // t <= cap
    }
    if (bad_) return std::nullopt;

    std::vector<LinearConstraint> eqs, ineqs;
    auto densify = [&](const Affine& a) {
      LinearConstraint row;
      row.coeffs = RatVector(nvars_);
      for (const auto& [id, cf] : a.coef) row.coeffs[id] = cf;
      row.rhs = -a.c;
      return row;
    };
    for (const auto& a : eq_) eqs.push_back(densify(a));
    for (const auto& a : ge_) ineqs.push_back(densify(a));
    std::optional<RatVector> sol;
    if (nvars_ == 0)
      sol = RatVector{};
    else
      sol = lp_feasible(eqs, ineqs, nvars_);
    if (!sol) return std::nullopt;

    Assignment out;
    for (const auto& [v, f] : form_) {
      Rational val = f.c;
      for (const auto& [id, cf] : f.coef) val += cf * (*sol)[id];
      out.set(v, val);
    }
    if (!check_solution(c_, out, eps_).ok) return std::nullopt;
    return out;
  }

 private:
  static Affine constant(Rational v) { return {std::move(v), {}}; }
  Affine var_form(std::size_t id) {
    Affine a;
    a.coef[id] = Rational(1);
    return a;
  }
  std::size_t fresh_free() {
    free_vars_.insert(nvars_);
    return nvars_++;
  }

  static void scaled_add(Affine& a, const Affine& b, const Rational& s) {
    a.c += s * b.c;
    for (const auto& [id, cf] : b.coef) {
      auto [it, inserted] = a.coef.try_emplace(id, Rational(0));
      it->second += s * cf;
      if (it->second == Rational(0)) a.coef.erase(it);
    }
  }
  static Affine sum(const Affine& a, const Affine& b) {
    Affine r = a;
    scaled_add(r, b, Rational(1));
    return r;
  }
  static Affine diff(const Affine& a, const Affine& b) {
    Affine r = a;
    scaled_add(r, b, Rational(-1));
    return r;
  }
  static Affine scale(const Affine& a, const Rational& s) {
    Affine r;
    scaled_add(r, a, s);
    return r;
  }
  static Affine shift(Affine a, const Rational& d) {
    a.c += d;
    return a;
  }

  Affine node_form(NodeId v) {
    auto it = form_.find(v);
    if (it != form_.end()) return it->second;
    // Read before (or without) being driven: a free value in [0, cap].
    Affine a = var_form(nvars_++);
    form_.emplace(v, a);
    return a;
  }

  void define(NodeId v, Affine f) {
    auto it = form_.find(v);
    if (it != form_.end()) {
      // The node was read earlier and stands for a variable already; tie the
      // variable to the defining expression.
      require_eq(diff(f, it->second));
      return;
    }
    form_.emplace(v, std::move(f));
  }

  void require_ge(Affine f) {
    if (f.constant()) {
      if (f.c < Rational(0)) bad_ = true;
      return;
    }
    ge_.push_back(std::move(f));
  }
  void require_eq(Affine f) {
    if (f.constant()) {
      if (f.c != Rational(0)) bad_ = true;
      return;
    }
    eq_.push_back(std::move(f));
  }

  // Boolean band of a node as seen by logic gates, with the matching pin
  // added to the system. A middle-band pin keeps the value clear of both
  // boolean bands, so gates reading it are under no constraint at all.
  Band classify(NodeId v) {
    auto memo = band_memo_.find(v);
    if (memo != band_memo_.end()) return memo->second;
    Affine f = node_form(v);
    Band b;
    bool pin = true;
    if (f.constant()) {
      b = f.c <= eps_              ? Band::zero
          : f.c >= cap_ - eps_     ? Band::one
                                   : Band::middle;
      pin = false;  // constants sit where they sit
    } else if (f.c == Rational(0) && f.coef.size() == 1 &&
               f.coef.begin()->second == Rational(1) &&
               free_vars_.count(f.coef.begin()->first) != 0) {
      // Born free: prefer the middle band, which maximizes slack downstream.
      b = Band::middle;
    } else {
      const Rational val = cur_.get(v);
      if (Rational(4) * eps_ >= cap_) {
        // The boolean bands nearly meet; fall back to a two-way split.
        b = val + val >= cap_ ? Band::one : Band::zero;
      } else {
        b = Rational(4) * val >= Rational(3) * cap_ ? Band::one
            : Rational(4) * val <= cap_             ? Band::zero
                                                    : Band::middle;
      }
    }
    if (pin) {
      const Rational two_eps = eps_ + eps_;
      if (b == Band::one) {
        require_ge(shift(f, eps_ - cap_));  // f >= cap - eps
      } else if (b == Band::zero) {
        require_ge(diff(constant(eps_), f));  // f <= eps
      } else {
        require_ge(shift(f, -two_eps));                   // f >= 2 eps
        require_ge(diff(constant(cap_ - two_eps), f));    // f <= cap - 2 eps
      }
    }
    band_memo_.emplace(v, b);
    return b;
  }

  void freeze_gate(std::size_t index, const Gate& g) {
    switch (g.type) {
      case GateType::Zeta:
        define(g.v, constant(*g.alpha));
        break;
      case GateType::TimesZeta:
      case GateType::Copy:
      case GateType::Plus: {
        const Rational k =
            g.type == GateType::TimesZeta ? *g.alpha : Rational(1);
        Affine e = scale(node_form(*g.v1), k);
        Rational cur_e = k * cur_.get(*g.v1);
        if (g.type == GateType::Plus) {
          scaled_add(e, node_form(*g.v2), Rational(1));
          cur_e += cur_.get(*g.v2);
        }
        if (cur_e <= cap_) {
          require_ge(diff(constant(cap_), e));  // stays below the cap
          define(g.v, std::move(e));
        } else {
          require_ge(shift(e, -cap_));  // stays capped
          define(g.v, constant(cap_));
        }
        break;
      }
      case GateType::Minus: {
        Affine d = diff(node_form(*g.v1), node_form(*g.v2));
        if (cur_.get(*g.v1) >= cur_.get(*g.v2)) {
          require_ge(d);
          define(g.v, std::move(d));
        } else {
          require_ge(scale(d, Rational(-1)));
          define(g.v, constant(Rational(0)));
        }
        break;
      }
      case GateType::Less: {
        Affine d = diff(node_form(*g.v1), node_form(*g.v2));
        const Rational gap = cur_.get(*g.v1) - cur_.get(*g.v2);
        const bool forced = forced_dead_.count(index) != 0;
        if (!forced && gap < -eps_) {
          require_ge(scale(shift(d, eps_), Rational(-1)));  // d <= -eps
          define(g.v, constant(cap_));
        } else if (!forced && gap > eps_) {
          require_ge(shift(d, -eps_));  // d >= eps
          define(g.v, constant(Rational(0)));
        } else {
          // Inside (or pulled into) the dead zone: output unconstrained.
          require_ge(shift(d, eps_));                       // d >= -eps
          require_ge(scale(shift(d, -eps_), Rational(-1)));  // d <= eps
          define(g.v, var_form(fresh_free()));
        }
        break;
      }
      case GateType::And:
      case GateType::Or: {
        Band b1 = classify(*g.v1);
        Band b2 = classify(*g.v2);
        bool low, high;
        if (g.type == GateType::And) {
          low = b1 == Band::zero || b2 == Band::zero;
          high = b1 == Band::one && b2 == Band::one;
        } else {
          high = b1 == Band::one || b2 == Band::one;
          low = b1 == Band::zero && b2 == Band::zero;
        }
        if (low)
          define(g.v, constant(Rational(0)));
        else if (high)
          define(g.v, constant(cap_));
        else
          define(g.v, var_form(fresh_free()));
        break;
      }
      case GateType::Not: {
        Band b1 = classify(*g.v1);
        if (b1 == Band::one)
          define(g.v, constant(Rational(0)));
        else if (b1 == Band::zero)
          define(g.v, constant(cap_));
        else
          define(g.v, var_form(fresh_free()));
        break;
      }
    }
  }

  const GeneralizedCircuit& c_;
  const Assignment& cur_;
  const Rational eps_;
  const Rational cap_;
  const std::set<std::size_t>& forced_dead_;

  std::map<NodeId, Affine> form_;
  std::set<std::size_t> free_vars_;
  std::map<NodeId, Band> band_memo_;
  std::vector<Affine> ge_;
  std::vector<Affine> eq_;
  std::size_t nvars_ = 0;
  bool bad_ = false;
};

std::optional<Assignment> try_snap(const GeneralizedCircuit& c,
                                   const Assignment& cur,
                                   const Rational& eps) {
  static const std::set<std::size_t> no_forcing;
  if (auto hit = FrozenSystem(c, cur, eps, no_forcing).solve()) return hit;

  // The iterate may circle an equilibrium whose comparators sit exactly on
  // their thresholds without ever landing there. Retry with the nearest
  // comparators forced into the dead zone, where the program can place them.
  const Rational cap = c.cap();
  const Rational window = min(Rational(4096) * eps, cap / Rational(2));
  std::vector<std::pair<Rational, std::size_t>> near;
  for (std::size_t i = 0; i < c.gates.size(); ++i) {
    const Gate& g = c.gates[i];
    if (g.type != GateType::Less) continue;
    Rational d = (cur.get(*g.v1) - cur.get(*g.v2)).abs();
    if (d <= eps) continue;     // dead already in the base pattern
    if (d > window) continue;   // too far to be plausibly pulled in
    near.emplace_back(std::move(d), i);
  }
  if (near.empty()) return std::nullopt;
  std::sort(near.begin(), near.end());
  if (near.size() > 4) near.resize(4);

  std::vector<std::set<std::size_t>> candidates;
  for (std::size_t i = 0; i < near.size(); ++i)
    candidates.push_back({near[i].second});
  for (std::size_t i = 0; i < near.size(); ++i)
    for (std::size_t j = i + 1; j < near.size(); ++j)
      candidates.push_back({near[i].second, near[j].second});
  for (const auto& forced : candidates)
    if (auto hit = FrozenSystem(c, cur, eps, forced).solve()) return hit;
  return std::nullopt;
}

// Solution check without re-validating the circuit; used inside the sweep
// loop where the circuit is known to be well formed.
bool sweep_ok(const GeneralizedCircuit& c, const Assignment& x,
              const Rational& eps) {
  const Rational hi = c.cap() + eps;
  for (const auto& [id, val] : x.entries())
    if (val < Rational(0) || val > hi) return false;
  for (const auto& g : c.gates)
    if (!check_gate(g, x, eps, c.K)) return false;
  return true;
}

}  // namespace

std::optional<Assignment> iterate_solve(const GeneralizedCircuit& c,
                                        const Rational& eps,
                                        std::uint64_t max_iters,
                                        std::uint64_t seed) {
  c.validate();
  const Rational cap = c.cap();
  Assignment cur;
  SplitMix64 rng(seed);
  // exact finishing step every sweep on small circuits, sparingly on big ones
  const std::size_t ng = c.gates.size();
  const std::uint64_t snap_period = ng <= 64 ? 1 : ng <= 256 ? 8 : 32;
  // stored values live on a dyadic grid far finer than eps
  const long prec =
      64 + static_cast<long>(mpz_sizeinbase(eps.den().get_mpz_t(), 2));

  for (std::uint64_t it = 0; it < max_iters; ++it) {
    for (const auto& g : c.gates) {
      Rational x1 = g.v1 ? cur.get(*g.v1) : Rational(0);
      Rational x2 = g.v2 ? cur.get(*g.v2) : Rational(0);
      Rational old = cur.get(g.v);
      Rational t = old;
      switch (g.type) {
        case GateType::Zeta: t = *g.alpha; break;
        case GateType::TimesZeta: t = min(*g.alpha * x1, cap); break;
        case GateType::Copy: t = min(x1, cap); break;
        case GateType::Plus: t = min(x1 + x2, cap); break;
        case GateType::Minus: t = clamp01cap(x1 - x2, cap); break;
        case GateType::Less:
          if (x1 < x2 - eps) t = cap;
          else if (x1 > x2 + eps) t = Rational(0);
          else t = (rng.next() & 1) ? cap : Rational(0);  // dead zone
          break;
        case GateType::And: {
          auto b1 = boolean_value(x1, c.K, eps);
          auto b2 = boolean_value(x2, c.K, eps);
          if (b1 == BoolValue::zero || b2 == BoolValue::zero) t = Rational(0);
          else if (b1 == BoolValue::one && b2 == BoolValue::one) t = cap;
          break;
        }
        case GateType::Or: {
          auto b1 = boolean_value(x1, c.K, eps);
          auto b2 = boolean_value(x2, c.K, eps);
          if (b1 == BoolValue::one || b2 == BoolValue::one) t = cap;
          else if (b1 == BoolValue::zero && b2 == BoolValue::zero)
            t = Rational(0);
          break;
        }
        case GateType::Not: {
          auto b1 = boolean_value(x1, c.K, eps);
          if (b1 == BoolValue::one) t = Rational(0);
          else if (b1 == BoolValue::zero) t = cap;
          break;
        }
      }
      cur.set(g.v, round_coarse((old + t) / Rational(2), prec, cap));
    }
    if (sweep_ok(c, cur, eps)) return cur;
    if ((it + 1) % snap_period == 0) {
      auto snapped = try_snap(c, cur, eps);
      if (snapped) return snapped;
    }
  }
  return try_snap(c, cur, eps);
}

}  // namespace nashtk
