#include "nashtk/circuitize.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "nashtk/errors.hpp"

namespace nashtk {

namespace {

std::string point_text(const GridPoint& p) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? "," : "") << p[i];
  os << ")";
  return os.str();
}

}  // namespace

BrouwerInstance BrouwerInstance::make(std::uint32_t n, BoolCircuit circuit,
                                      std::uint64_t validate_budget) {
  if (n == 0) throw InputError("instance dimension must be positive");
  circuit.validate();
  if (circuit.num_inputs != std::size_t(3) * n)
    throw InputError("coloring circuit needs 3n input bits");
  if (circuit.outputs.size() != std::size_t(2) * n)
    throw InputError("coloring circuit needs 2n output bits");

  BrouwerInstance inst;
  inst.n = n;
  inst.circuit = std::move(circuit);

  ColoringTriple t = inst.triple();
  if (t.grid.point_count() <= validate_budget) {
    // Every point must decode to a color; the boundary must follow the
    // forced rule. Skipped for grids beyond the budget.
    GridPoint p(n, 0);
    while (true) {
      try {
        evaluate_color(t, p);
      } catch (const VerifyError& e) {
        throw InputError(std::string("coloring circuit rejected: ") +
                         e.what());
      }
      std::size_t i = n;
      bool done = true;
      while (i-- > 0) {
        if (++p[i] < 8) {
          done = false;
          break;
        }
        p[i] = 0;
      }
      if (done) break;
    }
    BoundaryReport rep =
        validate_boundary(t, (std::uint64_t(n) + 1) * validate_budget + 16);
    if (!rep.ok) {
      const GridPoint& bad = rep.rule_violations.empty()
                                 ? rep.continuity_violations.front()
                                 : rep.rule_violations.front();
      throw InputError("coloring circuit breaks the boundary rule near " +
                       point_text(bad));
    }
  }
  return inst;
}

ColoringTriple BrouwerInstance::triple() const {
  ColoringTriple t;
  t.grid.r.assign(n, 8);
  t.oracle = std::make_shared<CircuitOracle>(circuit);
  return t;
}

ReductionParams ReductionParams::from_m(std::uint32_t m, bool relaxed) {
  if (m == 0) throw InputError("precision exponent m must be positive");
  if (m > 512) throw BudgetError("precision exponent m too large");
  ReductionParams p;
  p.m = m;
  p.K = ipow(2, 6ul * m);
  p.eps = Rational(mpz_class(1), ipow(2, 18ul * m));
  p.relaxed = relaxed;
  return p;
}

ReductionParams choose_params(const BrouwerInstance& instance,
                              std::optional<std::uint32_t> override_m) {
  const std::uint64_t size = instance.circuit.gates.size();
  const bool size_ok = size > instance.n;
  std::uint32_t automatic = 1;
  if (size_ok) {
    while ((std::uint64_t(1) << automatic) < size) ++automatic;
  }
  if (!override_m) {
    if (!size_ok)
      throw InputError(
          "automatic precision choice needs more circuit gates than "
          "dimensions; pass an explicit m instead");
    return ReductionParams::from_m(automatic, false);
  }
  const bool matches_automatic = size_ok && *override_m == automatic;
  return ReductionParams::from_m(*override_m, !matches_automatic);
}

ReductionBuilder::ReductionBuilder(ReductionParams params)
    : params_(std::move(params)) {
  circuit_.K = params_.K;
}

NodeId ReductionBuilder::fresh() {
  if (mpz_class(next_) >= params_.K)
    throw InputError("node budget " + params_.K.get_str() +
                     " exhausted; rebuild with a larger m");
  return next_++;
}

std::vector<NodeId> ReductionBuilder::fresh_block(std::size_t count) {
  std::vector<NodeId> ids(count);
  for (auto& id : ids) id = fresh();
  return ids;
}

void ReductionBuilder::insert(GateType type, std::optional<NodeId> v1,
                              std::optional<NodeId> v2, NodeId out,
                              std::optional<Rational> alpha,
                              BuildPhase phase) {
  if (!outputs_.insert(out).second)
    throw InputError("node " + std::to_string(out) +
                     " already drives a gate output");
  Gate g;
  g.type = type;
  g.v1 = v1;
  g.v2 = v2;
  g.v = out;
  g.alpha = std::move(alpha);
  circuit_.gates.push_back(std::move(g));
  phases_.push_back(phase);
}

void ReductionBuilder::extract_bits(NodeId source,
                                    const std::array<NodeId, 3>& bits,
                                    BuildPhase phase) {
  const Rational cap = Rational(mpz_class(1), params_.K);
  std::array<NodeId, 4> chain;
  for (auto& id : chain) id = fresh();
  insert(GateType::Copy, source, {}, chain[0], {}, phase);
  for (int j = 1; j <= 3; ++j) {
    NodeId threshold = fresh();
    NodeId scaled = fresh();
    insert(GateType::Zeta, {}, {}, threshold, cap * pow2(-j), phase);
    insert(GateType::Less, threshold, chain[j - 1], bits[j - 1], {}, phase);
    insert(GateType::TimesZeta, bits[j - 1], {}, scaled, pow2(-j), phase);
    insert(GateType::Minus, chain[j - 1], scaled, chain[j], {}, phase);
  }
}

void ReductionBuilder::coloring_simulation(const BoolCircuit& c,
                                           const std::vector<NodeId>& coords,
                                           const std::vector<NodeId>& outputs,
                                           BuildPhase phase) {
  c.validate();
  if (c.num_inputs != 3 * coords.size())
    throw InputError("coloring circuit input count does not match the "
                     "encoded coordinates");
  if (c.outputs.size() != outputs.size())
    throw InputError("designated output nodes do not match the coloring "
                     "circuit outputs");

  // A shared constant-zero node lets us copy a boolean value b as b OR 0
  // without widening its tolerance band. Binary gates need two distinct
  // input nodes, so the copy cannot be written as b OR b, and the same
  // rewrite covers source gates whose two operands are one wire.
  NodeId zero = fresh();
  insert(GateType::Zeta, {}, {}, zero, Rational(0), phase);

  std::vector<NodeId> wire(c.num_inputs + c.gates.size());
  for (std::size_t t = 0; t < coords.size(); ++t) {
    std::array<NodeId, 3> bits{fresh(), fresh(), fresh()};
    extract_bits(coords[t], bits, phase);
    for (std::size_t j = 0; j < 3; ++j) wire[3 * t + j] = bits[j];
  }
  const Rational cap = Rational(mpz_class(1), params_.K);
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const BoolGate& g = c.gates[gi];
    NodeId out = fresh();
    bool merged = g.a == g.b;  // AND/OR of a wire with itself is a copy
    switch (g.op) {
      case BoolOp::And:
      case BoolOp::Or:
        if (merged)
          insert(GateType::Or, wire[g.a], zero, out, {}, phase);
        else
          insert(g.op == BoolOp::And ? GateType::And : GateType::Or,
                 wire[g.a], wire[g.b], out, {}, phase);
        break;
      case BoolOp::Not:
        insert(GateType::Not, wire[g.a], {}, out, {}, phase);
        break;
      case BoolOp::Const0:
        insert(GateType::Zeta, {}, {}, out, Rational(0), phase);
        break;
      case BoolOp::Const1:
        insert(GateType::Zeta, {}, {}, out, cap, phase);
        break;
    }
    wire[c.num_inputs + gi] = out;
  }
  // Re-emit each output bit onto its designated node; this tolerates
  // outputs that are input wires or wires shared between positions.
  for (std::size_t o = 0; o < outputs.size(); ++o)
    insert(GateType::Or, wire[c.outputs[o]], zero, outputs[o], {}, phase);
}

GeneralizedCircuit ReductionBuilder::take() {
  circuit_.validate();
  return std::move(circuit_);
}

void ReductionLayout::validate(const GeneralizedCircuit& c) const {
  const std::size_t n3 = std::size_t(n) * n * n;
  auto shape = [&](const std::vector<std::vector<NodeId>>& tab,
                   const char* what) {
    if (tab.size() != n3)
      throw InputError(std::string(what) + ": wrong sample count");
    for (const auto& row : tab)
      if (row.size() != n)
        throw InputError(std::string(what) + ": wrong coordinate count");
  };
  shape(sample, "sample table");
  shape(vote_up, "up-vote table");
  shape(vote_down, "down-vote table");
  auto narrow = [&](const std::vector<NodeId>& v, const char* what) {
    if (v.size() != n)
      throw InputError(std::string(what) + ": wrong coordinate count");
  };
  narrow(sum_up, "up-sum table");
  narrow(sum_down, "down-sum table");
  narrow(loop_add, "feedback add table");
  narrow(loop_sub, "feedback subtract table");

  std::set<NodeId> seen;
  auto claim = [&](NodeId id) {
    if (id >= nodes_used)
      throw InputError("layout id beyond the allocated range");
    if (!seen.insert(id).second)
      throw InputError("layout id " + std::to_string(id) + " duplicated");
  };
  for (const auto& tab : {&sample, &vote_up, &vote_down})
    for (const auto& row : *tab)
      for (NodeId id : row) claim(id);
  for (const auto& v : {&sum_up, &sum_down, &loop_add, &loop_sub})
    for (NodeId id : *v) claim(id);

  if (mpz_class(nodes_used) > params.K)
    throw InputError("layout exceeds the node budget");
  if (gate_phase.size() != c.gates.size())
    throw InputError("phase tags do not match the gate list");
}

BuildResult build_circuit(const BrouwerInstance& instance,
                          const ReductionParams& params) {
  const std::uint32_t n = instance.n;
  const std::size_t n3 = std::size_t(n) * n * n;
  ReductionBuilder b(params);
  const Rational cap = Rational(mpz_class(1), params.K);

  ReductionLayout layout;
  layout.n = n;
  layout.params = params;
  for (std::size_t k = 0; k < n3; ++k) layout.sample.push_back(b.fresh_block(n));
  for (std::size_t k = 0; k < n3; ++k) {
    layout.vote_up.push_back(b.fresh_block(n));
    layout.vote_down.push_back(b.fresh_block(n));
  }
  layout.sum_up = b.fresh_block(n);
  layout.sum_down = b.fresh_block(n);
  layout.loop_add = b.fresh_block(n);
  layout.loop_sub = b.fresh_block(n);

  // Sample chain: row k sits k/(8K^2) above the anchors, capped at 1/K.
  const Rational step_den = Rational(mpz_class(8) * params.K * params.K);
  for (std::size_t k = 1; k < n3; ++k) {
    NodeId offset = b.fresh();
    b.insert(GateType::Zeta, {}, {}, offset, Rational(mpz_class(k)) / step_den,
             BuildPhase::Sampling);
    for (std::size_t i = 0; i < n; ++i)
      b.insert(GateType::Plus, layout.sample[0][i], offset,
               layout.sample[k][i], {}, BuildPhase::Sampling);
  }

  // One coloring simulation per sample point.
  for (std::size_t k = 0; k < n3; ++k) {
    std::vector<NodeId> outs;
    for (std::size_t i = 0; i < n; ++i) {
      outs.push_back(layout.vote_up[k][i]);
      outs.push_back(layout.vote_down[k][i]);
    }
    b.coloring_simulation(instance.circuit, layout.sample[k], outs,
                          BuildPhase::Coloring);
  }

  // Scale every vote by 1/K and accumulate left to right.
  for (std::size_t i = 0; i < n; ++i) {
    for (int sign = 0; sign < 2; ++sign) {
      const auto& votes = sign == 0 ? layout.vote_up : layout.vote_down;
      NodeId target = sign == 0 ? layout.sum_up[i] : layout.sum_down[i];
      if (n3 == 1) {
        b.insert(GateType::TimesZeta, votes[0][i], {}, target, cap,
                 BuildPhase::Summation);
        continue;
      }
      std::vector<NodeId> scaled;
      for (std::size_t k = 0; k < n3; ++k) {
        NodeId s = b.fresh();
        b.insert(GateType::TimesZeta, votes[k][i], {}, s, cap,
                 BuildPhase::Summation);
        scaled.push_back(s);
      }
      NodeId acc = scaled[0];
      for (std::size_t k = 1; k < n3; ++k) {
        NodeId out = k + 1 == n3 ? target : b.fresh();
        b.insert(GateType::Plus, acc, scaled[k], out, {},
                 BuildPhase::Summation);
        acc = out;
      }
    }
  }

  // Feedback: anchor + up-votes - down-votes flows back onto the anchor.
  for (std::size_t i = 0; i < n; ++i) {
    b.insert(GateType::Plus, layout.sample[0][i], layout.sum_up[i],
             layout.loop_add[i], {}, BuildPhase::Loop);
    b.insert(GateType::Minus, layout.loop_add[i], layout.sum_down[i],
             layout.loop_sub[i], {}, BuildPhase::Loop);
    b.insert(GateType::Copy, layout.loop_sub[i], {}, layout.sample[0][i], {},
             BuildPhase::Loop);
  }

  layout.nodes_used = b.used();
  layout.gate_phase = b.phases();
  BuildResult result{b.take(), std::move(layout)};
  result.layout.validate(result.circuit);
  return result;
}

std::uint32_t grid_round(const Rational& a) {
  if (a.sign() <= 0) return 0;
  mpz_class c = a.ceil() - 1;
  if (c < 0) return 0;
  if (c > 7) return 7;
  return static_cast<std::uint32_t>(c.get_ui());
}

bool poorly_positioned(const Rational& a, const ReductionParams& params) {
  const Rational radius(mpz_class(80), params.K * params.K);
  for (int t = 0; t <= 7; ++t)
    if ((a - Rational(t)).abs() <= radius) return true;
  return false;
}

DecodeRecord decode_solution(const ReductionLayout& layout,
                             const Assignment& x) {
  const std::size_t n = layout.n;
  const std::size_t n3 = n * n * n;
  const Rational scale(mpz_class(8) * layout.params.K);

  DecodeRecord rec;
  rec.points.resize(n3);
  for (std::size_t k = 0; k < n3; ++k) {
    rec.points[k].reserve(n);
    bool well = true;
    for (std::size_t i = 0; i < n; ++i) {
      Rational p = scale * x.get(layout.sample[k][i]);
      if (poorly_positioned(p, layout.params)) well = false;
      rec.points[k].push_back(std::move(p));
    }
    (well ? rec.well : rec.poor).push_back(k);
  }
  for (std::size_t k : rec.well) {
    GridPoint q(n);
    for (std::size_t i = 0; i < n; ++i) q[i] = grid_round(rec.points[k][i]);
    if (std::find(rec.simplex.begin(), rec.simplex.end(), q) ==
        rec.simplex.end())
      rec.simplex.push_back(std::move(q));
  }
  for (std::size_t i = 0; i < n; ++i)
    rec.residual.push_back(x.get(layout.sum_up[i]) -
                           x.get(layout.sum_down[i]));
  return rec;
}

std::vector<std::vector<Rational>> color_vectors(
    std::uint32_t n, const ReductionParams& params) {
  const Rational unit(mpz_class(1), params.K * params.K);
  std::vector<std::vector<Rational>> z(n + 1,
                                       std::vector<Rational>(n, Rational(0)));
  for (std::uint32_t i = 0; i < n; ++i) {
    z[i][i] = unit;
    z[n][i] = -unit;
  }
  return z;
}

SimplexVerdict verify_panchromatic(const BrouwerInstance& instance,
                                   const std::vector<GridPoint>& simplex) {
  const std::uint32_t n = instance.n;
  ColoringTriple t = instance.triple();

  SimplexVerdict v;
  v.size_ok = simplex.size() <= std::size_t(n) + 1;
  v.accommodated = true;
  for (const auto& p : simplex) {
    if (!t.grid.contains(p)) {
      v.accommodated = false;
      v.detail = "point " + point_text(p) + " lies outside the grid";
      return v;
    }
  }
  for (std::size_t i = 0; i < n && !simplex.empty(); ++i) {
    std::uint32_t lo = simplex[0][i], hi = simplex[0][i];
    for (const auto& p : simplex) {
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
    }
    if (hi - lo > 1) v.accommodated = false;
  }
  for (const auto& p : simplex) v.colors.push_back(evaluate_color(t, p));
  for (Color c = 1; c <= n + 1; ++c)
    if (std::find(v.colors.begin(), v.colors.end(), c) == v.colors.end())
      v.missing.push_back(c);

  v.ok = v.accommodated && v.size_ok && v.missing.empty();
  if (v.ok) {
    v.detail = "panchromatic simplex";
  } else if (!v.accommodated) {
    v.detail = "points do not fit in one unit cube";
  } else if (!v.size_ok) {
    v.detail = "more points than colors";
  } else {
    v.detail = "missing color " + std::to_string(v.missing.front());
  }
  return v;
}

BoundaryConditionReport check_boundary_conditions(
    const BrouwerInstance& instance, std::uint64_t max_points) {
  const std::uint32_t n = instance.n;
  ColoringTriple t = instance.triple();
  if (t.grid.point_count() > max_points)
    throw BudgetError("boundary-condition sweep over " +
                      t.grid.point_count().get_str() +
                      " points exceeds the budget of " +
                      std::to_string(max_points));

  BoundaryConditionReport rep;
  rep.ok = true;
  GridPoint q(n, 0);
  while (true) {
    Color c = evaluate_color(t, q);
    bool has_zero = false, zero_elsewhere = false, seven_elsewhere = false;
    for (std::uint32_t i = 0; i < n; ++i) {
      if (q[i] == 0) {
        has_zero = true;
        if (c >= 1 && c <= n && i != c - 1) zero_elsewhere = true;
      }
      if (q[i] == 7 && (c < 1 || c > n || i != c - 1)) seven_elsewhere = true;
    }
    std::string fault;
    if (has_zero && c == n + 1)
      fault = "terminal color on a zero face";
    else if (c >= 1 && c <= n && q[c - 1] > 0 && zero_elsewhere)
      fault = "color of a nonzero coordinate on a zero face";
    else if (c >= 1 && c <= n && q[c - 1] == 7)
      fault = "coordinate color at its own full face";
    else if (c >= 1 && c <= n && seven_elsewhere && q[c - 1] != 0)
      fault = "full face demands a zero coordinate for this color";
    if (!fault.empty()) {
      rep.ok = false;
      rep.violations.push_back(q);
      if (rep.detail.empty())
        rep.detail = fault + " at " + point_text(q);
    }
    std::size_t i = n;
    bool done = true;
    while (i-- > 0) {
      if (++q[i] < 8) {
        done = false;
        break;
      }
      q[i] = 0;
    }
    if (done) break;
  }
  if (rep.ok) rep.detail = "boundary conditions hold";
  return rep;
}

}  // namespace nashtk
