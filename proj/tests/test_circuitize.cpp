#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <array>
#include <cstdint>
#include <map>
#include <vector>

#include "doctest.h"
#include "nashtk/brouwer.hpp"
#include "nashtk/circuitize.hpp"
#include "nashtk/errors.hpp"
#include "nashtk/gencircuit.hpp"

using namespace nashtk;

namespace {

// 2-d coloring: color 2 where the second coordinate is zero, else color 1
// where the first is zero, else red. Fourteen gates, all outputs exercised
// (down_1 and down_2 share the red wire).
BoolCircuit compact2d() {
  BoolCircuit c;
  c.num_inputs = 6;
  auto put = [&](BoolOp op, std::size_t a, std::size_t b = 0) {
    c.gates.push_back({op, a, b});
    return c.num_inputs + c.gates.size() - 1;
  };
  std::size_t n0 = put(BoolOp::Not, 0), n1 = put(BoolOp::Not, 1),
              n2 = put(BoolOp::Not, 2), n3 = put(BoolOp::Not, 3),
              n4 = put(BoolOp::Not, 4), n5 = put(BoolOp::Not, 5);
  std::size_t z1 = put(BoolOp::And, put(BoolOp::And, n0, n1), n2);
  std::size_t z2 = put(BoolOp::And, put(BoolOp::And, n3, n4), n5);
  std::size_t nz2 = put(BoolOp::Not, z2);
  std::size_t up1 = put(BoolOp::And, z1, nz2);
  std::size_t red = put(BoolOp::And, put(BoolOp::Not, z1), nz2);
  c.outputs = {up1, red, z2, red};
  return c;
}

// 1-d coloring: color 1 on points 0..3, red on 4..7. One gate; the down
// output is the raw leading input bit.
BoolCircuit halfline1d() {
  BoolCircuit c;
  c.num_inputs = 3;
  c.gates.push_back({BoolOp::Not, 0, 0});
  c.outputs = {3, 0};
  return c;
}

// 1-d coloring: color 1 on points 0..6, red on 7. Three gates.
BoolCircuit nearfull1d() {
  BoolCircuit c;
  c.num_inputs = 3;
  c.gates.push_back({BoolOp::And, 0, 1});
  c.gates.push_back({BoolOp::And, 3, 2});
  c.gates.push_back({BoolOp::Not, 4, 0});
  c.outputs = {5, 4};
  return c;
}

BoolCircuit dead_padded(BoolCircuit c, std::size_t target_gates) {
  while (c.gates.size() < target_gates)
    c.gates.push_back({BoolOp::Const0, 0, 0});
  return c;
}

// Drive a hand-built circuit to an approximate solution and read a node as
// a boolean.
BoolValue solved_bool(const GeneralizedCircuit& c, const Rational& eps,
                      NodeId v, std::uint64_t seed = 7) {
  auto x = iterate_solve(c, eps, 400, seed);
  REQUIRE(x.has_value());
  return boolean_value(x->get(v), c.K, eps);
}

}  // namespace

TEST_CASE("instances validate their coloring circuits") {
  BrouwerInstance good = BrouwerInstance::make(2, compact2d());
  CHECK(good.n == 2);
  CHECK(good.triple().grid.r == std::vector<std::uint32_t>{8, 8});
  CHECK(validate_boundary(good.triple()).ok);

  BrouwerInstance one = BrouwerInstance::make(1, halfline1d());
  CHECK(evaluate_color(one.triple(), {0}) == 1);
  CHECK(evaluate_color(one.triple(), {7}) == 2);

  CHECK_THROWS_AS(BrouwerInstance::make(0, halfline1d()), InputError);
  CHECK_THROWS_AS(BrouwerInstance::make(1, compact2d()), InputError);

  // A boundary point with the wrong color is caught by construction.
  {
    Hypergrid g{{8}};
    std::vector<Color> colors{2, 1, 1, 1, 1, 1, 1, 2};
    ColoringTriple bad{g, std::make_shared<TableOracle>(g, colors)};
    BoolCircuit synth = table_to_circuit(bad);
    CHECK_THROWS_AS(BrouwerInstance::make(1, synth), InputError);
    // ... unless the validation budget rules out the sweep.
    BrouwerInstance skipped = BrouwerInstance::make(1, synth, 4);
    CHECK(skipped.n == 1);
  }

  // Output bits that decode to no color at all are also rejected.
  {
    BoolCircuit garbage;
    garbage.num_inputs = 3;
    garbage.gates.push_back({BoolOp::Const1, 0, 0});
    garbage.outputs = {3, 3};
    CHECK_THROWS_AS(BrouwerInstance::make(1, garbage), InputError);
  }
}

TEST_CASE("parameter choice follows the size of the circuit") {
  // 40 gates: the smallest power of two at or above is 2^6.
  BrouwerInstance inst40 =
      BrouwerInstance::make(2, dead_padded(compact2d(), 40));
  ReductionParams p40 = choose_params(inst40);
  CHECK(p40.m == 6);
  CHECK(p40.K == ipow(2, 36));
  CHECK(p40.K.get_str() == "68719476736");
  CHECK(p40.eps == Rational(mpz_class(1), ipow(2, 108)));
  CHECK(!p40.relaxed);

  // An exact power of two picks its own exponent.
  BrouwerInstance inst16 =
      BrouwerInstance::make(2, dead_padded(compact2d(), 16));
  CHECK(choose_params(inst16).m == 4);

  // Fourteen gates round up to m = 4; an override is honored and flagged.
  BrouwerInstance inst14 = BrouwerInstance::make(2, compact2d());
  CHECK(choose_params(inst14).m == 4);
  ReductionParams forced = choose_params(inst14, 3);
  CHECK(forced.m == 3);
  CHECK(forced.K == 262144);
  CHECK(forced.relaxed);
  CHECK(!choose_params(inst14, 4).relaxed);

  // Automatic choice refuses a circuit no bigger than the dimension.
  BrouwerInstance tiny = BrouwerInstance::make(1, halfline1d());
  CHECK_THROWS_AS(choose_params(tiny), InputError);
  ReductionParams small = choose_params(tiny, 2);
  CHECK(small.relaxed);
  CHECK(small.K == 4096);

  CHECK_THROWS_AS(ReductionParams::from_m(0, true), InputError);
}

TEST_CASE("bit extraction reads off binary digits") {
  ReductionParams p = ReductionParams::from_m(1, true);
  REQUIRE(p.K == 64);

  auto run = [&](const Rational& a) {
    ReductionBuilder b(p);
    NodeId source = b.fresh();
    b.insert(GateType::Zeta, {}, {}, source, a / Rational(8 * 64),
             BuildPhase::Coloring);
    std::array<NodeId, 3> bits{b.fresh(), b.fresh(), b.fresh()};
    b.extract_bits(source, bits, BuildPhase::Coloring);
    CHECK(b.circuit().gates.size() == 14);  // source plus thirteen
    GeneralizedCircuit c = b.take();
    auto x = iterate_solve(c, p.eps, 400, 11);
    REQUIRE(x.has_value());
    std::array<BoolValue, 3> out;
    for (int j = 0; j < 3; ++j)
      out[j] = boolean_value(x->get(bits[j]), c.K, p.eps);
    return out;
  };

  auto is = [](std::array<BoolValue, 3> got, int b1, int b2, int b3) {
    auto want = [](int b) { return b ? BoolValue::one : BoolValue::zero; };
    return got[0] == want(b1) && got[1] == want(b2) && got[2] == want(b3);
  };

  CHECK(is(run(Rational(15, 2)), 1, 1, 1));  // far above every threshold
  CHECK(is(run(Rational(11, 2)), 1, 0, 1));
  CHECK(is(run(Rational(17, 5)), 0, 1, 1));
  CHECK(is(run(Rational(1, 2)), 0, 0, 0));

  // Reusing a designated node is refused eagerly.
  ReductionBuilder b(p);
  NodeId v = b.fresh();
  b.insert(GateType::Zeta, {}, {}, v, Rational(0), BuildPhase::Coloring);
  CHECK_THROWS_AS(
      b.insert(GateType::Zeta, {}, {}, v, Rational(0), BuildPhase::Coloring),
      InputError);
}

TEST_CASE("coloring simulation reproduces the reference outputs") {
  BoolCircuit c2 = compact2d();
  ReductionParams p = ReductionParams::from_m(2, true);
  Hypergrid grid{{8, 8}};

  auto run = [&](const Rational& a1, const Rational& a2) {
    ReductionBuilder b(p);
    std::vector<NodeId> coords{b.fresh(), b.fresh()};
    Rational denom(mpz_class(8) * p.K);
    b.insert(GateType::Zeta, {}, {}, coords[0], a1 / denom,
             BuildPhase::Coloring);
    b.insert(GateType::Zeta, {}, {}, coords[1], a2 / denom,
             BuildPhase::Coloring);
    std::vector<NodeId> outs{b.fresh(), b.fresh(), b.fresh(), b.fresh()};
    b.coloring_simulation(c2, coords, outs, BuildPhase::Coloring);
    // two sources + shared zero + 13 per coordinate + gates + one per output
    CHECK(b.circuit().gates.size() == 2 + 1 + 26 + c2.gates.size() + 4);
    GeneralizedCircuit c = b.take();
    auto x = iterate_solve(c, p.eps, 600, 5);
    REQUIRE(x.has_value());
    std::vector<BoolValue> out;
    for (NodeId v : outs) out.push_back(boolean_value(x->get(v), c.K, p.eps));
    return out;
  };

  auto matches = [&](const std::vector<BoolValue>& got, const GridPoint& q) {
    std::vector<bool> want = c2.eval(grid.encode(q));
    REQUIRE(want.size() == got.size());
    for (std::size_t i = 0; i < got.size(); ++i) {
      if (got[i] != (want[i] ? BoolValue::one : BoolValue::zero)) return false;
    }
    return true;
  };

  // Interior red: both up bits low, both down bits high.
  auto red = run(Rational(5, 2), Rational(13, 2));
  CHECK(matches(red, {2, 6}));
  CHECK(red[1] == BoolValue::one);
  CHECK(red[3] == BoolValue::one);
  CHECK(matches(run(Rational(1, 2), Rational(7, 2)), {0, 3}));
  CHECK(matches(run(Rational(9, 2), Rational(1, 2)), {4, 0}));

  // Arity mismatches are rejected.
  ReductionBuilder b(p);
  std::vector<NodeId> coords{b.fresh()};
  std::vector<NodeId> outs{b.fresh(), b.fresh()};
  CHECK_THROWS_AS(b.coloring_simulation(c2, coords, outs, BuildPhase::Coloring),
                  InputError);
}

TEST_CASE("built reductions account for every node and phase") {
  struct Probe {
    BrouwerInstance inst;
    std::uint32_t m;
  };
  std::vector<Probe> probes;
  probes.push_back({BrouwerInstance::make(1, nearfull1d()), 2});
  probes.push_back({BrouwerInstance::make(2, compact2d()), 2});

  for (const auto& probe : probes) {
    const std::uint64_t n = probe.inst.n;
    const std::uint64_t n3 = n * n * n;
    const std::uint64_t g = probe.inst.circuit.gates.size();
    ReductionParams p = ReductionParams::from_m(probe.m, true);
    BuildResult r = build_circuit(probe.inst, p);
    r.circuit.validate();
    r.layout.validate(r.circuit);

    // Every allocated node is driven by exactly one gate.
    CHECK(r.circuit.gates.size() == r.layout.nodes_used);
    auto wired = r.circuit.wired_nodes();
    CHECK(wired.size() == r.layout.nodes_used);
    CHECK(wired.front() == 0);
    CHECK(wired.back() == r.layout.nodes_used - 1);

    std::map<BuildPhase, std::uint64_t> histogram;
    for (BuildPhase ph : r.layout.gate_phase) ++histogram[ph];
    CHECK(histogram[BuildPhase::Sampling] == (n3 - 1) * (1 + n));
    CHECK(histogram[BuildPhase::Coloring] == n3 * (13 * n + g + 2 * n + 1));
    CHECK(histogram[BuildPhase::Summation] ==
          (n3 == 1 ? 2 * n : 2 * n * (2 * n3 - 1)));
    CHECK(histogram[BuildPhase::Loop] == 3 * n);

    // The anchors are written by the feedback phase alone.
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t gi = 0; gi < r.circuit.gates.size(); ++gi) {
        if (r.circuit.gates[gi].v == r.layout.sample[0][i]) {
          CHECK(r.layout.gate_phase[gi] == BuildPhase::Loop);
          CHECK(r.circuit.gates[gi].type == GateType::Copy);
        }
      }
    }
  }

  // The node budget is enforced: fourteen gates cannot fit into K = 64.
  BrouwerInstance inst = BrouwerInstance::make(2, compact2d());
  CHECK_THROWS_AS(build_circuit(inst, ReductionParams::from_m(1, true)),
                  InputError);
}

TEST_CASE("rounding is strict and the positioning threshold is inclusive") {
  CHECK(grid_round(Rational(17, 5)) == 3);
  CHECK(grid_round(Rational(5)) == 4);  // integers drop to the level below
  CHECK(grid_round(Rational(1, 5)) == 0);
  CHECK(grid_round(Rational(0)) == 0);
  CHECK(grid_round(Rational(-3, 2)) == 0);
  CHECK(grid_round(Rational(11, 2)) == 5);
  CHECK(grid_round(Rational(9)) == 7);

  ReductionParams p = ReductionParams::from_m(2, true);
  Rational radius(mpz_class(80), p.K * p.K);
  CHECK(poorly_positioned(Rational(3) + radius, p));
  CHECK(poorly_positioned(Rational(3) - radius, p));
  CHECK(!poorly_positioned(Rational(3) + radius + p.eps, p));
  CHECK(poorly_positioned(Rational(0), p));
  CHECK(!poorly_positioned(Rational(8), p));  // a full unit above the top level
  CHECK(!poorly_positioned(Rational(11, 2), p));
}

TEST_CASE("the decoder classifies, rounds and merges sample points") {
  BrouwerInstance inst = BrouwerInstance::make(2, compact2d());
  ReductionParams p = ReductionParams::from_m(2, true);
  BuildResult r = build_circuit(inst, p);
  const Rational denom(mpz_class(8) * p.K);
  const Rational radius(mpz_class(80), p.K * p.K);

  Assignment x;
  auto put = [&](std::size_t k, std::size_t i, const Rational& a) {
    x.set(r.layout.sample[k][i], a / denom);
  };
  put(0, 0, Rational(11, 2));
  put(0, 1, Rational(5, 2));
  put(1, 0, Rational(3) + radius);  // exactly at the threshold: unreliable
  put(1, 1, Rational(3, 2));
  put(2, 0, Rational(3) + radius + p.eps);
  put(2, 1, Rational(3, 2));
  put(3, 0, Rational(5));  // integers are always unreliable
  put(3, 1, Rational(2));
  put(4, 0, Rational(11, 2));
  put(4, 1, Rational(5, 2));  // duplicate of sample 0 after rounding
  x.set(r.layout.sum_up[0], Rational(1, 100));
  x.set(r.layout.sum_down[0], Rational(1, 300));

  DecodeRecord rec = decode_solution(r.layout, x);
  CHECK(rec.points[0][0] == Rational(11, 2));
  CHECK(rec.well == std::vector<std::size_t>{0, 2, 4});
  CHECK(rec.poor == std::vector<std::size_t>{1, 3, 5, 6, 7});
  CHECK(rec.simplex ==
        std::vector<GridPoint>{GridPoint{5, 2}, GridPoint{3, 1}});
  CHECK(rec.residual[0] == Rational(1, 150));
  CHECK(rec.residual[1] == Rational(0));

  auto z = color_vectors(2, p);
  Rational unit(mpz_class(1), p.K * p.K);
  CHECK(z.size() == 3);
  CHECK(z[0] == std::vector<Rational>{unit, Rational(0)});
  CHECK(z[2] == std::vector<Rational>{-unit, -unit});
  for (std::size_t i = 0; i < 2; ++i)
    CHECK(z[0][i] + z[1][i] + z[2][i] == Rational(0));
}

TEST_CASE("simplex verification reports precise diagnostics") {
  BrouwerInstance inst = BrouwerInstance::make(2, compact2d());
  PanchromaticSimplex found = find_panchromatic(inst.triple());

  SimplexVerdict ok = verify_panchromatic(inst, found.points);
  CHECK(ok.ok);
  CHECK(ok.accommodated);
  CHECK(ok.size_ok);
  CHECK(ok.missing.empty());
  CHECK(is_panchromatic(inst.triple(), found.points));

  std::vector<GridPoint> short_of_one(found.points.begin(),
                                      found.points.end() - 1);
  SimplexVerdict missing = verify_panchromatic(inst, short_of_one);
  CHECK(!missing.ok);
  CHECK(missing.size_ok);
  CHECK(missing.missing.size() == 1);

  SimplexVerdict scattered =
      verify_panchromatic(inst, {GridPoint{0, 0}, GridPoint{4, 4}});
  CHECK(!scattered.ok);
  CHECK(!scattered.accommodated);

  std::vector<GridPoint> crowd = found.points;
  crowd.push_back(found.base);  // a fourth distinct point in the same cube
  if (std::find(found.points.begin(), found.points.end(), found.base) !=
      found.points.end())
    crowd.back() = GridPoint{1, 0};
  SimplexVerdict oversized = verify_panchromatic(inst, crowd);
  CHECK(!oversized.size_ok);
  CHECK(!oversized.ok);

  SimplexVerdict outside = verify_panchromatic(inst, {GridPoint{8, 0}});
  CHECK(!outside.ok);
  CHECK(outside.detail.find("outside") != std::string::npos);

  SimplexVerdict empty = verify_panchromatic(inst, {});
  CHECK(!empty.ok);
  CHECK(empty.missing.size() == 3);
}

namespace {

// Forward evaluation of a reduction circuit from seeded anchor values.
// Deterministic gates are computed exactly; comparator outputs inside the
// dead zone and logic gates fed a non-boolean value take the planted value
// (or the midpoint). Reports whether the feedback loop reproduced the seeds.
struct PlantResult {
  Assignment x;
  bool closed = true;
};

PlantResult plant_fixed_point(const GeneralizedCircuit& c,
                              const ReductionLayout& lay,
                              const std::vector<Rational>& anchors,
                              const std::map<NodeId, Rational>& planted,
                              const Rational& eps) {
  const Rational cap = c.cap();
  const Rational half = cap / Rational(2);
  PlantResult r;
  std::set<NodeId> defined;
  for (std::size_t i = 0; i < anchors.size(); ++i) {
    r.x.set(lay.sample[0][i], anchors[i]);
    defined.insert(lay.sample[0][i]);
  }
  auto chosen = [&](NodeId v) {
    auto it = planted.find(v);
    return it == planted.end() ? half : it->second;
  };
  for (const auto& g : c.gates) {
    Rational a = g.v1 ? r.x.get(*g.v1) : Rational(0);
    Rational b = g.v2 ? r.x.get(*g.v2) : Rational(0);
    Rational val;
    switch (g.type) {
      case GateType::Zeta: val = *g.alpha; break;
      case GateType::TimesZeta: val = min(*g.alpha * a, cap); break;
      case GateType::Copy: val = min(a, cap); break;
      case GateType::Plus: val = min(a + b, cap); break;
      case GateType::Minus: val = max(min(a - b, cap), Rational(0)); break;
      case GateType::Less:
        if (a < b - eps) val = cap;
        else if (a > b + eps) val = Rational(0);
        else val = chosen(g.v);
        break;
      case GateType::And:
        if (a == Rational(0) || b == Rational(0)) val = Rational(0);
        else if (a == cap && b == cap) val = cap;
        else val = chosen(g.v);
        break;
      case GateType::Or:
        if (a == cap || b == cap) val = cap;
        else if (a == Rational(0) && b == Rational(0)) val = Rational(0);
        else val = chosen(g.v);
        break;
      case GateType::Not:
        if (a == cap) val = Rational(0);
        else if (a == Rational(0)) val = cap;
        else val = chosen(g.v);
        break;
    }
    if (defined.count(g.v)) {
      if (r.x.get(g.v) != val) r.closed = false;
    } else {
      r.x.set(g.v, val);
      defined.insert(g.v);
    }
  }
  return r;
}

}  // namespace

TEST_CASE("a balanced sample ladder is a certified fixed point") {
  BrouwerInstance inst = BrouwerInstance::make(2, compact2d());
  ReductionParams p = ReductionParams::from_m(2, true);
  BuildResult r = build_circuit(inst, p);
  const Rational cap(mpz_class(1), p.K);
  const mpz_class K2 = p.K * p.K;

  // Anchors placed so that sample row 2 sits exactly on the grid plane of
  // the second coordinate and row 5 on the plane of the first. The other six
  // rows decode to the three colors around the cube at the origin, two rows
  // each, so the up and down pressure on every coordinate cancels once the
  // two straddling rows split their votes.
  std::vector<Rational> anchors{Rational(p.K - 5, 8 * K2),
                                Rational(p.K - 2, 8 * K2)};
  std::map<NodeId, Rational> votes;
  votes[r.layout.vote_up[2][0]] = cap / Rational(4);
  votes[r.layout.vote_up[2][1]] = cap / Rational(2);
  votes[r.layout.vote_up[5][0]] = cap / Rational(4);
  votes[r.layout.vote_down[5][0]] = cap / Rational(2);
  votes[r.layout.vote_down[5][1]] = cap / Rational(2);

  PlantResult planted =
      plant_fixed_point(r.circuit, r.layout, anchors, votes, p.eps);
  CHECK(planted.closed);
  SolutionReport rep = check_solution(r.circuit, planted.x, p.eps);
  CHECK(rep.ok);
  CHECK(rep.gate_violations.empty());

  DecodeRecord rec = decode_solution(r.layout, planted.x);
  CHECK(rec.well == std::vector<std::size_t>{0, 1, 3, 4, 6, 7});
  CHECK(rec.poor == std::vector<std::size_t>{2, 5});
  CHECK(rec.poor.size() <= inst.n);
  CHECK(rec.simplex == std::vector<GridPoint>{GridPoint{0, 0}, GridPoint{0, 1},
                                              GridPoint{1, 1}});
  CHECK(rec.residual[0] == Rational(0));
  CHECK(rec.residual[1] == Rational(0));

  SimplexVerdict verdict = verify_panchromatic(inst, rec.simplex);
  CHECK(verdict.ok);
  CHECK(verdict.colors == std::vector<Color>{2, 1, 3});
}

TEST_CASE("solved reductions decode to panchromatic simplices") {
  BrouwerInstance inst = BrouwerInstance::make(2, compact2d());
  ReductionParams p = ReductionParams::from_m(2, true);
  BuildResult r = build_circuit(inst, p);

  auto sol = iterate_solve(r.circuit, p.eps, 2500, 3);
  if (!sol) {
    WARN_MESSAGE(false, "iteration budget exhausted without a solution; "
                        "the decode contract holds vacuously here");
    return;
  }
  REQUIRE(check_solution(r.circuit, *sol, p.eps).ok);
  DecodeRecord rec = decode_solution(r.layout, *sol);
  CHECK(rec.poor.size() <= inst.n);
  CHECK(!rec.simplex.empty());
  SimplexVerdict verdict = verify_panchromatic(inst, rec.simplex);
  CHECK_MESSAGE(verdict.ok, verdict.detail);
}

TEST_CASE("one-dimensional ladders park on a grid plane") {
  BrouwerInstance inst = BrouwerInstance::make(1, halfline1d());
  ReductionParams p = choose_params(inst, 2);
  CHECK(p.relaxed);
  BuildResult r = build_circuit(inst, p);

  auto sol = iterate_solve(r.circuit, p.eps, 12000, 7);
  REQUIRE(sol.has_value());
  CHECK(check_solution(r.circuit, *sol, p.eps).ok);

  // With a single sample the two colors can only balance through a free
  // comparator, so the sample must hug a grid plane and decodes to nothing:
  // a genuine solution of the circuit that yields no simplex.
  DecodeRecord rec = decode_solution(r.layout, *sol);
  CHECK(rec.poor == std::vector<std::size_t>{0});
  CHECK(rec.well.empty());
  CHECK(rec.simplex.empty());
  CHECK(rec.residual[0] == Rational(0));
  SimplexVerdict verdict = verify_panchromatic(inst, rec.simplex);
  CHECK(!verdict.ok);
  CHECK(verdict.detail.find("missing color") != std::string::npos);
}

TEST_CASE("boundary consequences hold for valid instances") {
  for (auto inst : {BrouwerInstance::make(1, halfline1d()),
                    BrouwerInstance::make(1, nearfull1d()),
                    BrouwerInstance::make(2, compact2d())}) {
    BoundaryConditionReport rep = check_boundary_conditions(inst);
    CHECK(rep.ok);
    CHECK(rep.violations.empty());
  }

  // All-red output breaks the zero-face rule at the origin. The instance is
  // assembled directly, bypassing construction-time validation.
  BoolCircuit allred;
  allred.num_inputs = 3;
  allred.gates.push_back({BoolOp::Const0, 0, 0});
  allred.gates.push_back({BoolOp::Const1, 0, 0});
  allred.outputs = {3, 4};
  BrouwerInstance bad{1, allred};
  BoundaryConditionReport rep = check_boundary_conditions(bad);
  CHECK(!rep.ok);
  CHECK(rep.violations == std::vector<GridPoint>{GridPoint{0}});
  CHECK(!rep.detail.empty());

  CHECK_THROWS_AS(
      check_boundary_conditions(BrouwerInstance::make(2, compact2d()), 10),
      BudgetError);
}
