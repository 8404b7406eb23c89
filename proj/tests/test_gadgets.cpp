#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <utility>
#include <vector>

#include "nashtk/errors.hpp"
#include "nashtk/gadgets.hpp"
#include "nashtk/gencircuit.hpp"
#include "nashtk/rng.hpp"
#include "nashtk/solve.hpp"

using namespace nashtk;

namespace {

Rational q(long n, long d = 1) { return Rational(n, d); }

RatMatrix mat(std::vector<std::vector<Rational>> rows) {
  RatMatrix m(rows.size(), rows.at(0).size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j) m.at(i, j) = rows[i][j];
  return m;
}

Gate gate(GateType t, NodeId v) {
  Gate g;
  g.type = t;
  g.v = v;
  return g;
}

Gate unary(GateType t, NodeId in, NodeId v) {
  Gate g = gate(t, v);
  g.v1 = in;
  return g;
}

Gate binary(GateType t, NodeId a, NodeId b, NodeId v) {
  Gate g = gate(t, v);
  g.v1 = a;
  g.v2 = b;
  return g;
}

Gate constant(const Rational& alpha, NodeId v) {
  Gate g = gate(GateType::Zeta, v);
  g.alpha = alpha;
  return g;
}

Gate scale(const Rational& alpha, NodeId in, NodeId v) {
  Gate g = unary(GateType::TimesZeta, in, v);
  g.alpha = alpha;
  return g;
}

GeneralizedCircuit circuit(long K, std::vector<Gate> gates) {
  GeneralizedCircuit c;
  c.K = K;
  c.gates = std::move(gates);
  return c;
}

// Expect exactly the listed nonzero entries (0-based), zero everywhere else.
void expect_sparse(const RatMatrix& m,
                   const std::map<std::pair<std::size_t, std::size_t>,
                                  Rational>& nonzero) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) {
      auto it = nonzero.find({i, j});
      CAPTURE(i);
      CAPTURE(j);
      CHECK(m.at(i, j) == (it == nonzero.end() ? Rational(0) : it->second));
    }
}

// A random mixed profile with small rational weights.
MixedProfile random_profile(SplitMix64& rng, std::size_t n) {
  auto draw = [&](std::size_t len) {
    RatVector v(len);
    Rational total(0);
    for (auto& e : v) {
      e = q(1 + static_cast<long>(rng.next_below(9)),
            1 + static_cast<long>(rng.next_below(7)));
      total += e;
    }
    for (auto& e : v) e /= total;
    return v;
  };
  return MixedProfile{draw(n), draw(n)};
}

}  // namespace

TEST_CASE("prototype game is block-diagonal and zero-sum") {
  auto g1 = prototype_game(1);
  CHECK(g1.m == 2);
  CHECK(g1.tag == NormTag::raw);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(g1.A.at(i, j) == q(2));
      CHECK(g1.B.at(i, j) == q(-2));
    }

  auto g2 = prototype_game(2);
  CHECK(g2.m == 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      Rational want = (i / 2 == j / 2) ? q(16) : q(0);
      CHECK(g2.A.at(i, j) == want);
      CHECK(g2.B.at(i, j) == -want);
    }

  CHECK_THROWS_AS(prototype_game(0), InputError);
}

TEST_CASE("prototype equilibria spread pair masses uniformly") {
  NodeEmbedding emb1{1};
  auto p1 = support_enumeration(prototype_game(1));
  auto d1 = decode_profile(p1, emb1);
  CHECK(d1.row_mass.get(0) == q(1));
  CHECK(d1.col_mass.get(0) == q(1));

  auto g2 = prototype_game(2);
  NodeEmbedding emb2{2};
  for (auto p : {support_enumeration(g2), lemke_howson(g2, 1)}) {
    auto d = decode_profile(p, emb2);
    for (NodeId v = 0; v < 2; ++v) {
      CHECK(d.row_mass.get(v) == q(1, 2));
      CHECK(d.col_mass.get(v) == q(1, 2));
    }
  }
}

TEST_CASE("adder bonus matrices put unit entries on the output pair") {
  // inputs are nodes 0 and 1, output is node 2, three nodes in total
  NodeEmbedding emb{3};
  auto pair = gadget_matrices(binary(GateType::Plus, 0, 1, 2), emb);
  expect_sparse(pair.L, {{{4, 4}, q(1)}, {{5, 5}, q(1)}});
  expect_sparse(pair.R, {{{0, 4}, q(1)}, {{2, 4}, q(1)}, {{4, 5}, q(1)}});
}

TEST_CASE("constant bonus matrices write alpha down the partner column") {
  NodeEmbedding emb{1};
  auto pair = gadget_matrices(constant(q(1, 4), 0), emb);
  expect_sparse(pair.L, {{{0, 1}, q(1)}, {{1, 0}, q(1)}});
  expect_sparse(pair.R,
                {{{0, 0}, q(1)}, {{0, 1}, q(1, 4)}, {{1, 1}, q(1, 4)}});
}

TEST_CASE("inverter bonus matrices cross the output pair") {
  // input node 0, output node 1
  NodeEmbedding emb{2};
  auto pair = gadget_matrices(unary(GateType::Not, 0, 1), emb);
  expect_sparse(pair.L, {{{2, 3}, q(1)}, {{3, 2}, q(1)}});
  expect_sparse(pair.R, {{{0, 2}, q(1)}, {{1, 3}, q(1)}});
}

TEST_CASE("bonus matrices stay inside the output pair and unit range") {
  NodeEmbedding emb{3};
  std::vector<Gate> gates = {
      constant(q(1, 5), 2),
      scale(q(1, 5), 0, 2),
      unary(GateType::Copy, 0, 2),
      unary(GateType::Not, 0, 2),
      binary(GateType::Plus, 0, 1, 2),
      binary(GateType::Minus, 0, 1, 2),
      binary(GateType::Less, 0, 1, 2),
      binary(GateType::And, 0, 1, 2),
      binary(GateType::Or, 0, 1, 2),
  };
  for (const Gate& g : gates) {
    CAPTURE(to_string(g.type));
    auto pair = gadget_matrices(g, emb);
    const std::size_t r1 = emb.first(g.v), r2 = emb.second(g.v);
    for (std::size_t i = 0; i < 6; ++i)
      for (std::size_t j = 0; j < 6; ++j) {
        if (i != r1 && i != r2) CHECK(pair.L.at(i, j) == q(0));
        if (j != r1 && j != r2) CHECK(pair.R.at(i, j) == q(0));
        CHECK(pair.L.at(i, j) >= q(0));
        CHECK(pair.L.at(i, j) <= q(1));
        CHECK(pair.R.at(i, j) >= q(0));
        CHECK(pair.R.at(i, j) <= q(1));
      }
  }
}

TEST_CASE("bonus matrices reject malformed or out-of-range gates") {
  NodeEmbedding emb{3};
  CHECK_THROWS_AS(gadget_matrices(gate(GateType::Plus, 2), emb), InputError);
  CHECK_THROWS_AS(gadget_matrices(binary(GateType::Plus, 0, 0, 2), emb),
                  InputError);
  CHECK_THROWS_AS(gadget_matrices(unary(GateType::Copy, 5, 2), emb),
                  InputError);
  CHECK_THROWS_AS(gadget_matrices(unary(GateType::Copy, 0, 7), emb),
                  InputError);
  CHECK_THROWS_AS(gadget_matrices(gate(GateType::Zeta, 0), emb), InputError);
  Gate bad = constant(q(3, 2), 0);
  CHECK_THROWS_AS(gadget_matrices(bad, emb), InputError);
}

TEST_CASE("assembled game equals prototype plus per-gate bonuses") {
  auto empty = circuit_to_game(circuit(1, {}), false);
  auto proto = prototype_game(1);
  CHECK(empty.game.A == proto.A);
  CHECK(empty.game.B == proto.B);
  CHECK(empty.eps_game == q(1));

  auto one = circuit_to_game(circuit(1, {constant(q(1, 4), 0)}), false);
  CHECK(one.game.A == mat({{q(2), q(3)}, {q(3), q(2)}}));
  CHECK(one.game.B == mat({{q(-1), q(-7, 4)}, {q(-2), q(-7, 4)}}));
  CHECK(one.game.tag == NormTag::raw);
}

TEST_CASE("normalization maps payoffs into the unit interval") {
  auto norm = circuit_to_game(circuit(1, {constant(q(1, 4), 0)}), true);
  CHECK(norm.game.tag == NormTag::normalized);
  // payoff a becomes (a+8)/16 for one node (so 2K = 2 actions)
  CHECK(norm.game.A.at(0, 0) == q(10, 16));
  CHECK(norm.game.A.at(0, 1) == q(11, 16));
  CHECK(norm.game.B.at(0, 0) == q(7, 16));
  CHECK(norm.game.B.at(0, 1) == q(25, 64));
  CHECK(norm.eps_game == q(1, 16));

  // rejected input: two gates writing the same output node
  auto dup = circuit(2, {constant(q(1, 4), 0), constant(q(1, 3), 0)});
  CHECK_THROWS_AS(circuit_to_game(dup, true), InputError);
}

TEST_CASE("assembled games stay within unit range of the prototype") {
  auto c = circuit(4, {constant(q(1, 5), 0), scale(q(1, 2), 0, 1),
                       binary(GateType::Plus, 0, 1, 2),
                       binary(GateType::Less, 0, 1, 3)});
  auto raw = circuit_to_game(c, false);
  auto proto = prototype_game(4);
  Rational bound = q(8 * 8 * 8);  // (2K)^3 with K = 4
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      Rational da = raw.game.A.at(i, j) - proto.A.at(i, j);
      Rational db = raw.game.B.at(i, j) - proto.B.at(i, j);
      CHECK(da >= q(0));
      CHECK(da <= q(1));
      CHECK(db >= q(0));
      CHECK(db <= q(1));
      CHECK(raw.game.A.at(i, j).abs() <= bound);
      CHECK(raw.game.B.at(i, j).abs() <= bound);
    }

  auto norm = circuit_to_game(c, true);
  for (std::size_t i = 0; i < 8; ++i)
    for (std::size_t j = 0; j < 8; ++j) {
      CHECK(norm.game.A.at(i, j) >= q(0));
      CHECK(norm.game.A.at(i, j) <= q(1));
      CHECK(norm.game.B.at(i, j) >= q(0));
      CHECK(norm.game.B.at(i, j) <= q(1));
    }
}

TEST_CASE("column payoff gaps encode the gate arithmetic") {
  // For arithmetic gates, the difference between the column player's payoffs
  // on the output pair reads off a linear form in the decoded values; the
  // prototype contribution cancels because its paired columns are equal.
  SplitMix64 rng(0x5eed5eedULL);
  NodeEmbedding emb{3};

  auto adder = circuit_to_game(
      circuit(3, {binary(GateType::Plus, 0, 1, 2)}), false);
  auto subtractor = circuit_to_game(
      circuit(3, {binary(GateType::Minus, 0, 1, 2)}), false);
  auto constant_game = circuit_to_game(
      circuit(3, {constant(q(1, 5), 2)}), false);

  for (int trial = 0; trial < 24; ++trial) {
    MixedProfile p = random_profile(rng, 6);
    auto d = decode_profile(p, emb);
    auto column_gap = [&](const BimatrixGame& g) {
      Rational c1(0), c2(0);
      for (std::size_t i = 0; i < 6; ++i) {
        c1 += p.x[i] * g.B.at(i, 4);
        c2 += p.x[i] * g.B.at(i, 5);
      }
      return c1 - c2;
    };
    CHECK(column_gap(adder.game) ==
          d.row_value.get(0) + d.row_value.get(1) - d.row_value.get(2));
    CHECK(column_gap(subtractor.game) ==
          d.row_value.get(0) - d.row_value.get(1) - d.row_value.get(2));
    CHECK(column_gap(constant_game.game) == d.row_value.get(2) - q(1, 5));
  }
}

TEST_CASE("decoding projects node values and pair masses") {
  NodeEmbedding emb{2};
  MixedProfile uniform{{q(1, 4), q(1, 4), q(1, 4), q(1, 4)},
                       {q(1, 4), q(1, 4), q(1, 4), q(1, 4)}};
  auto d = decode_profile(uniform, emb);
  for (NodeId v = 0; v < 2; ++v) {
    CHECK(d.row_value.get(v) == q(1, 4));
    CHECK(d.row_mass.get(v) == q(1, 2));
    CHECK(d.col_value.get(v) == q(1, 4));
    CHECK(d.col_mass.get(v) == q(1, 2));
  }

  NodeEmbedding emb1{1};
  auto d1 = decode_profile(MixedProfile{{q(1), q(0)}, {q(0), q(1)}}, emb1);
  CHECK(d1.row_value.get(0) == q(1));
  CHECK(d1.row_mass.get(0) == q(1));

  CHECK_THROWS_AS(decode_profile(uniform, emb1), InputError);
}

TEST_CASE("constant-gate game solves to the constant") {
  auto c = circuit(1, {constant(q(1, 4), 0)});
  auto raw = circuit_to_game(c, false);
  auto p = support_enumeration(raw.game);
  CHECK(p.x[0] == q(1, 4));
  CHECK(p.x[1] == q(3, 4));
  CHECK(p.y[0] == q(1, 2));
  CHECK(p.y[1] == q(1, 2));

  // the normalization is an increasing affine map, so the equilibrium is
  // unchanged and the reduction report accepts it
  auto norm = circuit_to_game(c, true);
  auto pn = support_enumeration(norm.game);
  CHECK(pn.x == p.x);
  CHECK(pn.y == p.y);

  auto report = verify_reduction(c, pn, norm.eps_game);
  CHECK(report.ok);
  CHECK(report.well_supported_ok);
  CHECK(report.mass_bounds_ok);
  CHECK(report.circuit_check.ok);
  CHECK(report.decoded.row_value.get(0) == q(1, 4));
}

TEST_CASE("one circuit per gate type solves to a valid approximation") {
  // Each circuit fixes its inputs with constant gates so that the gate under
  // test has a forced approximate output; 1/K^3 = 1/27 at three nodes.
  std::vector<std::pair<const char*, GeneralizedCircuit>> suite;
  suite.emplace_back("constant", circuit(3, {constant(q(1, 4), 0)}));
  suite.emplace_back(
      "scale", circuit(3, {constant(q(1, 4), 0), scale(q(1, 2), 0, 1)}));
  suite.emplace_back("copy", circuit(3, {constant(q(1, 4), 0),
                                         unary(GateType::Copy, 0, 1)}));
  suite.emplace_back(
      "add", circuit(3, {constant(q(1, 5), 0), constant(q(1, 7), 1),
                         binary(GateType::Plus, 0, 1, 2)}));
  suite.emplace_back(
      "subtract", circuit(3, {constant(q(1, 4), 0), constant(q(1, 8), 1),
                              binary(GateType::Minus, 0, 1, 2)}));
  suite.emplace_back(
      "compare", circuit(3, {constant(q(1, 8), 0), constant(q(1, 4), 1),
                             binary(GateType::Less, 0, 1, 2)}));
  suite.emplace_back(
      "or", circuit(3, {constant(q(0), 0), constant(q(1, 3), 1),
                        binary(GateType::Or, 0, 1, 2)}));
  suite.emplace_back(
      "and", circuit(3, {constant(q(0), 0), constant(q(1, 3), 1),
                         binary(GateType::And, 0, 1, 2)}));
  suite.emplace_back(
      "not", circuit(3, {constant(q(0), 0), unary(GateType::Not, 0, 1)}));

  const Rational eps = q(1, 27);
  for (auto& [name, c] : suite) {
    CAPTURE(name);
    auto raw = circuit_to_game(c, false);
    auto p = support_enumeration(raw.game);
    auto report = verify_reduction(c, p, q(0));
    CHECK(report.ok);
    auto& val = report.decoded.row_value;

    if (std::string(name) == "scale")
      CHECK((val.get(1) - q(1, 8)).abs() <= q(5, 2) * eps);
    if (std::string(name) == "copy")
      CHECK((val.get(1) - val.get(0)).abs() <= q(2) * eps);
    if (std::string(name) == "compare")  // output is a boolean one
      CHECK(val.get(2) >= q(1, 3) - eps);
    if (std::string(name) == "or")
      CHECK(val.get(2) >= q(1, 3) - eps);
    if (std::string(name) == "and")
      CHECK(val.get(2) <= eps);
    if (std::string(name) == "not")
      CHECK(val.get(1) >= q(1, 3) - eps);
  }
}

TEST_CASE("copy chains keep decoded values aligned") {
  auto c = circuit(3, {constant(q(1, 4), 0), unary(GateType::Copy, 0, 1),
                       unary(GateType::Copy, 1, 2)});
  auto raw = circuit_to_game(c, false);
  auto p = support_enumeration(raw.game);
  auto report = verify_reduction(c, p, q(0));
  CHECK(report.ok);
  auto& val = report.decoded.row_value;
  CHECK((val.get(1) - val.get(0)).abs() <= q(1, 27));
  CHECK((val.get(2) - val.get(1)).abs() <= q(1, 27));
}

TEST_CASE("corrupted profiles fail the pair-mass bounds") {
  auto c = circuit(3, {constant(q(1, 4), 0)});
  auto assembled = circuit_to_game(c, true);
  auto p = support_enumeration(assembled.game);

  MixedProfile pure = p;
  pure.x = RatVector(6, q(0));
  pure.x[0] = q(1);  // all row mass on node 0's first action
  auto report = verify_reduction(c, pure, assembled.eps_game);
  CHECK_FALSE(report.ok);
  CHECK_FALSE(report.mass_bounds_ok);
  CHECK_FALSE(report.failures.empty());
}
