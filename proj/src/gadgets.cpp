#include "nashtk/gadgets.hpp"

#include <cstddef>
#include <stdexcept>
#include <utility>

#include "nashtk/errors.hpp"

namespace nashtk {

namespace {

// Games are materialized as dense rational matrices, so the node count must
// stay far below the nominal capacities circuits are allowed to declare.
constexpr std::uint64_t kMaxNodes = 2048;

std::uint64_t checked_node_count(const mpz_class& K) {
  if (K < 1) throw InputError("circuit needs at least one node");
  if (!K.fits_ulong_p() || mpz_get_ui(K.get_mpz_t()) > kMaxNodes)
    throw InputError("node count too large to materialize a game (max " +
                     std::to_string(kMaxNodes) + ")");
  return mpz_get_ui(K.get_mpz_t());
}

Rational block_param(std::uint64_t K) {
  mpz_class k(static_cast<unsigned long>(K));
  return Rational(2 * k * k * k);  // M = 2K^3
}

Rational entry_bound(std::uint64_t K) {
  mpz_class n(static_cast<unsigned long>(2 * K));
  return Rational(n * n * n);  // N^3
}

Rational inv_cube(const mpz_class& K) {
  return Rational(mpz_class(1), K * K * K);  // 1/K^3
}

}  // namespace

std::size_t NodeEmbedding::first(NodeId v) const {
  if (v >= K)
    throw InputError("node id " + std::to_string(v) +
                     " outside the embedded range");
  return static_cast<std::size_t>(2 * v);
}

std::size_t NodeEmbedding::second(NodeId v) const { return first(v) + 1; }

BimatrixGame prototype_game(std::uint64_t K) {
  if (K < 1) throw InputError("prototype game needs at least one node");
  if (K > kMaxNodes)
    throw InputError("node count too large to materialize a game (max " +
                     std::to_string(kMaxNodes) + ")");
  const std::size_t n = static_cast<std::size_t>(2 * K);
  const Rational M = block_param(K);
  RatMatrix A(n, n), B(n, n);
  for (std::size_t k = 0; k < K; ++k) {
    for (std::size_t i = 2 * k; i <= 2 * k + 1; ++i) {
      for (std::size_t j = 2 * k; j <= 2 * k + 1; ++j) {
        A.at(i, j) = M;
        B.at(i, j) = -M;
      }
    }
  }
  return BimatrixGame::make(std::move(A), std::move(B), NormTag::raw);
}

GadgetPair gadget_matrices(const Gate& gate, const NodeEmbedding& emb) {
  const std::size_t n = emb.actions();
  GadgetPair out{RatMatrix(n, n), RatMatrix(n, n)};
  RatMatrix& L = out.L;
  RatMatrix& R = out.R;

  const bool unary = gate.type == GateType::TimesZeta ||
                     gate.type == GateType::Copy || gate.type == GateType::Not;
  const bool binary = gate.type == GateType::Plus ||
                      gate.type == GateType::Minus ||
                      gate.type == GateType::Less ||
                      gate.type == GateType::And || gate.type == GateType::Or;
  if ((unary || binary) && !gate.v1)
    throw InputError(to_string(gate.type) + " gate is missing its input");
  if (binary && !gate.v2)
    throw InputError(to_string(gate.type) + " gate is missing its second input");
  if (binary && *gate.v1 == *gate.v2)
    throw InputError("binary gate inputs must be distinct nodes");
  if (gate.type == GateType::Zeta || gate.type == GateType::TimesZeta) {
    if (!gate.alpha)
      throw InputError(to_string(gate.type) + " gate is missing alpha");
    if (*gate.alpha < Rational(0) || *gate.alpha > Rational(1))
      throw InputError("gate alpha must lie in [0, 1]");
  }

  // Output pair rows/columns and input value rows.
  const std::size_t r1 = emb.first(gate.v);
  const std::size_t r2 = emb.second(gate.v);
  const std::size_t i1 = gate.v1 ? emb.first(*gate.v1) : 0;
  const std::size_t i2 = gate.v2 ? emb.first(*gate.v2) : 0;

  const Rational one(1);
  switch (gate.type) {
    case GateType::Plus:
      L.at(r1, r1) = one;
      L.at(r2, r2) = one;
      R.at(i1, r1) = one;
      R.at(i2, r1) = one;
      R.at(r1, r2) = one;
      break;
    case GateType::Zeta:
      L.at(r1, r2) = one;
      L.at(r2, r1) = one;
      R.at(r1, r1) = one;
      for (std::size_t i = 0; i < n; ++i) R.at(i, r2) = *gate.alpha;
      break;
    case GateType::TimesZeta:
      L.at(r1, r1) = one;
      L.at(r2, r2) = one;
      R.at(r1, r2) = one;
      R.at(i1, r1) = *gate.alpha;
      break;
    case GateType::Copy:
      L.at(r1, r1) = one;
      L.at(r2, r2) = one;
      R.at(i1, r1) = one;
      R.at(r1, r2) = one;
      break;
    case GateType::Minus:
      L.at(r1, r1) = one;
      L.at(r2, r2) = one;
      R.at(i1, r1) = one;
      R.at(i2, r2) = one;
      R.at(r1, r2) = one;
      break;
    case GateType::Less:
      L.at(r1, r2) = one;
      L.at(r2, r1) = one;
      R.at(i1, r1) = one;
      R.at(i2, r2) = one;
      break;
    case GateType::Or:
    case GateType::And: {
      L.at(r1, r1) = one;
      L.at(r2, r2) = one;
      R.at(i1, r1) = one;
      R.at(i2, r1) = one;
      const Rational bias(gate.type == GateType::Or ? 1 : 3,
                          static_cast<long>(2 * emb.K));
      for (std::size_t i = 0; i < n; ++i) R.at(i, r2) = bias;
      break;
    }
    case GateType::Not:
      L.at(r1, r2) = one;
      L.at(r2, r1) = one;
      R.at(i1, r1) = one;
      R.at(i1 + 1, r2) = one;
      break;
  }
  return out;
}

AssembledGame circuit_to_game(const GeneralizedCircuit& circuit,
                              bool normalize) {
  circuit.validate();
  const std::uint64_t K = checked_node_count(circuit.K);
  const NodeEmbedding emb{K};
  const std::size_t n = emb.actions();

  BimatrixGame proto = prototype_game(K);
  RatMatrix A = proto.A;
  RatMatrix B = proto.B;
  for (const Gate& gate : circuit.gates) {
    GadgetPair pair = gadget_matrices(gate, emb);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        A.at(i, j) += pair.L.at(i, j);
        B.at(i, j) += pair.R.at(i, j);
      }
    }
  }

  // Every bonus must stay within [0,1] of the prototype, which also caps
  // entry magnitudes by N^3. Distinct gate outputs make overlaps impossible,
  // so a violation here means one gadget itself is malformed.
  const Rational bound = entry_bound(K);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const Rational da = A.at(i, j) - proto.A.at(i, j);
      const Rational db = B.at(i, j) - proto.B.at(i, j);
      if (da < Rational(0) || da > Rational(1) || db < Rational(0) ||
          db > Rational(1))
        throw std::logic_error("gadget bonus outside [0,1]");
      if (A.at(i, j).abs() > bound || B.at(i, j).abs() > bound)
        throw std::logic_error("assembled payoff exceeds the entry bound");
    }
  }

  Rational eps_game = inv_cube(circuit.K);
  NormTag tag = NormTag::raw;
  if (normalize) {
    const Rational span = Rational(2) * bound;  // 2N^3
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        A.at(i, j) = (A.at(i, j) + bound) / span;
        B.at(i, j) = (B.at(i, j) + bound) / span;
      }
    }
    eps_game /= span;
    tag = NormTag::normalized;
  }
  return AssembledGame{BimatrixGame::make(std::move(A), std::move(B), tag),
                       emb, eps_game};
}

DecodedProfile decode_profile(const MixedProfile& profile,
                              const NodeEmbedding& emb) {
  const std::size_t n = emb.actions();
  if (profile.x.size() != n || profile.y.size() != n)
    throw InputError("profile length does not match the embedded action count");
  DecodedProfile out;
  for (NodeId v = 0; v < emb.K; ++v) {
    const std::size_t a = emb.first(v), b = emb.second(v);
    out.row_value.set(v, profile.x[a]);
    out.row_mass.set(v, profile.x[a] + profile.x[b]);
    out.col_value.set(v, profile.y[a]);
    out.col_mass.set(v, profile.y[a] + profile.y[b]);
  }
  return out;
}

ReductionReport verify_reduction(const GeneralizedCircuit& circuit,
                                 const MixedProfile& profile,
                                 const Rational& well_supported_eps) {
  const AssembledGame assembled = circuit_to_game(circuit, true);
  ReductionReport report;
  report.decoded = decode_profile(profile, assembled.emb);

  report.well_supported_ok =
      is_well_supported(assembled.game, profile, well_supported_eps);
  if (!report.well_supported_ok)
    report.failures.push_back(
        "profile is not well supported at the requested precision");

  const Rational eps = inv_cube(circuit.K);
  const Rational share(mpz_class(1), circuit.K);
  report.mass_bounds_ok = true;
  for (NodeId v = 0; v < assembled.emb.K; ++v) {
    for (const auto* side : {&report.decoded.row_mass, &report.decoded.col_mass}) {
      const Rational mass = side->get(v);
      if (mass < share - eps || mass > share + eps) {
        report.mass_bounds_ok = false;
        report.failures.push_back(
            "pair mass for node " + std::to_string(v) + " strays from 1/K (" +
            (side == &report.decoded.row_mass ? "row" : "column") + " side)");
      }
    }
  }

  report.circuit_check = check_solution(circuit, report.decoded.row_value, eps);
  if (!report.circuit_check.ok)
    report.failures.push_back(
        "decoded values violate the circuit at precision 1/K^3");

  report.ok = report.well_supported_ok && report.mass_bounds_ok &&
              report.circuit_check.ok;
  return report;
}

}  // namespace nashtk
