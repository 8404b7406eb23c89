#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "nashtk/rational.hpp"

namespace nashtk {

using NodeId = std::uint64_t;

// The nine gate types. External names (file formats, CLI):
//   Gzeta Gtimes G= G+ G- G< Gand Gor Gnot
enum class GateType {
  Zeta,       // constant:            x[v] = alpha +- eps
  TimesZeta,  // scale by constant:   x[v] = min(alpha x[v1], 1/K) +- eps
  Copy,       // assignment:          x[v] = min(x[v1], 1/K) +- eps
  Plus,       // capped addition:     x[v] = min(x[v1]+x[v2], 1/K) +- eps
  Minus,      // clamped subtraction: min(x[v1]-x[v2],1/K)-eps <= x[v]
              //                        <= max(x[v1]-x[v2],0)+eps
  Less,       // brittle comparator:  boolean 1 if x[v1] < x[v2]-eps,
              //                      boolean 0 if x[v1] > x[v2]+eps
  And,        // logic, inputs/output read as booleans
  Or,
  Not,
};

std::string to_string(GateType t);
GateType gate_type_from_string(const std::string& s);

struct Gate {
  GateType type;
  std::optional<NodeId> v1, v2;
  NodeId v = 0;
  std::optional<Rational> alpha;
};

// Gates over nominal nodes 0..K-1. K may be astronomically larger than the
// number of nodes actually wired to gates; unconstrained nodes exist only
// implicitly, with value 0. Cycles are allowed.
struct GeneralizedCircuit {
  mpz_class K = 1;
  std::vector<Gate> gates;

  Rational cap() const { return Rational(mpz_class(1), K); }  // 1/K
  // Arity and alpha-range rules per gate, distinct outputs, ids < K.
  void validate() const;
  // Every node referenced by some gate, sorted ascending.
  std::vector<NodeId> wired_nodes() const;
};

// Sparse total assignment: missing ids are 0.
class Assignment {
 public:
  Rational get(NodeId v) const {
    auto it = m_.find(v);
    return it == m_.end() ? Rational(0) : it->second;
  }
  void set(NodeId v, Rational val) { m_[v] = std::move(val); }
  const std::map<NodeId, Rational>& entries() const { return m_; }

 private:
  std::map<NodeId, Rational> m_;
};

enum class BoolValue { zero, one, indeterminate };

// one when 1/K-eps <= x <= 1/K+eps, zero when 0 <= x <= eps (one wins if the
// ranges overlap), indeterminate otherwise.
BoolValue boolean_value(const Rational& x, const mpz_class& K,
                        const Rational& eps);

// Exact truth of the gate's constraint at precision eps; conditional
// constraints hold vacuously when their guard does not fire.
bool check_gate(const Gate& g, const Assignment& x, const Rational& eps,
                const mpz_class& K);

struct SolutionReport {
  bool ok = true;
  std::vector<NodeId> global_violations;       // nodes breaking 0 <= x <= 1/K+eps
  std::vector<std::size_t> gate_violations;    // indices into circuit.gates
};

SolutionReport check_solution(const GeneralizedCircuit& c, const Assignment& x,
                              const Rational& eps);

struct PadCircuitResult {
  GeneralizedCircuit circuit;  // node count K^b
  mpz_class original_K;
  mpz_class factor;            // K^(b-1)

  // x[v] = factor * x'[v] on the original nodes.
  Assignment pull_back(const Assignment& padded) const;
};

// Dilute a circuit with dummy nodes so that a coarse solution of the padded
// circuit pulls back to a sharp solution of the original: with b =
// ceil((c-1)/2), the node count becomes K^b and constant-gate parameters are
// scaled by K^(1-b). c = 3 gives b = 1, the identity.
PadCircuitResult pad_circuit(const GeneralizedCircuit& c, const Rational& cexp);

// Heuristic search for an eps-approximate solution: damped (factor 1/2)
// in-place sweeps that pull each gate output toward its feasible value,
// randomized outputs for comparators caught in their dead zone, and a
// periodic exact finishing step that freezes every gate's branch at the
// current state and solves the frozen system with the exact feasibility
// solver. Anything returned has passed check_solution(eps); absence after
// max_iters sweeps is a legitimate outcome.
std::optional<Assignment> iterate_solve(const GeneralizedCircuit& c,
                                        const Rational& eps,
                                        std::uint64_t max_iters,
                                        std::uint64_t seed);

}  // namespace nashtk
