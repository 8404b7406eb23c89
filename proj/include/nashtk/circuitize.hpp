#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "nashtk/brouwer.hpp"
#include "nashtk/gencircuit.hpp"
#include "nashtk/rational.hpp"

namespace nashtk {

// A coordinate-coloring circuit over the 8^n hypergrid: 3n input bits
// (three per coordinate, most significant first) and 2n output bits
// (up_1, down_1, up_2, down_2, ...). make() checks the shape and, when the
// grid fits the scan budget, exhaustively confirms that every point decodes
// to a color and that the forced boundary rule holds.
struct BrouwerInstance {
  std::uint32_t n = 0;
  BoolCircuit circuit;

  static BrouwerInstance make(std::uint32_t n, BoolCircuit circuit,
                              std::uint64_t validate_budget = 1u << 18);
  // The coloring the circuit induces on the 8^n grid.
  ColoringTriple triple() const;
};

// Precision frame of one reduction: node budget K = 2^{6m} and tolerance
// eps = 1/K^3. relaxed marks a hand-picked m, where only post-hoc
// verification of decoded artifacts is trusted, not the construction itself.
struct ReductionParams {
  std::uint32_t m = 0;
  mpz_class K;
  Rational eps;
  bool relaxed = false;

  static ReductionParams from_m(std::uint32_t m, bool relaxed);
};

// Automatic choice: the smallest m with 2^m >= (gate count), which requires
// the gate count to exceed n. An explicit override_m is taken verbatim and
// flagged relaxed whenever it differs from that automatic value.
ReductionParams choose_params(const BrouwerInstance& instance,
                              std::optional<std::uint32_t> override_m = {});

// Which construction phase inserted a gate.
enum class BuildPhase : std::uint8_t {
  Sampling,   // the chain of equally spaced sample points
  Coloring,   // per-sample bit extraction and boolean simulation
  Summation,  // scaled accumulation of the color votes
  Loop,       // feedback of the accumulated displacement into the anchors
};

// Incremental construction over nodes 0..K-1: sequential id allocation,
// eager rejection of node reuse, and a phase tag per inserted gate.
class ReductionBuilder {
 public:
  explicit ReductionBuilder(ReductionParams params);

  // Next unused node id; refuses to outgrow the budget K.
  NodeId fresh();
  std::vector<NodeId> fresh_block(std::size_t count);

  void insert(GateType type, std::optional<NodeId> v1,
              std::optional<NodeId> v2, NodeId out,
              std::optional<Rational> alpha, BuildPhase phase);

  // Three-bit reading of the point coordinate encoded at source, most
  // significant bit first, written onto the three designated nodes:
  // comparators against halving thresholds, each recognized digit scaled
  // and subtracted before the next. The reading is the largest grid level
  // strictly below the encoded value.
  void extract_bits(NodeId source, const std::array<NodeId, 3>& bits,
                    BuildPhase phase);

  // Simulate a coloring circuit on the n coordinates encoded at coords.
  // outputs carries the designated nodes in the circuit's own output order
  // (up_1, down_1, ...); every output bit is re-emitted onto its designated
  // node through an idempotent boolean gate, so shared or input-wire
  // outputs are handled uniformly.
  void coloring_simulation(const BoolCircuit& c,
                           const std::vector<NodeId>& coords,
                           const std::vector<NodeId>& outputs,
                           BuildPhase phase);

  const ReductionParams& params() const { return params_; }
  NodeId used() const { return next_; }
  const GeneralizedCircuit& circuit() const { return circuit_; }
  const std::vector<BuildPhase>& phases() const { return phases_; }

  // Validate and move out the finished circuit.
  GeneralizedCircuit take();

 private:
  ReductionParams params_;
  GeneralizedCircuit circuit_;
  std::vector<BuildPhase> phases_;
  std::set<NodeId> outputs_;
  NodeId next_ = 0;
};

// Node bookkeeping for one built reduction. Sample index k runs 0..n^3-1,
// coordinate index i runs 0..n-1. Helper nodes are not tabulated: every id
// below nodes_used outside these tables is a helper, and the owning phase
// of each can be read off gate_phase through the gate that outputs it.
struct ReductionLayout {
  std::uint32_t n = 0;
  ReductionParams params;

  // sample[k][i]: the node encoding coordinate i of sample point k. Row 0
  // holds the anchors; later rows are offset copies of row 0.
  std::vector<std::vector<NodeId>> sample;
  // vote_up[k][i], vote_down[k][i]: the simulated coloring outputs.
  std::vector<std::vector<NodeId>> vote_up;
  std::vector<std::vector<NodeId>> vote_down;
  // Accumulated votes and the feedback intermediates, per coordinate.
  std::vector<NodeId> sum_up;
  std::vector<NodeId> sum_down;
  std::vector<NodeId> loop_add;   // anchor plus up-votes
  std::vector<NodeId> loop_sub;   // minus down-votes, copied back onto the anchor
  NodeId nodes_used = 0;
  std::vector<BuildPhase> gate_phase;  // parallel to the circuit's gate list

  // Shape, distinctness and range checks against the built circuit.
  void validate(const GeneralizedCircuit& c) const;
};

struct BuildResult {
  GeneralizedCircuit circuit;
  ReductionLayout layout;
};

// Assemble the whole reduction: the sample chain, one coloring simulation
// per sample, the scaled vote sums, and the feedback loop (the only cyclic
// portion). Runs out of node budget with a message suggesting a larger m.
BuildResult build_circuit(const BrouwerInstance& instance,
                          const ReductionParams& params);

// Largest integer in [0, 7] strictly below a; non-positive values map to 0.
std::uint32_t grid_round(const Rational& a);

// Within 80/K^2 of some integer in [0, 7] (inclusive), so comparisons
// against it are unreliable.
bool poorly_positioned(const Rational& a, const ReductionParams& params);

// What an assignment over a built reduction encodes.
struct DecodeRecord {
  // points[k][i] = 8K x[sample[k][i]].
  std::vector<std::vector<Rational>> points;
  std::vector<std::size_t> well;  // k with every coordinate decisively placed
  std::vector<std::size_t> poor;  // the rest
  // Rounded well-placed points, duplicates merged, in sample order.
  std::vector<GridPoint> simplex;
  // x[sum_up[i]] - x[sum_down[i]]: the residual displacement.
  std::vector<Rational> residual;
};

// Pure readout; x need not satisfy anything.
DecodeRecord decode_solution(const ReductionLayout& layout,
                             const Assignment& x);

// The vote vector of each color i in 1..n+1: e_i / K^2 for the coordinate
// colors and -sum e_i / K^2 for the terminal color. They sum to zero.
std::vector<std::vector<Rational>> color_vectors(std::uint32_t n,
                                                 const ReductionParams& params);

struct SimplexVerdict {
  bool ok = false;
  bool accommodated = false;  // all points inside one unit cube of the grid
  bool size_ok = false;       // at most n+1 points
  std::vector<Color> colors;  // color of each point, in input order
  std::vector<Color> missing; // palette colors not present
  std::string detail;         // human-readable summary
};

// Is the point set a panchromatic simplex of the instance's coloring?
SimplexVerdict verify_panchromatic(const BrouwerInstance& instance,
                                   const std::vector<GridPoint>& simplex);

struct BoundaryConditionReport {
  bool ok = false;
  std::vector<GridPoint> violations;
  std::string detail;
};

// Exhaustive sweep of the consequences of the forced boundary rule on the
// 8^n grid: a point with a zero coordinate is never terminal-colored and
// never carries the color of a nonzero coordinate; a point with a full
// coordinate never carries that coordinate's color, and carries another
// coordinate's color only where that coordinate is zero.
BoundaryConditionReport check_boundary_conditions(
    const BrouwerInstance& instance, std::uint64_t max_points = 1u << 24);

}  // namespace nashtk
