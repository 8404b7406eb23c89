#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nashtk/bimatrix.hpp"
#include "nashtk/gencircuit.hpp"
#include "nashtk/linalg.hpp"
#include "nashtk/rational.hpp"

namespace nashtk {

// Reduction from generalized circuits to bimatrix games. A block-diagonal
// zero-sum prototype forces every node's pair of actions to carry roughly a
// 1/K share of each player's probability mass; per-gate bonus matrices then
// bias the split inside each pair so that well-supported equilibria of the
// assembled game decode to approximate circuit solutions.

// Fixed layout tying circuit nodes to actions: node v owns the action pair
// (2v, 2v+1) on both sides of the game. The first action of the pair carries
// the node's decoded value; the pair's total mass is its capacity share.
struct NodeEmbedding {
  std::uint64_t K = 0;  // number of circuit nodes

  std::size_t actions() const { return static_cast<std::size_t>(2 * K); }
  // Action index carrying the value of node v, and its partner.
  std::size_t first(NodeId v) const;
  std::size_t second(NodeId v) const;
};

// The K-block "generalized matching pennies" game: A has K diagonal 2x2
// blocks filled with M = 2K^3, zeros elsewhere, and B = -A. The row player
// chases mass-heavy column blocks while the column player flees mass-heavy
// row blocks, so every exact equilibrium spreads both players' pair masses
// uniformly at 1/K.
BimatrixGame prototype_game(std::uint64_t K);

// Per-gate bonus matrices, added on top of the prototype. L biases the row
// player inside the output pair's rows; R biases the column player inside the
// output pair's columns. All entries lie in [0,1], L is zero outside the
// output pair's rows, and R is zero outside the output pair's columns.
struct GadgetPair {
  RatMatrix L;  // added to the row player's payoff
  RatMatrix R;  // added to the column player's payoff
};

GadgetPair gadget_matrices(const Gate& gate, const NodeEmbedding& emb);

struct AssembledGame {
  BimatrixGame game;
  NodeEmbedding emb;
  // Well-supported precision at which decoding is guaranteed: 1/K^3 for the
  // raw assembly, divided by 2N^3 (N = 2K) after normalization into [0,1].
  Rational eps_game;
};

// Sum the bonus matrices of every gate onto the prototype. With normalize,
// every payoff a is remapped to (a + N^3) / (2N^3), an increasing affine map
// into [0,1] that preserves equilibria and scales defects by 1/(2N^3).
AssembledGame circuit_to_game(const GeneralizedCircuit& circuit,
                              bool normalize);

// Per-node projections of a mixed profile over the 2K actions.
struct DecodedProfile {
  Assignment row_value;  // x on the node's first action
  Assignment row_mass;   // total x on the node's action pair
  Assignment col_value;  // y on the node's first action
  Assignment col_mass;   // total y on the node's action pair
};

DecodedProfile decode_profile(const MixedProfile& profile,
                              const NodeEmbedding& emb);

struct ReductionReport {
  bool ok = false;
  bool well_supported_ok = false;
  // Every node's pair mass within [1/K - 1/K^3, 1/K + 1/K^3] on both sides.
  bool mass_bounds_ok = false;
  SolutionReport circuit_check;  // decoded row values against the circuit
  DecodedProfile decoded;
  std::vector<std::string> failures;
};

// End-to-end check that a profile for the normalized assembled game encodes
// a circuit solution: the profile must be well_supported_eps-well-supported,
// pair masses must sit near 1/K, and the decoded row values must satisfy
// every circuit constraint at precision 1/K^3.
ReductionReport verify_reduction(const GeneralizedCircuit& circuit,
                                 const MixedProfile& profile,
                                 const Rational& well_supported_eps);

}  // namespace nashtk
