#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace nashtk {

// Discrete fixed-point instances: hypergrids whose vertices are colored by a
// direction oracle, subject to a forced coloring on the boundary. Every valid
// coloring admits a unit cube carrying all d+1 colors; a set of d+1 vertices
// of one cube showing all colors is the search target.

using GridPoint = std::vector<std::uint32_t>;

// Colors are 1..d for the coordinate directions plus a terminal color
// ("red") encoded as d+1.
using Color = std::uint32_t;

struct Hypergrid {
  std::vector<std::uint32_t> r;  // side lengths; vertices have 0 <= p_i < r_i

  std::size_t d() const { return r.size(); }
  void validate() const;  // at least one dimension, every side >= 2
  bool contains(const GridPoint& p) const;
  // Some coordinate sits on a face: p_i = 0 or p_i = r_i - 1.
  bool on_boundary(const GridPoint& p) const;
  mpz_class point_count() const;
  mpz_class boundary_count() const;

  // Input-bit layout for circuit oracles: coordinate i occupies the minimal
  // ceil(log2 r_i) bits, most significant first, coordinates in order.
  std::vector<unsigned> bits_per_coord() const;
  unsigned total_bits() const;
  std::vector<bool> encode(const GridPoint& p) const;

  // Rank of p in lexicographic order (first coordinate slowest); inverse.
  std::size_t lex_rank(const GridPoint& p) const;
  GridPoint from_lex_rank(std::size_t rank) const;
};

// Boolean circuits over and/or/not plus constants. Operand references index
// a shared space: 0..num_inputs-1 are the input bits, num_inputs + i is the
// output of gate i. References must point strictly backwards, so the circuit
// is acyclic by construction.
enum class BoolOp { And, Or, Not, Const0, Const1 };

struct BoolGate {
  BoolOp op;
  std::size_t a = 0;  // first operand (unused for constants)
  std::size_t b = 0;  // second operand (And/Or only)
};

struct BoolCircuit {
  std::size_t num_inputs = 0;
  std::vector<BoolGate> gates;
  // Designated output references, ordered plus/minus per coordinate:
  // up_1, down_1, up_2, down_2, ...
  std::vector<std::size_t> outputs;

  void validate() const;
  std::vector<bool> eval(const std::vector<bool>& inputs) const;
};

// A coloring source: yields the 2d direction bits of a grid point, ordered
// like BoolCircuit outputs.
class ColorOracle {
 public:
  virtual ~ColorOracle() = default;
  virtual std::vector<bool> direction_bits(const Hypergrid& grid,
                                           const GridPoint& p) const = 0;
};

class CircuitOracle : public ColorOracle {
 public:
  explicit CircuitOracle(BoolCircuit circuit);
  std::vector<bool> direction_bits(const Hypergrid& grid,
                                   const GridPoint& p) const override;
  const BoolCircuit& circuit() const { return circuit_; }

 private:
  BoolCircuit circuit_;
};

// Dense per-point color table in lexicographic point order; emits the
// canonical bit pattern of the stored color.
class TableOracle : public ColorOracle {
 public:
  TableOracle(const Hypergrid& grid, std::vector<Color> colors);
  std::vector<bool> direction_bits(const Hypergrid& grid,
                                   const GridPoint& p) const override;
  const std::vector<Color>& colors() const { return colors_; }

 private:
  std::size_t d_;
  std::vector<Color> colors_;
};

struct ColoringTriple {
  Hypergrid grid;
  std::shared_ptr<const ColorOracle> oracle;
};

// The bit pattern announcing a color: color i in 1..d raises only bit
// 2(i-1); color d+1 raises exactly the 2i-1 bits (all "down" bits).
std::vector<bool> canonical_bits(std::size_t d, Color c);

// Decode the oracle's bits at p into the unique matching color. A pattern
// matching no color is a hard error naming the point.
Color evaluate_color(const ColoringTriple& triple, const GridPoint& p);

/// Forced boundary color: the highest zero coordinate wins; with no zero
// coordinate a boundary point is red.
Color boundary_color(const Hypergrid& grid, const GridPoint& p);

struct BoundaryReport {
  bool ok = false;
  // Boundary points whose color differs from the forced rule (or whose bits
  // decode to no color at all).
  std::vector<GridPoint> rule_violations;
  // Base points p of adjacent boundary pairs (p, p + e_t), 1 <= p_t <=
  // r_t - 2, with differing colors.
  std::vector<GridPoint> continuity_violations;
};

// Exhaustively confirm the forced rule at every boundary point, and
// independently that adjacent boundary points with an interior coordinate
// share a color. Refuses grids whose boundary exceeds the budget.
BoundaryReport validate_boundary(const ColoringTriple& triple,
                                 std::uint64_t max_points = 1u << 24);

struct PanchromaticSimplex {
  GridPoint base;                 // corner of the containing unit cube
  std::vector<GridPoint> points;  // one vertex per color, ordered by color
  std::vector<Color> colors;      // 1..d+1
};

// Scan unit cubes in lexicographic order of their base corner and return,
// from the first cube whose vertices show all d+1 colors, the
// lexicographically smallest vertex of each color. Valid colorings always
// contain such a cube; exhausting the scan therefore reports the coloring
// itself as invalid.
PanchromaticSimplex find_panchromatic(const ColoringTriple& triple,
                                      std::uint64_t max_points = 1u << 24);

// Independent re-check: exactly d+1 points, all inside one unit cube of the
// grid, carrying d+1 distinct colors.
bool is_panchromatic(const ColoringTriple& triple,
                     const std::vector<GridPoint>& points);

// A uniformly random interior coloring over the forced boundary; table
// backed, deterministic per seed. Sides must be at least 3.
ColoringTriple random_valid_coloring(std::size_t d,
                                     const std::vector<std::uint32_t>& r,
                                     std::uint64_t seed,
                                     std::uint64_t max_points = 1u << 24);

// Synthesize a boolean circuit reproducing the triple's coloring: one
// sum-of-products per direction bit over the encoded grid points. The
// result is exhaustively verified against the source before returning.
BoolCircuit table_to_circuit(const ColoringTriple& triple,
                             std::uint64_t max_points = 1u << 24);

}  // namespace nashtk
