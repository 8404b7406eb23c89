#include "nashtk/brouwer.hpp"

#include <algorithm>
#include <bit>
#include <cstddef>
#include <functional>
#include <optional>
#include <set>
#include <stdexcept>
#include <utility>

#include "nashtk/errors.hpp"
#include "nashtk/rng.hpp"

namespace nashtk {

namespace {

std::string point_to_string(const GridPoint& p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

// Every point with lo_i <= p_i <= hi_i, in lexicographic order. Any empty
// range yields no points.
void for_each_point(const std::vector<std::uint32_t>& lo,
                    const std::vector<std::uint32_t>& hi,
                    const std::function<void(const GridPoint&)>& fn) {
  const std::size_t d = lo.size();
  for (std::size_t i = 0; i < d; ++i)
    if (lo[i] > hi[i]) return;
  GridPoint p(lo);
  for (;;) {
    fn(p);
    std::size_t i = d;
    while (i > 0) {
      --i;
      if (p[i] < hi[i]) {
        ++p[i];
        for (std::size_t j = i + 1; j < d; ++j) p[j] = lo[j];
        break;
      }
      if (i == 0) return;
    }
  }
}

std::size_t checked_count(const Hypergrid& grid, std::uint64_t max_points) {
  const mpz_class count = grid.point_count();
  if (count > mpz_class(max_points))
    throw BudgetError("grid has " + count.get_str() +
                      " points, over the budget of " +
                      std::to_string(max_points));
  return static_cast<std::size_t>(mpz_get_ui(count.get_mpz_t()));
}

}  // namespace

void Hypergrid::validate() const {
  if (r.empty()) throw InputError("hypergrid needs at least one dimension");
  for (auto side : r)
    if (side < 2) throw InputError("hypergrid sides must be at least 2");
}

bool Hypergrid::contains(const GridPoint& p) const {
  if (p.size() != r.size()) return false;
  for (std::size_t i = 0; i < r.size(); ++i)
    if (p[i] >= r[i]) return false;
  return true;
}

bool Hypergrid::on_boundary(const GridPoint& p) const {
  for (std::size_t i = 0; i < r.size(); ++i)
    if (p[i] == 0 || p[i] + 1 == r[i]) return true;
  return false;
}

mpz_class Hypergrid::point_count() const {
  mpz_class n(1);
  for (auto side : r) n *= side;
  return n;
}

mpz_class Hypergrid::boundary_count() const {
  mpz_class interior(1);
  for (auto side : r) interior *= (side >= 2 ? side - 2 : 0);
  return point_count() - interior;
}

std::vector<unsigned> Hypergrid::bits_per_coord() const {
  std::vector<unsigned> out;
  out.reserve(r.size());
  for (auto side : r)
    out.push_back(static_cast<unsigned>(std::bit_width(side - 1u)));
  return out;
}

unsigned Hypergrid::total_bits() const {
  unsigned total = 0;
  for (auto b : bits_per_coord()) total += b;
  return total;
}

std::vector<bool> Hypergrid::encode(const GridPoint& p) const {
  if (!contains(p))
    throw InputError("point " + point_to_string(p) + " outside the grid");
  std::vector<bool> bits;
  const auto widths = bits_per_coord();
  for (std::size_t i = 0; i < r.size(); ++i)
    for (unsigned b = widths[i]; b-- > 0;)
      bits.push_back((p[i] >> b) & 1u);
  return bits;
}

std::size_t Hypergrid::lex_rank(const GridPoint& p) const {
  if (!contains(p))
    throw InputError("point " + point_to_string(p) + " outside the grid");
  std::size_t rank = 0;
  for (std::size_t i = 0; i < r.size(); ++i)
    rank = rank * r[i] + p[i];
  return rank;
}

GridPoint Hypergrid::from_lex_rank(std::size_t rank) const {
  GridPoint p(r.size());
  for (std::size_t i = r.size(); i-- > 0;) {
    p[i] = static_cast<std::uint32_t>(rank % r[i]);
    rank /= r[i];
  }
  if (rank != 0) throw InputError("rank outside the grid");
  return p;
}

void BoolCircuit::validate() const {
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const BoolGate& g = gates[i];
    const std::size_t limit = num_inputs + i;
    const bool needs_a = g.op != BoolOp::Const0 && g.op != BoolOp::Const1;
    const bool needs_b = g.op == BoolOp::And || g.op == BoolOp::Or;
    if (needs_a && g.a >= limit)
      throw InputError("gate " + std::to_string(i) +
                       " references a later value");
    if (needs_b && g.b >= limit)
      throw InputError("gate " + std::to_string(i) +
                       " references a later value");
  }
  if (outputs.empty() || outputs.size() % 2 != 0)
    throw InputError("circuit needs an up/down output pair per coordinate");
  for (std::size_t ref : outputs)
    if (ref >= num_inputs + gates.size())
      throw InputError("output reference out of range");
}

std::vector<bool> BoolCircuit::eval(const std::vector<bool>& inputs) const {
  if (inputs.size() != num_inputs)
    throw InputError("expected " + std::to_string(num_inputs) +
                     " input bits, got " + std::to_string(inputs.size()));
  std::vector<bool> vals(num_inputs + gates.size());
  std::copy(inputs.begin(), inputs.end(), vals.begin());
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const BoolGate& g = gates[i];
    bool v = false;
    switch (g.op) {
      case BoolOp::And: v = vals[g.a] && vals[g.b]; break;
      case BoolOp::Or: v = vals[g.a] || vals[g.b]; break;
      case BoolOp::Not: v = !vals[g.a]; break;
      case BoolOp::Const0: v = false; break;
      case BoolOp::Const1: v = true; break;
    }
    vals[num_inputs + i] = v;
  }
  std::vector<bool> out;
  out.reserve(outputs.size());
  for (std::size_t ref : outputs) out.push_back(vals[ref]);
  return out;
}

CircuitOracle::CircuitOracle(BoolCircuit circuit) : circuit_(std::move(circuit)) {
  circuit_.validate();
}

std::vector<bool> CircuitOracle::direction_bits(const Hypergrid& grid,
                                                const GridPoint& p) const {
  if (circuit_.num_inputs != grid.total_bits())
    throw InputError("circuit input width does not match the grid encoding");
  if (circuit_.outputs.size() != 2 * grid.d())
    throw InputError("circuit output count does not match the grid dimension");
  return circuit_.eval(grid.encode(p));
}

TableOracle::TableOracle(const Hypergrid& grid, std::vector<Color> colors)
    : d_(grid.d()), colors_(std::move(colors)) {
  grid.validate();
  const mpz_class count = grid.point_count();
  if (!count.fits_ulong_p() ||
      mpz_get_ui(count.get_mpz_t()) != colors_.size())
    throw InputError("color table size does not match the grid");
  for (Color c : colors_)
    if (c < 1 || c > d_ + 1)
      throw InputError("table color " + std::to_string(c) +
                       " outside 1.." + std::to_string(d_ + 1));
}

std::vector<bool> TableOracle::direction_bits(const Hypergrid& grid,
                                              const GridPoint& p) const {
  if (grid.d() != d_)
    throw InputError("table dimension does not match the grid");
  return canonical_bits(d_, colors_[grid.lex_rank(p)]);
}

std::vector<bool> canonical_bits(std::size_t d, Color c) {
  if (c < 1 || c > d + 1)
    throw InputError("color " + std::to_string(c) + " outside 1.." +
                     std::to_string(d + 1));
  std::vector<bool> bits(2 * d, false);
  if (c <= d)
    bits[2 * (c - 1)] = true;
  else
    for (std::size_t i = 0; i < d; ++i) bits[2 * i + 1] = true;
  return bits;
}

Color evaluate_color(const ColoringTriple& triple, const GridPoint& p) {
  triple.grid.validate();
  if (!triple.oracle) throw InputError("coloring triple has no oracle");
  if (!triple.grid.contains(p))
    throw InputError("point " + point_to_string(p) + " outside the grid");
  const std::size_t d = triple.grid.d();
  const std::vector<bool> bits = triple.oracle->direction_bits(triple.grid, p);
  if (bits.size() != 2 * d)
    throw InputError("oracle emitted the wrong number of direction bits");

  std::size_t up_count = 0, up_at = 0, down_count = 0;
  for (std::size_t i = 0; i < d; ++i) {
    if (bits[2 * i]) {
      ++up_count;
      up_at = i;
    }
    if (bits[2 * i + 1]) ++down_count;
  }
  if (up_count == 1 && down_count == 0) return static_cast<Color>(up_at + 1);
  if (up_count == 0 && down_count == d) return static_cast<Color>(d + 1);
  throw VerifyError("direction bits at point " + point_to_string(p) +
                    " match no color");
}

Color boundary_color(const Hypergrid& grid, const GridPoint& p) {
  if (!grid.contains(p) || !grid.on_boundary(p))
    throw InputError("point " + point_to_string(p) + " is not on the boundary");
  const std::size_t d = grid.d();
  for (std::size_t i = d; i-- > 0;)
    if (p[i] == 0) return static_cast<Color>(i + 1);
  return static_cast<Color>(d + 1);
}

BoundaryReport validate_boundary(const ColoringTriple& triple,
                                 std::uint64_t max_points) {
  const Hypergrid& grid = triple.grid;
  grid.validate();
  const mpz_class boundary = grid.boundary_count();
  if (boundary > mpz_class(max_points))
    throw BudgetError("boundary has " + boundary.get_str() +
                      " points, over the budget of " +
                      std::to_string(max_points));

  BoundaryReport report;
  const std::size_t d = grid.d();
  auto color_of = [&](const GridPoint& p) -> std::optional<Color> {
    try {
      return evaluate_color(triple, p);
    } catch (const VerifyError&) {
      return std::nullopt;
    }
  };

  auto visit = [&](const GridPoint& p) {
    auto c = color_of(p);
    if (!c || *c != boundary_color(grid, p)) report.rule_violations.push_back(p);
    // Pair p with its +e_t neighbors whose t-coordinate is interior; both
    // endpoints are then boundary points via some other coordinate.
    for (std::size_t t = 0; t < d; ++t) {
      if (p[t] < 1 || p[t] + 2 > grid.r[t]) continue;
      GridPoint q = p;
      ++q[t];
      auto cq = color_of(q);
      if (c && cq && *c != *cq) report.continuity_violations.push_back(p);
    }
  };

  // Enumerate every boundary point once, keyed by its smallest boundary
  // coordinate: coordinates before it stay strictly interior.
  std::vector<std::uint32_t> lo(d), hi(d);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::uint32_t face : {0u, grid.r[i] - 1}) {
      for (std::size_t j = 0; j < d; ++j) {
        if (j < i) {
          lo[j] = 1;  // lo > hi when r_j = 2: no strictly interior values
          hi[j] = grid.r[j] >= 3 ? grid.r[j] - 2 : 0;
        } else if (j == i) {
          lo[j] = hi[j] = face;
        } else {
          lo[j] = 0;
          hi[j] = grid.r[j] - 1;
        }
      }
      for_each_point(lo, hi, visit);
    }
  }
  report.ok =
      report.rule_violations.empty() && report.continuity_violations.empty();
  return report;
}

PanchromaticSimplex find_panchromatic(const ColoringTriple& triple,
                                      std::uint64_t max_points) {
  const Hypergrid& grid = triple.grid;
  grid.validate();
  const std::size_t total = checked_count(grid, max_points);
  const std::size_t d = grid.d();
  if (d + 1 > 255) throw InputError("dimension too large for the color memo");

  std::vector<std::uint8_t> memo(total, 0);
  auto color_of = [&](const GridPoint& p) {
    const std::size_t rank = grid.lex_rank(p);
    if (memo[rank] == 0)
      memo[rank] = static_cast<std::uint8_t>(evaluate_color(triple, p));
    return static_cast<Color>(memo[rank]);
  };

  std::vector<std::uint32_t> lo(d, 0), hi(d);
  for (std::size_t i = 0; i < d; ++i) hi[i] = grid.r[i] - 2;

  std::optional<PanchromaticSimplex> found;
  // Vertices of the cube at base p, in lexicographic order: mask bit
  // (d-1-i) raises coordinate i, so ascending masks are ascending vertices.
  std::vector<Color> vertex_color(std::size_t(1) << d);
  for_each_point(lo, hi, [&](const GridPoint& base) {
    if (found) return;
    std::vector<bool> seen(d + 2, false);
    std::size_t distinct = 0;
    for (std::size_t mask = 0; mask < vertex_color.size(); ++mask) {
      GridPoint q = base;
      for (std::size_t i = 0; i < d; ++i)
        if (mask >> (d - 1 - i) & 1u) ++q[i];
      vertex_color[mask] = color_of(q);
      if (!seen[vertex_color[mask]]) {
        seen[vertex_color[mask]] = true;
        ++distinct;
      }
    }
    if (distinct != d + 1) return;
    PanchromaticSimplex simplex;
    simplex.base = base;
    for (Color c = 1; c <= d + 1; ++c) {
      for (std::size_t mask = 0; mask < vertex_color.size(); ++mask) {
        if (vertex_color[mask] != c) continue;
        GridPoint q = base;
        for (std::size_t i = 0; i < d; ++i)
          if (mask >> (d - 1 - i) & 1u) ++q[i];
        simplex.points.push_back(std::move(q));
        simplex.colors.push_back(c);
        break;
      }
    }
    found = std::move(simplex);
  });
  if (!found)
    throw VerifyError(
        "no unit cube shows all colors; the coloring is not valid");
  return *found;
}

bool is_panchromatic(const ColoringTriple& triple,
                     const std::vector<GridPoint>& points) {
  const std::size_t d = triple.grid.d();
  if (points.size() != d + 1) return false;
  for (const GridPoint& p : points)
    if (!triple.grid.contains(p)) return false;
  std::set<GridPoint> distinct(points.begin(), points.end());
  if (distinct.size() != d + 1) return false;
  for (std::size_t i = 0; i < d; ++i) {
    std::uint32_t lo = points[0][i], hi = points[0][i];
    for (const GridPoint& p : points) {
      lo = std::min(lo, p[i]);
      hi = std::max(hi, p[i]);
    }
    if (hi - lo > 1) return false;
  }
  std::set<Color> colors;
  for (const GridPoint& p : points) colors.insert(evaluate_color(triple, p));
  return colors.size() == d + 1;
}

ColoringTriple random_valid_coloring(std::size_t d,
                                     const std::vector<std::uint32_t>& r,
                                     std::uint64_t seed,
                                     std::uint64_t max_points) {
  if (r.size() != d) throw InputError("side vector length must equal d");
  Hypergrid grid{r};
  grid.validate();
  for (auto side : r)
    if (side < 3)
      throw InputError("random colorings need sides of at least 3");
  const std::size_t total = checked_count(grid, max_points);

  SplitMix64 rng(seed);
  std::vector<Color> colors(total);
  std::vector<std::uint32_t> lo(d, 0), hi(d);
  for (std::size_t i = 0; i < d; ++i) hi[i] = r[i] - 1;
  std::size_t rank = 0;
  for_each_point(lo, hi, [&](const GridPoint& p) {
    colors[rank++] = grid.on_boundary(p)
                         ? boundary_color(grid, p)
                         : static_cast<Color>(1 + rng.next_below(d + 1));
  });
  return ColoringTriple{grid,
                        std::make_shared<TableOracle>(grid, std::move(colors))};
}

BoolCircuit table_to_circuit(const ColoringTriple& triple,
                             std::uint64_t max_points) {
  const Hypergrid& grid = triple.grid;
  grid.validate();
  const std::size_t total = checked_count(grid, max_points);
  const std::size_t d = grid.d();
  constexpr std::size_t kMaxGates = std::size_t(1) << 24;

  // Materialize the canonical bit pattern at every point.
  std::vector<std::vector<bool>> patterns(total);
  std::vector<std::vector<bool>> encodings(total);
  {
    std::vector<std::uint32_t> lo(d, 0), hi(d);
    for (std::size_t i = 0; i < d; ++i) hi[i] = grid.r[i] - 1;
    std::size_t rank = 0;
    for_each_point(lo, hi, [&](const GridPoint& p) {
      patterns[rank] = canonical_bits(d, evaluate_color(triple, p));
      encodings[rank] = grid.encode(p);
      ++rank;
    });
  }

  BoolCircuit circuit;
  circuit.num_inputs = grid.total_bits();
  auto add_gate = [&](BoolOp op, std::size_t a = 0, std::size_t b = 0) {
    if (circuit.gates.size() >= kMaxGates)
      throw BudgetError("synthesized circuit exceeds the gate budget");
    circuit.gates.push_back(BoolGate{op, a, b});
    return circuit.num_inputs + circuit.gates.size() - 1;
  };

  // One shared inverter per input bit, created on first use.
  std::vector<std::size_t> inverted(circuit.num_inputs, SIZE_MAX);
  auto not_of = [&](std::size_t input) {
    if (inverted[input] == SIZE_MAX)
      inverted[input] = add_gate(BoolOp::Not, input);
    return inverted[input];
  };

  for (std::size_t bit = 0; bit < 2 * d; ++bit) {
    std::vector<std::size_t> minterms;
    for (std::size_t rank = 0; rank < total; ++rank)
      if (patterns[rank][bit]) minterms.push_back(rank);
    if (minterms.empty()) {
      circuit.outputs.push_back(add_gate(BoolOp::Const0));
      continue;
    }
    if (minterms.size() == total) {
      circuit.outputs.push_back(add_gate(BoolOp::Const1));
      continue;
    }
    std::size_t acc_or = SIZE_MAX;
    for (std::size_t rank : minterms) {
      std::size_t acc_and = SIZE_MAX;
      for (std::size_t i = 0; i < circuit.num_inputs; ++i) {
        const std::size_t literal = encodings[rank][i] ? i : not_of(i);
        acc_and = acc_and == SIZE_MAX ? literal
                                      : add_gate(BoolOp::And, acc_and, literal);
      }
      acc_or = acc_or == SIZE_MAX ? acc_and
                                  : add_gate(BoolOp::Or, acc_or, acc_and);
    }
    circuit.outputs.push_back(acc_or);
  }
  circuit.validate();

  // The synthesized circuit must reproduce the source bits exactly.
  const ColoringTriple check{grid, std::make_shared<CircuitOracle>(circuit)};
  {
    std::vector<std::uint32_t> lo(d, 0), hi(d);
    for (std::size_t i = 0; i < d; ++i) hi[i] = grid.r[i] - 1;
    std::size_t rank = 0;
    for_each_point(lo, hi, [&](const GridPoint& p) {
      if (check.oracle->direction_bits(grid, p) != patterns[rank++])
        throw std::logic_error("synthesized circuit diverged from its table");
    });
  }
  return circuit;
}

}  // namespace nashtk
