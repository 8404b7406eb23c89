#include "nashtk/embed.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <sstream>
#include <stdexcept>

#include "nashtk/errors.hpp"

namespace nashtk {

namespace {

std::string point_text(const GridPoint& p) {
  std::ostringstream out;
  out << "(";
  for (std::size_t i = 0; i < p.size(); ++i)
    out << (i ? "," : "") << p[i];
  out << ")";
  return out.str();
}

// Source red is the top color d+1 of a d-dimensional palette; transforms
// that add a dimension re-encode it as the new top color d+2.
Color lift_color(Color c, std::size_t source_d) {
  return c == source_d + 1 ? static_cast<Color>(source_d + 2) : c;
}

void require_grid_match(const Hypergrid& got, const std::vector<std::uint32_t>& want) {
  if (got.r != want)
    throw InputError("transformed oracle queried with a mismatched grid");
}

class PadDimOracle final : public ColorOracle {
 public:
  PadDimOracle(ColoringTriple source, const TransformRecord& record)
      : source_(std::move(source)), grid_{record.target_r()}, t_(record.t) {}

  std::vector<bool> direction_bits(const Hypergrid& grid,
                                   const GridPoint& p) const override {
    require_grid_match(grid, grid_.r);
    std::size_t d = grid_.d();
    Color c;
    if (grid_.on_boundary(p)) {
      c = boundary_color(grid_, p);
    } else if (p[t_ - 1] < source_.grid.r[t_ - 1]) {
      c = evaluate_color(source_, p);
    } else {
      c = static_cast<Color>(d + 1);  // the stretched remainder is red
    }
    return canonical_bits(d, c);
  }

 private:
  ColoringTriple source_;
  Hypergrid grid_;
  std::size_t t_;
};

class AddDimOracle final : public ColorOracle {
 public:
  AddDimOracle(ColoringTriple source, const TransformRecord& record)
      : source_(std::move(source)), grid_{record.target_r()} {}

  std::vector<bool> direction_bits(const Hypergrid& grid,
                                   const GridPoint& p) const override {
    require_grid_match(grid, grid_.r);
    std::size_t d = grid_.d();          // output dimension
    std::size_t sd = d - 1;             // source dimension
    Color c;
    if (grid_.on_boundary(p)) {
      c = boundary_color(grid_, p);
    } else if (p[sd] == 1) {
      GridPoint head(p.begin(), p.end() - 1);
      c = lift_color(evaluate_color(source_, head), sd);
    } else {
      c = static_cast<Color>(d + 1);
    }
    return canonical_bits(d, c);
  }

 private:
  ColoringTriple source_;
  Hypergrid grid_;
};

class SnakeOracle final : public ColorOracle {
 public:
  SnakeOracle(ColoringTriple source, const TransformRecord& record)
      : source_(std::move(source)), grid_{record.target_r()}, record_(record) {}

  std::vector<bool> direction_bits(const Hypergrid& grid,
                                   const GridPoint& p) const override {
    require_grid_match(grid, grid_.r);
    std::size_t d = grid_.d();
    std::size_t sd = d - 1;
    std::uint64_t a = record_.a, b = record_.b;
    std::uint32_t w = p[record_.t - 1];
    std::uint32_t v = p[sd];
    Color c;
    if (in_snake(record_, p)) {
      c = lift_color(evaluate_color(source_, psi(record_, p)), sd);
    } else if (grid_.on_boundary(p)) {
      c = boundary_color(grid_, p);
    } else if (v % 4 == 0 && v >= 4 && v <= 4 * b && 1 <= w && w <= a + 1) {
      c = static_cast<Color>(d);  // stripe under each leftward turn
    } else if (v % 4 != 0 && 1 <= v && v + 1 <= 4 * b && w == 1) {
      c = static_cast<Color>(d);  // stripe along the first column segments
    } else {
      c = static_cast<Color>(d + 1);
    }
    return canonical_bits(d, c);
  }

 private:
  ColoringTriple source_;
  Hypergrid grid_;
  TransformRecord record_;
};

ColoringTriple build_transformed(const ColoringTriple& source,
                                 const TransformRecord& record) {
  Hypergrid grid{record.target_r()};
  std::shared_ptr<const ColorOracle> oracle;
  switch (record.kind) {
    case TransformKind::PadDim:
      oracle = std::make_shared<PadDimOracle>(source, record);
      break;
    case TransformKind::AddDim:
      oracle = std::make_shared<AddDimOracle>(source, record);
      break;
    case TransformKind::Snake:
      oracle = std::make_shared<SnakeOracle>(source, record);
      break;
  }
  return ColoringTriple{grid, oracle};
}

void check_record_against(const TransformRecord& record,
                          const ColoringTriple& source) {
  record.validate();
  source.grid.validate();
  if (!source.oracle) throw InputError("coloring triple has no oracle");
  if (source.grid.r != record.source_r)
    throw InputError("transform record does not match the source grid");
}

// The point's own coordinate t replaced by m1 and the last coordinate by
// m2, then mapped through the snake surjection.
GridPoint shifted_psi(const TransformRecord& record, const GridPoint& p,
                      std::uint32_t m1, std::uint32_t m2) {
  GridPoint q = p;
  q[record.t - 1] = m1;
  q[q.size() - 1] = m2;
  return psi(record, q);
}

}  // namespace

std::vector<std::uint32_t> TransformRecord::target_r() const {
  std::vector<std::uint32_t> out = source_r;
  switch (kind) {
    case TransformKind::PadDim:
      out[t - 1] = u;
      break;
    case TransformKind::AddDim:
      out.push_back(u);
      break;
    case TransformKind::Snake:
      out[t - 1] = a + 5;
      out.push_back(4 * b + 3);
      break;
  }
  return out;
}

void TransformRecord::validate() const {
  Hypergrid src{source_r};
  src.validate();
  switch (kind) {
    case TransformKind::PadDim:
      if (t < 1 || t > source_r.size())
        throw InputError("pad transform: dimension index out of range");
      if (u <= source_r[t - 1])
        throw InputError("pad transform: target side must exceed the current side");
      break;
    case TransformKind::AddDim:
      if (u < 7)
        throw InputError("add-dimension transform: side must be at least 7");
      break;
    case TransformKind::Snake: {
      if (t < 1 || t > source_r.size())
        throw InputError("snake transform: dimension index out of range");
      if (a < 1 || b < 1)
        throw InputError("snake transform: factors must be at least 1");
      std::uint64_t need = std::uint64_t(a) * (2 * std::uint64_t(b) + 1) + 5;
      if (source_r[t - 1] != need)
        throw InputError("snake transform: side does not factor as a(2b+1)+5");
      break;
    }
  }
}

std::pair<ColoringTriple, TransformRecord> pad_dim(const ColoringTriple& source,
                                                   std::size_t t,
                                                   std::uint32_t u) {
  TransformRecord record;
  record.kind = TransformKind::PadDim;
  record.t = t;
  record.u = u;
  record.source_r = source.grid.r;
  check_record_against(record, source);
  return {build_transformed(source, record), record};
}

std::pair<ColoringTriple, TransformRecord> add_dim(const ColoringTriple& source,
                                                   std::uint32_t u) {
  TransformRecord record;
  record.kind = TransformKind::AddDim;
  record.u = u;
  record.source_r = source.grid.r;
  check_record_against(record, source);
  return {build_transformed(source, record), record};
}

std::pair<ColoringTriple, TransformRecord> snake_embed(
    const ColoringTriple& source, std::size_t t, std::uint32_t a,
    std::uint32_t b) {
  TransformRecord record;
  record.kind = TransformKind::Snake;
  record.t = t;
  record.a = a;
  record.b = b;
  record.source_r = source.grid.r;
  check_record_against(record, source);
  return {build_transformed(source, record), record};
}

ColoringTriple apply_transform(const ColoringTriple& source,
                               const TransformRecord& record) {
  check_record_against(record, source);
  return build_transformed(source, record);
}

bool in_snake(const TransformRecord& record, const GridPoint& p) {
  if (record.kind != TransformKind::Snake)
    throw InputError("snake region queried on a non-snake record");
  record.validate();
  Hypergrid grid{record.target_r()};
  if (!grid.contains(p))
    throw InputError("point " + point_text(p) + " lies outside the grid");
  std::uint64_t a = record.a, b = record.b;
  std::uint32_t w = p[record.t - 1];
  std::uint32_t v = p[p.size() - 1];
  if (v < 1 || v > 4 * b + 1) return false;
  if (v == 1) return 2 <= w && w <= a + 4;
  if (v == 4 * b + 1) return w <= a + 2;
  switch (v % 4) {
    case 3:
    case 1:
      return 2 <= w && w <= a + 2;
    case 2:
      return w == 2;
    default:  // v % 4 == 0
      return w == a + 2;
  }
}

GridPoint psi(const TransformRecord& record, const GridPoint& p) {
  if (!in_snake(record, p))
    throw InputError("point " + point_text(p) +
                     " lies outside the snake region");
  std::uint64_t a = record.a, b = record.b;
  std::uint64_t w = p[record.t - 1];
  std::uint64_t v = p[p.size() - 1];
  std::uint64_t m;
  if (v == 1) {
    m = 2 * a * b + w;
  } else if (v == 4 * b + 1) {
    m = w;
  } else if (v % 4 == 3) {
    std::uint64_t i = b - (v + 1) / 4;
    m = (2 * i + 2) * a + 4 - w;
  } else if (v % 4 == 1) {
    std::uint64_t i = b - (v + 3) / 4;
    m = (2 * i + 2) * a + w;
  } else if (v % 4 == 2) {
    std::uint64_t i = b - (v + 2) / 4;
    m = (2 * i + 2) * a + 2;
  } else {
    std::uint64_t i = b - v / 4;
    m = (2 * i + 1) * a + 2;
  }
  GridPoint q(p.begin(), p.end() - 1);
  q[record.t - 1] = static_cast<std::uint32_t>(m);
  return q;
}

PanchromaticSimplex back_map(const TransformRecord& record,
                             const ColoringTriple& source,
                             const PanchromaticSimplex& transformed) {
  check_record_against(record, source);
  ColoringTriple out = apply_transform(source, record);
  if (!is_panchromatic(out, transformed.points))
    throw InputError(
        "the given simplex is not panchromatic for the transformed triple");

  std::size_t sd = source.grid.d();
  std::size_t od = out.grid.d();
  std::vector<std::pair<Color, GridPoint>> colored;
  colored.reserve(transformed.points.size());
  for (const auto& p : transformed.points)
    colored.emplace_back(evaluate_color(out, p), p);

  std::map<Color, GridPoint> mapped;  // source color -> source point
  auto keep = [&](Color c, GridPoint q) {
    Color source_c = (c == od + 1) ? static_cast<Color>(sd + 1) : c;
    mapped.emplace(source_c, std::move(q));
  };

  switch (record.kind) {
    case TransformKind::PadDim: {
      // Identical point set: the simplex cannot touch the stretched slabs.
      for (auto& [c, p] : colored) {
        if (p[record.t - 1] >= record.source_r[record.t - 1])
          throw std::logic_error(
              "padded simplex reaches past the source grid");
        keep(c, p);
      }
      break;
    }
    case TransformKind::AddDim: {
      for (auto& [c, p] : colored) {
        if (c == od) {  // the one point carrying the added color
          if (p[sd] != 0)
            throw std::logic_error("added-color point is off the zero slice");
          continue;
        }
        if (p[sd] != 1)
          throw std::logic_error("kept point is off the carrying slice");
        keep(c, GridPoint(p.begin(), p.end() - 1));
      }
      break;
    }
    case TransformKind::Snake: {
      std::uint32_t a = record.a, b = record.b;
      GridPoint base = transformed.points.front();
      for (const auto& p : transformed.points)
        for (std::size_t i = 0; i < base.size(); ++i)
          base[i] = std::min(base[i], p[i]);
      std::uint32_t bt = base[record.t - 1];
      std::uint32_t bv = base[base.size() - 1];

      // Classify the anchor corner, re-checking each case's companion
      // claim, then map every point not carrying color d+1 back through
      // the snake surjection at the row the case prescribes.
      auto map_all = [&](auto&& target) {
        for (auto& [c, p] : colored) {
          if (c == od) continue;
          auto [m1, m2] = target(p);
          keep(c, shifted_psi(record, p, m1, m2));
        }
      };
      if (bt == 0) {
        if (bv != 4 * b)
          throw std::logic_error("zero-column simplex away from the top turn");
        map_all([&](const GridPoint& p) {
          return std::pair<std::uint32_t, std::uint32_t>{p[record.t - 1],
                                                         4 * b + 1};
        });
      } else if (bt == a + 2 || bt == a + 3) {
        if (bv != 0)
          throw std::logic_error("tail-column simplex away from the bottom");
        map_all([&](const GridPoint& p) {
          return std::pair<std::uint32_t, std::uint32_t>{p[record.t - 1], 1};
        });
      } else if (bv == 4 * b) {
        if (bt > a + 1)
          throw std::logic_error("top-row simplex beyond the turn column");
        map_all([&](const GridPoint& p) {
          return std::pair<std::uint32_t, std::uint32_t>{p[record.t - 1],
                                                         4 * b + 1};
        });
      } else if (bv == 4 * b + 1) {
        throw std::logic_error("simplex base on the top snake row");
      } else if (bv == 0) {
        if (bt < 1 || bt > a + 1)
          throw std::logic_error("bottom-row simplex in the tail columns");
        if (bt >= 2) {
          map_all([&](const GridPoint& p) {
            return std::pair<std::uint32_t, std::uint32_t>{p[record.t - 1], 1};
          });
        } else {
          map_all([&](const GridPoint&) {
            return std::pair<std::uint32_t, std::uint32_t>{2, 1};
          });
        }
      } else if (bv % 4 == 1 || bv % 4 == 2) {
        if (bt != 1)
          throw std::logic_error("segment-row simplex off the first column");
        map_all([&](const GridPoint& p) {
          return std::pair<std::uint32_t, std::uint32_t>{2, p[p.size() - 1]};
        });
      } else if (bv % 4 == 0) {
        if (bt < 1 || bt > a + 1)
          throw std::logic_error("turn-row simplex outside the inner columns");
        map_all([&](const GridPoint& p) {
          std::uint32_t w = p[record.t - 1];
          return std::pair<std::uint32_t, std::uint32_t>{w >= 2 ? w : 2,
                                                         bv + 1};
        });
      } else {  // bv % 4 == 3
        if (bt < 1 || bt > a + 1)
          throw std::logic_error("return-row simplex outside the inner columns");
        map_all([&](const GridPoint& p) {
          std::uint32_t w = p[record.t - 1];
          return std::pair<std::uint32_t, std::uint32_t>{w >= 2 ? w : 2, bv};
        });
      }
      break;
    }
  }

  if (mapped.size() != sd + 1)
    throw VerifyError("back-mapping produced fewer colors than the source needs");
  PanchromaticSimplex result;
  for (auto& [c, q] : mapped) {
    result.colors.push_back(c);
    result.points.push_back(q);
  }
  result.base = result.points.front();
  for (const auto& q : result.points)
    for (std::size_t i = 0; i < result.base.size(); ++i)
      result.base[i] = std::min(result.base[i], q[i]);
  if (!is_panchromatic(source, result.points))
    throw VerifyError("back-mapped simplex is not panchromatic for the source");
  return result;
}

ColoringTriple apply_chain(const ColoringTriple& source,
                           const std::vector<TransformRecord>& chain) {
  ColoringTriple cur = source;
  for (const auto& record : chain) cur = apply_transform(cur, record);
  return cur;
}

PanchromaticSimplex back_map_chain(const ColoringTriple& source,
                                   const std::vector<TransformRecord>& chain,
                                   const PanchromaticSimplex& final_simplex) {
  PanchromaticSimplex cur = final_simplex;
  for (std::size_t i = chain.size(); i-- > 0;) {
    ColoringTriple stage = source;
    for (std::size_t j = 0; j < i; ++j)
      stage = apply_transform(stage, chain[j]);
    cur = back_map(chain[i], stage, cur);
  }
  return cur;
}

EmbedResult reduce_2d_to_f(const ColoringTriple& triple2d,
                           const std::function<std::uint32_t(std::uint32_t)>& f,
                           std::uint32_t n) {
  if (!f) throw InputError("growth function descriptor is empty");
  if (n < 1 || n > 30) throw InputError("grid exponent out of range");
  triple2d.grid.validate();
  if (!triple2d.oracle) throw InputError("coloring triple has no oracle");
  std::uint32_t side = std::uint32_t(1) << n;
  if (triple2d.grid.d() != 2 || triple2d.grid.r[0] != side ||
      triple2d.grid.r[1] != side)
    throw InputError("the source must be two-dimensional with sides 2^n");

  std::uint32_t l = f(11 * n);
  if (l < 3 || 2 * std::uint64_t(l) > 11 * std::uint64_t(n))
    throw InputError("growth function value must lie in [3, 11n/2]");
  std::uint32_t mprime = (n + l - 3) / (l - 2);  // ceil(n / (l-2))
  std::uint32_t m = (11 * n + l - 1) / l;        // ceil(11n / l)

  EmbedResult res;
  res.triple = triple2d;
  if (mprime < 6)
    res.warnings.push_back(
        "small instance: the shrink loop is skipped and every pad size is "
        "checked at run time");

  std::size_t step = 0;
  auto bad_step = [&](const std::string& what) {
    std::ostringstream msg;
    msg << "step " << step << ": " << what;
    return InputError(msg.str());
  };
  auto side_of = [&](std::size_t t) { return res.triple.grid.r[t - 1]; };
  auto checked_u32 = [&](std::uint64_t value) {
    if (value > (std::uint64_t(1) << 31))
      throw BudgetError("embedding would need a side beyond 2^31");
    return static_cast<std::uint32_t>(value);
  };
  auto pow2 = [](std::uint64_t e) {
    if (e > 31) throw BudgetError("embedding would need a side beyond 2^31");
    return std::uint64_t(1) << e;
  };
  auto do_pad = [&](std::size_t t, std::uint64_t u64) {
    std::uint32_t u = checked_u32(u64);
    if (u == side_of(t)) return;  // identity pad, nothing to record
    if (u < side_of(t)) throw bad_step("pad size below the current side");
    auto [t2, rec] = pad_dim(res.triple, t, u);
    res.triple = t2;
    res.chain.push_back(rec);
    ++step;
  };
  auto do_snake = [&](std::size_t t, std::uint64_t a64, std::uint64_t b64) {
    std::uint32_t a = checked_u32(a64), b = checked_u32(b64);
    if (side_of(t) != std::uint64_t(a) * (2 * std::uint64_t(b) + 1) + 5)
      throw bad_step("snake factors do not match the padded side");
    auto [t2, rec] = snake_embed(res.triple, t, a, b);
    res.triple = t2;
    res.chain.push_back(rec);
    ++step;
  };

  std::uint64_t pow_l = std::uint64_t(1) << l;
  std::uint64_t half_rows = (std::uint64_t(1) << (l - 1)) - 1;  // 2b+1
  std::uint64_t bsnake = (std::uint64_t(1) << (l - 2)) - 1;

  // One coordinate at a time: stretch its side to a power of 2^(l-2), fold
  // it down through pad/snake rounds, finish with a short tail of rounds,
  // padding each freshly created dimension up to 2^l along the way.
  for (std::size_t coord = 1; coord <= 2; ++coord) {
    do_pad(coord, pow2(std::uint64_t(mprime) * (l - 2)));
    for (std::uint32_t t = 0; mprime >= 6 && t <= mprime - 6; ++t) {
      std::uint64_t aa =
          pow2((std::uint64_t(mprime) - t - 1) * (l - 2)) - 5;
      do_pad(coord, aa * half_rows + 5);
      do_snake(coord, aa, bsnake);
      do_pad(res.triple.grid.d(), pow_l);
    }
    while (side_of(coord) > pow_l) {
      std::uint64_t k = (side_of(coord) - 5 + half_rows - 1) / half_rows + 5;
      do_pad(coord, (k - 5) * half_rows + 5);
      do_snake(coord, k - 5, bsnake);
      do_pad(res.triple.grid.d(), pow_l);
    }
    do_pad(coord, pow_l);
  }

  while (res.triple.grid.d() < m) {
    auto [t2, rec] = add_dim(res.triple, checked_u32(pow_l));
    res.triple = t2;
    res.chain.push_back(rec);
    ++step;
  }
  return res;
}

}  // namespace nashtk
