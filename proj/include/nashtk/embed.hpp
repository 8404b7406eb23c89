#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "nashtk/brouwer.hpp"

namespace nashtk {

// The three grid embeddings. PadDim stretches one dimension, AddDim appends
// a dimension whose slice 1 carries the source coloring, Snake folds a long
// dimension into two shorter ones along a serpentine region.
enum class TransformKind { PadDim, AddDim, Snake };

struct TransformRecord {
  TransformKind kind = TransformKind::PadDim;
  std::size_t t = 0;     // 1-based dimension index (PadDim, Snake)
  std::uint32_t u = 0;   // target side (PadDim, AddDim)
  std::uint32_t a = 0;   // snake factors (Snake)
  std::uint32_t b = 0;
  std::vector<std::uint32_t> source_r;  // grid sides before the transform

  // Sides of the transformed grid.
  std::vector<std::uint32_t> target_r() const;
  void validate() const;
};

// Pad dimension t (1-based) to side u > r_t. Colors: the new boundary takes
// the forced colors, points of the source grid keep their colors, the
// stretched remainder is red.
std::pair<ColoringTriple, TransformRecord> pad_dim(const ColoringTriple& source,
                                                   std::size_t t,
                                                   std::uint32_t u);

// Append a dimension of side u >= 7. Colors: the new boundary takes the
// forced colors, slice p_{d+1} = 1 carries the source coloring (source red
// becomes the red of the larger palette), everything else is red.
std::pair<ColoringTriple, TransformRecord> add_dim(const ColoringTriple& source,
                                                   std::uint32_t u);

// Fold dimension t, of side a(2b+1)+5, into a dimension of side a+5 plus a
// new last dimension of side 4b+3. The snake region carries the source
// coloring; two stripes hugging the inside of the snake get color d+1; the
// new boundary takes the forced colors; the rest is red.
std::pair<ColoringTriple, TransformRecord> snake_embed(
    const ColoringTriple& source, std::size_t t, std::uint32_t a,
    std::uint32_t b);

// Re-apply a recorded transform to its source triple. The record's stored
// sides must match the source grid.
ColoringTriple apply_transform(const ColoringTriple& source,
                               const TransformRecord& record);

// Membership in the snake region of a Snake record; p lives in the
// transformed grid.
bool in_snake(const TransformRecord& record, const GridPoint& p);

// The surjection from the snake region onto the source grid. Requires
// in_snake(record, p).
GridPoint psi(const TransformRecord& record, const GridPoint& p);

// Map a panchromatic simplex of the transformed triple back to one of the
// source triple. The simplex is checked against the re-applied transform
// first; the result is verified panchromatic for the source.
PanchromaticSimplex back_map(const TransformRecord& record,
                             const ColoringTriple& source,
                             const PanchromaticSimplex& transformed);

// Fold a whole chain: apply_chain re-applies every record left to right;
// back_map_chain walks a simplex of the final triple back to the first.
ColoringTriple apply_chain(const ColoringTriple& source,
                           const std::vector<TransformRecord>& chain);
PanchromaticSimplex back_map_chain(const ColoringTriple& source,
                                   const std::vector<TransformRecord>& chain,
                                   const PanchromaticSimplex& final_simplex);

struct EmbedResult {
  ColoringTriple triple;
  std::vector<TransformRecord> chain;
  std::vector<std::string> warnings;
};

// Embed a two-dimensional triple with sides (2^n, 2^n) into a hypergrid of
// dimension ceil(11n/l) with all sides 2^l, where l = f(11n) and f is a
// growth function with 3 <= f(x) <= x/2. Each coordinate is shrunk by
// alternating pad and snake steps, then the dimension count is topped up.
// Steps that would pad a dimension to its current side are skipped.
EmbedResult reduce_2d_to_f(const ColoringTriple& triple2d,
                           const std::function<std::uint32_t(std::uint32_t)>& f,
                           std::uint32_t n);

}  // namespace nashtk
