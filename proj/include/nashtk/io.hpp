#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "nashtk/bimatrix.hpp"
#include "nashtk/brouwer.hpp"
#include "nashtk/circuitize.hpp"
#include "nashtk/embed.hpp"
#include "nashtk/gencircuit.hpp"
#include "nashtk/rational.hpp"

namespace nashtk {

// Textual record formats: JSON documents with every rational written as its
// canonical "p/q" string ("p" when the denominator is 1). Parsers are
// strict — a missing or unknown field, a malformed rational, or a shape
// mismatch is an input error naming the offending location — and every
// parsed object is re-validated through its own module's checks, so a
// loaded artifact is as trustworthy as a freshly built one.

// What a profile of an assembled game means: the node count (node v owns
// the action pair (2v, 2v+1)), whether the payoffs were normalized into
// [0,1], and the well-supported precision at which decoding is guaranteed.
struct GameMeta {
  std::uint64_t K = 0;
  bool normalized = true;
  Rational eps_game;
};

// {"m","n","A","B","tag"}; entries row-major, tag raw|normalized|positive.
std::string serialize_game(const BimatrixGame& g);
BimatrixGame parse_game(const std::string& text);

// {"x":[...],"y":[...]}
std::string serialize_profile(const MixedProfile& p);
MixedProfile parse_profile(const std::string& text);

// {"K","gates":[{"type","v1","v2","v","alpha"},...]}; unused operand slots
// and absent alphas are null; K may be given as a number or a decimal
// string (it can exceed every fixed-width integer).
std::string serialize_circuit(const GeneralizedCircuit& c);
GeneralizedCircuit parse_circuit(const std::string& text);

// {"values":{"id":"p/q",...}}; ids absent from the map are 0.
std::string serialize_assignment(const Assignment& x);
Assignment parse_assignment(const std::string& text);

// {"inputs","gates":[{"op","a","b"},...],"outputs"}; operand fields appear
// only where the operation reads them (a for not, a and b for and/or).
std::string serialize_bool_circuit(const BoolCircuit& c);
BoolCircuit parse_bool_circuit(const std::string& text);

// {"d","r","oracle":{"kind":"circuit","circuit":{...}}
//             | {"kind":"table","colors":[...]}}; colors in lexicographic
// point order. Only circuit- and table-backed oracles have a file form;
// serializing a transform-wrapped oracle is an input error (chains are the
// file form of those).
std::string serialize_triple(const ColoringTriple& t);
ColoringTriple parse_triple(const std::string& text);

// [{"kind":"pad"|"add"|"snake", ...params, "source_r":[...]},...] in
// application order; each record carries only the parameters its kind uses.
std::string serialize_chain(const std::vector<TransformRecord>& chain);
std::vector<TransformRecord> parse_chain(const std::string& text);

// {"base","points","colors"}: one grid point per color.
std::string serialize_simplex(const PanchromaticSimplex& s);
PanchromaticSimplex parse_simplex(const std::string& text);

// {"n","circuit":{...}}; parsing runs the full instance validation,
// including the exhaustive boundary scan when the grid fits the budget.
std::string serialize_instance(const BrouwerInstance& inst);
BrouwerInstance parse_instance(const std::string& text,
                               std::uint64_t validate_budget = 1u << 18);

// {"n","m","relaxed","sample","vote_up","vote_down","sum_up","sum_down",
//  "loop_add","loop_sub","nodes_used","gate_phase"}; the precision frame is
// reconstructed from m, and gate_phase is a string with one letter per gate
// (S sampling, C coloring, M summation, L loop).
std::string serialize_layout(const ReductionLayout& l);
ReductionLayout parse_layout(const std::string& text);

// {"K","normalized","eps_game"}
std::string serialize_meta(const GameMeta& m);
GameMeta parse_meta(const std::string& text);

// Whole-file helpers; failures are input errors naming the path.
std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);

}  // namespace nashtk
