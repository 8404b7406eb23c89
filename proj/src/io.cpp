#include "nashtk/io.hpp"

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <memory>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "nashtk/errors.hpp"

namespace nashtk {
namespace {

using json = nlohmann::ordered_json;

json jparse(const std::string& text, const char* what) {
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded())
    throw InputError(std::string(what) + ": not valid JSON");
  return j;
}

std::string ctx(const char* what, const std::string& where) {
  return std::string(what) + ": " + where;
}

const json& as_object(const json& v, const char* what, const std::string& where) {
  if (!v.is_object()) throw InputError(ctx(what, where) + ": expected an object");
  return v;
}

const json& as_array(const json& v, const char* what, const std::string& where) {
  if (!v.is_array()) throw InputError(ctx(what, where) + ": expected an array");
  return v;
}

// Strict field check: every listed key present, nothing else.
void check_keys(const json& o, const char* what, const std::string& where,
                std::initializer_list<const char*> keys) {
  for (const char* k : keys)
    if (!o.contains(k))
      throw InputError(ctx(what, where) + ": missing field \"" + k + "\"");
  for (auto it = o.begin(); it != o.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known)
      throw InputError(ctx(what, where) + ": unknown field \"" + it.key() + "\"");
  }
}

std::uint64_t as_u64(const json& v, const char* what, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    if (s.empty()) throw InputError(ctx(what, where) + ": empty integer");
    std::uint64_t r = 0;
    for (char c : s) {
      if (c < '0' || c > '9')
        throw InputError(ctx(what, where) + ": bad integer \"" + s + "\"");
      std::uint64_t d = static_cast<std::uint64_t>(c - '0');
      if (r > (UINT64_MAX - d) / 10)
        throw InputError(ctx(what, where) + ": integer overflow \"" + s + "\"");
      r = r * 10 + d;
    }
    return r;
  }
  throw InputError(ctx(what, where) + ": expected a nonnegative integer");
}

std::uint32_t as_u32(const json& v, const char* what, const std::string& where) {
  std::uint64_t r = as_u64(v, what, where);
  if (r > UINT32_MAX)
    throw InputError(ctx(what, where) + ": value too large");
  return static_cast<std::uint32_t>(r);
}

bool as_bool(const json& v, const char* what, const std::string& where) {
  if (!v.is_boolean()) throw InputError(ctx(what, where) + ": expected a boolean");
  return v.get<bool>();
}

const std::string& as_string(const json& v, const char* what,
                             const std::string& where) {
  if (!v.is_string()) throw InputError(ctx(what, where) + ": expected a string");
  return v.get_ref<const std::string&>();
}

Rational as_rational(const json& v, const char* what, const std::string& where) {
  if (!v.is_string())
    throw InputError(ctx(what, where) + ": rationals are \"p/q\" strings");
  try {
    return Rational::from_string(v.get_ref<const std::string&>());
  } catch (const InputError& e) {
    throw InputError(ctx(what, where) + ": " + e.what());
  }
}

json jrat(const Rational& r) { return json(r.to_string()); }

// Large ids stay exact by switching to a decimal string beyond the range
// JSON numbers can carry faithfully.
json jid(std::uint64_t v) {
  if (v <= (std::uint64_t(1) << 53)) return json(v);
  return json(std::to_string(v));
}

mpz_class as_mpz(const json& v, const char* what, const std::string& where) {
  if (v.is_number_unsigned()) return mpz_class(v.get<std::uint64_t>());
  if (v.is_string()) {
    const std::string& s = v.get_ref<const std::string&>();
    for (char c : s)
      if (c < '0' || c > '9')
        throw InputError(ctx(what, where) + ": bad integer \"" + s + "\"");
    if (s.empty()) throw InputError(ctx(what, where) + ": empty integer");
    return mpz_class(s, 10);
  }
  throw InputError(ctx(what, where) + ": expected a nonnegative integer");
}

json matrix_to_json(const RatMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json r = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j) r.push_back(jrat(m.at(i, j)));
    rows.push_back(std::move(r));
  }
  return rows;
}

RatMatrix matrix_from_json(const json& v, const char* what,
                           const std::string& where) {
  const json& rows = as_array(v, what, where);
  std::size_t ncols = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    const json& row =
        as_array(rows[i], what, where + "[" + std::to_string(i) + "]");
    if (i == 0)
      ncols = row.size();
    else if (row.size() != ncols)
      throw InputError(ctx(what, where) + ": ragged rows");
  }
  RatMatrix m(rows.size(), ncols);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < ncols; ++j)
      m.at(i, j) = as_rational(rows[i][j], what,
                               where + "[" + std::to_string(i) + "][" +
                                   std::to_string(j) + "]");
  return m;
}

RatVector vector_from_json(const json& v, const char* what,
                           const std::string& where) {
  const json& arr = as_array(v, what, where);
  RatVector r;
  for (std::size_t i = 0; i < arr.size(); ++i)
    r.push_back(as_rational(arr[i], what, where + "[" + std::to_string(i) + "]"));
  return r;
}

json vector_to_json(const RatVector& v) {
  json arr = json::array();
  for (const auto& e : v) arr.push_back(jrat(e));
  return arr;
}

std::string dump(const json& j) { return j.dump() + "\n"; }

const char* bool_op_name(BoolOp op) {
  switch (op) {
    case BoolOp::And: return "and";
    case BoolOp::Or: return "or";
    case BoolOp::Not: return "not";
    case BoolOp::Const0: return "const0";
    case BoolOp::Const1: return "const1";
  }
  throw InputError("unrepresentable boolean operation");
}

BoolOp bool_op_from(const std::string& s, const char* what,
                    const std::string& where) {
  if (s == "and") return BoolOp::And;
  if (s == "or") return BoolOp::Or;
  if (s == "not") return BoolOp::Not;
  if (s == "const0") return BoolOp::Const0;
  if (s == "const1") return BoolOp::Const1;
  throw InputError(ctx(what, where) + ": unknown operation \"" + s + "\"");
}

json bool_circuit_to_json(const BoolCircuit& c) {
  json gates = json::array();
  for (const BoolGate& g : c.gates) {
    json jg;
    jg["op"] = bool_op_name(g.op);
    if (g.op == BoolOp::And || g.op == BoolOp::Or) {
      jg["a"] = g.a;
      jg["b"] = g.b;
    } else if (g.op == BoolOp::Not) {
      jg["a"] = g.a;
    }
    gates.push_back(std::move(jg));
  }
  json out = json::array();
  for (std::size_t o : c.outputs) out.push_back(o);
  json j;
  j["inputs"] = c.num_inputs;
  j["gates"] = std::move(gates);
  j["outputs"] = std::move(out);
  return j;
}

BoolCircuit bool_circuit_from_json(const json& v, const char* what,
                                   const std::string& where) {
  const json& o = as_object(v, what, where);
  check_keys(o, what, where, {"inputs", "gates", "outputs"});
  BoolCircuit c;
  c.num_inputs = as_u64(o["inputs"], what, where + ".inputs");
  const json& gates = as_array(o["gates"], what, where + ".gates");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string at = where + ".gates[" + std::to_string(i) + "]";
    const json& jg = as_object(gates[i], what, at);
    if (!jg.contains("op"))
      throw InputError(ctx(what, at) + ": missing field \"op\"");
    BoolGate g;
    g.op = bool_op_from(as_string(jg["op"], what, at + ".op"), what, at);
    if (g.op == BoolOp::And || g.op == BoolOp::Or) {
      check_keys(jg, what, at, {"op", "a", "b"});
      g.a = as_u64(jg["a"], what, at + ".a");
      g.b = as_u64(jg["b"], what, at + ".b");
    } else if (g.op == BoolOp::Not) {
      check_keys(jg, what, at, {"op", "a"});
      g.a = as_u64(jg["a"], what, at + ".a");
    } else {
      check_keys(jg, what, at, {"op"});
    }
    c.gates.push_back(g);
  }
  const json& outs = as_array(o["outputs"], what, where + ".outputs");
  for (std::size_t i = 0; i < outs.size(); ++i)
    c.outputs.push_back(
        as_u64(outs[i], what, where + ".outputs[" + std::to_string(i) + "]"));
  c.validate();
  return c;
}

std::vector<NodeId> id_vector_from_json(const json& v, const char* what,
                                        const std::string& where) {
  const json& arr = as_array(v, what, where);
  std::vector<NodeId> r;
  for (std::size_t i = 0; i < arr.size(); ++i)
    r.push_back(as_u64(arr[i], what, where + "[" + std::to_string(i) + "]"));
  return r;
}

json id_vector_to_json(const std::vector<NodeId>& v) {
  json arr = json::array();
  for (NodeId id : v) arr.push_back(jid(id));
  return arr;
}

std::vector<std::vector<NodeId>> id_table_from_json(const json& v,
                                                    const char* what,
                                                    const std::string& where) {
  const json& arr = as_array(v, what, where);
  std::vector<std::vector<NodeId>> r;
  for (std::size_t i = 0; i < arr.size(); ++i)
    r.push_back(
        id_vector_from_json(arr[i], what, where + "[" + std::to_string(i) + "]"));
  return r;
}

json id_table_to_json(const std::vector<std::vector<NodeId>>& t) {
  json arr = json::array();
  for (const auto& row : t) arr.push_back(id_vector_to_json(row));
  return arr;
}

GridPoint grid_point_from_json(const json& v, const char* what,
                               const std::string& where) {
  const json& arr = as_array(v, what, where);
  GridPoint p;
  for (std::size_t i = 0; i < arr.size(); ++i)
    p.push_back(as_u32(arr[i], what, where + "[" + std::to_string(i) + "]"));
  return p;
}

json grid_point_to_json(const GridPoint& p) {
  json arr = json::array();
  for (std::uint32_t c : p) arr.push_back(c);
  return arr;
}

char phase_letter(BuildPhase p) {
  switch (p) {
    case BuildPhase::Sampling: return 'S';
    case BuildPhase::Coloring: return 'C';
    case BuildPhase::Summation: return 'M';
    case BuildPhase::Loop: return 'L';
  }
  throw InputError("unrepresentable construction phase");
}

BuildPhase phase_from_letter(char c, const char* what, const std::string& where) {
  switch (c) {
    case 'S': return BuildPhase::Sampling;
    case 'C': return BuildPhase::Coloring;
    case 'M': return BuildPhase::Summation;
    case 'L': return BuildPhase::Loop;
  }
  throw InputError(ctx(what, where) + ": unknown phase letter '" +
                   std::string(1, c) + "'");
}

}  // namespace

std::string serialize_game(const BimatrixGame& g) {
  json j;
  j["m"] = g.m;
  j["n"] = g.n;
  j["A"] = matrix_to_json(g.A);
  j["B"] = matrix_to_json(g.B);
  j["tag"] = to_string(g.tag);
  return dump(j);
}

BimatrixGame parse_game(const std::string& text) {
  const char* what = "game";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"m", "n", "A", "B", "tag"});
  std::uint64_t m = as_u64(j["m"], what, "m");
  std::uint64_t n = as_u64(j["n"], what, "n");
  RatMatrix A = matrix_from_json(j["A"], what, "A");
  RatMatrix B = matrix_from_json(j["B"], what, "B");
  NormTag tag;
  try {
    tag = norm_tag_from_string(as_string(j["tag"], what, "tag"));
  } catch (const InputError& e) {
    throw InputError(ctx(what, "tag") + ": " + e.what());
  }
  if (A.rows() != m || (m != 0 && A.cols() != n))
    throw InputError("game: A is " + std::to_string(A.rows()) + "x" +
                     std::to_string(A.cols()) + " but the header says " +
                     std::to_string(m) + "x" + std::to_string(n));
  BimatrixGame g = BimatrixGame::make(std::move(A), std::move(B), tag);
  return g;
}

std::string serialize_profile(const MixedProfile& p) {
  json j;
  j["x"] = vector_to_json(p.x);
  j["y"] = vector_to_json(p.y);
  return dump(j);
}

MixedProfile parse_profile(const std::string& text) {
  const char* what = "profile";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"x", "y"});
  MixedProfile p;
  p.x = vector_from_json(j["x"], what, "x");
  p.y = vector_from_json(j["y"], what, "y");
  return p;
}

std::string serialize_circuit(const GeneralizedCircuit& c) {
  json gates = json::array();
  for (const Gate& g : c.gates) {
    json jg;
    jg["type"] = to_string(g.type);
    jg["v1"] = g.v1 ? jid(*g.v1) : json(nullptr);
    jg["v2"] = g.v2 ? jid(*g.v2) : json(nullptr);
    jg["v"] = jid(g.v);
    jg["alpha"] = g.alpha ? jrat(*g.alpha) : json(nullptr);
    gates.push_back(std::move(jg));
  }
  json j;
  j["K"] = c.K.fits_ulong_p() ? json(c.K.get_ui()) : json(c.K.get_str());
  j["gates"] = std::move(gates);
  return dump(j);
}

GeneralizedCircuit parse_circuit(const std::string& text) {
  const char* what = "circuit";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"K", "gates"});
  GeneralizedCircuit c;
  c.K = as_mpz(j["K"], what, "K");
  const json& gates = as_array(j["gates"], what, "gates");
  for (std::size_t i = 0; i < gates.size(); ++i) {
    const std::string at = "gates[" + std::to_string(i) + "]";
    const json& jg = as_object(gates[i], what, at);
    check_keys(jg, what, at, {"type", "v1", "v2", "v", "alpha"});
    Gate g;
    try {
      g.type = gate_type_from_string(as_string(jg["type"], what, at + ".type"));
    } catch (const InputError& e) {
      throw InputError(ctx(what, at + ".type") + ": " + e.what());
    }
    if (!jg["v1"].is_null()) g.v1 = as_u64(jg["v1"], what, at + ".v1");
    if (!jg["v2"].is_null()) g.v2 = as_u64(jg["v2"], what, at + ".v2");
    g.v = as_u64(jg["v"], what, at + ".v");
    if (!jg["alpha"].is_null())
      g.alpha = as_rational(jg["alpha"], what, at + ".alpha");
    c.gates.push_back(std::move(g));
  }
  c.validate();
  return c;
}

std::string serialize_assignment(const Assignment& x) {
  json values = json::object();
  for (const auto& [id, val] : x.entries())
    values[std::to_string(id)] = jrat(val);
  json j;
  j["values"] = std::move(values);
  return dump(j);
}

Assignment parse_assignment(const std::string& text) {
  const char* what = "assignment";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"values"});
  const json& values = as_object(j["values"], what, "values");
  Assignment x;
  for (auto it = values.begin(); it != values.end(); ++it) {
    NodeId id = as_u64(json(it.key()), what, "values key \"" + it.key() + "\"");
    x.set(id, as_rational(it.value(), what, "values[\"" + it.key() + "\"]"));
  }
  return x;
}

std::string serialize_bool_circuit(const BoolCircuit& c) {
  return dump(bool_circuit_to_json(c));
}

BoolCircuit parse_bool_circuit(const std::string& text) {
  const char* what = "boolean circuit";
  json j = jparse(text, what);
  return bool_circuit_from_json(j, what, "document");
}

std::string serialize_triple(const ColoringTriple& t) {
  json oracle;
  if (auto* co = dynamic_cast<const CircuitOracle*>(t.oracle.get())) {
    oracle["kind"] = "circuit";
    oracle["circuit"] = bool_circuit_to_json(co->circuit());
  } else if (auto* to = dynamic_cast<const TableOracle*>(t.oracle.get())) {
    oracle["kind"] = "table";
    json colors = json::array();
    for (Color c : to->colors()) colors.push_back(c);
    oracle["colors"] = std::move(colors);
  } else {
    throw InputError(
        "triple: only circuit- and table-backed colorings have a file form; "
        "store transformed colorings as a source triple plus a chain");
  }
  json j;
  j["d"] = t.grid.d();
  json r = json::array();
  for (std::uint32_t side : t.grid.r) r.push_back(side);
  j["r"] = std::move(r);
  j["oracle"] = std::move(oracle);
  return dump(j);
}

ColoringTriple parse_triple(const std::string& text) {
  const char* what = "triple";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"d", "r", "oracle"});
  std::uint64_t d = as_u64(j["d"], what, "d");
  ColoringTriple t;
  const json& r = as_array(j["r"], what, "r");
  for (std::size_t i = 0; i < r.size(); ++i)
    t.grid.r.push_back(as_u32(r[i], what, "r[" + std::to_string(i) + "]"));
  if (t.grid.d() != d)
    throw InputError("triple: d = " + std::to_string(d) + " but r lists " +
                     std::to_string(t.grid.d()) + " sides");
  t.grid.validate();
  const json& oracle = as_object(j["oracle"], what, "oracle");
  if (!oracle.contains("kind"))
    throw InputError("triple: oracle: missing field \"kind\"");
  const std::string& kind = as_string(oracle["kind"], what, "oracle.kind");
  if (kind == "circuit") {
    check_keys(oracle, what, "oracle", {"kind", "circuit"});
    BoolCircuit c =
        bool_circuit_from_json(oracle["circuit"], what, "oracle.circuit");
    if (c.num_inputs != t.grid.total_bits())
      throw InputError("triple: oracle circuit reads " +
                       std::to_string(c.num_inputs) + " bits but the grid has " +
                       std::to_string(t.grid.total_bits()));
    t.oracle = std::make_shared<CircuitOracle>(std::move(c));
  } else if (kind == "table") {
    check_keys(oracle, what, "oracle", {"kind", "colors"});
    const json& colors = as_array(oracle["colors"], what, "oracle.colors");
    std::vector<Color> table;
    for (std::size_t i = 0; i < colors.size(); ++i)
      table.push_back(
          as_u32(colors[i], what, "oracle.colors[" + std::to_string(i) + "]"));
    t.oracle = std::make_shared<TableOracle>(t.grid, std::move(table));
  } else {
    throw InputError("triple: oracle.kind must be \"circuit\" or \"table\"");
  }
  return t;
}

std::string serialize_chain(const std::vector<TransformRecord>& chain) {
  json arr = json::array();
  for (const TransformRecord& rec : chain) {
    json jr;
    switch (rec.kind) {
      case TransformKind::PadDim:
        jr["kind"] = "pad";
        jr["t"] = rec.t;
        jr["u"] = rec.u;
        break;
      case TransformKind::AddDim:
        jr["kind"] = "add";
        jr["u"] = rec.u;
        break;
      case TransformKind::Snake:
        jr["kind"] = "snake";
        jr["t"] = rec.t;
        jr["a"] = rec.a;
        jr["b"] = rec.b;
        break;
    }
    json src = json::array();
    for (std::uint32_t side : rec.source_r) src.push_back(side);
    jr["source_r"] = std::move(src);
    arr.push_back(std::move(jr));
  }
  return dump(arr);
}

std::vector<TransformRecord> parse_chain(const std::string& text) {
  const char* what = "chain";
  json j = jparse(text, what);
  as_array(j, what, "document");
  std::vector<TransformRecord> chain;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string at = "[" + std::to_string(i) + "]";
    const json& jr = as_object(j[i], what, at);
    if (!jr.contains("kind"))
      throw InputError(ctx(what, at) + ": missing field \"kind\"");
    const std::string& kind = as_string(jr["kind"], what, at + ".kind");
    TransformRecord rec;
    if (kind == "pad") {
      check_keys(jr, what, at, {"kind", "t", "u", "source_r"});
      rec.kind = TransformKind::PadDim;
      rec.t = as_u64(jr["t"], what, at + ".t");
      rec.u = as_u32(jr["u"], what, at + ".u");
    } else if (kind == "add") {
      check_keys(jr, what, at, {"kind", "u", "source_r"});
      rec.kind = TransformKind::AddDim;
      rec.u = as_u32(jr["u"], what, at + ".u");
    } else if (kind == "snake") {
      check_keys(jr, what, at, {"kind", "t", "a", "b", "source_r"});
      rec.kind = TransformKind::Snake;
      rec.t = as_u64(jr["t"], what, at + ".t");
      rec.a = as_u32(jr["a"], what, at + ".a");
      rec.b = as_u32(jr["b"], what, at + ".b");
    } else {
      throw InputError(ctx(what, at) +
                       ": kind must be \"pad\", \"add\" or \"snake\"");
    }
    const json& src = as_array(jr["source_r"], what, at + ".source_r");
    for (std::size_t k = 0; k < src.size(); ++k)
      rec.source_r.push_back(
          as_u32(src[k], what, at + ".source_r[" + std::to_string(k) + "]"));
    rec.validate();
    chain.push_back(std::move(rec));
  }
  return chain;
}

std::string serialize_simplex(const PanchromaticSimplex& s) {
  json points = json::array();
  for (const GridPoint& p : s.points) points.push_back(grid_point_to_json(p));
  json colors = json::array();
  for (Color c : s.colors) colors.push_back(c);
  json j;
  j["base"] = grid_point_to_json(s.base);
  j["points"] = std::move(points);
  j["colors"] = std::move(colors);
  return dump(j);
}

PanchromaticSimplex parse_simplex(const std::string& text) {
  const char* what = "simplex";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"base", "points", "colors"});
  PanchromaticSimplex s;
  s.base = grid_point_from_json(j["base"], what, "base");
  const json& points = as_array(j["points"], what, "points");
  for (std::size_t i = 0; i < points.size(); ++i)
    s.points.push_back(
        grid_point_from_json(points[i], what, "points[" + std::to_string(i) + "]"));
  const json& colors = as_array(j["colors"], what, "colors");
  for (std::size_t i = 0; i < colors.size(); ++i)
    s.colors.push_back(
        as_u32(colors[i], what, "colors[" + std::to_string(i) + "]"));
  if (s.points.size() != s.colors.size())
    throw InputError("simplex: " + std::to_string(s.points.size()) +
                     " points but " + std::to_string(s.colors.size()) +
                     " colors");
  for (const GridPoint& p : s.points)
    if (p.size() != s.base.size())
      throw InputError("simplex: points and base disagree on dimension");
  return s;
}

std::string serialize_instance(const BrouwerInstance& inst) {
  json j;
  j["n"] = inst.n;
  j["circuit"] = bool_circuit_to_json(inst.circuit);
  return dump(j);
}

BrouwerInstance parse_instance(const std::string& text,
                               std::uint64_t validate_budget) {
  const char* what = "instance";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"n", "circuit"});
  std::uint32_t n = as_u32(j["n"], what, "n");
  BoolCircuit c = bool_circuit_from_json(j["circuit"], what, "circuit");
  return BrouwerInstance::make(n, std::move(c), validate_budget);
}

std::string serialize_layout(const ReductionLayout& l) {
  json j;
  j["n"] = l.n;
  j["m"] = l.params.m;
  j["relaxed"] = l.params.relaxed;
  j["sample"] = id_table_to_json(l.sample);
  j["vote_up"] = id_table_to_json(l.vote_up);
  j["vote_down"] = id_table_to_json(l.vote_down);
  j["sum_up"] = id_vector_to_json(l.sum_up);
  j["sum_down"] = id_vector_to_json(l.sum_down);
  j["loop_add"] = id_vector_to_json(l.loop_add);
  j["loop_sub"] = id_vector_to_json(l.loop_sub);
  j["nodes_used"] = jid(l.nodes_used);
  std::string phases;
  phases.reserve(l.gate_phase.size());
  for (BuildPhase p : l.gate_phase) phases.push_back(phase_letter(p));
  j["gate_phase"] = std::move(phases);
  return dump(j);
}

ReductionLayout parse_layout(const std::string& text) {
  const char* what = "layout";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document",
             {"n", "m", "relaxed", "sample", "vote_up", "vote_down", "sum_up",
              "sum_down", "loop_add", "loop_sub", "nodes_used", "gate_phase"});
  ReductionLayout l;
  l.n = as_u32(j["n"], what, "n");
  l.params = ReductionParams::from_m(as_u32(j["m"], what, "m"),
                                     as_bool(j["relaxed"], what, "relaxed"));
  l.sample = id_table_from_json(j["sample"], what, "sample");
  l.vote_up = id_table_from_json(j["vote_up"], what, "vote_up");
  l.vote_down = id_table_from_json(j["vote_down"], what, "vote_down");
  l.sum_up = id_vector_from_json(j["sum_up"], what, "sum_up");
  l.sum_down = id_vector_from_json(j["sum_down"], what, "sum_down");
  l.loop_add = id_vector_from_json(j["loop_add"], what, "loop_add");
  l.loop_sub = id_vector_from_json(j["loop_sub"], what, "loop_sub");
  l.nodes_used = as_u64(j["nodes_used"], what, "nodes_used");
  const std::string& phases = as_string(j["gate_phase"], what, "gate_phase");
  for (std::size_t i = 0; i < phases.size(); ++i)
    l.gate_phase.push_back(phase_from_letter(
        phases[i], what, "gate_phase[" + std::to_string(i) + "]"));

  if (l.n == 0) throw InputError("layout: dimension must be positive");
  const std::size_t samples = std::size_t(l.n) * l.n * l.n;
  auto check_table = [&](const std::vector<std::vector<NodeId>>& t,
                         const char* name) {
    if (t.size() != samples)
      throw InputError(std::string("layout: ") + name + " must list " +
                       std::to_string(samples) + " samples");
    for (const auto& row : t)
      if (row.size() != l.n)
        throw InputError(std::string("layout: ") + name + " rows must have " +
                         std::to_string(l.n) + " coordinates");
  };
  check_table(l.sample, "sample");
  check_table(l.vote_up, "vote_up");
  check_table(l.vote_down, "vote_down");
  auto check_vec = [&](const std::vector<NodeId>& v, const char* name) {
    if (v.size() != l.n)
      throw InputError(std::string("layout: ") + name + " must have " +
                       std::to_string(l.n) + " entries");
  };
  check_vec(l.sum_up, "sum_up");
  check_vec(l.sum_down, "sum_down");
  check_vec(l.loop_add, "loop_add");
  check_vec(l.loop_sub, "loop_sub");
  return l;
}

std::string serialize_meta(const GameMeta& m) {
  json j;
  j["K"] = jid(m.K);
  j["normalized"] = m.normalized;
  j["eps_game"] = jrat(m.eps_game);
  return dump(j);
}

GameMeta parse_meta(const std::string& text) {
  const char* what = "game meta";
  json j = jparse(text, what);
  as_object(j, what, "document");
  check_keys(j, what, "document", {"K", "normalized", "eps_game"});
  GameMeta m;
  m.K = as_u64(j["K"], what, "K");
  m.normalized = as_bool(j["normalized"], what, "normalized");
  m.eps_game = as_rational(j["eps_game"], what, "eps_game");
  if (m.K == 0) throw InputError("game meta: K must be positive");
  return m;
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw InputError("cannot read " + path);
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open " + path + " for writing");
  out << content;
  out.flush();
  if (!out) throw InputError("cannot write " + path);
}

}  // namespace nashtk
