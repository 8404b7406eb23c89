// Command-line front end: one action per command, composition through the
// textual record files. Exit codes: 0 success, 1 verification failure,
// 2 input error, 3 budget exhausted.

#include <chrono>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "nashtk/bimatrix.hpp"
#include "nashtk/brouwer.hpp"
#include "nashtk/circuitize.hpp"
#include "nashtk/embed.hpp"
#include "nashtk/errors.hpp"
#include "nashtk/gadgets.hpp"
#include "nashtk/gencircuit.hpp"
#include "nashtk/io.hpp"
#include "nashtk/solve.hpp"

namespace {

using nlohmann::ordered_json;
using namespace nashtk;

bool g_trace = false;

// Run one named stage, optionally reporting its wall time to stderr.
template <typename Fn>
auto staged(const char* name, Fn&& fn) -> decltype(fn()) {
  const auto t0 = std::chrono::steady_clock::now();
  struct Report {
    const char* name;
    std::chrono::steady_clock::time_point t0;
    ~Report() {
      if (!g_trace) return;
      const auto dt = std::chrono::duration_cast<std::chrono::milliseconds>(
          std::chrono::steady_clock::now() - t0);
      std::cerr << "[trace] " << name << ": " << dt.count() << " ms\n";
    }
  } report{name, t0};
  return fn();
}

Rational rat_arg(const std::string& s, const char* what) {
  try {
    return Rational::from_string(s);
  } catch (const InputError& e) {
    throw InputError(std::string(what) + ": " + e.what());
  }
}

void emit(const std::string& text) { std::cout << text; }

ordered_json grid_point_json(const GridPoint& p) {
  ordered_json a = ordered_json::array();
  for (std::uint32_t c : p) a.push_back(c);
  return a;
}

ordered_json simplex_points_json(const std::vector<GridPoint>& pts) {
  ordered_json a = ordered_json::array();
  for (const GridPoint& p : pts) a.push_back(grid_point_json(p));
  return a;
}

// The "simplex" field of a fixed-point decode report, reused by `verify
// panchromatic` as its input.
std::vector<GridPoint> points_from_report(const std::string& text) {
  ordered_json j = ordered_json::parse(text, nullptr, false);
  if (j.is_discarded() || !j.is_object() || !j.contains("simplex") ||
      !j["simplex"].is_array())
    throw InputError("expected a decode report with a \"simplex\" field");
  std::vector<GridPoint> pts;
  for (const auto& jp : j["simplex"]) {
    if (!jp.is_array()) throw InputError("simplex entries must be points");
    GridPoint p;
    for (const auto& c : jp) {
      if (!c.is_number_unsigned() || c.get<std::uint64_t>() > UINT32_MAX)
        throw InputError("simplex coordinates must be small nonnegative integers");
      p.push_back(c.get<std::uint32_t>());
    }
    pts.push_back(std::move(p));
  }
  return pts;
}

std::uint64_t require_seed(const std::optional<std::uint64_t>& seed) {
  if (!seed) throw InputError("randomness requires an explicit --seed");
  return *seed;
}

MixedProfile run_solver(const BimatrixGame& g, const std::string& method,
                        std::size_t label,
                        std::optional<std::uint64_t> max_pivots) {
  if (method == "support") return support_enumeration(g);
  if (method == "lh") return lemke_howson(g, label, max_pivots);
  throw InputError("unknown method \"" + method + "\" (use lh or support)");
}

// ---------------------------------------------------------------------------
// gen-brouwer

struct GenBrouwerArgs {
  std::string kind = "triple";
  std::uint32_t d = 2;
  std::vector<std::uint32_t> r;
  std::uint32_t n = 1;
  std::optional<std::uint64_t> seed;
  std::uint64_t max_points = 1u << 24;
};

void run_gen_brouwer(const GenBrouwerArgs& a) {
  const std::uint64_t seed = require_seed(a.seed);
  if (a.kind == "triple") {
    std::vector<std::uint32_t> r = a.r.empty()
                                       ? std::vector<std::uint32_t>(a.d, 8)
                                       : a.r;
    ColoringTriple t = staged("generate", [&] {
      return random_valid_coloring(a.d, r, seed, a.max_points);
    });
    emit(serialize_triple(t));
    return;
  }
  if (a.kind == "instance") {
    std::vector<std::uint32_t> sides(a.n, 8);
    ColoringTriple t = staged("generate", [&] {
      return random_valid_coloring(a.n, sides, seed, a.max_points);
    });
    BoolCircuit c =
        staged("synthesize", [&] { return table_to_circuit(t, a.max_points); });
    BrouwerInstance inst = staged(
        "validate", [&] { return BrouwerInstance::make(a.n, std::move(c)); });
    emit(serialize_instance(inst));
    return;
  }
  throw InputError("gen-brouwer kind must be \"triple\" or \"instance\"");
}

// ---------------------------------------------------------------------------
// validate

struct ValidateArgs {
  std::string kind;
  std::string file;
  std::uint64_t max_points = 1u << 24;
};

void run_validate(const ValidateArgs& a) {
  const std::string text = read_text_file(a.file);
  ordered_json report;
  report["kind"] = a.kind;
  report["file"] = a.file;
  staged("validate", [&] {
    if (a.kind == "game") {
      BimatrixGame g = parse_game(text);
      report["m"] = g.m;
      report["n"] = g.n;
    } else if (a.kind == "profile") {
      MixedProfile p = parse_profile(text);
      report["rows"] = p.x.size();
      report["cols"] = p.y.size();
    } else if (a.kind == "circuit") {
      GeneralizedCircuit c = parse_circuit(text);
      report["gates"] = c.gates.size();
      report["wired_nodes"] = c.wired_nodes().size();
    } else if (a.kind == "assignment") {
      report["values"] = parse_assignment(text).entries().size();
    } else if (a.kind == "bool-circuit") {
      BoolCircuit c = parse_bool_circuit(text);
      report["gates"] = c.gates.size();
      report["outputs"] = c.outputs.size();
    } else if (a.kind == "triple") {
      ColoringTriple t = parse_triple(text);
      BoundaryReport b = validate_boundary(t, a.max_points);
      report["boundary_ok"] = b.ok;
      report["rule_violations"] = b.rule_violations.size();
      report["continuity_violations"] = b.continuity_violations.size();
      if (!b.ok)
        throw VerifyError("boundary rule violated at " +
                          std::to_string(b.rule_violations.size() +
                                         b.continuity_violations.size()) +
                          " points");
    } else if (a.kind == "instance") {
      BrouwerInstance inst = parse_instance(text);
      report["n"] = inst.n;
      report["gates"] = inst.circuit.gates.size();
    } else if (a.kind == "chain") {
      report["records"] = parse_chain(text).size();
    } else if (a.kind == "simplex") {
      report["points"] = parse_simplex(text).points.size();
    } else if (a.kind == "layout") {
      ReductionLayout l = parse_layout(text);
      report["n"] = l.n;
      report["m"] = l.params.m;
    } else if (a.kind == "meta") {
      report["K"] = parse_meta(text).K;
    } else {
      throw InputError("unknown artifact kind \"" + a.kind + "\"");
    }
  });
  report["ok"] = true;
  emit(report.dump() + "\n");
}

// ---------------------------------------------------------------------------
// find-fixed-point

void run_find_fixed_point(const std::string& file, const std::string& chain,
                          std::uint64_t max_points) {
  ColoringTriple t = parse_triple(read_text_file(file));
  if (!chain.empty())
    t = apply_chain(t, parse_chain(read_text_file(chain)));
  PanchromaticSimplex s =
      staged("scan", [&] { return find_panchromatic(t, max_points); });
  emit(serialize_simplex(s));
}

// ---------------------------------------------------------------------------
// embed

std::function<std::uint32_t(std::uint32_t)> growth_function(
    const std::string& name) {
  if (name.rfind("const", 0) == 0) {
    const std::string digits = name.substr(5);
    if (digits.empty()) throw InputError("--f: const needs a value, e.g. const3");
    std::uint32_t l = 0;
    for (char c : digits) {
      if (c < '0' || c > '9') throw InputError("--f: bad value \"" + name + "\"");
      l = l * 10 + static_cast<std::uint32_t>(c - '0');
    }
    return [l](std::uint32_t) { return l; };
  }
  throw InputError("unknown growth function \"" + name +
                   "\" (supported: const<l>, e.g. const3)");
}

void run_embed(const std::string& file, const std::string& fname,
               std::uint32_t n) {
  ColoringTriple t = parse_triple(read_text_file(file));
  EmbedResult r = staged(
      "reduce", [&] { return reduce_2d_to_f(t, growth_function(fname), n); });
  for (const std::string& w : r.warnings) std::cerr << "warning: " << w << "\n";
  std::cerr << "target sides:";
  for (std::uint32_t side : r.triple.grid.r) std::cerr << " " << side;
  std::cerr << "\n";
  emit(serialize_chain(r.chain));
}

void run_backmap(const std::string& source_file, const std::string& chain_file,
                 const std::string& simplex_file) {
  ColoringTriple source = parse_triple(read_text_file(source_file));
  std::vector<TransformRecord> chain = parse_chain(read_text_file(chain_file));
  PanchromaticSimplex s = parse_simplex(read_text_file(simplex_file));
  PanchromaticSimplex back =
      staged("backmap", [&] { return back_map_chain(source, chain, s); });
  emit(serialize_simplex(back));
}

// ---------------------------------------------------------------------------
// circuitize / decode-fixedpoint

struct CircuitizeArgs {
  std::string file;
  std::optional<std::uint32_t> m;
  bool relaxed = false;
  std::string out_layout;
};

void run_circuitize(const CircuitizeArgs& a) {
  BrouwerInstance inst = parse_instance(read_text_file(a.file));
  ReductionParams params =
      staged("parameters", [&] { return choose_params(inst, a.m); });
  if (params.relaxed && !a.relaxed)
    throw InputError(
        "m = " + std::to_string(params.m) +
        " differs from the automatic choice; pass --relaxed to accept "
        "unverified construction parameters");
  BuildResult built =
      staged("build", [&] { return build_circuit(inst, params); });
  write_text_file(a.out_layout, serialize_layout(built.layout));
  emit(serialize_circuit(built.circuit));
}

void run_decode_fixedpoint(const std::string& layout_file,
                           const std::string& assignment_file) {
  ReductionLayout layout = parse_layout(read_text_file(layout_file));
  Assignment x = parse_assignment(read_text_file(assignment_file));
  DecodeRecord rec = staged("decode", [&] { return decode_solution(layout, x); });
  ordered_json j;
  ordered_json pts = ordered_json::array();
  for (const auto& point : rec.points) {
    ordered_json p = ordered_json::array();
    for (const Rational& c : point) p.push_back(c.to_string());
    pts.push_back(std::move(p));
  }
  j["points"] = std::move(pts);
  j["well"] = rec.well;
  j["poor"] = rec.poor;
  j["simplex"] = simplex_points_json(rec.simplex);
  ordered_json res = ordered_json::array();
  for (const Rational& c : rec.residual) res.push_back(c.to_string());
  j["residual"] = std::move(res);
  emit(j.dump() + "\n");
}

// ---------------------------------------------------------------------------
// gadgetize / decode / solve

struct GadgetizeArgs {
  std::string file;
  bool normalize = false;
  std::string out_meta;
};

void run_gadgetize(const GadgetizeArgs& a) {
  GeneralizedCircuit c = parse_circuit(read_text_file(a.file));
  AssembledGame g =
      staged("assemble", [&] { return circuit_to_game(c, a.normalize); });
  if (!a.out_meta.empty()) {
    GameMeta meta;
    meta.K = g.emb.K;
    meta.normalized = a.normalize;
    meta.eps_game = g.eps_game;
    write_text_file(a.out_meta, serialize_meta(meta));
  }
  emit(serialize_game(g.game));
}

void run_decode(const std::string& meta_file, const std::string& profile_file) {
  GameMeta meta = parse_meta(read_text_file(meta_file));
  MixedProfile p = parse_profile(read_text_file(profile_file));
  NodeEmbedding emb;
  emb.K = meta.K;
  DecodedProfile d = staged("decode", [&] { return decode_profile(p, emb); });
  emit(serialize_assignment(d.row_value));
}

struct SolveArgs {
  std::string file;
  std::string method = "support";
  std::size_t label = 1;
  std::optional<std::uint64_t> max_pivots;
};

void run_solve(const SolveArgs& a) {
  BimatrixGame g = parse_game(read_text_file(a.file));
  MixedProfile p = staged(
      "solve", [&] { return run_solver(g, a.method, a.label, a.max_pivots); });
  emit(serialize_profile(p));
}

// ---------------------------------------------------------------------------
// verify

void verify_equilibrium(const std::string& game_file,
                        const std::string& profile_file, const Rational& eps) {
  BimatrixGame g = parse_game(read_text_file(game_file));
  MixedProfile p = parse_profile(read_text_file(profile_file));
  check_profile(g, p);
  DefectReport d = staged("defects", [&] { return equilibrium_defects(g, p); });
  ordered_json j;
  j["row_additive"] = d.row_additive.to_string();
  j["col_additive"] = d.col_additive.to_string();
  j["row_relative"] = d.row_relative.to_string();
  j["col_relative"] = d.col_relative.to_string();
  const bool ok = d.additive() <= eps;
  j["eps"] = eps.to_string();
  j["ok"] = ok;
  emit(j.dump() + "\n");
  if (!ok)
    throw VerifyError("additive defect " + d.additive().to_string() +
                      " exceeds " + eps.to_string());
}

void verify_well_supported(const std::string& game_file,
                           const std::string& profile_file,
                           const Rational& eps) {
  BimatrixGame g = parse_game(read_text_file(game_file));
  MixedProfile p = parse_profile(read_text_file(profile_file));
  check_profile(g, p);
  const bool ok =
      staged("check", [&] { return is_well_supported(g, p, eps); });
  ordered_json j;
  j["eps"] = eps.to_string();
  j["ok"] = ok;
  emit(j.dump() + "\n");
  if (!ok) throw VerifyError("profile is not " + eps.to_string() +
                             "-well-supported");
}

void verify_solution(const std::string& circuit_file,
                     const std::string& assignment_file, const Rational& eps) {
  GeneralizedCircuit c = parse_circuit(read_text_file(circuit_file));
  Assignment x = parse_assignment(read_text_file(assignment_file));
  SolutionReport rep = staged("check", [&] { return check_solution(c, x, eps); });
  ordered_json j;
  j["eps"] = eps.to_string();
  j["ok"] = rep.ok;
  j["global_violations"] = rep.global_violations.size();
  j["gate_violations"] = rep.gate_violations;
  emit(j.dump() + "\n");
  if (!rep.ok)
    throw VerifyError("assignment violates " +
                      std::to_string(rep.gate_violations.size()) +
                      " gate constraints and " +
                      std::to_string(rep.global_violations.size()) +
                      " node bounds");
}

void verify_simplex(const std::string& triple_file,
                    const std::string& simplex_file) {
  ColoringTriple t = parse_triple(read_text_file(triple_file));
  PanchromaticSimplex s = parse_simplex(read_text_file(simplex_file));
  const bool ok =
      staged("check", [&] { return is_panchromatic(t, s.points); });
  ordered_json j;
  j["ok"] = ok;
  emit(j.dump() + "\n");
  if (!ok) throw VerifyError("not a panchromatic simplex of the triple");
}

void verify_reduction_cmd(const std::string& circuit_file,
                          const std::string& profile_file,
                          const std::optional<std::string>& eps_text) {
  GeneralizedCircuit c = parse_circuit(read_text_file(circuit_file));
  MixedProfile p = parse_profile(read_text_file(profile_file));
  Rational eps = eps_text ? rat_arg(*eps_text, "--eps")
                          : circuit_to_game(c, true).eps_game;
  ReductionReport rep =
      staged("check", [&] { return verify_reduction(c, p, eps); });
  ordered_json j;
  j["eps"] = eps.to_string();
  j["ok"] = rep.ok;
  j["well_supported_ok"] = rep.well_supported_ok;
  j["mass_bounds_ok"] = rep.mass_bounds_ok;
  j["circuit_ok"] = rep.circuit_check.ok;
  j["failures"] = rep.failures;
  emit(j.dump() + "\n");
  if (!rep.ok) {
    std::string detail = "reduction check failed";
    for (const std::string& f : rep.failures) detail += "; " + f;
    throw VerifyError(detail);
  }
}

void verify_panchromatic_cmd(const std::string& instance_file,
                             const std::string& report_file) {
  BrouwerInstance inst = parse_instance(read_text_file(instance_file));
  std::vector<GridPoint> pts = points_from_report(read_text_file(report_file));
  SimplexVerdict v =
      staged("check", [&] { return verify_panchromatic(inst, pts); });
  ordered_json j;
  j["ok"] = v.ok;
  j["accommodated"] = v.accommodated;
  j["size_ok"] = v.size_ok;
  j["colors"] = v.colors;
  j["missing"] = v.missing;
  j["detail"] = v.detail;
  emit(j.dump() + "\n");
  if (!v.ok) throw VerifyError(v.detail);
}

// ---------------------------------------------------------------------------
// perturb

struct PerturbArgs {
  std::string file;
  std::optional<std::string> sigma;
  std::optional<std::string> approx_eps;
  std::optional<std::uint64_t> seed;
  std::string method = "support";
  std::size_t label = 1;
  std::optional<std::uint64_t> max_pivots;
};

void run_perturb(const PerturbArgs& a) {
  BimatrixGame g = parse_game(read_text_file(a.file));
  const std::uint64_t seed = require_seed(a.seed);
  if (a.sigma && a.approx_eps)
    throw InputError("--sigma and --approx-eps are mutually exclusive");
  if (a.sigma) {
    BimatrixGame out = staged("perturb", [&] {
      return perturb_uniform(g, rat_arg(*a.sigma, "--sigma"), seed);
    });
    emit(serialize_game(out));
    return;
  }
  if (a.approx_eps) {
    MixedProfile p = staged("approximate", [&] {
      return approx_by_perturbation(
          g, rat_arg(*a.approx_eps, "--approx-eps"), seed,
          [&](const BimatrixGame& gg) {
            return run_solver(gg, a.method, a.label, a.max_pivots);
          });
    });
    emit(serialize_profile(p));
    return;
  }
  throw InputError("pass --sigma (perturbed game) or --approx-eps (profile)");
}

// ---------------------------------------------------------------------------
// pad-game / pad-circuit

struct PadGameArgs {
  std::string file;
  std::optional<std::string> c, cprime;
  bool recover = false;
  std::string meta;       // in (recover) or out (pad)
};

void run_pad_game(const PadGameArgs& a) {
  if (a.recover) {
    if (a.meta.empty()) throw InputError("--recover needs --meta");
    ordered_json j =
        ordered_json::parse(read_text_file(a.meta), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("original_n") ||
        !j.contains("padded_n") || !j["original_n"].is_number_unsigned() ||
        !j["padded_n"].is_number_unsigned())
      throw InputError("pad meta must carry original_n and padded_n");
    PadGameResult r;
    r.original_n = j["original_n"].get<std::size_t>();
    r.padded_n = j["padded_n"].get<std::size_t>();
    MixedProfile p = parse_profile(read_text_file(a.file));
    emit(serialize_profile(staged("recover", [&] { return r.recover(p); })));
    return;
  }
  if (!a.c || !a.cprime) throw InputError("padding needs --c and --cprime");
  BimatrixGame g = parse_game(read_text_file(a.file));
  PadGameResult r = staged("pad", [&] {
    return pad_game(g, rat_arg(*a.c, "--c"), rat_arg(*a.cprime, "--cprime"));
  });
  if (!a.meta.empty()) {
    ordered_json j;
    j["original_n"] = r.original_n;
    j["padded_n"] = r.padded_n;
    write_text_file(a.meta, j.dump() + "\n");
  }
  emit(serialize_game(r.padded));
}

struct PadCircuitArgs {
  std::string file;
  std::optional<std::string> c;
  bool pull_back = false;
  std::string meta;       // in (pull-back) or out (pad)
};

void run_pad_circuit(const PadCircuitArgs& a) {
  if (a.pull_back) {
    if (a.meta.empty()) throw InputError("--pull-back needs --meta");
    ordered_json j =
        ordered_json::parse(read_text_file(a.meta), nullptr, false);
    if (j.is_discarded() || !j.is_object() || !j.contains("original_K") ||
        !j.contains("factor") || !j["original_K"].is_string() ||
        !j["factor"].is_string())
      throw InputError("pad meta must carry original_K and factor");
    PadCircuitResult r;
    r.original_K = mpz_class(j["original_K"].get<std::string>(), 10);
    r.factor = mpz_class(j["factor"].get<std::string>(), 10);
    Assignment x = parse_assignment(read_text_file(a.file));
    emit(serialize_assignment(
        staged("pull-back", [&] { return r.pull_back(x); })));
    return;
  }
  if (!a.c) throw InputError("padding needs --c");
  GeneralizedCircuit c = parse_circuit(read_text_file(a.file));
  PadCircuitResult r =
      staged("pad", [&] { return pad_circuit(c, rat_arg(*a.c, "--c")); });
  if (!a.meta.empty()) {
    ordered_json j;
    j["original_K"] = r.original_K.get_str();
    j["factor"] = r.factor.get_str();
    write_text_file(a.meta, j.dump() + "\n");
  }
  emit(serialize_circuit(r.circuit));
}

// ---------------------------------------------------------------------------
// roundtrip

struct RoundtripArgs {
  std::string file;
  std::string kind = "instance";
  std::optional<std::uint32_t> m;
  bool relaxed = false;
  std::uint64_t sweeps = 4000;
  std::optional<std::uint64_t> seed;
  std::string method = "support";
  std::size_t label = 1;
  std::optional<std::uint64_t> max_pivots;
  std::string out_assignment;
};

// Chain the stages, recording each verdict; the report is printed whatever
// happens, and the first failing stage's error still decides the exit code.
void run_roundtrip(const RoundtripArgs& a) {
  ordered_json stages = ordered_json::array();
  auto record = [&](const char* name, bool ok, const std::string& detail) {
    ordered_json s;
    s["stage"] = name;
    s["ok"] = ok;
    s["detail"] = detail;
    stages.push_back(std::move(s));
  };
  bool reported = false;
  auto finish = [&](bool ok) {
    ordered_json j;
    j["kind"] = a.kind;
    j["stages"] = std::move(stages);
    j["ok"] = ok;
    emit(j.dump() + "\n");
    reported = true;
  };
  const char* current = "load";

  try {
    if (a.kind == "circuit") {
      GeneralizedCircuit c = parse_circuit(read_text_file(a.file));
      record("load", true, std::to_string(c.gates.size()) + " gates");
      current = "gadgetize";
      AssembledGame g =
          staged("gadgetize", [&] { return circuit_to_game(c, true); });
      record("gadgetize", true,
             std::to_string(g.game.m) + " actions per side");
      current = "solve";
      MixedProfile p = staged("solve", [&] {
        return run_solver(g.game, a.method, a.label, a.max_pivots);
      });
      record("solve", true, "exact equilibrium found");
      current = "decode";
      DecodedProfile d =
          staged("decode", [&] { return decode_profile(p, g.emb); });
      const Rational eps = Rational(1) / Rational(mpz_class(g.emb.K) *
                                                  g.emb.K * g.emb.K);
      current = "check";
      SolutionReport rep =
          staged("check", [&] { return check_solution(c, d.row_value, eps); });
      record("check", rep.ok,
             rep.ok ? "decoded values satisfy the circuit at 1/K^3"
                    : std::to_string(rep.gate_violations.size()) +
                          " gate violations");
      finish(rep.ok);
      if (!rep.ok) throw VerifyError("decoded assignment fails the circuit");
      return;
    }

    if (a.kind != "instance")
      throw InputError("roundtrip kind must be \"instance\" or \"circuit\"");

    BrouwerInstance inst = parse_instance(read_text_file(a.file));
    record("load", true, "n = " + std::to_string(inst.n));
    current = "circuitize";
    ReductionParams params = choose_params(inst, a.m);
    if (params.relaxed && !a.relaxed)
      throw InputError("m = " + std::to_string(params.m) +
                       " differs from the automatic choice; pass --relaxed");
    BuildResult built =
        staged("circuitize", [&] { return build_circuit(inst, params); });
    record("circuitize", true,
           std::to_string(built.circuit.gates.size()) + " gates, m = " +
               std::to_string(params.m));
    current = "solve";
    const std::uint64_t seed = require_seed(a.seed);
    std::optional<Assignment> sol = staged("solve", [&] {
      return iterate_solve(built.circuit, params.eps, a.sweeps, seed);
    });
    if (!sol) {
      record("solve", false,
             "iteration budget (" + std::to_string(a.sweeps) +
                 " sweeps) exhausted");
      finish(false);
      throw BudgetError("no solution within " + std::to_string(a.sweeps) +
                        " sweeps");
    }
    record("solve", true, "assignment passes the circuit checker");
    if (!a.out_assignment.empty())
      write_text_file(a.out_assignment, serialize_assignment(*sol));
    current = "decode";
    DecodeRecord rec =
        staged("decode", [&] { return decode_solution(built.layout, *sol); });
    record("decode", true,
           std::to_string(rec.simplex.size()) + " candidate points, " +
               std::to_string(rec.poor.size()) + " poorly positioned");
    current = "verify";
    SimplexVerdict v = staged(
        "verify", [&] { return verify_panchromatic(inst, rec.simplex); });
    record("verify", v.ok, v.detail);
    finish(v.ok);
    if (!v.ok) throw VerifyError(v.detail);
  } catch (const std::exception& e) {
    if (!reported) {
      record(current, false, e.what());
      finish(false);
    }
    throw;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Exact-arithmetic toolkit: discrete fixed points, generalized "
      "circuits, bimatrix games, and the reductions between them"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_flag("--trace", g_trace, "report per-stage timing on stderr");

  std::function<void()> action;

  // gen-brouwer
  auto gen_args = std::make_shared<GenBrouwerArgs>();
  std::optional<std::uint64_t> gen_seed;
  {
    CLI::App* cmd = app.add_subcommand(
        "gen-brouwer", "generate a random valid coloring triple or instance");
    cmd->add_option("--kind", gen_args->kind, "triple or instance");
    cmd->add_option("--d", gen_args->d, "triple dimension");
    cmd->add_option("--r", gen_args->r, "triple side lengths")->delimiter(',');
    cmd->add_option("--n", gen_args->n, "instance dimension (sides all 8)");
    cmd->add_option("--seed", gen_seed, "RNG seed (required)");
    cmd->add_option("--max-points", gen_args->max_points, "scan budget");
    cmd->callback([gen_args, &gen_seed, &action] {
      gen_args->seed = gen_seed;
      action = [gen_args] { run_gen_brouwer(*gen_args); };
    });
  }

  // validate
  auto val_args = std::make_shared<ValidateArgs>();
  {
    CLI::App* cmd =
        app.add_subcommand("validate", "parse and re-validate an artifact");
    cmd->add_option("kind", val_args->kind,
                    "game|profile|circuit|assignment|bool-circuit|triple|"
                    "instance|chain|simplex|layout|meta")
        ->required();
    cmd->add_option("file", val_args->file, "artifact path")->required();
    cmd->add_option("--max-points", val_args->max_points,
                    "boundary scan budget (triples)");
    cmd->callback([val_args, &action] {
      action = [val_args] { run_validate(*val_args); };
    });
  }

  // find-fixed-point
  auto ffp_file = std::make_shared<std::string>();
  auto ffp_chain = std::make_shared<std::string>();
  auto ffp_budget = std::make_shared<std::uint64_t>(1u << 24);
  {
    CLI::App* cmd = app.add_subcommand(
        "find-fixed-point", "exhaustive panchromatic-simplex search");
    cmd->add_option("triple", *ffp_file, "triple path")->required();
    cmd->add_option("--chain", *ffp_chain,
                    "apply this transform chain before searching");
    cmd->add_option("--max-points", *ffp_budget, "scan budget");
    cmd->callback([ffp_file, ffp_chain, ffp_budget, &action] {
      action = [ffp_file, ffp_chain, ffp_budget] {
        run_find_fixed_point(*ffp_file, *ffp_chain, *ffp_budget);
      };
    });
  }

  // embed
  auto embed_file = std::make_shared<std::string>();
  auto embed_f = std::make_shared<std::string>("const3");
  auto embed_n = std::make_shared<std::uint32_t>();
  {
    CLI::App* cmd = app.add_subcommand(
        "embed", "fold a 2-d triple into a low-side hypergrid; emits the chain");
    cmd->add_option("triple", *embed_file, "source triple path")->required();
    cmd->add_option("--f", *embed_f, "growth function (const<l>)");
    cmd->add_option("--n", *embed_n, "source exponent: sides are 2^n")
        ->required();
    cmd->callback([embed_file, embed_f, embed_n, &action] {
      action = [embed_file, embed_f, embed_n] {
        run_embed(*embed_file, *embed_f, *embed_n);
      };
    });
  }

  // backmap
  auto bm_source = std::make_shared<std::string>();
  auto bm_chain = std::make_shared<std::string>();
  auto bm_simplex = std::make_shared<std::string>();
  {
    CLI::App* cmd = app.add_subcommand(
        "backmap", "walk a simplex of the transformed triple back to the source");
    cmd->add_option("--source", *bm_source, "source triple path")->required();
    cmd->add_option("chain", *bm_chain, "chain path")->required();
    cmd->add_option("simplex", *bm_simplex, "simplex path")->required();
    cmd->callback([bm_source, bm_chain, bm_simplex, &action] {
      action = [bm_source, bm_chain, bm_simplex] {
        run_backmap(*bm_source, *bm_chain, *bm_simplex);
      };
    });
  }

  // circuitize
  auto circ_args = std::make_shared<CircuitizeArgs>();
  auto circ_m = std::make_shared<std::optional<std::uint32_t>>();
  {
    CLI::App* cmd = app.add_subcommand(
        "circuitize", "build the fixed-point-to-circuit reduction");
    cmd->add_option("instance", circ_args->file, "instance path")->required();
    cmd->add_option("--m", *circ_m, "precision exponent override");
    cmd->add_flag("--relaxed", circ_args->relaxed,
                  "accept an m differing from the automatic choice");
    cmd->add_option("--out-layout", circ_args->out_layout, "layout output path")
        ->required();
    cmd->callback([circ_args, circ_m, &action] {
      circ_args->m = *circ_m;
      action = [circ_args] { run_circuitize(*circ_args); };
    });
  }

  // gadgetize
  auto gad_args = std::make_shared<GadgetizeArgs>();
  {
    CLI::App* cmd = app.add_subcommand(
        "gadgetize", "assemble the circuit-to-game reduction");
    cmd->add_option("circuit", gad_args->file, "circuit path")->required();
    cmd->add_flag("--normalize", gad_args->normalize,
                  "map payoffs into [0,1]");
    cmd->add_option("--out-meta", gad_args->out_meta, "meta output path");
    cmd->callback([gad_args, &action] {
      action = [gad_args] { run_gadgetize(*gad_args); };
    });
  }

  // solve
  auto solve_args = std::make_shared<SolveArgs>();
  auto solve_pivots = std::make_shared<std::optional<std::uint64_t>>();
  {
    CLI::App* cmd =
        app.add_subcommand("solve", "exact Nash equilibrium of a game");
    cmd->add_option("game", solve_args->file, "game path")->required();
    cmd->add_option("--method", solve_args->method, "lh or support")
        ->required();
    cmd->add_option("--label", solve_args->label, "dropped label (lh)");
    cmd->add_option("--max-pivots", *solve_pivots, "pivot budget (lh)");
    cmd->callback([solve_args, solve_pivots, &action] {
      solve_args->max_pivots = *solve_pivots;
      action = [solve_args] { run_solve(*solve_args); };
    });
  }

  // decode
  auto dec_meta = std::make_shared<std::string>();
  auto dec_profile = std::make_shared<std::string>();
  {
    CLI::App* cmd = app.add_subcommand(
        "decode", "read node values off a profile of an assembled game");
    cmd->add_option("--game-meta", *dec_meta, "meta path")->required();
    cmd->add_option("profile", *dec_profile, "profile path")->required();
    cmd->callback([dec_meta, dec_profile, &action] {
      action = [dec_meta, dec_profile] { run_decode(*dec_meta, *dec_profile); };
    });
  }

  // decode-fixedpoint
  auto dfp_layout = std::make_shared<std::string>();
  auto dfp_assignment = std::make_shared<std::string>();
  {
    CLI::App* cmd = app.add_subcommand(
        "decode-fixedpoint",
        "classify and round the sample points of a solved reduction");
    cmd->add_option("layout", *dfp_layout, "layout path")->required();
    cmd->add_option("assignment", *dfp_assignment, "assignment path")
        ->required();
    cmd->callback([dfp_layout, dfp_assignment, &action] {
      action = [dfp_layout, dfp_assignment] {
        run_decode_fixedpoint(*dfp_layout, *dfp_assignment);
      };
    });
  }

  // verify
  {
    CLI::App* cmd = app.add_subcommand("verify", "re-check a claimed artifact");
    cmd->require_subcommand(1);

    auto eq_game = std::make_shared<std::string>();
    auto eq_profile = std::make_shared<std::string>();
    auto eq_eps = std::make_shared<std::string>("0");
    CLI::App* eq = cmd->add_subcommand("equilibrium",
                                       "additive defects of a profile");
    eq->add_option("game", *eq_game)->required();
    eq->add_option("profile", *eq_profile)->required();
    eq->add_option("--eps", *eq_eps, "allowed additive defect");
    eq->callback([eq_game, eq_profile, eq_eps, &action] {
      action = [eq_game, eq_profile, eq_eps] {
        verify_equilibrium(*eq_game, *eq_profile, rat_arg(*eq_eps, "--eps"));
      };
    });

    auto ws_game = std::make_shared<std::string>();
    auto ws_profile = std::make_shared<std::string>();
    auto ws_eps = std::make_shared<std::string>();
    CLI::App* ws =
        cmd->add_subcommand("well-supported", "well-supported approximation");
    ws->add_option("game", *ws_game)->required();
    ws->add_option("profile", *ws_profile)->required();
    ws->add_option("--eps", *ws_eps)->required();
    ws->callback([ws_game, ws_profile, ws_eps, &action] {
      action = [ws_game, ws_profile, ws_eps] {
        verify_well_supported(*ws_game, *ws_profile, rat_arg(*ws_eps, "--eps"));
      };
    });

    auto sol_circuit = std::make_shared<std::string>();
    auto sol_assignment = std::make_shared<std::string>();
    auto sol_eps = std::make_shared<std::string>();
    CLI::App* sol =
        cmd->add_subcommand("solution", "assignment against a circuit");
    sol->add_option("circuit", *sol_circuit)->required();
    sol->add_option("assignment", *sol_assignment)->required();
    sol->add_option("--eps", *sol_eps)->required();
    sol->callback([sol_circuit, sol_assignment, sol_eps, &action] {
      action = [sol_circuit, sol_assignment, sol_eps] {
        verify_solution(*sol_circuit, *sol_assignment,
                        rat_arg(*sol_eps, "--eps"));
      };
    });

    auto sx_triple = std::make_shared<std::string>();
    auto sx_simplex = std::make_shared<std::string>();
    CLI::App* sx =
        cmd->add_subcommand("simplex", "panchromatic simplex of a triple");
    sx->add_option("triple", *sx_triple)->required();
    sx->add_option("simplex", *sx_simplex)->required();
    sx->callback([sx_triple, sx_simplex, &action] {
      action = [sx_triple, sx_simplex] {
        verify_simplex(*sx_triple, *sx_simplex);
      };
    });

    auto rd_circuit = std::make_shared<std::string>();
    auto rd_profile = std::make_shared<std::string>();
    auto rd_eps = std::make_shared<std::optional<std::string>>();
    CLI::App* rd = cmd->add_subcommand(
        "reduction", "profile of the assembled game against the circuit");
    rd->add_option("circuit", *rd_circuit)->required();
    rd->add_option("profile", *rd_profile)->required();
    rd->add_option("--eps", *rd_eps, "well-supported precision override");
    rd->callback([rd_circuit, rd_profile, rd_eps, &action] {
      action = [rd_circuit, rd_profile, rd_eps] {
        verify_reduction_cmd(*rd_circuit, *rd_profile, *rd_eps);
      };
    });

    auto pc_instance = std::make_shared<std::string>();
    auto pc_report = std::make_shared<std::string>();
    CLI::App* pc = cmd->add_subcommand(
        "panchromatic", "decoded point set against an instance's coloring");
    pc->add_option("instance", *pc_instance)->required();
    pc->add_option("report", *pc_report, "decode report with a simplex field")
        ->required();
    pc->callback([pc_instance, pc_report, &action] {
      action = [pc_instance, pc_report] {
        verify_panchromatic_cmd(*pc_instance, *pc_report);
      };
    });
  }

  // perturb
  auto pert_args = std::make_shared<PerturbArgs>();
  auto pert_sigma = std::make_shared<std::optional<std::string>>();
  auto pert_eps = std::make_shared<std::optional<std::string>>();
  auto pert_seed = std::make_shared<std::optional<std::uint64_t>>();
  auto pert_pivots = std::make_shared<std::optional<std::uint64_t>>();
  {
    CLI::App* cmd = app.add_subcommand(
        "perturb",
        "perturb payoffs (--sigma), or solve a perturbed copy (--approx-eps)");
    cmd->add_option("game", pert_args->file, "game path")->required();
    cmd->add_option("--sigma", *pert_sigma, "uniform perturbation magnitude");
    cmd->add_option("--approx-eps", *pert_eps,
                    "target approximation of the returned profile");
    cmd->add_option("--seed", *pert_seed, "RNG seed (required)");
    cmd->add_option("--method", pert_args->method, "lh or support");
    cmd->add_option("--label", pert_args->label, "dropped label (lh)");
    cmd->add_option("--max-pivots", *pert_pivots, "pivot budget (lh)");
    cmd->callback([pert_args, pert_sigma, pert_eps, pert_seed, pert_pivots,
                   &action] {
      pert_args->sigma = *pert_sigma;
      pert_args->approx_eps = *pert_eps;
      pert_args->seed = *pert_seed;
      pert_args->max_pivots = *pert_pivots;
      action = [pert_args] { run_perturb(*pert_args); };
    });
  }

  // pad-game
  auto pg_args = std::make_shared<PadGameArgs>();
  auto pg_c = std::make_shared<std::optional<std::string>>();
  auto pg_cp = std::make_shared<std::optional<std::string>>();
  {
    CLI::App* cmd = app.add_subcommand(
        "pad-game", "embed a game in a larger one (or --recover a profile)");
    cmd->add_option("file", pg_args->file, "game path (profile with --recover)")
        ->required();
    cmd->add_option("--c", *pg_c, "source approximation exponent");
    cmd->add_option("--cprime", *pg_cp, "target approximation exponent");
    cmd->add_flag("--recover", pg_args->recover,
                  "map a profile of the padded game back");
    cmd->add_option("--meta", pg_args->meta,
                    "meta path (written when padding, read with --recover)");
    cmd->callback([pg_args, pg_c, pg_cp, &action] {
      pg_args->c = *pg_c;
      pg_args->cprime = *pg_cp;
      action = [pg_args] { run_pad_game(*pg_args); };
    });
  }

  // pad-circuit
  auto pcir_args = std::make_shared<PadCircuitArgs>();
  auto pcir_c = std::make_shared<std::optional<std::string>>();
  {
    CLI::App* cmd = app.add_subcommand(
        "pad-circuit",
        "dilute a circuit with dummy nodes (or --pull-back an assignment)");
    cmd->add_option("file", pcir_args->file,
                    "circuit path (assignment with --pull-back)")
        ->required();
    cmd->add_option("--c", *pcir_c, "sharpness exponent (at least 3)");
    cmd->add_flag("--pull-back", pcir_args->pull_back,
                  "map an assignment of the padded circuit back");
    cmd->add_option("--meta", pcir_args->meta,
                    "meta path (written when padding, read with --pull-back)");
    cmd->callback([pcir_args, pcir_c, &action] {
      pcir_args->c = *pcir_c;
      action = [pcir_args] { run_pad_circuit(*pcir_args); };
    });
  }

  // roundtrip
  auto rt_args = std::make_shared<RoundtripArgs>();
  auto rt_m = std::make_shared<std::optional<std::uint32_t>>();
  auto rt_seed = std::make_shared<std::optional<std::uint64_t>>();
  auto rt_pivots = std::make_shared<std::optional<std::uint64_t>>();
  {
    CLI::App* cmd = app.add_subcommand(
        "roundtrip", "run the whole pipeline and report each stage");
    cmd->add_option("file", rt_args->file, "instance or circuit path")
        ->required();
    cmd->add_option("--kind", rt_args->kind, "instance or circuit");
    cmd->add_option("--m", *rt_m, "precision exponent override (instance)");
    cmd->add_flag("--relaxed", rt_args->relaxed,
                  "accept an m differing from the automatic choice");
    cmd->add_option("--sweeps", rt_args->sweeps, "iteration budget (instance)");
    cmd->add_option("--seed", *rt_seed, "RNG seed (instance)");
    cmd->add_option("--method", rt_args->method, "lh or support (circuit)");
    cmd->add_option("--label", rt_args->label, "dropped label (lh)");
    cmd->add_option("--max-pivots", *rt_pivots, "pivot budget (lh)");
    cmd->add_option("--out-assignment", rt_args->out_assignment,
                    "write any found assignment here (instance)");
    cmd->callback([rt_args, rt_m, rt_seed, rt_pivots, &action] {
      rt_args->m = *rt_m;
      rt_args->seed = *rt_seed;
      rt_args->max_pivots = *rt_pivots;
      action = [rt_args] { run_roundtrip(*rt_args); };
    });
  }

  try {
    app.parse(argc, argv);
    if (action) action();
  } catch (const CLI::ParseError& e) {
    // --help and friends exit 0; real parse problems are input errors.
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return 3;
  } catch (const VerifyError& e) {
    std::cerr << "verification failed: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
