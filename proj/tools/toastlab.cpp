// Copyright 2026 The Toastlab Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// toastlab: generate toasts on lattice graphs, build trees, orientations and
// matchings from them, and verify every artifact.
//
// Exit codes: 0 pass, 2 verification failure, 3 generation failure,
// 64 usage error, 66 missing input.

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "toastlab.hpp"

namespace fs = std::filesystem;
using namespace toastlab;

namespace {

constexpr int kPass = 0;
constexpr int kFail = 2;
constexpr int kGenFail = 3;
constexpr int kUsage = 64;
constexpr int kMissing = 66;

// Raised for conditions that map straight to an exit code.
struct Exit {
  int code;
  std::string message;
};

std::vector<int> parse_ints(const std::string& text, const char* flag) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stoi(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw Exit{kUsage, std::string("bad integer list for ") + flag + ": " + text};
    }
  }
  if (out.empty()) throw Exit{kUsage, std::string(flag) + " is empty"};
  return out;
}

Json load(const std::string& path) {
  if (!fs::exists(path)) throw Exit{kMissing, "missing input: " + path};
  return read_json_file(path);
}

std::string sibling(const std::string& path, const std::string& name) {
  return (fs::path(path).parent_path() / name).string();
}

std::string out_dir(const std::string& requested, const std::string& in) {
  std::string dir = requested.empty() ? fs::path(in).parent_path().string() : requested;
  if (dir.empty()) dir = ".";
  fs::create_directories(dir);
  return dir;
}

std::string join(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("TOASTLAB_SEED")) {
    try {
      return std::stoull(env);
    } catch (const std::exception&) {
      throw Exit{kUsage, std::string("TOASTLAB_SEED is not an integer: ") + env};
    }
  }
  return 0;
}

// Report for a construction that threw before producing a certificate.
Report error_report(const std::string& stage, const Error& e) {
  Report r;
  r.add(stage, false, Json{{"error", std::string(error_name(e.code()))}, {"message", e.what()}});
  return r;
}

int report_exit(const Report& r) { return r.passed() ? kPass : kFail; }

void print_summary(const std::string& what, const Report& r) {
  std::cout << what << ": " << (r.passed() ? "pass" : "FAIL") << " " << r.summary() << "\n";
}

// Shared flags of the construction commands.
struct BuildFlags {
  std::string in;
  std::string graph;
  std::string out;
  bool dot = false;
  bool force_emit = false;
  int threads = 1;
};

void add_build_flags(CLI::App* cmd, BuildFlags& f) {
  cmd->add_option("--in", f.in, "toast.json")->required();
  cmd->add_option("--graph", f.graph, "graph.json (default: next to --in)");
  cmd->add_option("--out", f.out, "output directory (default: directory of --in)");
  cmd->add_flag("--dot", f.dot, "also write a DOT export");
  cmd->add_flag("--force-emit", f.force_emit, "write certificates even when verification fails");
  cmd->add_option("--threads", f.threads, "verifier threads")->check(CLI::PositiveNumber);
}

struct Inputs {
  Graph graph;
  Toast toast;
};

Inputs load_inputs(const BuildFlags& f) {
  const std::string gpath = f.graph.empty() ? sibling(f.in, "graph.json") : f.graph;
  const Json tj = load(f.in);
  const Json gj = load(gpath);
  return Inputs{graph_from_json(gj), toast_from_json(tj)};
}

// generate

struct GenerateFlags {
  std::string dims;
  std::string topology = "torus";
  int levels = 2;
  int scale = 8;
  int r = 1;
  int pad = 0;
  int max_attempts = 64;
  std::optional<std::uint64_t> seed;
  std::string out = ".";
  int threads = 1;
};

int run_generate(const GenerateFlags& f) {
  const auto dims = parse_ints(f.dims, "--dims");
  Topology topology;
  try {
    topology = parse_topology(f.topology);
  } catch (const Error& e) {
    throw Exit{kUsage, e.what()};
  }
  if (f.pad < 0 || (f.pad > 0 && topology != Topology::kWindow)) {
    throw Exit{kUsage, "--pad needs --topology window and a non-negative value"};
  }
  const Graph base = Graph::grid(dims, topology);
  GenerateOptions opts;
  opts.r = f.r;
  opts.num_levels = f.levels;
  opts.scale = f.scale;
  opts.seed = resolve_seed(f.seed);
  opts.max_attempts = f.max_attempts;
  GeneratedLevels gen;
  std::vector<VertexSet> filled;
  try {
    gen = generate_level_sets(base, opts);
    filled = fill_levels(base, gen.sets);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::kGenerationFailed || e.code() == ErrorCode::kNotFillable) {
      std::cerr << e.what() << "\n";
      return kGenFail;
    }
    throw;
  }
  Graph graph = base;
  LevelSets levels = gen.sets;
  Toast toast = levels_to_toast(base, filled);
  if (f.pad > 0) {
    std::vector<int> big = dims;
    for (int& side : big) side += 2 * f.pad;
    graph = Graph::grid(big, Topology::kWindow);
    const auto map = lattice_embedding(base, graph, std::vector<int>(dims.size(), f.pad));
    levels = separate_levels(graph, embed_level_sets(graph, gen.sets, map));
    try {
      toast = levels_to_toast(graph, fill_levels(graph, levels));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kNotFillable) throw;
      std::cerr << e.what() << "\n";
      return kGenFail;
    }
  }
  Report report = verify_toast(graph, toast, VerifyOptions{f.threads});
  const Report level_report = verify_level_sets(graph, levels);
  for (const Check& c : level_report.checks()) report.add(c.name, c.pass, c.witness, c.info);

  fs::create_directories(f.out);
  write_text_file(join(f.out, "graph.json"), dump(to_json(graph)));
  write_text_file(join(f.out, "levels.json"), dump(to_json(levels)));
  write_text_file(join(f.out, "toast.json"), dump(to_json(toast)));
  write_text_file(join(f.out, "report.json"), dump(to_json(report)));
  print_summary("generate", report);
  std::cerr << "tiles " << toast.tiles.size() << ", attempts " << gen.attempts << "\n";
  return report_exit(report);
}

// tree / orient / match

int run_tree(const BuildFlags& f) {
  const Inputs in = load_inputs(f);
  const std::string dir = out_dir(f.out, f.in);
  Report report;
  std::optional<TreeCertificate> cert;
  try {
    cert = build_tree(in.graph, in.toast);
    report = verify_tree(in.graph, in.toast, *cert);
  } catch (const Error& e) {
    report = error_report("build_tree", e);
  }
  write_text_file(join(dir, "tree_report.json"), dump(to_json(report)));
  if (cert && (report.passed() || f.force_emit)) {
    write_text_file(join(dir, "tree.json"), dump(to_json(*cert)));
    if (f.dot) write_text_file(join(dir, "tree.dot"), tree_to_dot(in.graph, *cert));
  }
  print_summary("tree", report);
  return report_exit(report);
}

int run_orient(const BuildFlags& f) {
  const Inputs in = load_inputs(f);
  const std::string dir = out_dir(f.out, f.in);
  Report report;
  std::optional<Orientation> o;
  std::vector<OrientationStep> log;
  try {
    o = balanced_orientation(in.graph, in.toast, &log);
    report = verify_balanced(in.graph, *o);
  } catch (const Error& e) {
    report = error_report("balanced_orientation", e);
  }
  write_text_file(join(dir, "orientation_report.json"), dump(to_json(report)));
  if (o && (report.passed() || f.force_emit)) {
    write_text_file(join(dir, "orientation.json"), dump(to_json(*o)));
    write_text_file(join(dir, "orientation_log.json"), dump(to_json(log)));
    if (f.dot) write_text_file(join(dir, "orientation.dot"), orientation_to_dot(in.graph, *o));
  }
  print_summary("orient", report);
  return report_exit(report);
}

int run_match(const BuildFlags& f, std::optional<int> d) {
  const Inputs in = load_inputs(f);
  const std::string dir = out_dir(f.out, f.in);
  const int degree = d ? *d : (in.graph.vertex_count() > 0 ? in.graph.degree(0) : 0);
  Report report;
  std::optional<MatchingRun> run;
  try {
    run = run_perfect_matching(in.graph, in.toast, degree);
    report = verify_matching(in.graph, run->matching);
    const Report replay = verify_circuit_log(in.graph, degree, run->circuits);
    for (const Check& c : replay.checks()) report.add(c.name, c.pass, c.witness, c.info);
    report.add("chain_depth", true, nullptr,
               Json{{"deepest_region", run->deepest_region}, {"circuits", run->circuits.size()}});
  } catch (const Error& e) {
    report = error_report("perfect_matching", e);
  }
  write_text_file(join(dir, "matching_report.json"), dump(to_json(report)));
  if (run && (report.passed() || f.force_emit)) {
    write_text_file(join(dir, "matching.json"), dump(to_json(run->matching)));
    write_text_file(join(dir, "fractional.json"), dump(to_json(in.graph, run->final_state)));
    write_text_file(join(dir, "circuits.json"), dump(to_json(run->circuits)));
  }
  print_summary("match", report);
  return report_exit(report);
}

// verify

struct VerifyFlags {
  std::string in;
  std::string graph;
  std::string toast;
  std::string report;
  int threads = 1;
  int d = 2;
  int n = 2;
  int thickness = 2;
  std::string epsilon = "1/4";
};

int emit(const VerifyFlags& f, const std::string& what, const Report& r) {
  if (!f.report.empty()) write_text_file(f.report, dump(to_json(r)));
  std::cout << dump(to_json(r));
  print_summary(what, r);
  return report_exit(r);
}

Graph verify_graph(const VerifyFlags& f) {
  return graph_from_json(load(f.graph.empty() ? sibling(f.in, "graph.json") : f.graph));
}

int run_verify(const std::string& kind, const VerifyFlags& f) {
  if (kind == "folner") {
    Rational eps;
    try {
      eps = Rational::parse(f.epsilon);
    } catch (const Error& e) {
      throw Exit{kUsage, e.what()};
    }
    const FolnerSetup s = folner_sets(f.d, f.n, f.thickness);
    return emit(f, "folner", verify_folner(s.graph, s.pair, eps));
  }
  if (f.in.empty()) throw Exit{kUsage, "verify " + kind + " needs --in"};
  const Json doc = load(f.in);
  const Graph g = verify_graph(f);
  if (kind == "toast") return emit(f, kind, verify_toast(g, toast_from_json(doc), VerifyOptions{f.threads}));
  if (kind == "levels") return emit(f, kind, verify_level_sets(g, levels_from_json(doc)));
  if (kind == "orientation") return emit(f, kind, verify_balanced(g, orientation_from_json(doc)));
  if (kind == "matching") {
    if (doc.is_object()) return emit(f, "fractional", verify_fractional(g, fractional_from_json(g, doc)));
    return emit(f, kind, verify_matching(g, matching_from_json(doc)));
  }
  if (kind == "iso") {
    const IsoVerdict v = verify_iso_family(g, iso_family_from_json(doc));
    return emit(f, kind, v.report);
  }
  if (kind == "tree") {
    const std::string tpath = f.toast.empty() ? sibling(f.in, "toast.json") : f.toast;
    return emit(f, kind, verify_tree(g, toast_from_json(load(tpath)), tree_from_json(doc)));
  }
  throw Exit{kUsage, "unknown verify kind " + kind};
}

// oracle

struct OracleFlags {
  std::string graph;
  std::string p;
  std::string dims = "31,31";
  std::string anchor;
  int max_set_size = 6;
  int kappa_max = 4;
  std::int64_t budget = 5'000'000;
};

int run_oracle(const std::string& kind, const OracleFlags& f) {
  if (kind == "kappa") {
    KappaOptions opts;
    opts.budget = f.budget;
    if (!f.anchor.empty()) opts.anchor_offset = parse_ints(f.anchor, "--anchor");
    const KappaReport k = kappa_search(parse_ints(f.dims, "--dims"), f.max_set_size, f.kappa_max, opts);
    std::cout << dump(to_json(k));
    return k.budget_exceeded || k.kappa < 0 ? kFail : kPass;
  }
  if (f.graph.empty()) throw Exit{kUsage, "oracle " + kind + " needs --graph"};
  const Graph g = graph_from_json(load(f.graph));
  if (kind == "matching") {
    const OracleMatching m = oracle_matching(g);
    std::cout << dump(Json{{"perfect", m.perfect}, {"size", m.matching.edges.size()},
                           {"edges", to_json(m.matching)}});
    return kPass;
  }
  if (kind == "parity") {
    VertexSet p;
    if (!f.p.empty()) p = VertexSet(parse_ints(f.p, "--P"));
    std::cout << dump(Json{{"exists", oracle_parity_exists(g, p)}});
    return kPass;
  }
  throw Exit{kUsage, "unknown oracle " + kind};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"toastlab: toasts, one-ended trees, balanced orientations, matchings"};
  app.require_subcommand(1);

  GenerateFlags gen;
  auto* generate = app.add_subcommand("generate", "level sets -> filled levels -> toast");
  generate->add_option("--dims", gen.dims, "comma-separated side lengths")->required();
  generate->add_option("--topology", gen.topology, "torus or window");
  generate->add_option("--levels", gen.levels, "number of levels");
  generate->add_option("--scale", gen.scale, "cell side growth per level");
  generate->add_option("--r", gen.r, "separation radius");
  generate->add_option("--pad", gen.pad, "embed into a window padded by this many vertices per side");
  generate->add_option("--max-attempts", gen.max_attempts, "offset redraws before giving up");
  generate->add_option("--seed", gen.seed, "64-bit seed (default TOASTLAB_SEED, else 0)");
  generate->add_option("--out", gen.out, "output directory");
  generate->add_option("--threads", gen.threads, "verifier threads")->check(CLI::PositiveNumber);

  BuildFlags tree_f, orient_f, match_f;
  auto* tree = app.add_subcommand("tree", "one-ended spanning forest from a connected toast");
  add_build_flags(tree, tree_f);
  auto* orient = app.add_subcommand("orient", "balanced orientation of an even-degree graph");
  add_build_flags(orient, orient_f);
  auto* match = app.add_subcommand("match", "perfect matching of a regular bipartite graph");
  add_build_flags(match, match_f);
  std::optional<int> match_d;
  match->add_option("--d", match_d, "denominator (default: degree)");

  VerifyFlags ver;
  auto* verify = app.add_subcommand("verify", "check an artifact");
  verify->require_subcommand(1);
  for (const char* kind : {"toast", "tree", "orientation", "matching", "folner", "levels", "iso"}) {
    auto* sub = verify->add_subcommand(kind);
    sub->add_option("--in", ver.in, "artifact JSON");
    sub->add_option("--graph", ver.graph, "graph.json (default: next to --in)");
    sub->add_option("--report", ver.report, "also write the report here");
    sub->add_option("--threads", ver.threads)->check(CLI::PositiveNumber);
    if (std::string(kind) == "tree") sub->add_option("--toast", ver.toast, "toast.json");
    if (std::string(kind) == "folner") {
      sub->add_option("--d", ver.d, "dimension");
      sub->add_option("--n", ver.n, "radius");
      sub->add_option("--epsilon", ver.epsilon, "ratio bound, p/q or decimal");
      sub->add_option("--thickness", ver.thickness, "shell thickness");
    }
  }

  OracleFlags orc;
  auto* oracle = app.add_subcommand("oracle", "brute-force ground truth");
  oracle->require_subcommand(1);
  auto* om = oracle->add_subcommand("matching");
  om->add_option("--graph", orc.graph)->required();
  auto* op = oracle->add_subcommand("parity");
  op->add_option("--graph", orc.graph)->required();
  op->add_option("--P", orc.p, "comma-separated odd-degree vertices");
  auto* ok = oracle->add_subcommand("kappa");
  ok->add_option("--dims", orc.dims, "window dims");
  ok->add_option("--max-set-size", orc.max_set_size);
  ok->add_option("--kappa-max", orc.kappa_max);
  ok->add_option("--anchor", orc.anchor, "offset of the placement center");
  ok->add_option("--budget", orc.budget, "maximum enumerated sets");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }

  try {
    if (*generate) return run_generate(gen);
    if (*tree) return run_tree(tree_f);
    if (*orient) return run_orient(orient_f);
    if (*match) return run_match(match_f, match_d);
    if (*verify) return run_verify(verify->get_subcommands().front()->get_name(), ver);
    if (*oracle) return run_oracle(oracle->get_subcommands().front()->get_name(), orc);
  } catch (const Exit& e) {
    std::cerr << e.message << "\n";
    return e.code;
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    switch (e.code()) {
      case ErrorCode::kInvalidParameter:
        return kUsage;
      case ErrorCode::kGenerationFailed:
        return kGenFail;
      default:
        return kFail;
    }
  }
  return kUsage;
}
