// Copyright 2026 The provpolicy Authors.
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

// provpolicy command-line tool.
//
//   provpolicy validate --graph g.json [--json]
//   provpolicy query --graph g.json --expr "//o1v2//o1v1" [--json]
//   provpolicy apply --graph g.json --policy p.xml [--policy ...] [--vcd v.json]
//                    [--merge-table m.json] [--attr k=v ...] [--out out.json]
//                    [--dot out.dot] [--log log.jsonl] [--query EXPR] [--json]
//   provpolicy bench gen-graphs|expressiveness|combine [--seed N] [--count N]
//                    [--partitions N] [--out DIR]
//
// Exit status: 0 success, 1 invalid input, 2 I/O failure, 3 access denied.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#if __has_include(<CLI11.hpp>)
#include <CLI11.hpp>
#else
#include <CLI/CLI.hpp>
#endif
#include <nlohmann/json.hpp>

#include "provpolicy/provpolicy.hpp"

namespace fs = std::filesystem;
using namespace provpolicy;

namespace {

constexpr int kOk = 0;
constexpr int kInput = 1;
constexpr int kIo = 2;
constexpr int kDenied = 3;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& data) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << data;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create '" + dir.string() + "': " + ec.message());
}

std::string violation_kind(ViolationKind k) {
  switch (k) {
    case ViolationKind::IllegalTriple: return "illegal-triple";
    case ViolationKind::DanglingEdge: return "dangling-edge";
    case ViolationKind::Cycle: return "cycle";
    case ViolationKind::AttributeOutgoing: return "attribute-outgoing";
    case ViolationKind::ValueOnNonAttribute: return "value-on-non-attribute";
  }
  return "unknown";
}

struct Options {
  std::string graph;
  std::vector<std::string> policies;
  std::string vcd;
  std::string merge_table;
  std::vector<std::string> attrs;
  std::string out;
  std::string dot;
  std::string log;
  std::string expr;
  bool json = false;
  std::uint64_t seed = 7;
  std::size_t count = 20;
  std::size_t partitions = 300;
  std::size_t repetitions = 20;
  std::size_t max_paths = 1'000'000;
};

int cmd_validate(const Options& o) {
  const ProvenanceGraph g = load_graph(read_file(o.graph));
  const auto violations = validate_graph(g);
  if (o.json) {
    nlohmann::ordered_json j;
    j["valid"] = violations.empty();
    auto arr = nlohmann::ordered_json::array();
    for (const auto& v : violations)
      arr.push_back({{"kind", violation_kind(v.kind)}, {"message", v.message}});
    j["violations"] = std::move(arr);
    std::cout << j.dump(2) << "\n";
  } else if (violations.empty()) {
    std::cout << "valid\n";
  } else {
    for (const auto& v : violations)
      std::cout << violation_kind(v.kind) << ": " << v.message << "\n";
  }
  return violations.empty() ? kOk : kInput;
}

int cmd_query(const Options& o) {
  const ProvenanceGraph g = load_graph(read_file(o.graph));
  const PathExpr e = parse_path_expr(o.expr);
  const PathSet ps = eval_query(g, e, {o.max_paths});
  if (o.json) {
    nlohmann::ordered_json j;
    auto paths = nlohmann::ordered_json::array();
    for (const auto& m : ps.paths) paths.push_back(m.vertices);
    j["paths"] = std::move(paths);
    j["truncated"] = ps.truncated;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& m : ps.paths) {
      for (std::size_t i = 0; i < m.vertices.size(); ++i)
        std::cout << (i ? " " : "") << m.vertices[i];
      std::cout << "\n";
    }
    if (ps.truncated) std::cerr << "warning: result truncated at " << o.max_paths << " paths\n";
  }
  return kOk;
}

int cmd_apply(const Options& o) {
  const ProvenanceGraph g = load_graph(read_file(o.graph));
  std::vector<Policy> policies;
  for (const auto& path : o.policies) {
    auto ps = parse_policies(read_file(path));
    policies.insert(policies.end(), ps.begin(), ps.end());
  }
  const Vcd vcd = o.vcd.empty() ? Vcd{} : parse_vcd(read_file(o.vcd));
  const EdgeMergeTable emt =
      o.merge_table.empty() ? default_merge_table() : parse_merge_table(read_file(o.merge_table));

  AccessRequest req;
  req.graph_id = g.id();
  for (const auto& kv : o.attrs) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0)
      throw Error("--attr expects key=value, got '" + kv + "'");
    req.requester[kv.substr(0, eq)] = kv.substr(eq + 1);
  }
  if (!o.expr.empty()) req.query = parse_path_expr(o.expr);

  auto [decision, result] = evaluate(req, policies, g, vcd, emt, {{o.max_paths}});

  if (!o.out.empty()) write_file(o.out, save_graph(result.graph));
  if (!o.log.empty()) write_file(o.log, result.log_jsonl());
  if (!o.dot.empty()) {
    DotOptions dopts;
    for (const auto& v : result.graph.vertices())
      if (!g.contains(v.id)) dopts.highlighted.insert(v.id);
    write_file(o.dot, to_dot(result.graph, dopts));
  }
  const auto dj = decision_to_json(decision);
  if (o.json || o.out.empty())
    std::cout << dj.dump(2) << "\n";
  else
    std::cout << to_string(decision.outcome) << " (" << decision.hidden_vertex_count
              << " hidden)\n";
  return decision.outcome == Outcome::DenyAll ? kDenied : kOk;
}

nlohmann::ordered_json manifest(const std::string& command, const GenConfig& cfg,
                                const Options& o) {
  nlohmann::ordered_json j;
  j["command"] = command;
  j["seed"] = o.seed;
  j["config"] = config_to_json(cfg);
  return j;
}

GenConfig gen_config(const Options& o) {
  GenConfig cfg;
  cfg.seed = o.seed;
  cfg.graph_count = o.count;
  return cfg;
}

int cmd_gen_graphs(const Options& o) {
  const GenConfig cfg = gen_config(o);
  const fs::path dir = o.out.empty() ? "graphs" : o.out;
  ensure_dir(dir);
  const auto graphs = gen_graphs(cfg);
  for (const auto& g : graphs) write_file(dir / (g.id() + ".json"), save_graph(g));
  write_file(dir / "manifest.json", manifest("gen-graphs", cfg, o).dump(2) + "\n");
  if (o.json)
    std::cout << nlohmann::ordered_json{{"graphs", graphs.size()}, {"dir", dir.string()}}.dump()
              << "\n";
  else
    std::cout << graphs.size() << " graphs written to " << dir.string() << "\n";
  return kOk;
}

int cmd_expressiveness(const Options& o) {
  const GenConfig cfg = gen_config(o);
  const fs::path dir = o.out.empty() ? "." : o.out;
  ensure_dir(dir);
  const auto rep = run_expressiveness(gen_graphs(cfg), o.partitions, o.seed);
  write_file(dir / "expressiveness.csv", rep.csv());
  auto m = manifest("expressiveness", cfg, o);
  m["partitions"] = o.partitions;
  m["paclp"] = rep.paclp_count;
  m["lpac"] = rep.lpac_count;
  write_file(dir / "expressiveness.json", m.dump(2) + "\n");
  if (o.json)
    std::cout << m.dump(2) << "\n";
  else
    std::cout << "partitions " << rep.rows.size() << ", paclp " << rep.paclp_count
              << ", lpac " << rep.lpac_count << "\n";
  return kOk;
}

int cmd_combine(const Options& o) {
  GenConfig cfg = gen_config(o);
  cfg.graph_count = 1;
  const fs::path dir = o.out.empty() ? "." : o.out;
  ensure_dir(dir);
  const ProvenanceGraph g =
      o.graph.empty() ? gen_graph(cfg, 0) : load_graph(read_file(o.graph));
  TimingReport rep;
  const std::vector<std::size_t> counts = {5, 10, 15, 20};
  for (Scenario s : {Scenario::AllAbsolutePermit, Scenario::AllDeny, Scenario::Mixed}) {
    const auto policies = gen_policies(g, counts.back(), s, o.seed);
    for (auto& row : bench_combination(policies, g, s, counts, o.repetitions))
      rep.rows.push_back(row);
  }
  write_file(dir / "combination_timing.csv", rep.csv());
  auto m = manifest("combine", cfg, o);
  m["graph"] = g.id();
  m["repetitions"] = o.repetitions;
  m["policy_counts"] = counts;
  write_file(dir / "combination_timing.json", m.dump(2) + "\n");
  if (o.json)
    std::cout << m.dump(2) << "\n";
  else
    std::cout << rep.csv();
  return kOk;
}

int report(const Options& o, const std::string& kind, const std::string& message, int code) {
  if (o.json) {
    nlohmann::ordered_json j;
    j["error"] = {{"kind", kind}, {"message", message}};
    std::cout << j.dump(2) << "\n";
  }
  std::cerr << "provpolicy: " << message << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Access control over provenance graphs"};
  app.require_subcommand(1);
  Options o;

  auto* validate = app.add_subcommand("validate", "check a graph against the schema");
  validate->add_option("--graph", o.graph, "graph JSON file")->required();
  validate->add_flag("--json", o.json, "structured output");

  auto* query = app.add_subcommand("query", "evaluate a path expression");
  query->add_option("--graph", o.graph, "graph JSON file")->required();
  query->add_option("--expr,expr", o.expr, "path expression")->required();
  query->add_option("--max-paths", o.max_paths, "result cap");
  query->add_flag("--json", o.json, "structured output");

  auto* apply = app.add_subcommand("apply", "evaluate policies and write the visible graph");
  apply->add_option("--graph", o.graph, "graph JSON file")->required();
  apply->add_option("--policy", o.policies, "policy XML file (repeatable)");
  apply->add_option("--vcd", o.vcd, "vertex category dictionary JSON");
  apply->add_option("--merge-table", o.merge_table, "edge merging table JSON");
  apply->add_option("--attr", o.attrs, "requester attribute key=value (repeatable)");
  apply->add_option("--out", o.out, "write the transformed graph here");
  apply->add_option("--dot", o.dot, "also write Graphviz DOT here");
  apply->add_option("--log", o.log, "write the transformation log (JSON lines) here");
  apply->add_option("--query", o.expr, "path expression run on the visible graph");
  apply->add_option("--max-paths", o.max_paths, "result cap");
  apply->add_flag("--json", o.json, "print the decision as JSON");

  auto* bench = app.add_subcommand("bench", "workload generation and experiments");
  bench->require_subcommand(1);
  auto bench_opts = [&](CLI::App* c) {
    c->add_option("--seed", o.seed, "random seed");
    c->add_option("--count", o.count, "number of graphs");
    c->add_option("--out", o.out, "output directory");
    c->add_flag("--json", o.json, "structured output");
  };
  auto* gen = bench->add_subcommand("gen-graphs", "write random graphs");
  bench_opts(gen);
  auto* expr = bench->add_subcommand("expressiveness", "compare partition languages");
  bench_opts(expr);
  expr->add_option("--partitions", o.partitions, "number of sampled partitions");
  auto* combine = bench->add_subcommand("combine", "time policy combination");
  bench_opts(combine);
  combine->add_option("--graph", o.graph, "graph to use instead of a generated one");
  combine->add_option("--repetitions", o.repetitions, "runs per measurement");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    // Flags are parsed before the failure point only partially; look for
    // --json directly so error output stays machine readable.
    for (int i = 1; i < argc; ++i)
      if (std::string_view(argv[i]) == "--json") o.json = true;
    return report(o, "usage", e.what(), kInput);
  }

  try {
    if (validate->parsed()) return cmd_validate(o);
    if (query->parsed()) return cmd_query(o);
    if (apply->parsed()) return cmd_apply(o);
    if (gen->parsed()) return cmd_gen_graphs(o);
    if (expr->parsed()) return cmd_expressiveness(o);
    if (combine->parsed()) return cmd_combine(o);
  } catch (const IoError& e) {
    return report(o, "io", e.what(), kIo);
  } catch (const SyntaxError& e) {
    return report(o, "syntax", e.what(), kInput);
  } catch (const DocumentError& e) {
    return report(o, "document", e.what(), kInput);
  } catch (const Error& e) {
    return report(o, "error", e.what(), kInput);
  }
  return kInput;
}
