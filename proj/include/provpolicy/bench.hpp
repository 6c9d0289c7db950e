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

// Workload generation and experiment harness: random schema-valid graphs,
// random connected partitions, the expressiveness comparison against the
// enumeration-only baseline, and policy-combination timing.
//
// Randomness comes straight from std::mt19937_64 output (not from the
// standard distributions, whose results differ between library vendors), so
// a seed gives the same graphs everywhere.

#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <boost/dynamic_bitset.hpp>
#include <nlohmann/json.hpp>

#include "provpolicy/error.hpp"
#include "provpolicy/evaluator.hpp"
#include "provpolicy/graph.hpp"
#include "provpolicy/partition.hpp"
#include "provpolicy/path_expr.hpp"
#include "provpolicy/policy.hpp"

namespace provpolicy {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, n). n must be positive.
  std::size_t below(std::size_t n) { return static_cast<std::size_t>(engine_() % n); }

  /// True with probability p.
  bool chance(double p) {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53 < p;
  }

  template <typename T>
  const T& pick(const std::vector<T>& xs) { return xs[below(xs.size())]; }

  template <typename T>
  void shuffle(std::vector<T>& xs) {
    for (std::size_t i = xs.size(); i > 1; --i) std::swap(xs[i - 1], xs[below(i)]);
  }

  std::uint64_t next() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

struct GenConfig {
  std::size_t agents = 3;
  std::size_t artifacts = 10;
  std::size_t processes = 8;
  double edge_density = 0.1;       // chance of each extra later -> earlier edge
  double attribute_density = 0.4;  // chance an entity carries an attribute
  std::uint64_t seed = 1;
  std::size_t graph_count = 20;
};

inline nlohmann::ordered_json config_to_json(const GenConfig& c) {
  nlohmann::ordered_json j;
  j["agents"] = c.agents;
  j["artifacts"] = c.artifacts;
  j["processes"] = c.processes;
  j["edge_density"] = c.edge_density;
  j["attribute_density"] = c.attribute_density;
  j["seed"] = c.seed;
  j["graph_count"] = c.graph_count;
  return j;
}

namespace detail {

inline const std::vector<std::string>& process_stems() {
  static const std::vector<std::string> stems = {"upload", "replace", "submit",
                                                 "review", "grade", "confirm"};
  return stems;
}

inline const std::vector<std::string>& date_values() {
  static const std::vector<std::string> dates = {
      "1/1/2016", "31/12/2016", "15/3/2016", "2/6/2016", "20/11/2015", "7/2/2017"};
  return dates;
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  // splitmix64 finaliser
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace detail

/// One random graph. Entities get a random chronological order; every
/// entity after the first is linked to at least one earlier entity, and
/// each later/earlier pair gets an extra edge with probability
/// edge_density. Every process is controlled by an agent.
inline ProvenanceGraph gen_graph(const GenConfig& cfg, std::size_t index) {
  if (cfg.artifacts + cfg.processes == 0)
    throw Error("infeasible config: no artifacts or processes");
  if (cfg.agents > 0 && cfg.processes == 0)
    throw Error("infeasible config: agents need at least one process");
  if (cfg.edge_density < 0 || cfg.edge_density > 1 || cfg.attribute_density < 0 ||
      cfg.attribute_density > 1)
    throw Error("infeasible config: densities must lie in [0, 1]");

  Rng rng(detail::mix_seed(cfg.seed, index));
  ProvenanceGraph g("G" + std::to_string(index + 1));

  std::vector<Vertex> entities;
  for (std::size_t i = 0; i < cfg.artifacts; ++i)
    entities.push_back({"o" + std::to_string(i + 1) + "v" + std::to_string(1 + rng.below(3)),
                        VertexType::Artifact, "", std::nullopt});
  std::map<std::string, std::size_t> stem_count;
  for (std::size_t i = 0; i < cfg.processes; ++i) {
    const std::string& stem = rng.pick(detail::process_stems());
    entities.push_back({"", VertexType::Process,
                        stem + std::to_string(++stem_count[stem]), std::nullopt});
  }
  for (auto& v : entities) {
    if (v.type == VertexType::Artifact) v.name = v.id;
    v.id = v.name;
  }
  rng.shuffle(entities);
  for (const auto& v : entities) g.add_vertex(v);

  std::vector<std::string> agents;
  for (std::size_t i = 0; i < cfg.agents; ++i) {
    agents.push_back("au" + std::to_string(i + 1));
    g.add_vertex({agents.back(), VertexType::Agent, agents.back(), std::nullopt});
  }

  // entities[i] is later than entities[j] for i > j; edges point back in time.
  auto link = [&](std::size_t later, std::size_t earlier) {
    const Vertex& a = entities[later];
    const Vertex& b = entities[earlier];
    g.add_edge({a.id, b.id, *schema_label_for(a.type, b.type), std::nullopt});
  };
  for (std::size_t i = 1; i < entities.size(); ++i) {
    const std::size_t anchor = rng.below(i);
    link(i, anchor);
    for (std::size_t j = 0; j < i; ++j)
      if (j != anchor && rng.chance(cfg.edge_density)) link(i, j);
  }

  std::size_t next_agent = 0;
  for (const auto& v : entities) {
    if (v.type != VertexType::Process || agents.empty()) continue;
    // Round robin first so that every agent acts at least once.
    const std::string& who =
        next_agent < agents.size() ? agents[next_agent++] : rng.pick(agents);
    g.add_edge({v.id, who, EdgeLabel::WasControlledBy, std::nullopt});
  }

  std::size_t att = 0;
  auto attach = [&](const std::string& owner, VertexType type) {
    if (!rng.chance(cfg.attribute_density)) return;
    std::string name, value;
    switch (rng.below(3)) {
      case 0:
        name = "date";
        value = rng.pick(detail::date_values());
        break;
      case 1:
        name = "owner";
        value = agents.empty() ? "nobody" : rng.pick(agents);
        break;
      default:
        name = "Attri";
        value = type == VertexType::Process ? "Attri" : "public";
        break;
    }
    const std::string id = "att" + std::to_string(++att);
    g.add_vertex({id, VertexType::Attribute, name, value});
    g.add_edge({owner, id, EdgeLabel::HasAttributes, std::nullopt});
  };
  for (const auto& v : entities) attach(v.id, v.type);
  for (const auto& a : agents) attach(a, VertexType::Agent);
  return g;
}

inline std::vector<ProvenanceGraph> gen_graphs(const GenConfig& cfg) {
  std::vector<ProvenanceGraph> out;
  for (std::size_t i = 0; i < cfg.graph_count; ++i) out.push_back(gen_graph(cfg, i));
  return out;
}

// ---------------------------------------------------------------------------
// Partition sampling

namespace detail {

inline void add_hull(const ProvenanceGraph& g, std::vector<bool>& members) {
  const std::vector<bool> core = members;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (!core[v]) continue;
    for_each_neighbor(g, v, [&](VertexIndex w) {
      const VertexType t = g.vertex(w).type;
      if (t == VertexType::Agent || t == VertexType::Attribute) members[w] = true;
    });
  }
}

}  // namespace detail

/// Random connected partitions. Each one is a random walk from a random
/// entity, either over any non-ha edge or forward in time only, optionally
/// closed under adjacent agents and attributes.
inline std::vector<Partition> sample_partitions(const ProvenanceGraph& g, std::size_t n,
                                                std::uint64_t seed) {
  if (n == 0) throw Error("sample_partitions: n must be at least 1");
  std::vector<VertexIndex> entities;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    if (g.vertex(v).type != VertexType::Attribute) entities.push_back(v);
  if (entities.empty()) throw Error("sample_partitions: graph has no entities");

  Rng rng(seed);
  std::vector<Partition> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<bool> members(g.vertex_count(), false);
    VertexIndex v = rng.pick(entities);
    members[v] = true;
    const bool forward = rng.chance(0.5);
    const std::size_t steps = 1 + rng.below(5);
    for (std::size_t s = 0; s < steps; ++s) {
      std::vector<VertexIndex> next;
      for_each_hop(g, v, true, !forward, [&](const Hop& h) { next.push_back(h.to); });
      if (next.empty()) break;
      std::sort(next.begin(), next.end());
      v = rng.pick(next);
      members[v] = true;
    }
    if (rng.chance(0.5)) detail::add_hull(g, members);
    out.push_back(make_partition(g, members));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Expressiveness
//
// A partition is expressible when some partition expression resolves to
// exactly its vertex set. The languages compared:
//
//  * full: vertices(S), directed(S // S), general(S // S), subgraphs(S // S)
//    with S any single name, digit-free stem, type, typed name, attribute
//    value, "*", or (subgraphs only) START / END; plus vertices() over an
//    alternation of at most `cap` names, plain or typed.
//  * baseline: vertices() over an alternation of at most `cap` names of
//    non-attribute vertices, and directed(S // S) with S a name, type or
//    typed name. No attribute tests, no subgraphs, no terminals.
//
// The baseline's expressions are a subset of the full language's, so
// baseline-expressible implies expressible.

using VertexSet = boost::dynamic_bitset<>;

namespace detail {

inline std::string name_stem(const std::string& name) {
  std::size_t end = name.size();
  while (end > 0 && name[end - 1] >= '0' && name[end - 1] <= '9') --end;
  if (end == 0 || end == name.size()) return {};
  for (std::size_t i = 0; i < end; ++i)
    if (name[i] >= '0' && name[i] <= '9') return {};
  return name.substr(0, end);
}

}  // namespace detail

/// Every single-literal selector of the full language that matches at least
/// one vertex of `g`, without terminals.
inline std::vector<Selector> literal_selectors(const ProvenanceGraph& g, bool baseline = false) {
  std::set<std::string> seen;
  std::vector<Selector> out;
  auto add = [&](NodeTest t) {
    Selector s{std::move(t), std::nullopt};
    if (seen.insert(to_string(s)).second) out.push_back(std::move(s));
  };
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    const Vertex& x = g.vertex(v);
    if (baseline && x.type == VertexType::Attribute) continue;
    add(TypedV{x.type});
    if (!x.name.empty()) {
      add(NameLiteral{{x.name}});
      add(TypedVNamed{x.type, "G_i", {x.name}});
      if (!baseline) {
        const std::string stem = detail::name_stem(x.name);
        if (!stem.empty()) {
          add(NameLiteral{{stem}});
          add(TypedVNamed{x.type, "G_i", {stem}});
        }
      }
    }
    if (!baseline)
      for (const auto& [name, value] : attributes_of(g, v))
        add(AttV{x.type, "G_i", {value}});
  }
  if (!baseline) add(Wildcard{});
  return out;
}

/// Precomputed resolutions of every two-selector expression on one graph.
class ExpressivenessIndex {
 public:
  explicit ExpressivenessIndex(const ProvenanceGraph& g, std::size_t cap = 8)
      : g_(g), n_(g.vertex_count()), cap_(cap) {
    build_reach();
    build_blocks();

    auto match_sets = [&](const std::vector<Selector>& sels) {
      std::set<VertexSet> sets;
      for (const auto& s : sels) {
        VertexSet m(n_);
        for (VertexIndex v : select(g_, s)) m.set(v);
        if (m.any()) sets.insert(m);
      }
      return std::vector<VertexSet>(sets.begin(), sets.end());
    };
    const auto full = match_sets(literal_selectors(g_));
    const auto base = match_sets(literal_selectors(g_, true));

    for (const auto& s : full) full_.insert(s);  // vertices(S)
    for (const auto& s : full)
      for (const auto& t : full) {
        full_.insert(directed(s, t));
        full_.insert(general(s, t));
      }
    auto with_terminals = full;
    VertexSet starts(n_), ends(n_);
    for (VertexIndex v = 0; v < n_; ++v) {
      if (is_chronological_start(g_, v)) starts.set(v);
      if (is_chronological_end(g_, v)) ends.set(v);
    }
    if (starts.any()) with_terminals.push_back(starts);
    if (ends.any()) with_terminals.push_back(ends);
    for (const auto& s : with_terminals)
      for (const auto& t : with_terminals) full_.insert(subgraph(s, t));

    for (const auto& s : base)
      for (const auto& t : base) base_.insert(directed(s, t));
  }

  bool paclp(const Partition& p) const {
    const VertexSet s = to_set(p);
    if (s.none()) return false;
    if (full_.contains(s)) return true;
    return name_cover(s, false, std::nullopt) ||
           (single_type(s) && name_cover(s, false, g_.vertex(s.find_first()).type));
  }

  bool lpac(const Partition& p) const {
    const VertexSet s = to_set(p);
    if (s.none()) return false;
    if (base_.contains(s)) return true;
    return name_cover(s, true, std::nullopt);
  }

  /// Vertex set of directed(S // T), general(S // T), subgraphs(S // T).
  VertexSet directed(const VertexSet& s, const VertexSet& t) const {
    VertexSet out(n_);
    for (auto a = s.find_first(); a != VertexSet::npos; a = s.find_next(a))
      for (auto b = t.find_first(); b != VertexSet::npos; b = t.find_next(b))
        if (reach2_[a].test(b)) out |= fwd_[a] & bwd_[b];
    return out;
  }

  VertexSet general(const VertexSet& s, const VertexSet& t) const {
    VertexSet out(n_);
    for (auto a = s.find_first(); a != VertexSet::npos; a = s.find_next(a))
      for (auto b = t.find_first(); b != VertexSet::npos; b = t.find_next(b))
        if (a != b) out |= general_pair(a, b);
    return out;
  }

  VertexSet subgraph(const VertexSet& s, const VertexSet& t) const {
    VertexSet after(n_), before(n_);
    for (auto a = s.find_first(); a != VertexSet::npos; a = s.find_next(a)) after |= fwd_[a];
    for (auto b = t.find_first(); b != VertexSet::npos; b = t.find_next(b)) before |= bwd_[b];
    VertexSet core = after & before, out = core;
    for (auto v = core.find_first(); v != VertexSet::npos; v = core.find_next(v))
      out |= hull_[v];
    return out;
  }

 private:
  VertexSet to_set(const Partition& p) const {
    VertexSet s(n_);
    for (const auto& id : p.vertex_ids) s.set(g_.index_of(id));
    return s;
  }

  bool single_type(const VertexSet& s) const {
    const VertexType t = g_.vertex(s.find_first()).type;
    for (auto v = s.find_first(); v != VertexSet::npos; v = s.find_next(v))
      if (g_.vertex(v).type != t) return false;
    return true;
  }

  // Is `s` the union of at most cap_ name literals (optionally restricted to
  // one type), each matching only inside `s`?
  bool name_cover(const VertexSet& s, bool baseline,
                  std::optional<VertexType> type) const {
    std::set<std::string> names;
    for (VertexIndex v = 0; v < n_; ++v) {
      const Vertex& x = g_.vertex(v);
      if (x.name.empty() || (baseline && x.type == VertexType::Attribute)) continue;
      if (type && x.type != *type) continue;
      names.insert(x.name);
    }
    std::vector<VertexSet> usable;
    for (const auto& name : names) {
      VertexSet m(n_);
      for (VertexIndex v = 0; v < n_; ++v) {
        const Vertex& x = g_.vertex(v);
        if (type && x.type != *type) continue;
        if (name_matches(name, x.name)) m.set(v);
      }
      if (m.is_subset_of(s)) usable.push_back(m);
    }
    VertexSet all(n_);
    for (const auto& m : usable) all |= m;
    if (all != s) return false;
    // Smallest cover by depth-first search; the lists are short.
    std::function<bool(const VertexSet&, std::size_t)> search =
        [&](const VertexSet& covered, std::size_t left) -> bool {
      if (covered == s) return true;
      if (left == 0) return false;
      // Some literal must cover the first uncovered vertex.
      const auto need = (s - covered).find_first();
      for (const auto& m : usable)
        if (m.test(need) && search(covered | m, left - 1)) return true;
      return false;
    };
    return search(VertexSet(n_), cap_);
  }

  void build_reach() {
    fwd_.assign(n_, VertexSet(n_));
    bwd_.assign(n_, VertexSet(n_));
    reach2_.assign(n_, VertexSet(n_));
    hull_.assign(n_, VertexSet(n_));
    for (VertexIndex v = 0; v < n_; ++v) {
      fwd_[v] = closure_set(v, true);
      bwd_[v] = closure_set(v, false);
      for_each_neighbor(v, [&](VertexIndex w) {
        const VertexType t = g_.vertex(w).type;
        if (t == VertexType::Agent || t == VertexType::Attribute) hull_[v].set(w);
      });
    }
    for (VertexIndex v = 0; v < n_; ++v)
      for_each_hop(g_, v, true, false, [&](const Hop& h) {
        VertexSet beyond = fwd_[h.to];
        beyond.reset(h.to);
        reach2_[v] |= beyond;
      });
  }

  template <typename Fn>
  void for_each_neighbor(VertexIndex v, Fn&& fn) const {
    for (EdgeIndex e : g_.out_edges(v)) fn(g_.dst_index(e));
    for (EdgeIndex e : g_.in_edges(v)) fn(g_.src_index(e));
  }

  VertexSet closure_set(VertexIndex s, bool cause) const {
    VertexSet seen(n_);
    std::vector<VertexIndex> stack{s};
    seen.set(s);
    while (!stack.empty()) {
      VertexIndex v = stack.back();
      stack.pop_back();
      for_each_hop(g_, v, cause, !cause, [&](const Hop& h) {
        if (!seen.test(h.to)) {
          seen.set(h.to);
          stack.push_back(h.to);
        }
      });
    }
    return seen;
  }

  // Biconnected components of the undirected non-ha graph.
  void build_blocks() {
    std::vector<std::vector<VertexIndex>> adj(n_);
    for (VertexIndex v = 0; v < n_; ++v)
      for_each_hop(g_, v, true, true, [&](const Hop& h) { adj[v].push_back(h.to); });
    for (auto& a : adj) {
      std::sort(a.begin(), a.end());
      a.erase(std::unique(a.begin(), a.end()), a.end());
    }
    std::vector<std::size_t> disc(n_, 0), low(n_, 0);
    std::size_t time = 0;
    std::vector<std::pair<VertexIndex, VertexIndex>> edge_stack;
    std::function<void(VertexIndex, VertexIndex)> dfs = [&](VertexIndex u, VertexIndex parent) {
      disc[u] = low[u] = ++time;
      for (VertexIndex w : adj[u]) {
        if (!disc[w]) {
          edge_stack.emplace_back(u, w);
          dfs(w, u);
          low[u] = std::min(low[u], low[w]);
          if (low[w] >= disc[u]) {
            VertexSet block(n_);
            for (;;) {
              auto [a, b] = edge_stack.back();
              edge_stack.pop_back();
              block.set(a);
              block.set(b);
              if (a == u && b == w) break;
            }
            blocks_.push_back(block);
          }
        } else if (w != parent && disc[w] < disc[u]) {
          edge_stack.emplace_back(u, w);
          low[u] = std::min(low[u], disc[w]);
        }
      }
    };
    for (VertexIndex v = 0; v < n_; ++v)
      if (!disc[v] && !adj[v].empty()) dfs(v, v);

    blocks_of_.assign(n_, {});
    for (std::size_t b = 0; b < blocks_.size(); ++b)
      for (auto v = blocks_[b].find_first(); v != VertexSet::npos; v = blocks_[b].find_next(v))
        blocks_of_[v].push_back(b);
  }

  // Vertices on some simple path of at least three vertices between a and
  // b: the blocks along the block-cut tree path, unless that path is one
  // bare edge.
  VertexSet general_pair(VertexIndex a, VertexIndex b) const {
    VertexSet out(n_);
    if (blocks_of_[a].empty() || blocks_of_[b].empty()) return out;
    const std::size_t nb = blocks_.size();
    auto node_of = [&](VertexIndex v) {
      return blocks_of_[v].size() > 1 ? nb + v : blocks_of_[v].front();
    };
    auto neighbours = [&](std::size_t node, auto&& fn) {
      if (node >= nb) {
        for (std::size_t b : blocks_of_[node - nb]) fn(b);
      } else {
        const VertexSet& bl = blocks_[node];
        for (auto v = bl.find_first(); v != VertexSet::npos; v = bl.find_next(v))
          if (blocks_of_[v].size() > 1) fn(nb + v);
      }
    };
    const std::size_t from = node_of(a), to = node_of(b);
    std::map<std::size_t, std::size_t> parent{{from, from}};
    std::vector<std::size_t> queue{from};
    for (std::size_t i = 0; i < queue.size() && !parent.contains(to); ++i)
      neighbours(queue[i], [&](std::size_t m) {
        if (parent.emplace(m, queue[i]).second) queue.push_back(m);
      });
    if (!parent.contains(to)) return out;
    std::vector<std::size_t> path_blocks;
    for (std::size_t node = to;; node = parent[node]) {
      if (node < nb) path_blocks.push_back(node);
      if (node == from) break;
    }
    if (path_blocks.size() == 1 && blocks_[path_blocks.front()].count() == 2) return out;
    for (std::size_t b : path_blocks) out |= blocks_[b];
    return out;
  }

  const ProvenanceGraph& g_;
  std::size_t n_;
  std::size_t cap_;
  std::vector<VertexSet> fwd_, bwd_, reach2_, hull_;
  std::vector<VertexSet> blocks_;
  std::vector<std::vector<std::size_t>> blocks_of_;
  std::set<VertexSet> full_, base_;
};

inline bool expressible_paclp(const ProvenanceGraph& g, const Partition& p) {
  return ExpressivenessIndex(g).paclp(p);
}

inline bool expressible_lpac(const ProvenanceGraph& g, const Partition& p) {
  return ExpressivenessIndex(g).lpac(p);
}

struct ExpressivenessRow {
  std::size_t partition_id = 0;
  std::string graph_id;
  std::size_t size = 0;
  bool paclp = false;
  bool lpac = false;
};

struct ExpressivenessReport {
  std::vector<ExpressivenessRow> rows;
  std::size_t paclp_count = 0;
  std::size_t lpac_count = 0;

  std::string csv() const {
    std::string out = "partition_id,size,paclp,lpac\n";
    for (const auto& r : rows)
      out += std::to_string(r.partition_id) + "," + std::to_string(r.size) + "," +
             (r.paclp ? "1" : "0") + "," + (r.lpac ? "1" : "0") + "\n";
    return out;
  }
};

/// Samples `partitions` partitions spread evenly over the graphs and judges
/// each one.
inline ExpressivenessReport run_expressiveness(const std::vector<ProvenanceGraph>& graphs,
                                               std::size_t partitions, std::uint64_t seed) {
  if (graphs.empty()) throw Error("run_expressiveness: no graphs");
  ExpressivenessReport rep;
  std::size_t id = 0;
  for (std::size_t gi = 0; gi < graphs.size(); ++gi) {
    const std::size_t quota =
        partitions / graphs.size() + (gi < partitions % graphs.size() ? 1 : 0);
    if (quota == 0) continue;
    const ExpressivenessIndex index(graphs[gi]);
    for (const auto& p :
         sample_partitions(graphs[gi], quota, detail::mix_seed(seed, 1000 + gi))) {
      ExpressivenessRow r{id++, graphs[gi].id(), p.vertex_ids.size(), index.paclp(p),
                          index.lpac(p)};
      rep.paclp_count += r.paclp;
      rep.lpac_count += r.lpac;
      rep.rows.push_back(std::move(r));
    }
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Policy combination timing

enum class Scenario { AllAbsolutePermit, AllDeny, Mixed };

constexpr std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::AllAbsolutePermit: return "all-absolute-permit";
    case Scenario::AllDeny: return "all-deny";
    case Scenario::Mixed: return "mixed";
  }
  return "?";
}

/// One category per process stem present in `g`.
inline Vcd bench_vcd(const ProvenanceGraph& g) {
  std::set<std::string> stems;
  for (const auto& v : g.vertices())
    if (v.type == VertexType::Process)
      if (auto s = detail::name_stem(v.name); !s.empty()) stems.insert(s);
  std::vector<VcdCategory> cats;
  for (const auto& s : stems)
    cats.push_back({s, s + "ed",
                    {Selector{TypedVNamed{VertexType::Process, "G_i", {s}}, std::nullopt}},
                    VertexType::Process});
  return Vcd(std::move(cats));
}

/// Random policies over `g`. Deny policies hide their partition by removal
/// (replacing only single vertices, which cannot create cycles); every
/// policy carries a requester condition the bench request satisfies.
inline std::vector<Policy> gen_policies(const ProvenanceGraph& g, std::size_t count,
                                        Scenario scenario, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<std::string> names;
  for (const auto& v : g.vertices())
    if (v.type != VertexType::Attribute) names.push_back(v.name);
  std::sort(names.begin(), names.end());
  if (names.empty()) throw Error("gen_policies: graph has no entities");

  std::vector<Policy> out;
  for (std::size_t i = 0; i < count; ++i) {
    Policy p;
    char buf[32];
    std::snprintf(buf, sizeof buf, "p%03zu", i);
    p.id = buf;
    switch (scenario) {
      case Scenario::AllAbsolutePermit: p.effect = Effect::AbsolutePermit; break;
      case Scenario::AllDeny: p.effect = Effect::Deny; break;
      case Scenario::Mixed:
        p.effect = i % 2 == 0 ? Effect::Deny : Effect::AbsolutePermit;
        break;
    }
    p.target.graph_ids.push_back(g.id());
    p.condition.attributes.push_back({"role", CompareOp::Equal, "reader"});

    const std::string a = rng.pick(names), b = rng.pick(names);
    std::string text;
    Transformation t;
    switch (rng.below(4)) {
      case 0: text = "vertices(" + a + ")"; break;
      case 1: text = "subgraphs(" + a + " // " + b + ")"; break;
      case 2: text = "directed(" + a + " // " + b + ")"; break;
      default: text = "subgraphs(" + a + " /following::*)"; break;
    }
    t.partition = parse_partition(text);
    t.scope = Scope::Original;
    t.mode = text.starts_with("vertices") && rng.chance(0.5) ? Mode::Replace : Mode::Remove;
    t.label = rng.chance(0.5) ? DependencyLabel::OriginalDependency
                              : DependencyLabel::FalseDependency;
    if (t.mode == Mode::Replace) {
      // Needs a category: use the vertex's stem category if there is one.
      const auto stem = detail::name_stem(a);
      if (stem.empty() || g.vertex(a).type != VertexType::Process) t.mode = Mode::Remove;
    }
    p.transformations.push_back(std::move(t));
    if (i % 10 == 9) p.condition.partitions.push_back(parse_partition("vertices(*)"));
    out.push_back(std::move(p));
  }
  return out;
}

struct TimingRow {
  Scenario scenario;
  std::size_t policy_count = 0;
  double mean_ns = 0;
  double median_ns = 0;
};

struct TimingReport {
  std::vector<TimingRow> rows;

  std::string csv() const {
    std::string out = "scenario,policy_count,mean_ns,median_ns\n";
    for (const auto& r : rows) {
      std::ostringstream os;
      os << to_string(r.scenario) << "," << r.policy_count << ","
         << static_cast<long long>(r.mean_ns) << "," << static_cast<long long>(r.median_ns)
         << "\n";
      out += os.str();
    }
    return out;
  }
};

/// Times evaluate() over growing prefixes of the policy list.
inline std::vector<TimingRow> bench_combination(const std::vector<Policy>& policies,
                                                const ProvenanceGraph& g, Scenario scenario,
                                                const std::vector<std::size_t>& counts,
                                                std::size_t repetitions) {
  const Vcd vcd = bench_vcd(g);
  const EdgeMergeTable emt = default_merge_table();
  AccessRequest req{{{"role", "reader"}}, g.id(), std::nullopt};
  std::vector<TimingRow> rows;
  for (std::size_t k : counts) {
    const std::vector<Policy> prefix(policies.begin(),
                                     policies.begin() + std::min(k, policies.size()));
    std::vector<double> ns;
    for (std::size_t r = 0; r < std::max<std::size_t>(repetitions, 1); ++r) {
      const auto t0 = std::chrono::steady_clock::now();
      auto result = evaluate(req, prefix, g, vcd, emt);
      const auto t1 = std::chrono::steady_clock::now();
      ns.push_back(std::chrono::duration<double, std::nano>(t1 - t0).count());
      (void)result;
    }
    std::sort(ns.begin(), ns.end());
    double sum = 0;
    for (double x : ns) sum += x;
    const double median = ns.size() % 2 ? ns[ns.size() / 2]
                                        : (ns[ns.size() / 2 - 1] + ns[ns.size() / 2]) / 2;
    rows.push_back({scenario, k, sum / ns.size(), median});
  }
  return rows;
}

}  // namespace provpolicy
