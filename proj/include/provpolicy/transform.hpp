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

// Graph transformations: scope expansion, cluster removal with edge
// bridging, and cluster replacement (node contraction).
//
// Every operation builds a new graph; inputs are never modified.

#pragma once

#include <algorithm>
#include <deque>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "provpolicy/error.hpp"
#include "provpolicy/graph.hpp"
#include "provpolicy/partition.hpp"
#include "provpolicy/policy.hpp"

namespace provpolicy {

struct Cluster {
  std::vector<std::string> vertex_ids;  // sorted
  std::optional<std::string> category;

  friend bool operator==(const Cluster&, const Cluster&) = default;
};

struct TransformResult {
  ProvenanceGraph graph;
  std::vector<nlohmann::ordered_json> log;

  /// The log as JSON lines.
  std::string log_jsonl() const {
    std::string out;
    for (const auto& rec : log) out += rec.dump() + "\n";
    return out;
  }
};

namespace detail {

inline std::vector<std::string> ids_of(const ProvenanceGraph& g,
                                       const std::vector<bool>& mask) {
  std::vector<std::string> out;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    if (mask[v]) out.push_back(g.vertex(v).id);
  std::sort(out.begin(), out.end());
  return out;
}

// Undirected adjacency over every edge, ha included.
template <typename Fn>
void for_each_neighbor(const ProvenanceGraph& g, VertexIndex v, Fn&& fn) {
  for (EdgeIndex e : g.out_edges(v)) fn(g.dst_index(e));
  for (EdgeIndex e : g.in_edges(v)) fn(g.src_index(e));
}

}  // namespace detail

/// Turns a resolved partition into the clusters a transformation acts on.
///
/// Original keeps the partition as one cluster. Conjunction grows it into
/// neighbours sharing a category with a current member. Extension yields
/// every connected same-category group in the graph for each category of a
/// base member. Under Conjunction and Extension a base vertex in no category
/// becomes a singleton cluster and a warning is appended to `warnings`.
inline std::vector<Cluster> expand_scope(const ProvenanceGraph& g,
                                         const Partition& base, Scope scope,
                                         const Vcd& vcd,
                                         std::vector<std::string>* warnings = nullptr) {
  if (base.empty()) return {};
  if (scope == Scope::Original) return {Cluster{base.vertex_ids, std::nullopt}};

  const std::size_t n = g.vertex_count();
  std::vector<std::vector<std::size_t>> cats(n);
  for (VertexIndex v = 0; v < n; ++v) cats[v] = vcd.categories_of(g, v);

  std::vector<Cluster> out;
  std::vector<VertexIndex> categorized;
  for (const auto& id : base.vertex_ids) {
    const VertexIndex v = g.index_of(id);
    if (cats[v].empty()) {
      if (warnings)
        warnings->push_back("vertex '" + id + "' has no category; kept as a singleton cluster");
      out.push_back(Cluster{{id}, std::nullopt});
    } else {
      categorized.push_back(v);
    }
  }
  if (categorized.empty()) return out;

  if (scope == Scope::Conjunction) {
    std::vector<bool> member(n, false), cat_seen(vcd.categories().size(), false);
    std::deque<VertexIndex> queue;
    for (VertexIndex v : categorized) {
      member[v] = true;
      queue.push_back(v);
      for (auto c : cats[v]) cat_seen[c] = true;
    }
    // Absorbing a vertex can add categories, which can make vertices already
    // looked at eligible, so rescan until nothing changes.
    bool changed = true;
    while (changed) {
      changed = false;
      for (VertexIndex v = 0; v < n; ++v) {
        if (!member[v]) continue;
        detail::for_each_neighbor(g, v, [&](VertexIndex w) {
          if (member[w]) return;
          for (auto c : cats[w]) {
            if (!cat_seen[c]) continue;
            member[w] = true;
            for (auto c2 : cats[w]) cat_seen[c2] = true;
            changed = true;
            return;
          }
        });
      }
    }
    std::optional<std::string> category;
    for (std::size_t c = 0; c < cat_seen.size() && !category; ++c)
      for (VertexIndex v : categorized)
        if (std::find(cats[v].begin(), cats[v].end(), c) != cats[v].end()) {
          category = vcd.categories()[c].name;
          break;
        }
    out.push_back(Cluster{detail::ids_of(g, member), category});
  } else {
    std::set<std::size_t> wanted;
    for (VertexIndex v : categorized) wanted.insert(cats[v].begin(), cats[v].end());
    for (std::size_t c : wanted) {
      auto in_cat = [&](VertexIndex v) {
        return std::find(cats[v].begin(), cats[v].end(), c) != cats[v].end();
      };
      std::vector<bool> seen(n, false);
      for (VertexIndex s = 0; s < n; ++s) {
        if (seen[s] || !in_cat(s)) continue;
        std::vector<bool> comp(n, false);
        std::deque<VertexIndex> queue{s};
        seen[s] = comp[s] = true;
        while (!queue.empty()) {
          VertexIndex v = queue.front();
          queue.pop_front();
          detail::for_each_neighbor(g, v, [&](VertexIndex w) {
            if (seen[w] || !in_cat(w)) return;
            seen[w] = comp[w] = true;
            queue.push_back(w);
          });
        }
        out.push_back(Cluster{detail::ids_of(g, comp), vcd.categories()[c].name});
      }
    }
  }
  return out;
}

namespace detail {

// Marks the cluster in `g`. Returns nullopt when no member is present (the
// cluster was already removed); throws when only some are.
inline std::optional<std::vector<bool>> cluster_mask(const ProvenanceGraph& g,
                                                     const Cluster& c) {
  std::vector<bool> mask(g.vertex_count(), false);
  std::vector<std::string> missing;
  for (const auto& id : c.vertex_ids) {
    if (auto v = g.find(id))
      mask[*v] = true;
    else
      missing.push_back(id);
  }
  if (missing.size() == c.vertex_ids.size()) return std::nullopt;
  if (!missing.empty())
    throw TransformError("cluster refers to unknown vertex '" + missing.front() + "'");
  return mask;
}

// Attribute vertices outside `gone` whose every ha source is in `gone`.
inline std::vector<bool> orphaned_attributes(const ProvenanceGraph& g,
                                             const std::vector<bool>& gone) {
  std::vector<bool> orphan(g.vertex_count(), false);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (gone[v] || g.vertex(v).type != VertexType::Attribute) continue;
    bool any = false, all = true;
    for (EdgeIndex e : g.in_edges(v)) {
      any = true;
      if (!gone[g.src_index(e)]) all = false;
    }
    orphan[v] = any && all;
  }
  return orphan;
}

inline nlohmann::ordered_json edge_json(const Edge& e) {
  nlohmann::ordered_json j;
  j["src"] = e.src;
  j["dst"] = e.dst;
  j["label"] = label_name(e.label);
  return j;
}

// Copies the vertices not in `drop`, and the edges between them, then adds
// `extra` edges. Exact duplicates are collapsed.
inline ProvenanceGraph rebuild(const ProvenanceGraph& g,
                               const std::vector<bool>& drop,
                               const std::vector<Vertex>& extra_vertices,
                               const std::vector<Edge>& extra_edges) {
  ProvenanceGraph out(g.id());
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    if (!drop[v]) out.add_vertex(g.vertex(v));
  for (const auto& v : extra_vertices) out.add_vertex(v);
  std::set<Edge> seen;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    auto s = g.find(edge.src), d = g.find(edge.dst);
    if (!s || !d || drop[*s] || drop[*d]) continue;
    if (seen.insert(edge).second) out.add_edge(edge);
  }
  for (const auto& edge : extra_edges)
    if (seen.insert(edge).second) out.add_edge(edge);
  return out;
}

}  // namespace detail

/// Deletes a cluster and bridges around it.
///
/// For each edge u -> c entering the cluster and each edge c' -> w leaving
/// it such that c' is reachable from c inside the cluster, an edge u -> w is
/// added. Under OriginalDependency its label is the merge-table fold of the
/// labels along the internal walk; when walks disagree, or the result is not
/// legal for (u, w), wasCausedBy is used. FalseDependency always uses
/// wasCausedBy. Attributes left without an owner are removed as well.
///
/// A cluster none of whose vertices is present is a no-op.
inline TransformResult apply_remove(const ProvenanceGraph& g, const Cluster& c,
                                    DependencyLabel label,
                                    const EdgeMergeTable& emt) {
  nlohmann::ordered_json rec;
  rec["op"] = "remove";
  rec["cluster"] = c.vertex_ids;
  if (c.category) rec["category"] = *c.category;
  rec["label"] = to_string(label);

  auto mask = detail::cluster_mask(g, c);
  if (!mask) {
    rec["noop"] = "cluster not present";
    return {detail::rebuild(g, std::vector<bool>(g.vertex_count(), false), {}, {}),
            {rec}};
  }
  const std::vector<bool>& in = *mask;

  // (u, w) -> labels reached by the fold.
  std::map<std::pair<VertexIndex, VertexIndex>, std::set<EdgeLabel>> bridges;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& entry = g.edge(e);
    if (entry.label == EdgeLabel::HasAttributes) continue;
    if (g.find(entry.src) == std::nullopt || g.find(entry.dst) == std::nullopt) continue;
    const VertexIndex u = g.src_index(e), c0 = g.dst_index(e);
    if (in[u] || !in[c0]) continue;

    std::set<std::pair<VertexIndex, EdgeLabel>> seen{{c0, entry.label}};
    std::deque<std::pair<VertexIndex, EdgeLabel>> queue{{c0, entry.label}};
    while (!queue.empty()) {
      auto [v, folded] = queue.front();
      queue.pop_front();
      for (EdgeIndex out : g.out_edges(v)) {
        const Edge& step = g.edge(out);
        if (step.label == EdgeLabel::HasAttributes) continue;
        const VertexIndex w = g.dst_index(out);
        const EdgeLabel next = emt.lookup(folded, step.label);
        if (in[w]) {
          if (seen.insert({w, next}).second) queue.push_back({w, next});
        } else {
          bridges[{u, w}].insert(next);
        }
      }
    }
  }

  std::vector<bool> gone = in;
  const auto orphans = detail::orphaned_attributes(g, in);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    if (orphans[v]) gone[v] = true;

  std::vector<Edge> created;
  for (const auto& [pair, labels] : bridges) {
    const auto [u, w] = pair;
    EdgeLabel l = EdgeLabel::WasCausedBy;
    if (label == DependencyLabel::OriginalDependency && labels.size() == 1 &&
        schema_allows(g.vertex(u).type, g.vertex(w).type, *labels.begin(), true))
      l = *labels.begin();
    created.push_back(Edge{g.vertex(u).id, g.vertex(w).id, l, std::nullopt});
  }

  TransformResult r{detail::rebuild(g, gone, {}, created), {}};
  rec["removed"] = detail::ids_of(g, gone);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : created) edges.push_back(detail::edge_json(e));
  rec["created_edges"] = std::move(edges);
  r.log.push_back(std::move(rec));
  return r;
}

struct ReplaceOptions {
  // Id for the new vertex; "repl:<category>" when empty. A numeric suffix is
  // appended if the id is taken.
  std::string vertex_id;
};

/// Collapses a cluster into one vertex named after its VCD category.
///
/// The category is the cluster's own, or else the first dictionary category
/// containing a member. Edges crossing the cluster boundary are rewired to
/// the new vertex; internal edges and the cluster's attributes are dropped.
/// FalseDependency relabels every rewired edge wasCausedBy; OriginalDependency
/// keeps a label when it is legal for the new vertex type. Throws
/// TransformError if no category applies or the result would be cyclic.
inline TransformResult apply_replace(const ProvenanceGraph& g, const Cluster& c,
                                     const Vcd& vcd, DependencyLabel label,
                                     const ReplaceOptions& opts = {}) {
  nlohmann::ordered_json rec;
  rec["op"] = "replace";
  rec["cluster"] = c.vertex_ids;
  rec["label"] = to_string(label);

  auto mask = detail::cluster_mask(g, c);
  if (!mask) {
    rec["noop"] = "cluster not present";
    return {detail::rebuild(g, std::vector<bool>(g.vertex_count(), false), {}, {}),
            {rec}};
  }
  const std::vector<bool>& in = *mask;

  const VcdCategory* cat = nullptr;
  if (c.category) {
    cat = vcd.find(*c.category);
    if (!cat) throw TransformError("unknown category '" + *c.category + "'");
  } else {
    for (const auto& candidate : vcd.categories()) {
      for (VertexIndex v = 0; v < g.vertex_count() && !cat; ++v) {
        if (!in[v]) continue;
        for (const auto& m : candidate.members)
          if (selector_matches(g, v, m)) {
            cat = &candidate;
            break;
          }
      }
      if (cat) break;
    }
    if (!cat)
      throw TransformError("no category covers cluster starting at '" +
                           c.vertex_ids.front() + "'");
  }
  rec["category"] = cat->name;

  std::string id = opts.vertex_id.empty() ? "repl:" + cat->name : opts.vertex_id;
  if (g.contains(id)) {
    std::size_t k = 2;
    while (g.contains(id + "~" + std::to_string(k))) ++k;
    id += "~" + std::to_string(k);
  }
  const Vertex replacement{id, cat->replacement_type, cat->label, std::nullopt};

  std::vector<Edge> rewired;
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    const Edge& edge = g.edge(e);
    auto s = g.find(edge.src), d = g.find(edge.dst);
    if (!s || !d || in[*s] == in[*d]) continue;
    if (edge.label == EdgeLabel::HasAttributes) continue;
    Edge out = edge;
    out.tag.reset();
    VertexType st = g.vertex(*s).type, dt = g.vertex(*d).type;
    if (in[*s]) {
      out.src = id;
      st = replacement.type;
    } else {
      out.dst = id;
      dt = replacement.type;
    }
    if (label == DependencyLabel::FalseDependency || !schema_allows(st, dt, out.label, true))
      out.label = EdgeLabel::WasCausedBy;
    rewired.push_back(std::move(out));
  }

  std::vector<bool> gone = in;
  const auto orphans = detail::orphaned_attributes(g, in);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    if (orphans[v]) gone[v] = true;

  TransformResult r{detail::rebuild(g, gone, {replacement}, rewired), {}};
  if (!is_acyclic(r.graph))
    throw TransformError("replacing cluster with '" + id + "' would create a cycle");

  rec["removed"] = detail::ids_of(g, gone);
  rec["created_vertex"] = id;
  auto edges = nlohmann::ordered_json::array();
  std::sort(rewired.begin(), rewired.end());
  rewired.erase(std::unique(rewired.begin(), rewired.end()), rewired.end());
  for (const auto& e : rewired) edges.push_back(detail::edge_json(e));
  rec["created_edges"] = std::move(edges);
  r.log.push_back(std::move(rec));
  return r;
}

struct TransformOptions {
  // Prefix for replacement vertex ids: "<prefix>:<t>:<c>:<category>".
  std::string id_prefix = "repl";
  EvalOptions eval;
};

namespace detail {

// Drops ids not present in `g`.
inline Cluster present_part(const ProvenanceGraph& g, const Cluster& c) {
  Cluster out{{}, c.category};
  for (const auto& id : c.vertex_ids)
    if (g.contains(id)) out.vertex_ids.push_back(id);
  return out;
}

inline std::string replacement_id(const TransformOptions& opts, std::size_t t,
                                  std::size_t c, const Cluster& cluster,
                                  const Vcd& vcd, const ProvenanceGraph& g) {
  std::string category = cluster.category.value_or("");
  if (category.empty()) {
    // Same rule apply_replace uses, needed here only for the id.
    for (const auto& cat : vcd.categories()) {
      for (const auto& vid : cluster.vertex_ids) {
        const VertexIndex v = g.index_of(vid);
        for (const auto& m : cat.members)
          if (selector_matches(g, v, m)) category = cat.name;
        if (!category.empty()) break;
      }
      if (!category.empty()) break;
    }
  }
  return opts.id_prefix + ":" + std::to_string(t) + ":" + std::to_string(c) +
         ":" + category;
}

}  // namespace detail

/// Applies one transformation's clusters to `g` in order. `t` is the
/// transformation's index, used in ids and the log.
inline TransformResult apply_clusters(const ProvenanceGraph& g,
                                      const std::vector<Cluster>& clusters,
                                      Mode mode, DependencyLabel label,
                                      const Vcd& vcd, const EdgeMergeTable& emt,
                                      std::size_t t,
                                      const TransformOptions& opts = {}) {
  TransformResult cur{detail::rebuild(g, std::vector<bool>(g.vertex_count(), false), {}, {}), {}};
  for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
    Cluster c = detail::present_part(cur.graph, clusters[ci]);
    if (c.vertex_ids.empty()) {
      nlohmann::ordered_json rec;
      rec["op"] = mode == Mode::Remove ? "remove" : "replace";
      rec["cluster"] = clusters[ci].vertex_ids;
      rec["noop"] = "cluster not present";
      cur.log.push_back(std::move(rec));
      continue;
    }
    TransformResult step =
        mode == Mode::Remove
            ? apply_remove(cur.graph, c, label, emt)
            : apply_replace(cur.graph, c, vcd, label,
                            {detail::replacement_id(opts, t, ci, c, vcd, cur.graph)});
    cur.graph = std::move(step.graph);
    for (auto& rec : step.log) cur.log.push_back(std::move(rec));
  }
  return cur;
}

/// Applies transformations in order, each resolved against the graph left by
/// the previous one. Produces one log record per transformation.
inline TransformResult apply_transformations(const ProvenanceGraph& g,
                                             const std::vector<Transformation>& ts,
                                             const Vcd& vcd,
                                             const EdgeMergeTable& emt,
                                             const TransformOptions& opts = {}) {
  TransformResult cur{detail::rebuild(g, std::vector<bool>(g.vertex_count(), false), {}, {}), {}};
  for (std::size_t t = 0; t < ts.size(); ++t) {
    const Transformation& tr = ts[t];
    nlohmann::ordered_json rec;
    rec["transformation"] = t;
    rec["partition"] = to_string(tr.partition);
    rec["scope"] = to_string(tr.scope);
    rec["mode"] = to_string(tr.mode);
    rec["label"] = to_string(tr.label);

    const Partition base = resolve(cur.graph, tr.partition, opts.eval);
    std::vector<std::string> warnings;
    const auto clusters = expand_scope(cur.graph, base, tr.scope, vcd, &warnings);
    if (clusters.empty()) {
      rec["noop"] = "partition resolved empty";
      rec["steps"] = nlohmann::ordered_json::array();
      cur.log.push_back(std::move(rec));
      continue;
    }
    TransformResult step =
        apply_clusters(cur.graph, clusters, tr.mode, tr.label, vcd, emt, t, opts);
    cur.graph = std::move(step.graph);
    if (!warnings.empty()) rec["warnings"] = warnings;
    rec["steps"] = step.log;
    cur.log.push_back(std::move(rec));
  }
  return cur;
}

}  // namespace provpolicy
