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

// OPM+ provenance graph model.
//
// Vertices are Agents, Artifacts, Processes and Attributes. Edges are stored
// in the orientation the schema prints them: from the effect to its cause,
// i.e. backward in time. "used" points Process -> Artifact, "wasGeneratedBy"
// points Artifact -> Process, and so on. Walking a stored edge forward is an
// effect step; walking it backward moves forward in time and is a cause step.
// hasAttributes edges only attach metadata and never take part in traversal
// or in the acyclicity requirement.

#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "provpolicy/error.hpp"

namespace provpolicy {

enum class VertexType { Agent, Artifact, Process, Attribute };

enum class EdgeLabel {
  Used,
  WasGeneratedBy,
  WasControlledBy,
  WasTriggeredBy,
  WasDerivedFrom,
  HasAttributes,
  WasCausedBy,
};

/// Traversal direction relative to time. A cause step walks a stored edge
/// backward (from cause to effect); an effect step walks it forward.
enum class Direction { CauseStep, EffectStep };

inline constexpr std::array kVertexTypes = {
    VertexType::Agent, VertexType::Artifact, VertexType::Process,
    VertexType::Attribute};

inline constexpr std::array kEdgeLabels = {
    EdgeLabel::Used,           EdgeLabel::WasGeneratedBy,
    EdgeLabel::WasControlledBy, EdgeLabel::WasTriggeredBy,
    EdgeLabel::WasDerivedFrom, EdgeLabel::HasAttributes,
    EdgeLabel::WasCausedBy};

/// Short schema code: Ag, A, P, Att.
constexpr std::string_view type_code(VertexType t) {
  switch (t) {
    case VertexType::Agent: return "Ag";
    case VertexType::Artifact: return "A";
    case VertexType::Process: return "P";
    case VertexType::Attribute: return "Att";
  }
  return "?";
}

/// Name used in the JSON graph format.
constexpr std::string_view type_name(VertexType t) {
  switch (t) {
    case VertexType::Agent: return "agent";
    case VertexType::Artifact: return "artifact";
    case VertexType::Process: return "process";
    case VertexType::Attribute: return "attribute";
  }
  return "?";
}

constexpr std::string_view label_code(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Used: return "u";
    case EdgeLabel::WasGeneratedBy: return "wgb";
    case EdgeLabel::WasControlledBy: return "wcb";
    case EdgeLabel::WasTriggeredBy: return "wtb";
    case EdgeLabel::WasDerivedFrom: return "wdf";
    case EdgeLabel::HasAttributes: return "ha";
    case EdgeLabel::WasCausedBy: return "wcsd";
  }
  return "?";
}

constexpr std::string_view label_name(EdgeLabel l) {
  switch (l) {
    case EdgeLabel::Used: return "used";
    case EdgeLabel::WasGeneratedBy: return "wasGeneratedBy";
    case EdgeLabel::WasControlledBy: return "wasControlledBy";
    case EdgeLabel::WasTriggeredBy: return "wasTriggeredBy";
    case EdgeLabel::WasDerivedFrom: return "wasDerivedFrom";
    case EdgeLabel::HasAttributes: return "hasAttributes";
    case EdgeLabel::WasCausedBy: return "wasCausedBy";
  }
  return "?";
}

inline std::optional<VertexType> parse_vertex_type(std::string_view s) {
  for (auto t : kVertexTypes)
    if (s == type_name(t) || s == type_code(t)) return t;
  return std::nullopt;
}

inline std::optional<EdgeLabel> parse_edge_label(std::string_view s) {
  for (auto l : kEdgeLabels)
    if (s == label_name(l) || s == label_code(l)) return l;
  return std::nullopt;
}

/// True iff (src, dst, label) is in the OPM+ allowed-edge schema.
/// wasCausedBy between two non-Attribute vertices is accepted only when
/// `allow_caused_by` is set, i.e. for graphs produced by transformation.
constexpr bool schema_allows(VertexType src, VertexType dst, EdgeLabel label,
                             bool allow_caused_by = false) {
  using T = VertexType;
  using L = EdgeLabel;
  switch (label) {
    case L::Used: return src == T::Process && dst == T::Artifact;
    case L::WasGeneratedBy: return src == T::Artifact && dst == T::Process;
    case L::WasControlledBy: return src == T::Process && dst == T::Agent;
    case L::WasDerivedFrom: return src == T::Artifact && dst == T::Artifact;
    case L::WasTriggeredBy: return src == T::Process && dst == T::Process;
    case L::HasAttributes:
      return src != T::Attribute && dst == T::Attribute;
    case L::WasCausedBy:
      return allow_caused_by && src != T::Attribute && dst != T::Attribute;
  }
  return false;
}

/// The single schema label connecting (src, dst) without wasCausedBy, if any.
constexpr std::optional<EdgeLabel> schema_label_for(VertexType src,
                                                    VertexType dst) {
  for (auto l : kEdgeLabels) {
    if (l == EdgeLabel::HasAttributes || l == EdgeLabel::WasCausedBy) continue;
    if (schema_allows(src, dst, l)) return l;
  }
  return std::nullopt;
}

struct Vertex {
  std::string id;
  VertexType type = VertexType::Artifact;
  std::string name;
  std::optional<std::string> value;  // Attribute payload

  friend bool operator==(const Vertex&, const Vertex&) = default;
};

struct Edge {
  std::string src;
  std::string dst;
  EdgeLabel label = EdgeLabel::Used;
  // Application-level tag such as "g_upload"; carried through, never matched.
  std::optional<std::string> tag;

  friend bool operator==(const Edge&, const Edge&) = default;
  friend auto operator<=>(const Edge& a, const Edge& b) {
    if (auto c = a.src <=> b.src; c != 0) return c;
    if (auto c = a.dst <=> b.dst; c != 0) return c;
    if (auto c = a.label <=> b.label; c != 0) return c;
    return a.tag <=> b.tag;
  }
};

using VertexIndex = std::size_t;
using EdgeIndex = std::size_t;

/// A labelled provenance graph.
///
/// Vertices and edges are appended while the graph is being built and never
/// removed; transformations construct a new graph. Edges whose endpoints are
/// unknown are kept (validate_graph reports them) and attached to the
/// adjacency lists as soon as the missing vertex is added.
class ProvenanceGraph {
 public:
  ProvenanceGraph() = default;
  explicit ProvenanceGraph(std::string id) : id_(std::move(id)) {}

  const std::string& id() const noexcept { return id_; }
  void set_id(std::string id) { id_ = std::move(id); }

  VertexIndex add_vertex(Vertex v) {
    if (index_.contains(v.id))
      throw GraphError("duplicate vertex id '" + v.id + "'");
    const VertexIndex idx = vertices_.size();
    index_.emplace(v.id, idx);
    vertices_.push_back(std::move(v));
    out_.emplace_back();
    in_.emplace_back();
    attach_pending();
    return idx;
  }

  EdgeIndex add_edge(Edge e) {
    const EdgeIndex idx = edges_.size();
    edges_.push_back(std::move(e));
    ends_.emplace_back(kNone, kNone);
    if (!attach(idx)) pending_.push_back(idx);
    return idx;
  }

  std::size_t vertex_count() const noexcept { return vertices_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }
  bool empty() const noexcept { return vertices_.empty(); }

  std::span<const Vertex> vertices() const noexcept { return vertices_; }
  std::span<const Edge> edges() const noexcept { return edges_; }

  const Vertex& vertex(VertexIndex i) const { return vertices_.at(i); }
  const Edge& edge(EdgeIndex i) const { return edges_.at(i); }

  std::optional<VertexIndex> find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  bool contains(std::string_view id) const { return find(id).has_value(); }

  VertexIndex index_of(std::string_view id) const {
    if (auto i = find(id)) return *i;
    throw GraphError("unknown vertex id '" + std::string(id) + "'");
  }

  const Vertex& vertex(std::string_view id) const {
    return vertices_[index_of(id)];
  }

  /// Edges stored with this vertex as source / destination.
  std::span<const EdgeIndex> out_edges(VertexIndex v) const { return out_[v]; }
  std::span<const EdgeIndex> in_edges(VertexIndex v) const { return in_[v]; }

  /// Edges whose endpoints are not (yet) present.
  std::span<const EdgeIndex> dangling_edges() const noexcept {
    return pending_;
  }

  // Valid only for attached (non-dangling) edges.
  VertexIndex src_index(EdgeIndex e) const { return ends_[e].first; }
  VertexIndex dst_index(EdgeIndex e) const { return ends_[e].second; }

 private:
  bool attach(EdgeIndex e) {
    auto s = index_.find(edges_[e].src);
    auto d = index_.find(edges_[e].dst);
    if (s == index_.end() || d == index_.end()) return false;
    ends_[e] = {s->second, d->second};
    out_[s->second].push_back(e);
    in_[d->second].push_back(e);
    return true;
  }

  void attach_pending() {
    std::erase_if(pending_, [this](EdgeIndex e) { return attach(e); });
  }

  static constexpr VertexIndex kNone = static_cast<VertexIndex>(-1);

  std::string id_;
  std::vector<Vertex> vertices_;
  std::vector<std::pair<VertexIndex, VertexIndex>> ends_;
  std::vector<Edge> edges_;
  std::unordered_map<std::string, VertexIndex> index_;
  std::vector<std::vector<EdgeIndex>> out_;
  std::vector<std::vector<EdgeIndex>> in_;
  std::vector<EdgeIndex> pending_;
};

/// One traversal hop out of a vertex.
struct Hop {
  VertexIndex to;
  EdgeIndex edge;
  Direction direction;
};

/// Calls `fn(Hop)` for every non-ha neighbour reachable in one step in the
/// requested direction(s).
template <typename Fn>
void for_each_hop(const ProvenanceGraph& g, VertexIndex v, bool cause,
                  bool effect, Fn&& fn) {
  if (effect) {
    for (EdgeIndex e : g.out_edges(v)) {
      if (g.edge(e).label == EdgeLabel::HasAttributes) continue;
      fn(Hop{g.dst_index(e), e, Direction::EffectStep});
    }
  }
  if (cause) {
    for (EdgeIndex e : g.in_edges(v)) {
      if (g.edge(e).label == EdgeLabel::HasAttributes) continue;
      fn(Hop{g.src_index(e), e, Direction::CauseStep});
    }
  }
}

/// Vertices reached by one cause step (forward in time) from `v`, with the
/// label of the stored edge, sorted by id.
inline std::vector<std::pair<std::string, EdgeLabel>> cause_successors(
    const ProvenanceGraph& g, std::string_view v) {
  std::vector<std::pair<std::string, EdgeLabel>> out;
  for_each_hop(g, g.index_of(v), true, false, [&](const Hop& h) {
    out.emplace_back(g.vertex(h.to).id, g.edge(h.edge).label);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// Vertices reached by one effect step (backward in time) from `v`.
inline std::vector<std::pair<std::string, EdgeLabel>> effect_successors(
    const ProvenanceGraph& g, std::string_view v) {
  std::vector<std::pair<std::string, EdgeLabel>> out;
  for_each_hop(g, g.index_of(v), false, true, [&](const Hop& h) {
    out.emplace_back(g.vertex(h.to).id, g.edge(h.edge).label);
  });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

/// name -> value of every Attribute vertex attached to `v` by one ha edge.
/// A vertex may carry several attributes with the same name.
inline std::multimap<std::string, std::string> attributes_of(
    const ProvenanceGraph& g, VertexIndex v) {
  std::multimap<std::string, std::string> out;
  for (EdgeIndex e : g.out_edges(v)) {
    if (g.edge(e).label != EdgeLabel::HasAttributes) continue;
    const Vertex& att = g.vertex(g.dst_index(e));
    if (att.type != VertexType::Attribute) continue;
    out.emplace(att.name, att.value.value_or(""));
  }
  return out;
}

inline std::multimap<std::string, std::string> attributes_of(
    const ProvenanceGraph& g, std::string_view v) {
  return attributes_of(g, g.index_of(v));
}

inline bool has_attribute(const ProvenanceGraph& g, VertexIndex v,
                          std::string_view name, std::string_view value) {
  for (EdgeIndex e : g.out_edges(v)) {
    if (g.edge(e).label != EdgeLabel::HasAttributes) continue;
    const Vertex& att = g.vertex(g.dst_index(e));
    if (att.type == VertexType::Attribute && att.name == name &&
        att.value.value_or("") == value)
      return true;
  }
  return false;
}

/// Chronological beginnings: no stored non-ha edge leaves the vertex.
/// Attribute vertices are never terminals.
inline bool is_chronological_start(const ProvenanceGraph& g, VertexIndex v) {
  if (g.vertex(v).type == VertexType::Attribute) return false;
  bool any = false;
  for_each_hop(g, v, false, true, [&](const Hop&) { any = true; });
  return !any;
}

/// Chronological ends: no stored non-ha edge enters the vertex.
inline bool is_chronological_end(const ProvenanceGraph& g, VertexIndex v) {
  if (g.vertex(v).type == VertexType::Attribute) return false;
  bool any = false;
  for_each_hop(g, v, true, false, [&](const Hop&) { any = true; });
  return !any;
}

// ---------------------------------------------------------------------------
// Validation

enum class ViolationKind {
  IllegalTriple,
  DanglingEdge,
  Cycle,
  AttributeOutgoing,
  ValueOnNonAttribute,
};

struct Violation {
  ViolationKind kind;
  std::string message;
  std::vector<std::string> vertices;  // involved vertex ids

  friend bool operator==(const Violation&, const Violation&) = default;
};

/// Input graphs must not contain wasCausedBy; transformed graphs may.
enum class Profile { Input, Transformed };

namespace detail {

// Non-trivial strongly connected components (and self loops) of the non-ha
// edge relation, iterative Tarjan.
inline std::vector<std::vector<VertexIndex>> cyclic_components(
    const ProvenanceGraph& g) {
  const std::size_t n = g.vertex_count();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0);
  std::vector<bool> on_stack(n, false);
  std::vector<VertexIndex> stack;
  std::vector<std::vector<VertexIndex>> result;
  std::size_t counter = 0;

  auto successors = [&](VertexIndex v) {
    std::vector<VertexIndex> s;
    for_each_hop(g, v, false, true, [&](const Hop& h) { s.push_back(h.to); });
    return s;
  };

  struct Frame {
    VertexIndex v;
    std::vector<VertexIndex> succ;
    std::size_t next = 0;
  };

  for (VertexIndex root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> frames;
    auto open = [&](VertexIndex v) {
      index[v] = low[v] = counter++;
      stack.push_back(v);
      on_stack[v] = true;
      frames.push_back(Frame{v, successors(v)});
    };
    open(root);
    while (!frames.empty()) {
      Frame& f = frames.back();
      if (f.next < f.succ.size()) {
        VertexIndex w = f.succ[f.next++];
        if (index[w] == kUnvisited) {
          open(w);
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const VertexIndex v = f.v;
      const bool self_loop =
          std::find(f.succ.begin(), f.succ.end(), v) != f.succ.end();
      frames.pop_back();
      if (!frames.empty())
        low[frames.back().v] = std::min(low[frames.back().v], low[v]);
      if (low[v] != index[v]) continue;
      std::vector<VertexIndex> comp;
      VertexIndex w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        comp.push_back(w);
      } while (w != v);
      if (comp.size() > 1 || self_loop) result.push_back(std::move(comp));
    }
  }
  return result;
}

}  // namespace detail

/// True iff the non-ha edge relation has no cycle.
inline bool is_acyclic(const ProvenanceGraph& g) {
  return detail::cyclic_components(g).empty();
}

/// Every schema violation of `g`. An empty result means the graph is valid.
inline std::vector<Violation> validate_graph(
    const ProvenanceGraph& g, Profile profile = Profile::Input) {
  std::vector<Violation> out;
  const bool allow_caused_by = profile == Profile::Transformed;

  for (const Vertex& v : g.vertices()) {
    if (v.value && v.type != VertexType::Attribute)
      out.push_back({ViolationKind::ValueOnNonAttribute,
                     "vertex '" + v.id + "' of type " +
                         std::string(type_code(v.type)) + " carries a value",
                     {v.id}});
  }

  for (const Edge& e : g.edges()) {
    auto s = g.find(e.src);
    auto d = g.find(e.dst);
    if (!s || !d) {
      out.push_back({ViolationKind::DanglingEdge,
                     "edge " + e.src + " -> " + e.dst +
                         " references a missing vertex",
                     {e.src, e.dst}});
      continue;
    }
    const VertexType st = g.vertex(*s).type;
    const VertexType dt = g.vertex(*d).type;
    if (st == VertexType::Attribute) {
      out.push_back({ViolationKind::AttributeOutgoing,
                     "attribute vertex '" + e.src + "' has an outgoing edge",
                     {e.src, e.dst}});
    }
    if (!schema_allows(st, dt, e.label, allow_caused_by)) {
      out.push_back({ViolationKind::IllegalTriple,
                     "illegal triple (" + std::string(type_code(st)) + "," +
                         std::string(type_code(dt)) + "," +
                         std::string(label_code(e.label)) + ") on edge " +
                         e.src + " -> " + e.dst,
                     {e.src, e.dst}});
    }
  }

  for (auto& comp : detail::cyclic_components(g)) {
    std::vector<std::string> ids;
    for (VertexIndex v : comp) ids.push_back(g.vertex(v).id);
    std::sort(ids.begin(), ids.end());
    std::string msg = "cycle through";
    for (const auto& id : ids) msg += " " + id;
    out.push_back({ViolationKind::Cycle, std::move(msg), std::move(ids)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Structural comparison

/// Sorted copy of the vertex list.
inline std::vector<Vertex> sorted_vertices(const ProvenanceGraph& g) {
  std::vector<Vertex> vs(g.vertices().begin(), g.vertices().end());
  std::sort(vs.begin(), vs.end(),
            [](const Vertex& a, const Vertex& b) { return a.id < b.id; });
  return vs;
}

/// Sorted, de-duplicated copy of the edge list.
inline std::vector<Edge> sorted_edges(const ProvenanceGraph& g) {
  std::vector<Edge> es(g.edges().begin(), g.edges().end());
  std::sort(es.begin(), es.end());
  es.erase(std::unique(es.begin(), es.end()), es.end());
  return es;
}

/// Equality up to vertex and edge ordering.
inline bool structurally_equal(const ProvenanceGraph& a,
                               const ProvenanceGraph& b) {
  return a.id() == b.id() && sorted_vertices(a) == sorted_vertices(b) &&
         sorted_edges(a) == sorted_edges(b);
}

}  // namespace provpolicy
