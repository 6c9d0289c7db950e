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

// Partitions: vertex sets, provenance paths and subgraphs.
//
// Text syntax, as written inside policies:
//
//   vertices(SEL)
//   directed(SEL // SEL [// SEL ...])      chronological path, vias in order
//   general(SEL // SEL [// SEL ...])       path mixing cause and effect steps
//   subgraphs(SEL // SEL)                  everything between two anchors
//   subgraphs(SEL /following::*)           from SEL to the end of the graph
//   subgraphs(SEL /preceding::*)           from the start of the graph to SEL
//
// Separators "//", "\v+" and "," are interchangeable. START and END name the
// graph terminals.

#pragma once

#include <algorithm>
#include <deque>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "provpolicy/graph.hpp"
#include "provpolicy/path_engine.hpp"
#include "provpolicy/path_expr.hpp"

namespace provpolicy {

struct VerticesSpec {
  Selector selector;
  friend bool operator==(const VerticesSpec&, const VerticesSpec&) = default;
};

struct DirectedPathSpec {
  Selector from;
  std::vector<Selector> via;
  Selector to;
  friend bool operator==(const DirectedPathSpec&,
                         const DirectedPathSpec&) = default;
};

struct GeneralPathSpec {
  Selector from;
  std::vector<Selector> via;
  Selector to;
  friend bool operator==(const GeneralPathSpec&,
                         const GeneralPathSpec&) = default;
};

/// `start` / `end` may be the START / END terminals.
struct SubgraphSpec {
  Selector start;
  Selector end;
  friend bool operator==(const SubgraphSpec&, const SubgraphSpec&) = default;
};

using PartitionSpec =
    std::variant<VerticesSpec, DirectedPathSpec, GeneralPathSpec, SubgraphSpec>;

struct Partition {
  std::vector<std::string> vertex_ids;  // sorted
  std::vector<Edge> induced_edges;      // sorted
  std::vector<PathMatch> witness_paths;
  bool truncated = false;

  bool empty() const { return vertex_ids.empty(); }
  bool contains(std::string_view id) const {
    return std::binary_search(vertex_ids.begin(), vertex_ids.end(), id);
  }
};

/// Builds a partition from a vertex set, filling in the induced edges.
inline Partition make_partition(const ProvenanceGraph& g,
                                const std::vector<bool>& members) {
  Partition p;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    if (members[v]) p.vertex_ids.push_back(g.vertex(v).id);
  std::sort(p.vertex_ids.begin(), p.vertex_ids.end());
  for (EdgeIndex e = 0; e < g.edge_count(); ++e) {
    auto s = g.find(g.edge(e).src);
    auto d = g.find(g.edge(e).dst);
    if (s && d && members[*s] && members[*d]) p.induced_edges.push_back(g.edge(e));
  }
  std::sort(p.induced_edges.begin(), p.induced_edges.end());
  p.induced_edges.erase(
      std::unique(p.induced_edges.begin(), p.induced_edges.end()),
      p.induced_edges.end());
  return p;
}

inline Partition make_partition(const ProvenanceGraph& g,
                                const std::vector<std::string>& ids) {
  std::vector<bool> members(g.vertex_count(), false);
  for (const auto& id : ids) members[g.index_of(id)] = true;
  return make_partition(g, members);
}

// ---------------------------------------------------------------------------
// Text form

inline std::string to_string(const PartitionSpec& spec) {
  auto chain = [](const Selector& from, const std::vector<Selector>& via,
                  const Selector& to) {
    std::string out = to_string(from);
    for (const auto& s : via) out += " // " + to_string(s);
    return out + " // " + to_string(to);
  };
  return std::visit(
      [&](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, VerticesSpec>) {
          return "vertices(" + to_string(s.selector) + ")";
        } else if constexpr (std::is_same_v<T, DirectedPathSpec>) {
          return "directed(" + chain(s.from, s.via, s.to) + ")";
        } else if constexpr (std::is_same_v<T, GeneralPathSpec>) {
          return "general(" + chain(s.from, s.via, s.to) + ")";
        } else {
          return "subgraphs(" + to_string(s.start) + " // " + to_string(s.end) +
                 ")";
        }
      },
      spec);
}

namespace detail {

// Consumes one or more separators. Returns false if none was present.
inline bool chain_separator(ExprScanner& sc) {
  bool any = false;
  for (;;) {
    sc.skip_ws();
    if (sc.accept("//") || sc.accept("\\v+") || sc.accept(",")) {
      any = true;
      continue;
    }
    return any;
  }
}

inline std::vector<Selector> selector_chain(ExprScanner& sc) {
  std::vector<Selector> out;
  out.push_back(sc.selector());
  while (chain_separator(sc)) out.push_back(sc.selector());
  return out;
}

}  // namespace detail

/// Parses the partition text syntax. `base_offset` is added to reported
/// error offsets (useful when the text is embedded in a larger document).
inline PartitionSpec parse_partition(std::string_view text,
                                     std::size_t base_offset = 0) {
  ExprScanner sc(text, base_offset);
  sc.skip_ws();
  enum class Kind { Vertices, Directed, General, Subgraph } kind;
  if (sc.accept("vertices")) {
    kind = Kind::Vertices;
  } else if (sc.accept("directed")) {
    kind = Kind::Directed;
  } else if (sc.accept("general")) {
    kind = Kind::General;
  } else if (sc.accept("subgraphs") || sc.accept("subgraph")) {
    kind = Kind::Subgraph;
  } else {
    sc.fail("expected a partition kind",
            {"'vertices'", "'directed'", "'general'", "'subgraphs'"});
  }
  sc.skip_ws();
  sc.expect("(");
  sc.skip_ws();

  PartitionSpec spec;
  switch (kind) {
    case Kind::Vertices:
      spec = VerticesSpec{sc.selector()};
      break;
    case Kind::Directed:
    case Kind::General: {
      auto chain = detail::selector_chain(sc);
      if (chain.size() < 2) sc.fail("path needs two endpoints", {"'//'"});
      std::vector<Selector> via(chain.begin() + 1, chain.end() - 1);
      if (kind == Kind::Directed)
        spec = DirectedPathSpec{chain.front(), std::move(via), chain.back()};
      else
        spec = GeneralPathSpec{chain.front(), std::move(via), chain.back()};
      break;
    }
    case Kind::Subgraph: {
      Selector first = sc.selector();
      sc.skip_ws();
      if (sc.peek("/") && !sc.peek("//")) {
        auto axis = sc.axis();
        if (axis != Axis::Following && axis != Axis::Preceding)
          sc.fail("expected following:: or preceding::",
                  {"'following::*'", "'preceding::*'"});
        sc.skip_ws();
        sc.expect("*");
        // following::* runs to the end of the graph, preceding::* from its
        // beginning.
        if (*axis == Axis::Following)
          spec = SubgraphSpec{first, Selector{Terminal{TerminalKind::End}, {}}};
        else
          spec = SubgraphSpec{Selector{Terminal{TerminalKind::Start}, {}}, first};
        break;
      }
      if (!detail::chain_separator(sc))
        sc.fail("expected a subgraph end",
                {"'//'", "'/following::*'", "'/preceding::*'"});
      Selector second = sc.selector();
      spec = SubgraphSpec{std::move(first), std::move(second)};
      break;
    }
  }
  sc.skip_ws();
  sc.expect(")");
  sc.skip_ws();
  if (!sc.at_end()) sc.fail("trailing input after partition", {"end of input"});
  return spec;
}

// ---------------------------------------------------------------------------
// Resolution

inline Partition resolve_vertices(const ProvenanceGraph& g,
                                  const VerticesSpec& spec) {
  std::vector<bool> members(g.vertex_count(), false);
  for (VertexIndex v : select(g, spec.selector)) members[v] = true;
  return make_partition(g, members);
}

namespace detail {

inline Partition partition_from_paths(const ProvenanceGraph& g, PathSet ps) {
  std::vector<bool> members(g.vertex_count(), false);
  for (const auto& m : ps.paths)
    for (const auto& id : m.vertices) members[g.index_of(id)] = true;
  Partition p = make_partition(g, members);
  p.witness_paths = std::move(ps.paths);
  p.truncated = ps.truncated;
  return p;
}

// Reflexive closure of `seeds` under the given step direction.
inline std::vector<bool> closure(const ProvenanceGraph& g,
                                 const std::vector<VertexIndex>& seeds,
                                 bool cause) {
  std::vector<bool> seen(g.vertex_count(), false);
  std::deque<VertexIndex> queue;
  for (VertexIndex s : seeds) {
    if (!seen[s]) {
      seen[s] = true;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    VertexIndex v = queue.front();
    queue.pop_front();
    for_each_hop(g, v, cause, !cause, [&](const Hop& h) {
      if (!seen[h.to]) {
        seen[h.to] = true;
        queue.push_back(h.to);
      }
    });
  }
  return seen;
}

}  // namespace detail

inline Partition resolve_path(const ProvenanceGraph& g,
                              const DirectedPathSpec& spec,
                              const EvalOptions& opts = {}) {
  return detail::partition_from_paths(
      g, eval_directed_path(g, spec.from, spec.via, spec.to, opts));
}

inline Partition resolve_path(const ProvenanceGraph& g,
                              const GeneralPathSpec& spec,
                              const EvalOptions& opts = {}) {
  return detail::partition_from_paths(
      g, eval_general_path(g, spec.from, spec.via, spec.to, opts));
}

/// Core of a subgraph: every vertex on a chronological path from a start
/// match to an end match (a vertex matching both counts on its own).
inline std::vector<bool> subgraph_core(const ProvenanceGraph& g,
                                       const SubgraphSpec& spec) {
  const auto starts = select(g, spec.start);
  const auto ends = select(g, spec.end);
  const auto after_start = detail::closure(g, starts, /*cause=*/true);
  const auto before_end = detail::closure(g, ends, /*cause=*/false);
  std::vector<bool> core(g.vertex_count(), false);
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    core[v] = after_start[v] && before_end[v];
  return core;
}

/// Path-union core plus the Agents and Attributes adjacent to it.
inline Partition resolve_subgraph(const ProvenanceGraph& g,
                                  const SubgraphSpec& spec) {
  const auto core = subgraph_core(g, spec);
  std::vector<bool> members = core;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v) {
    if (!core[v]) continue;
    auto absorb = [&](VertexIndex w) {
      const VertexType t = g.vertex(w).type;
      if (t == VertexType::Agent || t == VertexType::Attribute) members[w] = true;
    };
    for (EdgeIndex e : g.out_edges(v)) absorb(g.dst_index(e));
    for (EdgeIndex e : g.in_edges(v)) absorb(g.src_index(e));
  }
  return make_partition(g, members);
}

inline Partition resolve(const ProvenanceGraph& g, const PartitionSpec& spec,
                         const EvalOptions& opts = {}) {
  return std::visit(
      [&](const auto& s) -> Partition {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, VerticesSpec>) {
          return resolve_vertices(g, s);
        } else if constexpr (std::is_same_v<T, SubgraphSpec>) {
          return resolve_subgraph(g, s);
        } else {
          return resolve_path(g, s, opts);
        }
      },
      spec);
}

}  // namespace provpolicy
