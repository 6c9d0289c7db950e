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

// Path evaluation.
//
// Three entry points share one depth-first enumerator over simple paths:
//
//  * eval_query follows XPath orientation: "/" and "//" walk stored edges
//    (toward causes, "beneath" a vertex), following:: walks against them.
//  * eval_directed_path enumerates chronological paths, i.e. cause steps
//    only, reported from the earliest vertex to the latest.
//  * eval_general_path lets every hop be either a cause or an effect step.
//
// Results are de-duplicated by vertex sequence and returned sorted, so they
// do not depend on adjacency order.

#pragma once

#include <algorithm>
#include <cstddef>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "provpolicy/graph.hpp"
#include "provpolicy/path_expr.hpp"

namespace provpolicy {

struct PathMatch {
  std::vector<std::string> vertices;
  std::vector<Direction> directions;  // one per hop
  std::vector<Edge> edges;            // stored edge witnessing each hop

  friend bool operator==(const PathMatch&, const PathMatch&) = default;
};

struct EvalOptions {
  std::size_t max_paths = 1'000'000;
};

struct PathSet {
  std::vector<PathMatch> paths;
  bool truncated = false;  // max_paths was reached; results are partial
};

namespace detail {

enum class HopRule { Child, Gap };

struct Segment {
  HopRule rule;
  bool cause;
  bool effect;
  const Selector* target;
};

struct Pattern {
  const Selector* first;
  bool first_at_root = false;  // leading "/": no stored non-ha edge enters
  std::vector<Segment> segments;
  std::size_t min_vertices = 1;
};

class PathEnumerator {
 public:
  PathEnumerator(const ProvenanceGraph& g, const Pattern& p, std::size_t cap)
      : g_(g), p_(p), cap_(cap), visited_(g.vertex_count(), false) {}

  void run() {
    for (VertexIndex v = 0; v < g_.vertex_count() && !full(); ++v) {
      if (!selector_matches(g_, v, *p_.first)) continue;
      if (p_.first_at_root && !is_chronological_end(g_, v)) continue;
      enter(v);
      match(0, v);
      leave();
    }
  }

  const std::set<std::vector<VertexIndex>>& found() const { return found_; }
  bool truncated() const { return truncated_; }

 private:
  bool full() const { return truncated_; }

  void enter(VertexIndex v) {
    visited_[v] = true;
    path_.push_back(v);
  }

  void leave() {
    visited_[path_.back()] = false;
    path_.pop_back();
  }

  // `v` matched the selector before segment `j`.
  void match(std::size_t j, VertexIndex v) {
    if (full()) return;
    if (j == p_.segments.size()) {
      if (path_.size() >= p_.min_vertices) emit();
      return;
    }
    const Segment& s = p_.segments[j];
    if (s.rule == HopRule::Child) {
      for_each_hop(g_, v, s.cause, s.effect, [&](const Hop& h) {
        if (full() || visited_[h.to]) return;
        if (!selector_matches(g_, h.to, *s.target)) return;
        enter(h.to);
        match(j + 1, h.to);
        leave();
      });
    } else {
      walk(j, v);
    }
  }

  void walk(std::size_t j, VertexIndex v) {
    const Segment& s = p_.segments[j];
    for_each_hop(g_, v, s.cause, s.effect, [&](const Hop& h) {
      if (full() || visited_[h.to]) return;
      enter(h.to);
      if (selector_matches(g_, h.to, *s.target)) match(j + 1, h.to);
      walk(j, h.to);
      leave();
    });
  }

  void emit() {
    if (found_.size() >= cap_) {
      if (!found_.contains(path_)) truncated_ = true;
      return;
    }
    found_.insert(path_);
  }

  const ProvenanceGraph& g_;
  const Pattern& p_;
  std::size_t cap_;
  std::vector<bool> visited_;
  std::vector<VertexIndex> path_;
  std::set<std::vector<VertexIndex>> found_;
  bool truncated_ = false;
};

// Smallest non-ha stored edge from -> to, if any.
inline std::optional<Edge> stored_edge(const ProvenanceGraph& g,
                                       VertexIndex from, VertexIndex to) {
  std::optional<Edge> best;
  for (EdgeIndex e : g.out_edges(from)) {
    const Edge& edge = g.edge(e);
    if (edge.label == EdgeLabel::HasAttributes || g.dst_index(e) != to) continue;
    if (!best || edge < *best) best = edge;
  }
  return best;
}

inline PathMatch to_match(const ProvenanceGraph& g,
                          const std::vector<VertexIndex>& seq) {
  PathMatch m;
  for (VertexIndex v : seq) m.vertices.push_back(g.vertex(v).id);
  for (std::size_t i = 0; i + 1 < seq.size(); ++i) {
    if (auto e = stored_edge(g, seq[i], seq[i + 1])) {
      m.directions.push_back(Direction::EffectStep);
      m.edges.push_back(*e);
    } else {
      auto back = stored_edge(g, seq[i + 1], seq[i]);
      m.directions.push_back(Direction::CauseStep);
      m.edges.push_back(back.value_or(Edge{}));
    }
  }
  return m;
}

inline PathSet run_pattern(const ProvenanceGraph& g, const Pattern& p,
                           const EvalOptions& opts) {
  PathEnumerator en(g, p, opts.max_paths);
  en.run();
  PathSet out;
  out.truncated = en.truncated();
  for (const auto& seq : en.found()) out.paths.push_back(to_match(g, seq));
  std::sort(out.paths.begin(), out.paths.end(),
            [](const PathMatch& a, const PathMatch& b) {
              return a.vertices < b.vertices;
            });
  return out;
}

inline Pattern chain_pattern(const Selector& from,
                             std::span<const Selector> via,
                             const Selector& to, bool cause, bool effect) {
  Pattern p;
  p.first = &from;
  for (const Selector& s : via)
    p.segments.push_back({HopRule::Gap, cause, effect, &s});
  p.segments.push_back({HopRule::Gap, cause, effect, &to});
  // A provenance path has at least three vertices.
  p.min_vertices = 3;
  return p;
}

}  // namespace detail

/// Evaluates an XPath-subset query. "/" is one effect step, "//" (and
/// preceding::) one or more effect steps, following:: one or more cause
/// steps. A leading "/" anchors at vertices no stored edge points into.
inline PathSet eval_query(const ProvenanceGraph& g, const PathExpr& e,
                          const EvalOptions& opts = {}) {
  if (e.steps.empty()) return {};
  detail::Pattern p;
  p.first = &e.steps.front().selector;
  p.first_at_root = e.steps.front().axis == Axis::Child;
  for (std::size_t i = 1; i < e.steps.size(); ++i) {
    const Step& s = e.steps[i];
    switch (s.axis) {
      case Axis::Child:
        p.segments.push_back({detail::HopRule::Child, false, true, &s.selector});
        break;
      case Axis::Descendant:
      case Axis::Preceding:
        p.segments.push_back({detail::HopRule::Gap, false, true, &s.selector});
        break;
      case Axis::Following:
        p.segments.push_back({detail::HopRule::Gap, true, false, &s.selector});
        break;
    }
  }
  return detail::run_pattern(g, p, opts);
}

/// Chronological paths from a `from` match through each `via` match in order
/// to a `to` match, using cause steps only. Paths are listed earliest first.
inline PathSet eval_directed_path(const ProvenanceGraph& g,
                                  const Selector& from,
                                  std::span<const Selector> via,
                                  const Selector& to,
                                  const EvalOptions& opts = {}) {
  auto p = detail::chain_pattern(from, via, to, true, false);
  return detail::run_pattern(g, p, opts);
}

inline PathSet eval_directed_path(const ProvenanceGraph& g,
                                  const Selector& from, const Selector& to,
                                  const EvalOptions& opts = {}) {
  return eval_directed_path(g, from, std::span<const Selector>{}, to, opts);
}

/// Paths whose hops may be cause or effect steps.
inline PathSet eval_general_path(const ProvenanceGraph& g,
                                 const Selector& from,
                                 std::span<const Selector> via,
                                 const Selector& to,
                                 const EvalOptions& opts = {}) {
  auto p = detail::chain_pattern(from, via, to, true, true);
  return detail::run_pattern(g, p, opts);
}

inline PathSet eval_general_path(const ProvenanceGraph& g,
                                 const Selector& from, const Selector& to,
                                 const EvalOptions& opts = {}) {
  return eval_general_path(g, from, std::span<const Selector>{}, to, opts);
}

}  // namespace provpolicy
