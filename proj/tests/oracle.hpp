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

// Brute-force reference implementations used by the tests. Deliberately
// naive: they work from the raw edge list and enumerate every simple path
// of the graph before filtering, so they share no traversal code with the
// library.

#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "provpolicy/provpolicy.hpp"

namespace oracle {

using provpolicy::EdgeLabel;
using provpolicy::ProvenanceGraph;
using provpolicy::Selector;

using Seq = std::vector<std::string>;

// hop kinds between consecutive path vertices
enum Hop { kEffect = 1, kCause = 2 };

struct Adjacency {
  // (from, to) -> bitmask of Hop kinds
  std::map<std::pair<std::string, std::string>, int> hops;
  std::vector<std::string> ids;

  explicit Adjacency(const ProvenanceGraph& g) {
    for (const auto& v : g.vertices()) ids.push_back(v.id);
    std::sort(ids.begin(), ids.end());
    for (const auto& e : g.edges()) {
      if (e.label == EdgeLabel::HasAttributes) continue;
      hops[{e.src, e.dst}] |= kEffect;  // along the stored edge
      hops[{e.dst, e.src}] |= kCause;   // against it
    }
  }

  int kinds(const std::string& a, const std::string& b) const {
    auto it = hops.find({a, b});
    return it == hops.end() ? 0 : it->second;
  }
};

/// Every simple path (at least one vertex) using hops in `allowed`.
inline std::vector<Seq> all_simple_paths(const Adjacency& adj, int allowed) {
  std::vector<Seq> out;
  Seq path;
  std::set<std::string> on;
  std::function<void()> extend = [&]() {
    out.push_back(path);
    for (const auto& next : adj.ids) {
      if (on.contains(next)) continue;
      if (!(adj.kinds(path.back(), next) & allowed)) continue;
      path.push_back(next);
      on.insert(next);
      extend();
      on.erase(next);
      path.pop_back();
    }
  };
  for (const auto& s : adj.ids) {
    path = {s};
    on = {s};
    extend();
  }
  return out;
}

inline bool matches(const ProvenanceGraph& g, const std::string& id, const Selector& s) {
  return provpolicy::selector_matches(g, g.index_of(id), s);
}

inline bool no_incoming(const ProvenanceGraph& g, const std::string& id) {
  if (g.vertex(id).type == provpolicy::VertexType::Attribute) return false;
  for (const auto& e : g.edges())
    if (e.dst == id && e.label != EdgeLabel::HasAttributes) return false;
  return true;
}

/// Query semantics by segmentation: step i > 0 owns a run of hops ending at a
/// vertex its selector accepts. "/" is exactly one effect hop, "//" and
/// preceding:: one or more effect hops, following:: one or more cause hops.
inline std::set<Seq> eval_query(const ProvenanceGraph& g, const provpolicy::PathExpr& e) {
  using provpolicy::Axis;
  std::set<Seq> out;
  if (e.steps.empty()) return out;
  const Adjacency adj(g);
  for (const Seq& p : all_simple_paths(adj, kEffect | kCause)) {
    if (!matches(g, p[0], e.steps[0].selector)) continue;
    if (e.steps[0].axis == Axis::Child && !no_incoming(g, p[0])) continue;
    // can(i, pos): steps i.. can consume path from position pos to the end.
    std::function<bool(std::size_t, std::size_t)> can = [&](std::size_t i, std::size_t pos) {
      if (i == e.steps.size()) return pos == p.size() - 1;
      const auto& st = e.steps[i];
      const int kind = st.axis == Axis::Following ? kCause : kEffect;
      for (std::size_t end = pos + 1; end < p.size(); ++end) {
        if (!(adj.kinds(p[end - 1], p[end]) & kind)) break;
        if (st.axis == Axis::Child && end != pos + 1) break;
        if (matches(g, p[end], st.selector) && can(i + 1, end)) return true;
      }
      return false;
    };
    if (can(1, 0)) out.insert(p);
  }
  return out;
}

/// from // via... // to with each gap one or more hops of `kinds`; at least
/// three vertices.
inline std::set<Seq> eval_chain(const ProvenanceGraph& g, const Selector& from,
                                const std::vector<Selector>& via, const Selector& to,
                                int kinds) {
  std::vector<const Selector*> targets;
  for (const auto& v : via) targets.push_back(&v);
  targets.push_back(&to);
  std::set<Seq> out;
  const Adjacency adj(g);
  for (const Seq& p : all_simple_paths(adj, kinds)) {
    if (p.size() < 3 || !matches(g, p.front(), from) || !matches(g, p.back(), to)) continue;
    // Place vias at increasing interior positions; the last target is the end.
    std::function<bool(std::size_t, std::size_t)> place = [&](std::size_t t, std::size_t pos) {
      if (t + 1 == targets.size()) return true;
      for (std::size_t q = pos + 1; q + 1 < p.size(); ++q)
        if (matches(g, p[q], *targets[t]) && place(t + 1, q)) return true;
      return false;
    };
    if (place(0, 0)) out.insert(p);
  }
  return out;
}

inline std::set<Seq> eval_directed(const ProvenanceGraph& g, const Selector& from,
                                   const std::vector<Selector>& via, const Selector& to) {
  return eval_chain(g, from, via, to, kCause);
}

inline std::set<Seq> eval_general(const ProvenanceGraph& g, const Selector& from,
                                  const std::vector<Selector>& via, const Selector& to) {
  return eval_chain(g, from, via, to, kCause | kEffect);
}

/// Vertices on some cause-only path (any length) from a start match to an
/// end match, plus adjacent agents and attributes.
inline std::set<std::string> subgraph(const ProvenanceGraph& g, const Selector& start,
                                      const Selector& end) {
  const Adjacency adj(g);
  std::set<std::string> core;
  for (const Seq& p : all_simple_paths(adj, kCause))
    if (matches(g, p.front(), start) && matches(g, p.back(), end))
      core.insert(p.begin(), p.end());
  std::set<std::string> out = core;
  for (const auto& e : g.edges()) {
    auto absorb = [&](const std::string& inside, const std::string& other) {
      const auto t = g.vertex(other).type;
      if (core.contains(inside) &&
          (t == provpolicy::VertexType::Agent || t == provpolicy::VertexType::Attribute))
        out.insert(other);
    };
    absorb(e.src, e.dst);
    absorb(e.dst, e.src);
  }
  return out;
}

/// Per-vertex maximum by precedence, computed pair by pair.
inline std::map<std::string, provpolicy::Effect> combine(
    const std::vector<std::pair<provpolicy::Effect, std::vector<std::string>>>& sets,
    const std::vector<std::string>& universe) {
  using provpolicy::Effect;
  auto rank = [](Effect e) {
    return e == Effect::AbsolutePermit ? 3 : e == Effect::Deny ? 2 : 1;
  };
  std::set<std::string> all(universe.begin(), universe.end());
  for (const auto& [e, ids] : sets) all.insert(ids.begin(), ids.end());
  std::map<std::string, Effect> out;
  for (const auto& v : all) {
    Effect best = Effect::Permit;
    for (const auto& [e, ids] : sets)
      if (std::find(ids.begin(), ids.end(), v) != ids.end() && rank(e) > rank(best)) best = e;
    out[v] = best;
  }
  return out;
}

/// Pairs (u, w) with w reachable from u along stored non-ha edges.
inline std::set<std::pair<std::string, std::string>> reachability(const ProvenanceGraph& g) {
  std::set<std::pair<std::string, std::string>> r;
  for (const auto& e : g.edges())
    if (e.label != EdgeLabel::HasAttributes) r.insert({e.src, e.dst});
  bool grew = true;
  while (grew) {
    grew = false;
    auto copy = r;
    for (const auto& [a, b] : copy)
      for (const auto& [c, d] : copy)
        if (b == c && r.insert({a, d}).second) grew = true;
  }
  return r;
}

}  // namespace oracle
