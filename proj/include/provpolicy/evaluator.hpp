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

// Request evaluation against a policy set.
//
// Each applicable policy covers a set of vertices: the clusters of its
// transformations, or (without transformations) its resource selection or
// the whole graph. Effects are combined per vertex with AbsolutePermit >
// Deny > Permit. Deny policies are then applied in id order, each cluster
// cut down to the vertices Deny actually won. When no policy applies the
// request is denied outright.

#pragma once

#include <algorithm>
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
#include "provpolicy/path_engine.hpp"
#include "provpolicy/policy.hpp"
#include "provpolicy/transform.hpp"

namespace provpolicy {

enum class Outcome { PermitFull, PermitTransformed, DenyAll };

constexpr std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::PermitFull: return "PermitFull";
    case Outcome::PermitTransformed: return "PermitTransformed";
    case Outcome::DenyAll: return "DenyAll";
  }
  return "?";
}

using EffectMap = std::map<std::string, Effect>;

/// Winning effect per vertex: the highest-precedence effect among the sets
/// containing it. Vertices listed in `universe` but in no set get Permit.
inline EffectMap combine_effects(
    const std::vector<std::pair<Effect, std::vector<std::string>>>& per_policy,
    const std::vector<std::string>& universe = {}) {
  EffectMap out;
  for (const auto& id : universe) out.emplace(id, Effect::Permit);
  for (const auto& [effect, ids] : per_policy) {
    for (const auto& id : ids) {
      auto [it, fresh] = out.emplace(id, effect);
      if (!fresh && precedence(effect) > precedence(it->second)) it->second = effect;
    }
  }
  return out;
}

/// A transformation step actually carried out.
struct PlannedStep {
  std::string policy_id;
  std::size_t transformation = 0;  // index within the policy
  Cluster cluster;
  Mode mode = Mode::Remove;
  DependencyLabel label = DependencyLabel::FalseDependency;
};

struct Decision {
  Outcome outcome = Outcome::DenyAll;
  std::vector<std::string> applied_policies;  // applicable, sorted
  std::vector<PlannedStep> plan;
  EffectMap effects;
  std::size_t hidden_vertex_count = 0;
  std::vector<nlohmann::ordered_json> log;
  std::optional<PathSet> query_result;
};

/// Raised when a policy's transformation fails; names the policy.
class PolicyError : public TransformError {
 public:
  PolicyError(std::string policy_id, const std::string& message)
      : TransformError("policy '" + policy_id + "': " + message),
        policy_id_(std::move(policy_id)) {}
  const std::string& policy_id() const noexcept { return policy_id_; }

 private:
  std::string policy_id_;
};

namespace detail {

struct PolicyCoverage {
  const Policy* policy;
  // Per transformation: its clusters on the input graph.
  std::vector<std::vector<Cluster>> clusters;
  std::vector<std::string> covered;  // sorted
};

inline PolicyCoverage coverage_of(const Policy& p, const ProvenanceGraph& g,
                                  const Vcd& vcd, const EvalOptions& eval) {
  PolicyCoverage cov{&p, {}, {}};
  std::set<std::string> ids;
  if (p.transformations.empty()) {
    if (p.target.resource) {
      for (VertexIndex v : select(g, *p.target.resource)) ids.insert(g.vertex(v).id);
    } else {
      for (const auto& v : g.vertices()) ids.insert(v.id);
    }
  }
  for (const auto& t : p.transformations) {
    const Partition base = resolve(g, t.partition, eval);
    auto clusters = expand_scope(g, base, t.scope, vcd);
    for (const auto& c : clusters) ids.insert(c.vertex_ids.begin(), c.vertex_ids.end());
    cov.clusters.push_back(std::move(clusters));
  }
  cov.covered.assign(ids.begin(), ids.end());
  return cov;
}

inline nlohmann::ordered_json step_json(const PlannedStep& s) {
  nlohmann::ordered_json j;
  j["policy"] = s.policy_id;
  j["transformation"] = s.transformation;
  j["mode"] = to_string(s.mode);
  j["label"] = to_string(s.label);
  j["cluster"] = s.cluster.vertex_ids;
  if (s.cluster.category) j["category"] = *s.cluster.category;
  return j;
}

}  // namespace detail

struct EvaluateOptions {
  EvalOptions eval;
};

/// Evaluates `req` against `policies` on `g`. Returns the decision and the
/// graph the requester may see (empty on DenyAll).
inline std::pair<Decision, TransformResult> evaluate(
    const AccessRequest& req, const std::vector<Policy>& policies,
    const ProvenanceGraph& g, const Vcd& vcd, const EdgeMergeTable& emt,
    const EvaluateOptions& opts = {}) {
  if (!req.graph_id.empty() && !g.id().empty() && req.graph_id != g.id())
    throw Error("unknown graph id '" + req.graph_id + "'");

  Decision d;
  std::vector<const Policy*> active;
  for (const auto& p : policies)
    if (applicable(p, req, g)) active.push_back(&p);
  std::sort(active.begin(), active.end(),
            [](const Policy* a, const Policy* b) { return a->id < b->id; });
  for (const Policy* p : active) d.applied_policies.push_back(p->id);

  if (active.empty()) {
    d.outcome = Outcome::DenyAll;
    d.hidden_vertex_count = g.vertex_count();
    ProvenanceGraph empty(g.id());
    nlohmann::ordered_json rec;
    rec["decision"] = "DenyAll";
    rec["reason"] = "no applicable policy";
    d.log.push_back(rec);
    if (req.query) d.query_result = PathSet{};
    return {std::move(d), TransformResult{std::move(empty), {rec}}};
  }

  std::vector<detail::PolicyCoverage> coverage;
  std::vector<std::pair<Effect, std::vector<std::string>>> sets;
  for (const Policy* p : active) {
    try {
      coverage.push_back(detail::coverage_of(*p, g, vcd, opts.eval));
    } catch (const Error& e) {
      throw PolicyError(p->id, e.what());
    }
    sets.emplace_back(p->effect, coverage.back().covered);
  }
  std::vector<std::string> universe;
  for (const auto& v : g.vertices()) universe.push_back(v.id);
  d.effects = combine_effects(sets, universe);

  auto denied = [&](const std::string& id) {
    auto it = d.effects.find(id);
    return it != d.effects.end() && it->second == Effect::Deny;
  };

  // Vertices some Deny policy removes; they are taken out of replace
  // clusters so that removal wins.
  std::set<std::string> removed_somewhere;
  for (const auto& cov : coverage) {
    const Policy& p = *cov.policy;
    if (p.effect != Effect::Deny) continue;
    if (p.transformations.empty()) {
      for (const auto& id : cov.covered)
        if (denied(id)) removed_somewhere.insert(id);
      continue;
    }
    for (std::size_t t = 0; t < p.transformations.size(); ++t) {
      if (p.transformations[t].mode != Mode::Remove) continue;
      for (const auto& c : cov.clusters[t])
        for (const auto& id : c.vertex_ids)
          if (denied(id)) removed_somewhere.insert(id);
    }
  }

  for (const auto& cov : coverage) {
    const Policy& p = *cov.policy;
    if (p.effect != Effect::Deny) continue;
    if (p.transformations.empty()) {
      Cluster c;
      for (const auto& id : cov.covered)
        if (denied(id)) c.vertex_ids.push_back(id);
      if (!c.vertex_ids.empty())
        d.plan.push_back({p.id, 0, std::move(c), Mode::Remove,
                          DependencyLabel::FalseDependency});
      continue;
    }
    for (std::size_t t = 0; t < p.transformations.size(); ++t) {
      const Transformation& tr = p.transformations[t];
      for (const auto& c : cov.clusters[t]) {
        Cluster kept{{}, c.category};
        for (const auto& id : c.vertex_ids) {
          if (!denied(id)) continue;
          if (tr.mode == Mode::Replace && removed_somewhere.contains(id)) continue;
          kept.vertex_ids.push_back(id);
        }
        if (!kept.vertex_ids.empty())
          d.plan.push_back({p.id, t, std::move(kept), tr.mode, tr.label});
      }
    }
  }

  TransformResult cur{detail::rebuild(g, std::vector<bool>(g.vertex_count(), false), {}, {}), {}};
  std::map<std::pair<std::string, std::size_t>, std::size_t> cluster_counter;
  for (const PlannedStep& s : d.plan) {
    nlohmann::ordered_json rec = detail::step_json(s);
    try {
      TransformOptions topts;
      topts.id_prefix = "repl:" + s.policy_id;
      topts.eval = opts.eval;
      const std::size_t ci = cluster_counter[{s.policy_id, s.transformation}]++;
      Cluster present = detail::present_part(cur.graph, s.cluster);
      if (present.vertex_ids.empty()) {
        rec["noop"] = "cluster not present";
        cur.log.push_back(std::move(rec));
        continue;
      }
      TransformResult step =
          s.mode == Mode::Remove
              ? apply_remove(cur.graph, present, s.label, emt)
              : apply_replace(cur.graph, present, vcd, s.label,
                              {detail::replacement_id(topts, s.transformation, ci,
                                                      present, vcd, cur.graph)});
      cur.graph = std::move(step.graph);
      rec["steps"] = step.log;
    } catch (const PolicyError&) {
      throw;
    } catch (const Error& e) {
      throw PolicyError(s.policy_id, e.what());
    }
    cur.log.push_back(std::move(rec));
  }

  d.outcome = d.plan.empty() ? Outcome::PermitFull : Outcome::PermitTransformed;
  for (const auto& v : g.vertices())
    if (!cur.graph.contains(v.id)) ++d.hidden_vertex_count;
  d.log = cur.log;
  if (req.query) d.query_result = eval_query(cur.graph, *req.query, opts.eval);
  return {std::move(d), std::move(cur)};
}

inline nlohmann::ordered_json decision_to_json(const Decision& d) {
  nlohmann::ordered_json j;
  j["outcome"] = to_string(d.outcome);
  j["appliedPolicies"] = d.applied_policies;
  j["hiddenVertexCount"] = d.hidden_vertex_count;
  auto plan = nlohmann::ordered_json::array();
  for (const auto& s : d.plan) plan.push_back(detail::step_json(s));
  j["plan"] = std::move(plan);
  nlohmann::ordered_json effects = nlohmann::ordered_json::object();
  for (const auto& [id, e] : d.effects) effects[id] = to_string(e);
  j["effects"] = std::move(effects);
  j["log"] = d.log;
  if (d.query_result) {
    auto paths = nlohmann::ordered_json::array();
    for (const auto& m : d.query_result->paths) paths.push_back(m.vertices);
    j["query"] = {{"paths", std::move(paths)}, {"truncated", d.query_result->truncated}};
  }
  return j;
}

}  // namespace provpolicy
