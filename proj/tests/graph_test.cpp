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

#include <gtest/gtest.h>

#include <functional>

#include "oracle.hpp"
#include "support.hpp"

using namespace provpolicy;
using testing_support::load_data_graph;
using testing_support::small_graph;

namespace {

ProvenanceGraph tiny(std::vector<Vertex> vs, std::vector<Edge> es) {
  ProvenanceGraph g("T");
  for (auto& v : vs) g.add_vertex(std::move(v));
  for (auto& e : es) g.add_edge(std::move(e));
  return g;
}

Vertex V(std::string id, VertexType t) { return {id, t, id, std::nullopt}; }

// Independent cycle check: repeatedly strip vertices without outgoing
// non-ha edges.
bool has_cycle(const ProvenanceGraph& g) {
  std::set<std::string> alive;
  for (const auto& v : g.vertices()) alive.insert(v.id);
  for (bool changed = true; changed;) {
    changed = false;
    for (auto it = alive.begin(); it != alive.end();) {
      bool out = false;
      for (const auto& e : g.edges())
        if (e.src == *it && e.label != EdgeLabel::HasAttributes && alive.contains(e.dst))
          out = true;
      if (!out) {
        it = alive.erase(it);
        changed = true;
      } else {
        ++it;
      }
    }
  }
  return !alive.empty();
}

}  // namespace

TEST(Schema, AllowedTriples) {
  using T = VertexType;
  using L = EdgeLabel;
  EXPECT_TRUE(schema_allows(T::Artifact, T::Process, L::WasGeneratedBy));
  EXPECT_TRUE(schema_allows(T::Process, T::Artifact, L::Used));
  EXPECT_TRUE(schema_allows(T::Process, T::Agent, L::WasControlledBy));
  EXPECT_TRUE(schema_allows(T::Artifact, T::Artifact, L::WasDerivedFrom));
  EXPECT_TRUE(schema_allows(T::Process, T::Process, L::WasTriggeredBy));
  EXPECT_TRUE(schema_allows(T::Agent, T::Attribute, L::HasAttributes));
  EXPECT_FALSE(schema_allows(T::Agent, T::Process, L::Used));
  EXPECT_FALSE(schema_allows(T::Artifact, T::Process, L::WasCausedBy));
  EXPECT_TRUE(schema_allows(T::Artifact, T::Process, L::WasCausedBy, true));
  EXPECT_FALSE(schema_allows(T::Artifact, T::Attribute, L::WasCausedBy, true));
}

TEST(Validate, WgbEdgeIsValid) {
  auto g = tiny({V("a", VertexType::Artifact), V("p", VertexType::Process)},
                {{"a", "p", EdgeLabel::WasGeneratedBy, std::nullopt}});
  EXPECT_TRUE(validate_graph(g).empty());
}

TEST(Validate, AgentUsedIsIllegal) {
  auto g = tiny({V("ag", VertexType::Agent), V("p", VertexType::Process)},
                {{"ag", "p", EdgeLabel::Used, std::nullopt}});
  auto vs = validate_graph(g);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::IllegalTriple);
  EXPECT_NE(vs[0].message.find("(Ag,P,u)"), std::string::npos);
}

TEST(Validate, CycleIsOneViolation) {
  // P1 -> A1 -> P2 -> P1 using legal labels only.
  auto g = tiny({V("P1", VertexType::Process), V("A1", VertexType::Artifact),
                 V("P2", VertexType::Process)},
                {{"P1", "A1", EdgeLabel::Used, std::nullopt},
                 {"A1", "P2", EdgeLabel::WasGeneratedBy, std::nullopt},
                 {"P2", "P1", EdgeLabel::WasTriggeredBy, std::nullopt}});
  auto vs = validate_graph(g);
  ASSERT_EQ(vs.size(), 1u);
  EXPECT_EQ(vs[0].kind, ViolationKind::Cycle);
  EXPECT_EQ(vs[0].vertices, (std::vector<std::string>{"A1", "P1", "P2"}));
}

TEST(Validate, DanglingAndAttributeOutgoing) {
  auto g = tiny({V("p", VertexType::Process), {"t", VertexType::Attribute, "x", "1"}},
                {{"p", "ghost", EdgeLabel::Used, std::nullopt},
                 {"t", "p", EdgeLabel::HasAttributes, std::nullopt}});
  auto vs = validate_graph(g);
  std::set<ViolationKind> kinds;
  for (const auto& v : vs) kinds.insert(v.kind);
  EXPECT_TRUE(kinds.contains(ViolationKind::DanglingEdge));
  EXPECT_TRUE(kinds.contains(ViolationKind::AttributeOutgoing));
}

TEST(Validate, WasCausedByOnlyInTransformedProfile) {
  auto g = tiny({V("a", VertexType::Artifact), V("b", VertexType::Artifact)},
                {{"a", "b", EdgeLabel::WasCausedBy, std::nullopt}});
  EXPECT_EQ(validate_graph(g).size(), 1u);
  EXPECT_TRUE(validate_graph(g, Profile::Transformed).empty());
}

TEST(Validate, MatchesBruteForceOnRandomCandidates) {
  // Random candidate graphs, legal or not, against triple scan + peeling.
  Rng rng(5);
  for (int round = 0; round < 300; ++round) {
    ProvenanceGraph g("R");
    const std::size_t n = 2 + rng.below(7);
    for (std::size_t i = 0; i < n; ++i) {
      const VertexType t = kVertexTypes[rng.below(4)];
      g.add_vertex({"v" + std::to_string(i), t, "v" + std::to_string(i),
                    t == VertexType::Attribute ? std::optional<std::string>("x") : std::nullopt});
    }
    const std::size_t m = rng.below(10);
    for (std::size_t i = 0; i < m; ++i)
      g.add_edge({"v" + std::to_string(rng.below(n)), "v" + std::to_string(rng.below(n)),
                  kEdgeLabels[rng.below(6)], std::nullopt});
    bool legal = true;
    for (const auto& e : g.edges())
      if (!schema_allows(g.vertex(e.src).type, g.vertex(e.dst).type, e.label)) legal = false;
    const bool expect_valid = legal && !has_cycle(g);
    EXPECT_EQ(validate_graph(g).empty(), expect_valid) << save_graph(g);
  }
}

TEST(Io, EmptyDocument) {
  auto g = load_graph(R"({"id": "E", "vertices": [], "edges": []})");
  EXPECT_EQ(g.vertex_count(), 0u);
  EXPECT_EQ(g.edge_count(), 0u);
}

TEST(Io, SampleAContainsUploadEdge) {
  auto g = load_data_graph("sample_a.json");
  EXPECT_GE(g.vertex_count(), 5u);
  EXPECT_TRUE(validate_graph(g).empty());
  bool found = false;
  for (const auto& e : g.edges())
    if (e.src == "o1v1" && e.dst == "upload1" && e.label == EdgeLabel::WasGeneratedBy)
      found = e.tag == std::optional<std::string>("g_upload");
  EXPECT_TRUE(found);
}

TEST(Io, ErrorLocations) {
  try {
    load_graph("{\n  \"vertices\": [\n    {\"id\": 1}\n");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_NE(e.location().find("line"), std::string::npos);
  }
  try {
    load_graph(R"({"vertices": [{"id": "a", "type": "robot"}]})");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_EQ(e.location(), "vertices[0].type");
  }
  try {
    load_graph(R"({"vertices": [], "edges": [{"src": "a", "dst": "b", "label": "likes"}]})");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_EQ(e.location(), "edges[0].label");
  }
}

TEST(Io, RoundTripRandomGraphs) {
  GenConfig cfg;
  cfg.seed = 11;
  cfg.graph_count = 100;
  for (const auto& g : gen_graphs(cfg)) {
    auto back = load_graph(save_graph(g));
    EXPECT_TRUE(structurally_equal(g, back));
    EXPECT_EQ(save_graph(back), save_graph(g));
  }
}

TEST(Traversal, UploadCauseSuccessors) {
  auto g = load_data_graph("sample_a.json");
  auto cs = cause_successors(g, "upload1");
  EXPECT_NE(std::find(cs.begin(), cs.end(),
                      std::pair<std::string, EdgeLabel>{"o1v1", EdgeLabel::WasGeneratedBy}),
            cs.end());
}

TEST(Traversal, AttributeHasNoSuccessors) {
  auto g = load_data_graph("sample_b.json");
  EXPECT_TRUE(cause_successors(g, "review1.attri").empty());
  EXPECT_TRUE(effect_successors(g, "review1.attri").empty());
  EXPECT_THROW(cause_successors(g, "nope"), GraphError);
}

TEST(Traversal, CauseIsTransposeOfEffect) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = small_graph(seed);
    for (const auto& u : g.vertices())
      for (const auto& [v, l] : cause_successors(g, u.id)) {
        auto back = effect_successors(g, v);
        EXPECT_NE(std::find(back.begin(), back.end(), std::pair{u.id, l}), back.end());
      }
  }
}

TEST(Traversal, CauseStepsNeverRevisit) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = small_graph(seed);
    for (const auto& s : g.vertices()) {
      std::function<void(const std::string&, std::set<std::string>&)> walk =
          [&](const std::string& v, std::set<std::string>& on) {
            for (const auto& [w, l] : cause_successors(g, v)) {
              ASSERT_FALSE(on.contains(w));
              on.insert(w);
              walk(w, on);
              on.erase(w);
            }
          };
      std::set<std::string> on{s.id};
      walk(s.id, on);
    }
  }
}

TEST(Attributes, Review1Attri) {
  auto g = load_data_graph("sample_b.json");
  auto attrs = attributes_of(g, "review1");
  ASSERT_EQ(attrs.size(), 1u);
  EXPECT_EQ(attrs.begin()->first, "Attri");
  EXPECT_EQ(attrs.begin()->second, "Attri");
  EXPECT_TRUE(attributes_of(g, "o1v2").empty());
}

TEST(Attributes, TwoAttributesMatchEdgeScan) {
  auto g = tiny({V("p", VertexType::Process), {"t1", VertexType::Attribute, "date", "1/1/2016"},
                 {"t2", VertexType::Attribute, "owner", "au1"}},
                {{"p", "t1", EdgeLabel::HasAttributes, std::nullopt},
                 {"p", "t2", EdgeLabel::HasAttributes, std::nullopt}});
  auto attrs = attributes_of(g, "p");
  std::multimap<std::string, std::string> scan;
  for (const auto& e : g.edges())
    if (e.src == "p" && e.label == EdgeLabel::HasAttributes)
      scan.emplace(g.vertex(e.dst).name, *g.vertex(e.dst).value);
  EXPECT_EQ(attrs, scan);
  EXPECT_EQ(attrs.size(), 2u);
}

TEST(Dot, ShapesAndLabels) {
  auto g = load_data_graph("sample_b.json");
  const std::string dot = to_dot(g);
  EXPECT_NE(dot.find("\"o1v1\" [shape=oval"), std::string::npos);
  EXPECT_NE(dot.find("\"upload1\" [shape=rectangle"), std::string::npos);
  EXPECT_NE(dot.find("\"au1\" [shape=octagon"), std::string::npos);
  EXPECT_NE(dot.find("[shape=note, label=\"Attri = Attri\"]"), std::string::npos);
  EXPECT_NE(dot.find("\"o1v1\" -> \"upload1\" [label=\"wasGeneratedBy\"]"), std::string::npos);
}

TEST(Graph, DuplicateIdRejected) {
  ProvenanceGraph g;
  g.add_vertex(V("a", VertexType::Artifact));
  EXPECT_THROW(g.add_vertex(V("a", VertexType::Process)), GraphError);
}
