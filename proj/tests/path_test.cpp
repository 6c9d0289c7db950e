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

#include "oracle.hpp"
#include "support.hpp"

using namespace provpolicy;
using testing_support::load_data_graph;
using testing_support::sel;
using testing_support::small_graph;

namespace {

using Seq = std::vector<std::string>;

std::set<Seq> sequences(const PathSet& ps) {
  std::set<Seq> out;
  for (const auto& m : ps.paths) out.insert(m.vertices);
  return out;
}

std::set<Seq> query(const ProvenanceGraph& g, const std::string& text) {
  return sequences(eval_query(g, parse_path_expr(text)));
}

// Every hop is backed by the recorded stored edge in the recorded direction.
void expect_witnessed(const ProvenanceGraph& g, const PathSet& ps) {
  for (const auto& m : ps.paths) {
    ASSERT_EQ(m.directions.size() + 1, m.vertices.size());
    ASSERT_EQ(m.edges.size(), m.directions.size());
    std::set<std::string> seen(m.vertices.begin(), m.vertices.end());
    EXPECT_EQ(seen.size(), m.vertices.size());
    for (std::size_t i = 0; i < m.edges.size(); ++i) {
      const Edge& e = m.edges[i];
      EXPECT_NE(std::find(g.edges().begin(), g.edges().end(), e), g.edges().end());
      if (m.directions[i] == Direction::EffectStep) {
        EXPECT_EQ(e.src, m.vertices[i]);
        EXPECT_EQ(e.dst, m.vertices[i + 1]);
      } else {
        EXPECT_EQ(e.dst, m.vertices[i]);
        EXPECT_EQ(e.src, m.vertices[i + 1]);
      }
    }
  }
}

PathExpr random_expr(const std::vector<Selector>& pool, Rng& rng) {
  static const Axis axes[] = {Axis::Child, Axis::Descendant, Axis::Following, Axis::Preceding};
  PathExpr e;
  const std::size_t n = 1 + rng.below(4);
  for (std::size_t i = 0; i < n; ++i) {
    Axis a = i == 0 ? (rng.chance(0.5) ? Axis::Child : Axis::Descendant) : axes[rng.below(4)];
    e.steps.push_back({a, rng.pick(pool)});
  }
  return e;
}

}  // namespace

TEST(Parse, TableRowOne) {
  auto e = parse_path_expr("//o1v2/replace1/o1v1/upload1/au1");
  ASSERT_EQ(e.steps.size(), 5u);
  std::vector<Axis> axes;
  for (const auto& s : e.steps) {
    axes.push_back(s.axis);
    EXPECT_TRUE(std::holds_alternative<NameLiteral>(s.selector.test));
  }
  EXPECT_EQ(axes, (std::vector<Axis>{Axis::Descendant, Axis::Child, Axis::Child, Axis::Child,
                                     Axis::Child}));
  EXPECT_EQ(std::get<NameLiteral>(e.steps[1].selector.test).names,
            std::vector<std::string>{"replace1"});
}

TEST(Parse, PredicateOnReview) {
  auto e = parse_path_expr("//o2v2//review1[@Attri='Attri']/au2");
  ASSERT_EQ(e.steps.size(), 3u);
  ASSERT_TRUE(e.steps[1].selector.predicate.has_value());
  EXPECT_EQ(e.steps[1].selector.predicate->name, "Attri");
  EXPECT_EQ(e.steps[1].selector.predicate->value, "Attri");
  EXPECT_FALSE(e.steps[2].selector.predicate.has_value());
}

TEST(Parse, WildcardRunIsDescendant) {
  EXPECT_EQ(parse_path_expr("\\v+a\\v+b"), parse_path_expr("//a//b"));
}

TEST(Parse, TypedSelectors) {
  auto s = sel("TypedV_P'(G_i, review|grade)");
  auto* t = std::get_if<TypedVNamed>(&s.test);
  ASSERT_NE(t, nullptr);
  EXPECT_EQ(t->type, VertexType::Process);
  EXPECT_EQ(t->names, (std::vector<std::string>{"review", "grade"}));
  auto a = sel("AttV_P(G_i, 1/1/2016)");
  ASSERT_TRUE(std::holds_alternative<AttV>(a.test));
  EXPECT_EQ(std::get<AttV>(a.test).values, std::vector<std::string>{"1/1/2016"});
  EXPECT_TRUE(std::holds_alternative<TypedV>(sel("TypedV_Ag(G_i)").test));
  EXPECT_TRUE(std::holds_alternative<Wildcard>(sel("*").test));
}

TEST(Parse, RoundTripThroughText) {
  for (const char* text : {"//o1v2/replace1/o1v1/upload1/au1", "//o2v2//review1[@Attri='Attri']/au2",
                           "/TypedV_P'(G_i, upload|submit)//following::*",
                           "//AttV_A(G_i, 85)/preceding::TypedV_Ag(G_i)"}) {
    auto e = parse_path_expr(text);
    EXPECT_EQ(parse_path_expr(to_string(e)), e) << text;
  }
}

TEST(Parse, Errors) {
  auto offset_of = [](const std::string& text) -> std::size_t {
    try {
      parse_path_expr(text);
    } catch (const SyntaxError& e) {
      EXPECT_FALSE(e.expected().empty()) << text;
      return e.offset();
    }
    ADD_FAILURE() << "accepted: " << text;
    return 0;
  };
  EXPECT_EQ(offset_of(""), 0u);
  EXPECT_EQ(offset_of("//a/"), 4u);
  EXPECT_EQ(offset_of("//a[@x='1'"), 10u);
  EXPECT_EQ(offset_of("//TypedV_Q(G_i)"), 9u);
  EXPECT_THROW(parse_path_expr("//a//START//b"), SyntaxError);
}

TEST(NameMatch, InstanceNumbers) {
  EXPECT_TRUE(name_matches("upload", "upload1"));
  EXPECT_TRUE(name_matches("upload", "upload12"));
  EXPECT_TRUE(name_matches("upload1", "upload1"));
  EXPECT_FALSE(name_matches("upload1", "upload12"));
  EXPECT_FALSE(name_matches("o1v2", "o1v21"));
  EXPECT_FALSE(name_matches("upload", "uploadx"));
  EXPECT_FALSE(name_matches("load", "upload1"));
}

TEST(Query, TableRows) {
  auto g = load_data_graph("sample_b.json");
  EXPECT_EQ(query(g, "//o1v2/replace1/o1v1/upload1/au1"),
            (std::set<Seq>{{"o1v2", "replace1", "o1v1", "upload1", "au1"}}));
  EXPECT_EQ(query(g, "//o1v2//o1v1"), (std::set<Seq>{{"o1v2", "replace1", "o1v1"}}));
  EXPECT_EQ(query(g, "//o2v2//review1[@Attri='Attri']"), (std::set<Seq>{{"o2v2", "review1"}}));
  EXPECT_EQ(query(g, "//o2v2//review1[@Attri='Attri']/au2"),
            (std::set<Seq>{{"o2v2", "review1", "au2"}}));
}

TEST(Query, PredicateMustHold) {
  auto g = load_data_graph("sample_b.json");
  EXPECT_TRUE(query(g, "//o2v2//review1[@Attri='other']").empty());
  EXPECT_TRUE(query(g, "//o1v3//grade1[@Attri='Attri']").empty());
}

TEST(Query, AbsentNameIsEmpty) {
  auto g = load_data_graph("sample_b.json");
  EXPECT_TRUE(query(g, "//nosuch1").empty());
  EXPECT_TRUE(query(g, "//o1v2//nosuch1").empty());
}

TEST(Query, LeadingChildAnchorsAtEnd) {
  auto g = load_data_graph("sample_b.json");
  // o2v1, o2v2 and o4v1 have no incoming edges.
  std::set<Seq> expect{{"o2v1"}, {"o2v2"}, {"o4v1"}};
  EXPECT_EQ(query(g, "/TypedV_A(G_i)"), expect);
}

TEST(Directed, UploadToSubmit) {
  auto g = load_data_graph("sample_a.json");
  auto ps = eval_directed_path(g, sel("TypedV_P'(G_i, upload)"), sel("TypedV_P'(G_i, submit)"));
  EXPECT_EQ(sequences(ps), (std::set<Seq>{{"upload1", "o1v1", "replace1", "o1v2", "submit1"}}));
  expect_witnessed(g, ps);
  for (const auto& m : ps.paths)
    for (auto d : m.directions) EXPECT_EQ(d, Direction::CauseStep);
}

TEST(Directed, SameVertexIsEmpty) {
  auto g = load_data_graph("sample_a.json");
  EXPECT_TRUE(eval_directed_path(g, sel("upload1"), sel("upload1")).paths.empty());
}

TEST(General, ReviewToGrade) {
  auto g = load_data_graph("sample_b.json");
  auto ps = eval_general_path(g, sel("TypedV_A'(G_i, o2v1)"), sel("TypedV_A'(G_i, o4v1)"));
  EXPECT_EQ(sequences(ps), (std::set<Seq>{{"o2v1", "review1", "o1v3", "grade1", "o4v1"}}));
  expect_witnessed(g, ps);
}

TEST(General, ThreeCoincidentPaths) {
  auto g = load_data_graph("sample_a.json");
  auto ps = eval_general_path(g, sel("TypedV_Ag'(G_i, au1)"), sel("TypedV_A'(G_i, o1v2)"));
  EXPECT_EQ(sequences(ps), (std::set<Seq>{{"au1", "upload1", "o1v1", "replace1", "o1v2"},
                                          {"au1", "replace1", "o1v2"},
                                          {"au1", "submit1", "o1v2"}}));
  expect_witnessed(g, ps);
}

TEST(General, DisconnectedIsEmpty) {
  ProvenanceGraph g("D");
  g.add_vertex({"a", VertexType::Artifact, "a", std::nullopt});
  g.add_vertex({"b", VertexType::Artifact, "b", std::nullopt});
  EXPECT_TRUE(eval_general_path(g, sel("a"), sel("b")).paths.empty());
}

TEST(Cap, TruncationIsReported) {
  auto g = load_data_graph("sample_b.json");
  EvalOptions opts;
  opts.max_paths = 1;
  auto ps = eval_general_path(g, sel("*"), sel("*"), opts);
  EXPECT_TRUE(ps.truncated);
  EXPECT_EQ(ps.paths.size(), 1u);
  EXPECT_FALSE(eval_general_path(g, sel("*"), sel("*")).truncated);
}

TEST(Oracle, QueriesMatchBruteForce) {
  Rng rng(42);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto g = small_graph(seed);
    auto pool = testing_support::some_selectors(g);
    for (int k = 0; k < 4; ++k) {
      auto e = random_expr(pool, rng);
      auto ps = eval_query(g, e);
      ASSERT_EQ(sequences(ps), oracle::eval_query(g, e)) << to_string(e) << "\n" << save_graph(g);
      expect_witnessed(g, ps);
    }
  }
}

TEST(Oracle, PathsMatchBruteForce) {
  Rng rng(43);
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    auto g = small_graph(seed);
    auto pool = testing_support::some_selectors(g);
    for (int k = 0; k < 3; ++k) {
      const Selector& a = rng.pick(pool);
      const Selector& b = rng.pick(pool);
      std::vector<Selector> via;
      if (rng.chance(0.4)) via.push_back(rng.pick(pool));
      auto d = eval_directed_path(g, a, via, b);
      auto gen = eval_general_path(g, a, via, b);
      ASSERT_EQ(sequences(d), oracle::eval_directed(g, a, via, b)) << save_graph(g);
      ASSERT_EQ(sequences(gen), oracle::eval_general(g, a, via, b)) << save_graph(g);
      expect_witnessed(g, d);
      expect_witnessed(g, gen);
      // directed paths are general paths
      auto ds = sequences(d), gs = sequences(gen);
      EXPECT_TRUE(std::includes(gs.begin(), gs.end(), ds.begin(), ds.end()));
    }
  }
}

TEST(Duality, DirectedReversedIsEffectOnly) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    auto g = small_graph(seed);
    const oracle::Adjacency adj(g);
    for (const auto& m : eval_directed_path(g, sel("*"), sel("*")).paths) {
      Seq r(m.vertices.rbegin(), m.vertices.rend());
      for (std::size_t i = 0; i + 1 < r.size(); ++i)
        EXPECT_TRUE(adj.kinds(r[i], r[i + 1]) & oracle::kEffect);
    }
  }
}

TEST(Determinism, SortedAndRepeatable) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    auto g = small_graph(seed);
    auto a = eval_general_path(g, sel("*"), sel("*"));
    auto b = eval_general_path(g, sel("*"), sel("*"));
    EXPECT_EQ(a.paths, b.paths);
    std::vector<Seq> seqs;
    for (const auto& m : a.paths) seqs.push_back(m.vertices);
    EXPECT_TRUE(std::is_sorted(seqs.begin(), seqs.end()));
  }
}
