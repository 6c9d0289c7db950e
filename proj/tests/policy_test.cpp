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

#include "support.hpp"

using namespace provpolicy;
using testing_support::load_data_graph;
using testing_support::read_data;
using testing_support::sel;

namespace {

std::string location_of(const std::string& xml) {
  try {
    parse_policies(xml);
  } catch (const DocumentError& e) {
    return e.location();
  }
  return "<accepted>";
}

std::string minimal(const std::string& body) {
  return "<policy id=\"p\"><target><graph>G1</graph></target>" + body + "</policy>";
}

}  // namespace

TEST(Keywords, Normalization) {
  EXPECT_EQ(parse_scope("  Original "), Scope::Original);
  EXPECT_EQ(parse_mode("REPLACE"), Mode::Replace);
  EXPECT_EQ(parse_dependency_label(" false   dependency"), DependencyLabel::FalseDependency);
  EXPECT_EQ(parse_effect("Absolute Permit"), Effect::AbsolutePermit);
  EXPECT_FALSE(parse_scope("global"));
  EXPECT_LT(precedence(Effect::Permit), precedence(Effect::Deny));
  EXPECT_LT(precedence(Effect::Deny), precedence(Effect::AbsolutePermit));
}

TEST(Transformation, SampleBlock) {
  auto ts = parse_transformation_block(read_data("sample_transformation.xml"));
  ASSERT_EQ(ts.size(), 2u);
  EXPECT_EQ(ts[0].partition, parse_partition("subgraphs(TypedV_A'(G_i, o3v1) // TypedV_A'(G_i, o8v1))"));
  EXPECT_EQ(ts[0].scope, Scope::Original);
  EXPECT_EQ(ts[0].mode, Mode::Replace);
  EXPECT_EQ(ts[0].label, DependencyLabel::FalseDependency);
  EXPECT_EQ(ts[1].partition, parse_partition("vertices(TypedV_P'(G_i, Submit|wasSubmittedBy))"));
  EXPECT_EQ(ts[1].scope, Scope::Conjunction);
  EXPECT_EQ(ts[1].mode, Mode::Remove);
  EXPECT_EQ(ts[1].label, DependencyLabel::OriginalDependency);
}

TEST(Transformation, GroupingErrors) {
  EXPECT_THROW(parse_transformation_block("<Transformation><scope>original</scope></Transformation>"),
               DocumentError);
  try {
    parse_transformation_block(
        "<Transformation><partition>vertices(a)</partition><scope>original</scope>"
        "<mode>remove</mode></Transformation>");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_EQ(e.location(), "Transformation/group[0]");
    EXPECT_NE(std::string(e.what()).find("missing <label>"), std::string::npos);
  }
  try {
    parse_transformation_block(
        "<Transformation><partition>vertices(a)</partition><scope>global</scope>"
        "<mode>remove</mode><label>false dependency</label></Transformation>");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_NE(std::string(e.what()).find("unknown scope"), std::string::npos);
  }
  try {
    parse_transformation_block(
        "<Transformation><partition>vertices(a</partition><scope>original</scope>"
        "<mode>remove</mode><label>false dependency</label></Transformation>");
    FAIL();
  } catch (const DocumentError& e) {
    EXPECT_EQ(e.location(), "Transformation/partition[0]");
  }
}

TEST(Policy, SamplePolicy) {
  auto p = parse_policy(read_data("sample_policy.xml"));
  EXPECT_EQ(p.id, "hide-marking");
  EXPECT_EQ(p.target.graph_ids, std::vector<std::string>{"G1"});
  ASSERT_EQ(p.condition.attributes.size(), 1u);
  EXPECT_EQ(p.condition.attributes[0].name, "role");
  EXPECT_EQ(p.condition.attributes[0].value, "student");
  EXPECT_EQ(p.effect, Effect::Deny);
  EXPECT_TRUE(p.obligation.has_value());
  EXPECT_EQ(p.transformations, parse_transformation_block(read_data("sample_transformation.xml")));
}

TEST(Policy, PassThroughPermit) {
  auto p = parse_policy(minimal("<effect>permit</effect>"));
  EXPECT_EQ(p.effect, Effect::Permit);
  EXPECT_TRUE(p.transformations.empty());
}

TEST(Policy, Errors) {
  EXPECT_EQ(location_of(minimal("<effect>permit</effect><extra/>")), "policy");
  EXPECT_EQ(location_of(minimal("<effect>maybe</effect>")), "policy[p]/effect");
  EXPECT_EQ(location_of(minimal("")), "policy[p]");
  EXPECT_EQ(location_of("<policy><effect>deny</effect></policy>"), "policy");
  EXPECT_EQ(location_of("<policy id=\"q\"><effect>deny</effect></policy>"), "policy[q]");
  EXPECT_EQ(location_of("<rule/>"), "/");
  EXPECT_EQ(location_of("<policy id=\"p\">\n<effect>deny</effect>\n<target>"), "line 3");
  EXPECT_EQ(location_of(minimal("<condition><attribute name=\"r\" op=\"&lt;\">x</attribute>"
                                "</condition><effect>deny</effect>")),
            "policy[p]/condition/attribute");
  EXPECT_THROW(parse_policy("<policies/>"), DocumentError);
}

TEST(Policy, RoundTrip) {
  Policy p;
  p.id = "r&d";
  p.target.graph_ids = {"G1", "G2"};
  p.target.resource = sel("TypedV_P'(G_i, review|grade)");
  p.target.requester = {{"role", "student"}};
  p.condition.attributes = {{"dept", CompareOp::NotEqual, "law <school>"}};
  p.condition.partitions = {parse_partition("subgraphs(AttV_P(G_i, 1/1/2016) // AttV_P(G_i, 31/12/2016))")};
  p.effect = Effect::AbsolutePermit;
  p.obligation = "notify \"owner\"";
  p.transformations = parse_transformation_block(read_data("sample_transformation.xml"));
  EXPECT_EQ(parse_policy(policy_to_xml(p)), p);

  auto all = parse_policies(policies_to_xml({p, parse_policy(read_data("sample_policy.xml"))}));
  ASSERT_EQ(all.size(), 2u);
  EXPECT_EQ(all[0], p);
}

TEST(Applicable, EmptyTargetAndCondition) {
  Policy p;
  p.id = "any";
  auto g = load_data_graph("sample_b.json");
  EXPECT_TRUE(applicable(p, {}, g));
}

TEST(Applicable, RequesterAttributes) {
  auto g = load_data_graph("grading.json");
  auto p = parse_policy(read_data("sample_policy.xml"));
  AccessRequest req;
  req.graph_id = "G1";
  req.requester = {{"role", "student"}};
  EXPECT_TRUE(applicable(p, req, g));
  req.requester = {{"role", "professor"}};
  EXPECT_FALSE(applicable(p, req, g));
  req.requester = {};
  EXPECT_FALSE(applicable(p, req, g));

  p.condition.attributes[0].op = CompareOp::NotEqual;
  EXPECT_FALSE(applicable(p, req, g));  // absent attribute satisfies neither op
  req.requester = {{"role", "professor"}};
  EXPECT_TRUE(applicable(p, req, g));
}

TEST(Applicable, GraphAndResource) {
  auto g = load_data_graph("sample_b.json");
  Policy p;
  p.id = "t";
  p.target.graph_ids = {"G1"};
  EXPECT_FALSE(applicable(p, {}, g));
  p.target.graph_ids = {"G1", "B"};
  EXPECT_TRUE(applicable(p, {}, g));
  p.target.resource = sel("TypedV_P'(G_i, revise)");
  EXPECT_FALSE(applicable(p, {}, g));
  p.target.resource = sel("TypedV_P'(G_i, review)");
  EXPECT_TRUE(applicable(p, {}, g));
}

TEST(Applicable, PartitionCondition) {
  Policy p;
  p.id = "year";
  p.condition.partitions = {
      parse_partition("subgraphs(AttV_P(G_i, 1/1/2016) // AttV_P(G_i, 31/12/2016))")};
  EXPECT_TRUE(applicable(p, {}, load_data_graph("sample_b.json")));
  // sample A carries no attributes at all
  EXPECT_FALSE(applicable(p, {}, load_data_graph("sample_a.json")));
}

TEST(Vcd, SampleDictionary) {
  auto vcd = parse_vcd(read_data("grading_vcd.json"));
  ASSERT_EQ(vcd.categories().size(), 2u);
  EXPECT_EQ(vcd.find("Grading")->label, "Graded");
  EXPECT_EQ(vcd.find("Submission")->label, "wasSubmittedBy");
  EXPECT_EQ(vcd.find("Other"), nullptr);
  auto g = load_data_graph("grading.json");
  EXPECT_EQ(vcd.categories_of(g, g.index_of("grade2")), std::vector<std::size_t>{0});
  EXPECT_EQ(vcd.categories_of(g, g.index_of("confirm1")), std::vector<std::size_t>{1});
  EXPECT_TRUE(vcd.categories_of(g, g.index_of("return1")).empty());
  EXPECT_EQ(parse_vcd(vcd_to_json(vcd).dump()), vcd);
}

TEST(Vcd, Errors) {
  EXPECT_THROW(parse_vcd(R"({"categories": [{"name": "a", "label": "x", "members": []},
                                             {"name": "a", "label": "y", "members": []}]})"),
               DocumentError);
  EXPECT_THROW(parse_vcd(R"({"categories": [{"name": "a", "members": []}]})"), DocumentError);
  EXPECT_THROW(parse_vcd(R"j({"categories": [{"name": "a", "label": "x", "members": ["TypedV_Q(G)"]}]})j"),
               DocumentError);
  EXPECT_THROW(parse_vcd(R"({"categories": [{"name": "a", "label": "x", "replacementType": "attribute", "members": []}]})"),
               DocumentError);
  EXPECT_THROW(parse_vcd("{"), DocumentError);
}

TEST(MergeTable, SchemaClosure) {
  auto t = default_merge_table();
  // Artifact -wgb-> Process -used-> Artifact: the two artifacts are joined by wdf.
  EXPECT_EQ(t.lookup(EdgeLabel::WasGeneratedBy, EdgeLabel::Used), EdgeLabel::WasDerivedFrom);
  // Process -used-> Artifact -wgb-> Process: wtb.
  EXPECT_EQ(t.lookup(EdgeLabel::Used, EdgeLabel::WasGeneratedBy), EdgeLabel::WasTriggeredBy);
  EXPECT_EQ(t.lookup(EdgeLabel::WasTriggeredBy, EdgeLabel::Used), EdgeLabel::Used);
  EXPECT_EQ(t.lookup(EdgeLabel::Used, EdgeLabel::WasControlledBy), EdgeLabel::WasCausedBy);
}

TEST(MergeTable, EveryEntryIsSchemaLegal) {
  // Brute force: for every (X, Y, Z) with legal X-l1->Y and Y-l2->Z, the
  // merged label is legal for (X, Z) unless it is the fallback.
  auto t = default_merge_table();
  for (auto x : kVertexTypes)
    for (auto y : kVertexTypes)
      for (auto z : kVertexTypes)
        for (auto l1 : kEdgeLabels)
          for (auto l2 : kEdgeLabels) {
            if (!schema_allows(x, y, l1) || !schema_allows(y, z, l2)) continue;
            if (l1 == EdgeLabel::HasAttributes || l2 == EdgeLabel::HasAttributes) continue;
            const EdgeLabel m = t.lookup(l1, l2);
            if (m != EdgeLabel::WasCausedBy) EXPECT_TRUE(schema_allows(x, z, m));
          }
}

TEST(MergeTable, JsonRoundTripAndErrors) {
  auto t = default_merge_table();
  EXPECT_EQ(parse_merge_table(merge_table_to_json(t).dump()), t);
  EXPECT_THROW(parse_merge_table(R"({"entries": [{"in": "used", "out": "used", "merged": "hasAttributes"}]})"),
               DocumentError);
  EXPECT_THROW(parse_merge_table(R"({"entries": [{"in": "used", "out": "likes", "merged": "used"}]})"),
               DocumentError);
  EXPECT_THROW(parse_merge_table(R"({"entries": [{"in": "used", "out": "used", "merged": "used"},
                                                 {"in": "used", "out": "used", "merged": "used"}]})"),
               DocumentError);
  auto custom = parse_merge_table(R"({"entries": [{"in": "used", "out": "wasControlledBy", "merged": "wasControlledBy"}]})");
  EXPECT_EQ(custom.lookup(EdgeLabel::Used, EdgeLabel::WasControlledBy), EdgeLabel::WasControlledBy);
  EXPECT_EQ(custom.lookup(EdgeLabel::WasGeneratedBy, EdgeLabel::Used), EdgeLabel::WasCausedBy);
}
