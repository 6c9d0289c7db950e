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

// Policy model: policies (XML), the vertex category dictionary and the edge
// merging table (JSON).
//
// Policy XML:
//
//   <policy id="hide-marking">
//     <target>
//       <graph>G1</graph>                       any number
//       <resource>TypedV_P(G_i)</resource>      at most one selector
//       <requester name="role">student</requester>
//     </target>
//     <condition>
//       <attribute name="role" op="!=">professor</attribute>
//       <partition>subgraphs(o3v1 // o8v1)</partition>
//     </condition>
//     <effect>deny</effect>
//     <obligation>notify the course owner</obligation>
//     <Transformation>
//       <partition>...</partition> <scope>..</scope> <mode>..</mode> <label>..</label>
//       ...
//     </Transformation>
//   </policy>
//
// A <Transformation> element holds one or more (partition, scope, mode,
// label) groups in document order. Several policies may be wrapped in
// <policies>.

#pragma once

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>
#include <boost/property_tree/xml_parser.hpp>
#include <nlohmann/json.hpp>

#include "provpolicy/error.hpp"
#include "provpolicy/graph.hpp"
#include "provpolicy/partition.hpp"
#include "provpolicy/path_expr.hpp"

namespace provpolicy {

enum class Effect { Permit, Deny, AbsolutePermit };

/// Precedence used when combining effects: AbsolutePermit > Deny > Permit.
constexpr int precedence(Effect e) {
  switch (e) {
    case Effect::Permit: return 0;
    case Effect::Deny: return 1;
    case Effect::AbsolutePermit: return 2;
  }
  return 0;
}

enum class Scope { Original, Conjunction, Extension };
enum class Mode { Replace, Remove };
enum class DependencyLabel { OriginalDependency, FalseDependency };

constexpr std::string_view to_string(Effect e) {
  switch (e) {
    case Effect::Permit: return "permit";
    case Effect::Deny: return "deny";
    case Effect::AbsolutePermit: return "absolute permit";
  }
  return "?";
}

constexpr std::string_view to_string(Scope s) {
  switch (s) {
    case Scope::Original: return "original";
    case Scope::Conjunction: return "conjunction";
    case Scope::Extension: return "extension";
  }
  return "?";
}

constexpr std::string_view to_string(Mode m) {
  return m == Mode::Replace ? "replace" : "remove";
}

constexpr std::string_view to_string(DependencyLabel l) {
  return l == DependencyLabel::OriginalDependency ? "original dependency"
                                                  : "false dependency";
}

namespace detail {

inline std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return std::string(s);
}

// Lower case, runs of blanks collapsed to one space.
inline std::string normalize_keyword(std::string_view s) {
  std::string out;
  bool space = false;
  for (char c : trim(s)) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      space = true;
      continue;
    }
    if (space && !out.empty()) out += ' ';
    space = false;
    out += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  }
  return out;
}

}  // namespace detail

inline std::optional<Effect> parse_effect(std::string_view s) {
  const std::string k = detail::normalize_keyword(s);
  if (k == "permit") return Effect::Permit;
  if (k == "deny") return Effect::Deny;
  if (k == "absolute permit" || k == "absolutepermit") return Effect::AbsolutePermit;
  return std::nullopt;
}

inline std::optional<Scope> parse_scope(std::string_view s) {
  const std::string k = detail::normalize_keyword(s);
  if (k == "original") return Scope::Original;
  if (k == "conjunction") return Scope::Conjunction;
  if (k == "extension") return Scope::Extension;
  return std::nullopt;
}

inline std::optional<Mode> parse_mode(std::string_view s) {
  const std::string k = detail::normalize_keyword(s);
  if (k == "replace") return Mode::Replace;
  if (k == "remove") return Mode::Remove;
  return std::nullopt;
}

inline std::optional<DependencyLabel> parse_dependency_label(std::string_view s) {
  const std::string k = detail::normalize_keyword(s);
  if (k == "original dependency") return DependencyLabel::OriginalDependency;
  if (k == "false dependency") return DependencyLabel::FalseDependency;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Policy

struct Transformation {
  PartitionSpec partition;
  Scope scope = Scope::Original;
  Mode mode = Mode::Remove;
  DependencyLabel label = DependencyLabel::OriginalDependency;

  friend bool operator==(const Transformation&, const Transformation&) = default;
};

struct Target {
  std::vector<std::string> graph_ids;
  std::optional<Selector> resource;
  std::vector<std::pair<std::string, std::string>> requester;

  bool empty() const {
    return graph_ids.empty() && !resource && requester.empty();
  }
  friend bool operator==(const Target&, const Target&) = default;
};

enum class CompareOp { Equal, NotEqual };

struct AttributeCondition {
  std::string name;
  CompareOp op = CompareOp::Equal;
  std::string value;
  friend bool operator==(const AttributeCondition&,
                         const AttributeCondition&) = default;
};

/// Conjunction of requester predicates and partition-nonempty predicates.
struct Condition {
  std::vector<AttributeCondition> attributes;
  std::vector<PartitionSpec> partitions;

  bool empty() const { return attributes.empty() && partitions.empty(); }
  friend bool operator==(const Condition&, const Condition&) = default;
};

struct Policy {
  std::string id;
  Target target;
  Condition condition;
  Effect effect = Effect::Permit;
  std::optional<std::string> obligation;
  std::vector<Transformation> transformations;

  friend bool operator==(const Policy&, const Policy&) = default;
};

struct AccessRequest {
  std::map<std::string, std::string> requester;
  std::string graph_id;
  std::optional<PathExpr> query;
};

/// True iff the policy's Target matches and every Condition predicate holds.
/// A requester attribute missing from the request satisfies no predicate.
inline bool applicable(const Policy& p, const AccessRequest& req,
                       const ProvenanceGraph& g) {
  const Target& t = p.target;
  if (!t.graph_ids.empty() &&
      std::find(t.graph_ids.begin(), t.graph_ids.end(), g.id()) ==
          t.graph_ids.end())
    return false;
  if (t.resource && select(g, *t.resource).empty()) return false;
  for (const auto& [name, value] : t.requester) {
    auto it = req.requester.find(name);
    if (it == req.requester.end() || it->second != value) return false;
  }
  for (const auto& c : p.condition.attributes) {
    auto it = req.requester.find(c.name);
    if (it == req.requester.end()) return false;
    const bool eq = it->second == c.value;
    if (eq != (c.op == CompareOp::Equal)) return false;
  }
  for (const auto& spec : p.condition.partitions)
    if (resolve(g, spec).empty()) return false;
  return true;
}

// ---------------------------------------------------------------------------
// XML

namespace detail {

using boost::property_tree::ptree;

inline void check_children(const ptree& node, const std::string& where,
                           std::initializer_list<std::string_view> allowed) {
  for (const auto& [name, child] : node) {
    if (name == "<xmlattr>" || name == "<xmlcomment>") continue;
    if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
      throw DocumentError(where, "unknown element <" + name + ">");
  }
}

inline std::optional<std::string> xml_attr(const ptree& node,
                                           const std::string& name) {
  if (auto a = node.get_child_optional("<xmlattr>." + name))
    return trim(a->data());
  return std::nullopt;
}

inline PartitionSpec parse_partition_at(const std::string& text,
                                        const std::string& where) {
  try {
    return parse_partition(trim(text));
  } catch (const SyntaxError& e) {
    throw DocumentError(where, e.what());
  }
}

inline std::vector<Transformation> parse_transformation_element(
    const ptree& node, const std::string& where) {
  check_children(node, where, {"partition", "scope", "mode", "label"});
  std::vector<Transformation> out;
  struct Pending {
    std::optional<PartitionSpec> partition;
    std::optional<Scope> scope;
    std::optional<Mode> mode;
    std::optional<DependencyLabel> label;
  } cur;
  std::size_t group = 0;

  auto flush = [&](bool final) {
    if (!cur.partition) {
      if (cur.scope || cur.mode || cur.label)
        throw DocumentError(where, "scope/mode/label before any <partition>");
      return;
    }
    const std::string at = where + "/group[" + std::to_string(group) + "]";
    if (!cur.scope) throw DocumentError(at, "missing <scope>");
    if (!cur.mode) throw DocumentError(at, "missing <mode>");
    if (!cur.label) throw DocumentError(at, "missing <label>");
    out.push_back({std::move(*cur.partition), *cur.scope, *cur.mode, *cur.label});
    cur = Pending{};
    ++group;
    (void)final;
  };

  for (const auto& [name, child] : node) {
    const std::string at = where + "/" + name + "[" + std::to_string(group) + "]";
    if (name == "partition") {
      flush(false);
      cur.partition = parse_partition_at(child.data(), at);
    } else if (name == "scope") {
      if (cur.scope) throw DocumentError(at, "duplicate <scope>");
      cur.scope = parse_scope(child.data());
      if (!cur.scope)
        throw DocumentError(at, "unknown scope '" + trim(child.data()) + "'");
    } else if (name == "mode") {
      if (cur.mode) throw DocumentError(at, "duplicate <mode>");
      cur.mode = parse_mode(child.data());
      if (!cur.mode)
        throw DocumentError(at, "unknown mode '" + trim(child.data()) + "'");
    } else if (name == "label") {
      if (cur.label) throw DocumentError(at, "duplicate <label>");
      cur.label = parse_dependency_label(child.data());
      if (!cur.label)
        throw DocumentError(at, "unknown label '" + trim(child.data()) + "'");
    }
  }
  flush(true);
  if (out.empty()) throw DocumentError(where, "empty <Transformation>");
  return out;
}

inline Policy parse_policy_element(const ptree& node, const std::string& where) {
  check_children(node, where,
                 {"target", "condition", "effect", "obligation",
                  "Transformation"});
  Policy p;
  p.id = xml_attr(node, "id").value_or("");
  if (p.id.empty()) throw DocumentError(where, "policy needs an id attribute");
  const std::string here = where + "[" + p.id + "]";

  bool have_effect = false;
  for (const auto& [name, child] : node) {
    if (name == "target") {
      const std::string at = here + "/target";
      check_children(child, at, {"graph", "resource", "requester"});
      for (const auto& [tn, tc] : child) {
        if (tn == "graph") {
          p.target.graph_ids.push_back(trim(tc.data()));
        } else if (tn == "resource") {
          if (p.target.resource) throw DocumentError(at, "duplicate <resource>");
          try {
            p.target.resource = parse_selector(trim(tc.data()));
          } catch (const SyntaxError& e) {
            throw DocumentError(at + "/resource", e.what());
          }
        } else if (tn == "requester") {
          auto attr = xml_attr(tc, "name");
          if (!attr) throw DocumentError(at + "/requester", "missing name attribute");
          p.target.requester.emplace_back(*attr, trim(tc.data()));
        }
      }
    } else if (name == "condition") {
      const std::string at = here + "/condition";
      check_children(child, at, {"attribute", "partition"});
      for (const auto& [cn, cc] : child) {
        if (cn == "attribute") {
          AttributeCondition ac;
          auto attr = xml_attr(cc, "name");
          if (!attr) throw DocumentError(at + "/attribute", "missing name attribute");
          ac.name = *attr;
          const std::string op = xml_attr(cc, "op").value_or("=");
          if (op == "=" || op == "==") {
            ac.op = CompareOp::Equal;
          } else if (op == "!=" || op == "\xE2\x89\xA0") {
            ac.op = CompareOp::NotEqual;
          } else {
            throw DocumentError(at + "/attribute", "unknown operator '" + op + "'");
          }
          ac.value = trim(cc.data());
          p.condition.attributes.push_back(std::move(ac));
        } else if (cn == "partition") {
          p.condition.partitions.push_back(
              parse_partition_at(cc.data(), at + "/partition"));
        }
      }
    } else if (name == "effect") {
      if (have_effect) throw DocumentError(here, "duplicate <effect>");
      auto e = parse_effect(child.data());
      if (!e)
        throw DocumentError(here + "/effect",
                            "unknown effect '" + trim(child.data()) + "'");
      p.effect = *e;
      have_effect = true;
    } else if (name == "obligation") {
      p.obligation = trim(child.data());
    } else if (name == "Transformation") {
      auto ts = parse_transformation_element(child, here + "/Transformation");
      p.transformations.insert(p.transformations.end(), ts.begin(), ts.end());
    }
  }
  if (!have_effect) throw DocumentError(here, "missing <effect>");
  if (p.target.empty() && p.transformations.empty())
    throw DocumentError(here, "policy needs a target or a transformation");
  return p;
}

inline ptree read_xml_text(std::string_view text) {
  namespace xml = boost::property_tree::xml_parser;
  ptree tree;
  std::istringstream in{std::string(text)};
  try {
    xml::read_xml(in, tree, xml::no_comments | xml::trim_whitespace);
  } catch (const xml::xml_parser_error& e) {
    throw DocumentError("line " + std::to_string(e.line()), e.message());
  }
  return tree;
}

}  // namespace detail

/// Parses every <policy> in the document (a bare <policy> or a <policies>
/// wrapper).
inline std::vector<Policy> parse_policies(std::string_view xml) {
  auto tree = detail::read_xml_text(xml);
  std::vector<Policy> out;
  for (const auto& [name, node] : tree) {
    if (name == "policy") {
      out.push_back(detail::parse_policy_element(node, "policy"));
    } else if (name == "policies") {
      detail::check_children(node, "policies", {"policy"});
      for (const auto& [pn, pc] : node)
        if (pn == "policy")
          out.push_back(detail::parse_policy_element(pc, "policies/policy"));
    } else {
      throw DocumentError("/", "unknown root element <" + name + ">");
    }
  }
  return out;
}

/// Parses a document holding exactly one policy.
inline Policy parse_policy(std::string_view xml) {
  auto ps = parse_policies(xml);
  if (ps.size() != 1)
    throw DocumentError("/", "expected exactly one <policy>, found " +
                                 std::to_string(ps.size()));
  return std::move(ps.front());
}

/// Parses a standalone <Transformation> block.
inline std::vector<Transformation> parse_transformation_block(
    std::string_view xml) {
  auto tree = detail::read_xml_text(xml);
  std::vector<Transformation> out;
  for (const auto& [name, node] : tree) {
    if (name != "Transformation")
      throw DocumentError("/", "unknown root element <" + name + ">");
    auto ts = detail::parse_transformation_element(node, "Transformation");
    out.insert(out.end(), ts.begin(), ts.end());
  }
  return out;
}

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace detail

inline std::string policy_to_xml(const Policy& p) {
  using detail::xml_escape;
  std::ostringstream os;
  os << "<policy id=\"" << xml_escape(p.id) << "\">\n";
  if (!p.target.empty()) {
    os << "  <target>\n";
    for (const auto& gid : p.target.graph_ids)
      os << "    <graph>" << xml_escape(gid) << "</graph>\n";
    if (p.target.resource)
      os << "    <resource>" << xml_escape(to_string(*p.target.resource))
         << "</resource>\n";
    for (const auto& [k, v] : p.target.requester)
      os << "    <requester name=\"" << xml_escape(k) << "\">" << xml_escape(v)
         << "</requester>\n";
    os << "  </target>\n";
  }
  if (!p.condition.empty()) {
    os << "  <condition>\n";
    for (const auto& c : p.condition.attributes)
      os << "    <attribute name=\"" << xml_escape(c.name) << "\" op=\""
         << (c.op == CompareOp::Equal ? "=" : "!=") << "\">"
         << xml_escape(c.value) << "</attribute>\n";
    for (const auto& s : p.condition.partitions)
      os << "    <partition>" << xml_escape(to_string(s)) << "</partition>\n";
    os << "  </condition>\n";
  }
  os << "  <effect>" << to_string(p.effect) << "</effect>\n";
  if (p.obligation)
    os << "  <obligation>" << xml_escape(*p.obligation) << "</obligation>\n";
  if (!p.transformations.empty()) {
    os << "  <Transformation>\n";
    for (const auto& t : p.transformations) {
      os << "    <partition>" << xml_escape(to_string(t.partition))
         << "</partition>\n"
         << "    <scope>" << to_string(t.scope) << "</scope>\n"
         << "    <mode>" << to_string(t.mode) << "</mode>\n"
         << "    <label>" << to_string(t.label) << "</label>\n";
    }
    os << "  </Transformation>\n";
  }
  os << "</policy>\n";
  return os.str();
}

inline std::string policies_to_xml(const std::vector<Policy>& ps) {
  std::string out = "<policies>\n";
  for (const auto& p : ps) out += policy_to_xml(p);
  return out + "</policies>\n";
}

// ---------------------------------------------------------------------------
// Vertex category dictionary
//
//   {"categories": [
//     {"name": "Grading", "label": "Graded", "replacementType": "process",
//      "members": ["TypedV_P'(G_i, review|grade)"]}]}

struct VcdCategory {
  std::string name;
  std::string label;  // name given to a replacement vertex
  std::vector<Selector> members;
  VertexType replacement_type = VertexType::Process;

  friend bool operator==(const VcdCategory&, const VcdCategory&) = default;
};

class Vcd {
 public:
  Vcd() = default;
  explicit Vcd(std::vector<VcdCategory> categories)
      : categories_(std::move(categories)) {
    for (std::size_t i = 0; i < categories_.size(); ++i) {
      const auto& c = categories_[i];
      if (c.name.empty()) throw DocumentError("categories", "category without a name");
      if (c.label.empty())
        throw DocumentError("categories." + c.name, "category without a label");
      if (c.replacement_type == VertexType::Attribute)
        throw DocumentError("categories." + c.name,
                            "replacement type cannot be attribute");
      for (std::size_t j = 0; j < i; ++j)
        if (categories_[j].name == c.name)
          throw DocumentError("categories." + c.name, "duplicate category name");
    }
  }

  std::span<const VcdCategory> categories() const { return categories_; }

  const VcdCategory* find(std::string_view name) const {
    for (const auto& c : categories_)
      if (c.name == name) return &c;
    return nullptr;
  }

  /// Indices of every category the vertex belongs to, in dictionary order.
  std::vector<std::size_t> categories_of(const ProvenanceGraph& g,
                                         VertexIndex v) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < categories_.size(); ++i)
      for (const auto& m : categories_[i].members)
        if (selector_matches(g, v, m)) {
          out.push_back(i);
          break;
        }
    return out;
  }

  friend bool operator==(const Vcd&, const Vcd&) = default;

 private:
  std::vector<VcdCategory> categories_;
};

inline Vcd vcd_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("categories") ||
      !doc["categories"].is_array())
    throw DocumentError("$", "expected {\"categories\": [...]}");
  std::vector<VcdCategory> cats;
  const auto& arr = doc["categories"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "categories[" + std::to_string(i) + "]";
    const auto& jc = arr[i];
    if (!jc.is_object()) throw DocumentError(where, "expected an object");
    VcdCategory c;
    c.name = detail::require_string(jc, "name", where);
    c.label = detail::require_string(jc, "label", where);
    const std::string type = jc.contains("replacementType")
                                 ? detail::require_string(jc, "replacementType", where)
                                 : std::string("process");
    auto t = parse_vertex_type(type);
    if (!t) throw DocumentError(where + ".replacementType", "unknown type '" + type + "'");
    c.replacement_type = *t;
    const auto& members = detail::require(jc, "members", where);
    if (!members.is_array()) throw DocumentError(where + ".members", "expected an array");
    for (std::size_t j = 0; j < members.size(); ++j) {
      const std::string mw = where + ".members[" + std::to_string(j) + "]";
      if (!members[j].is_string()) throw DocumentError(mw, "expected a string");
      try {
        c.members.push_back(parse_selector(members[j].get<std::string>()));
      } catch (const SyntaxError& e) {
        throw DocumentError(mw, e.what());
      }
    }
    cats.push_back(std::move(c));
  }
  return Vcd(std::move(cats));
}

inline Vcd parse_vcd(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
  return vcd_from_json(doc);
}

inline nlohmann::ordered_json vcd_to_json(const Vcd& vcd) {
  nlohmann::ordered_json doc;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& c : vcd.categories()) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["label"] = c.label;
    jc["replacementType"] = type_name(c.replacement_type);
    auto members = nlohmann::ordered_json::array();
    for (const auto& m : c.members) members.push_back(to_string(m));
    jc["members"] = std::move(members);
    arr.push_back(std::move(jc));
  }
  doc["categories"] = std::move(arr);
  return doc;
}

// ---------------------------------------------------------------------------
// Edge merging table
//
// Keyed by (label of the edge entering the removed vertex, label of the edge
// leaving it), both in stored orientation. Pairs without an entry merge to
// wasCausedBy.
//
//   {"entries": [{"in": "wasGeneratedBy", "out": "used",
//                 "merged": "wasDerivedFrom"}, ...]}

class EdgeMergeTable {
 public:
  static constexpr EdgeLabel kFallback = EdgeLabel::WasCausedBy;

  EdgeMergeTable() = default;

  void set(EdgeLabel in, EdgeLabel out, EdgeLabel merged) {
    entries_[{in, out}] = merged;
  }

  EdgeLabel lookup(EdgeLabel in, EdgeLabel out) const {
    auto it = entries_.find({in, out});
    return it == entries_.end() ? kFallback : it->second;
  }

  const std::map<std::pair<EdgeLabel, EdgeLabel>, EdgeLabel>& entries() const {
    return entries_;
  }

  friend bool operator==(const EdgeMergeTable&, const EdgeMergeTable&) = default;

 private:
  std::map<std::pair<EdgeLabel, EdgeLabel>, EdgeLabel> entries_;
};

namespace detail {

// Endpoint types fixed by a schema label, if it has exactly one.
constexpr std::optional<std::pair<VertexType, VertexType>> label_endpoints(
    EdgeLabel l) {
  using T = VertexType;
  switch (l) {
    case EdgeLabel::Used: return std::pair{T::Process, T::Artifact};
    case EdgeLabel::WasGeneratedBy: return std::pair{T::Artifact, T::Process};
    case EdgeLabel::WasControlledBy: return std::pair{T::Process, T::Agent};
    case EdgeLabel::WasTriggeredBy: return std::pair{T::Process, T::Process};
    case EdgeLabel::WasDerivedFrom: return std::pair{T::Artifact, T::Artifact};
    default: return std::nullopt;
  }
}

}  // namespace detail

/// The table implied by the schema: two consecutive hops (X -l1-> Y -l2-> Z)
/// merge to the schema label for (X, Z) when one exists. Unlisted pairs fall
/// back to wasCausedBy.
inline EdgeMergeTable default_merge_table() {
  EdgeMergeTable t;
  for (auto in : kEdgeLabels) {
    auto a = detail::label_endpoints(in);
    if (!a) continue;
    for (auto out : kEdgeLabels) {
      auto b = detail::label_endpoints(out);
      if (!b || a->second != b->first) continue;
      if (auto merged = schema_label_for(a->first, b->second))
        t.set(in, out, *merged);
    }
  }
  return t;
}

inline EdgeMergeTable merge_table_from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("entries") || !doc["entries"].is_array())
    throw DocumentError("$", "expected {\"entries\": [...]}");
  EdgeMergeTable t;
  const auto& arr = doc["entries"];
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string where = "entries[" + std::to_string(i) + "]";
    if (!arr[i].is_object()) throw DocumentError(where, "expected an object");
    auto label = [&](const char* key) {
      const std::string s = detail::require_string(arr[i], key, where);
      auto l = parse_edge_label(s);
      if (!l || *l == EdgeLabel::HasAttributes)
        throw DocumentError(where + "." + key, "illegal label '" + s + "'");
      return *l;
    };
    const EdgeLabel in = label("in"), out = label("out"), merged = label("merged");
    if (t.entries().contains({in, out}))
      throw DocumentError(where, "duplicate entry");
    t.set(in, out, merged);
  }
  return t;
}

inline EdgeMergeTable parse_merge_table(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0), e.what());
  }
  return merge_table_from_json(doc);
}

inline nlohmann::ordered_json merge_table_to_json(const EdgeMergeTable& t) {
  nlohmann::ordered_json doc;
  auto arr = nlohmann::ordered_json::array();
  for (const auto& [key, merged] : t.entries()) {
    nlohmann::ordered_json e;
    e["in"] = label_name(key.first);
    e["out"] = label_name(key.second);
    e["merged"] = label_name(merged);
    arr.push_back(std::move(e));
  }
  doc["entries"] = std::move(arr);
  return doc;
}

}  // namespace provpolicy
