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

// Graph serialization: the JSON interchange format and Graphviz DOT export.
//
//   {"id": "G1",
//    "vertices": [{"id": "p1", "type": "process", "name": "upload1"}, ...],
//    "edges": [{"src": "a1", "dst": "p1", "label": "wasGeneratedBy"}, ...]}
//
// Vertices may carry "value" (attributes only); edges may carry "tag".
// save_graph emits vertices sorted by id and edges sorted by
// (src, dst, label) so the output is byte-stable.

#pragma once

#include <set>
#include <sstream>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "provpolicy/graph.hpp"

namespace provpolicy {

namespace detail {

inline std::string line_col(std::string_view text, std::size_t byte) {
  std::size_t line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

inline const nlohmann::json& require(const nlohmann::json& obj,
                                     const char* key,
                                     const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end())
    throw DocumentError(where, std::string("missing field '") + key + "'");
  return *it;
}

inline std::string require_string(const nlohmann::json& obj, const char* key,
                                  const std::string& where) {
  const auto& v = require(obj, key, where);
  if (!v.is_string())
    throw DocumentError(where + "." + key, "expected a string");
  return v.get<std::string>();
}

}  // namespace detail

/// Builds a graph from its JSON object form.
inline ProvenanceGraph graph_from_json(const nlohmann::json& doc) {
  if (!doc.is_object()) throw DocumentError("$", "expected a JSON object");
  ProvenanceGraph g;
  if (auto it = doc.find("id"); it != doc.end()) {
    if (!it->is_string()) throw DocumentError("id", "expected a string");
    g.set_id(it->get<std::string>());
  }

  if (auto it = doc.find("vertices"); it != doc.end()) {
    if (!it->is_array()) throw DocumentError("vertices", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& jv = (*it)[i];
      const std::string where = "vertices[" + std::to_string(i) + "]";
      if (!jv.is_object()) throw DocumentError(where, "expected an object");
      Vertex v;
      v.id = detail::require_string(jv, "id", where);
      const std::string type = detail::require_string(jv, "type", where);
      auto t = parse_vertex_type(type);
      if (!t)
        throw DocumentError(where + ".type",
                            "unknown vertex type '" + type + "'");
      v.type = *t;
      if (jv.contains("name")) v.name = detail::require_string(jv, "name", where);
      if (jv.contains("value"))
        v.value = detail::require_string(jv, "value", where);
      if (g.contains(v.id))
        throw DocumentError(where + ".id", "duplicate vertex id '" + v.id + "'");
      g.add_vertex(std::move(v));
    }
  }

  if (auto it = doc.find("edges"); it != doc.end()) {
    if (!it->is_array()) throw DocumentError("edges", "expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      const auto& je = (*it)[i];
      const std::string where = "edges[" + std::to_string(i) + "]";
      if (!je.is_object()) throw DocumentError(where, "expected an object");
      Edge e;
      e.src = detail::require_string(je, "src", where);
      e.dst = detail::require_string(je, "dst", where);
      const std::string label = detail::require_string(je, "label", where);
      auto l = parse_edge_label(label);
      if (!l)
        throw DocumentError(where + ".label",
                            "unknown edge label '" + label + "'");
      e.label = *l;
      if (je.contains("tag")) e.tag = detail::require_string(je, "tag", where);
      g.add_edge(std::move(e));
    }
  }
  return g;
}

/// Parses the JSON graph format. Syntax errors carry line/column, field
/// errors carry a JSON path such as "edges[3].label".
inline ProvenanceGraph load_graph(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw DocumentError(detail::line_col(text, e.byte > 0 ? e.byte - 1 : 0),
                        e.what());
  }
  return graph_from_json(doc);
}

inline nlohmann::ordered_json graph_to_json(const ProvenanceGraph& g) {
  nlohmann::ordered_json doc;
  doc["id"] = g.id();
  auto vs = nlohmann::ordered_json::array();
  for (const Vertex& v : sorted_vertices(g)) {
    nlohmann::ordered_json jv;
    jv["id"] = v.id;
    jv["type"] = type_name(v.type);
    jv["name"] = v.name;
    if (v.value) jv["value"] = *v.value;
    vs.push_back(std::move(jv));
  }
  doc["vertices"] = std::move(vs);
  auto es = nlohmann::ordered_json::array();
  for (const Edge& e : sorted_edges(g)) {
    nlohmann::ordered_json je;
    je["src"] = e.src;
    je["dst"] = e.dst;
    je["label"] = label_name(e.label);
    if (e.tag) je["tag"] = *e.tag;
    es.push_back(std::move(je));
  }
  doc["edges"] = std::move(es);
  return doc;
}

/// Canonical JSON text (two-space indent, trailing newline).
inline std::string save_graph(const ProvenanceGraph& g) {
  return graph_to_json(g).dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// DOT

namespace detail {

inline std::string dot_quote(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

constexpr std::string_view dot_shape(VertexType t) {
  switch (t) {
    case VertexType::Artifact: return "oval";
    case VertexType::Process: return "rectangle";
    case VertexType::Agent: return "octagon";
    case VertexType::Attribute: return "note";
  }
  return "plain";
}

}  // namespace detail

struct DotOptions {
  // Vertices drawn dashed and grey, e.g. replacement vertices.
  std::set<std::string> highlighted;
};

inline std::string to_dot(const ProvenanceGraph& g, const DotOptions& opts = {}) {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(g.id().empty() ? "G" : g.id())
     << " {\n";
  for (const Vertex& v : sorted_vertices(g)) {
    std::string label = v.name.empty() ? v.id : v.name;
    if (v.value) label += " = " + *v.value;
    os << "  " << detail::dot_quote(v.id) << " [shape=" << detail::dot_shape(v.type)
       << ", label=" << detail::dot_quote(label);
    if (opts.highlighted.contains(v.id))
      os << ", style=dashed, color=gray40";
    os << "];\n";
  }
  for (const Edge& e : sorted_edges(g)) {
    os << "  " << detail::dot_quote(e.src) << " -> " << detail::dot_quote(e.dst)
       << " [label=" << detail::dot_quote(label_name(e.label)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace provpolicy
