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

// XPath-subset expressions over provenance graphs.
//
// Grammar:
//
//   expr     := step+
//   step     := axis selector
//   axis     := "/" | "//" | "\v+" | ("/" | "//") ("following::" | "preceding::")
//   selector := test pred?
//   test     := name | "*" | "START" | "END" | typedsel
//   typedsel := ("TypedV" | "AttV") "_" ("Ag"|"A"|"P"|"Att") "'"? "(" arg ("," arg)* ")"
//   pred     := "[@" name "='" value "']"
//
// "\v+" is an alias of "//". START/END (also spelled U+25C1 / U+25B7) stand
// for the chronological beginnings and ends of the graph and may only appear
// in the first or last step. Name literals use "|" for alternation.

#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "provpolicy/error.hpp"
#include "provpolicy/graph.hpp"

namespace provpolicy {

// ---------------------------------------------------------------------------
// Node tests

/// Every vertex of a type: TypedV_t(G).
struct TypedV {
  VertexType type;
  std::string graph = "G_i";
  friend bool operator==(const TypedV&, const TypedV&) = default;
};

/// Vertices of a type whose name matches one of the literals: TypedV_t'(G, a|b).
struct TypedVNamed {
  VertexType type;
  std::string graph = "G_i";
  std::vector<std::string> names;
  friend bool operator==(const TypedVNamed&, const TypedVNamed&) = default;
};

/// Vertices of a type carrying an attribute whose value matches one of the
/// literals: AttV_t(G, 1/1/2016).
struct AttV {
  VertexType type;
  std::string graph = "G_i";
  std::vector<std::string> values;
  friend bool operator==(const AttV&, const AttV&) = default;
};

/// Bare name step such as "replace1" or "Submit|wasSubmittedBy".
struct NameLiteral {
  std::vector<std::string> names;
  friend bool operator==(const NameLiteral&, const NameLiteral&) = default;
};

struct Wildcard {
  friend bool operator==(const Wildcard&, const Wildcard&) = default;
};

enum class TerminalKind { Start, End };

struct Terminal {
  TerminalKind kind;
  friend bool operator==(const Terminal&, const Terminal&) = default;
};

using NodeTest =
    std::variant<TypedV, TypedVNamed, AttV, NameLiteral, Wildcard, Terminal>;

/// [@name='value']
struct AttrPredicate {
  std::string name;
  std::string value;
  friend bool operator==(const AttrPredicate&, const AttrPredicate&) = default;
};

struct Selector {
  NodeTest test;
  std::optional<AttrPredicate> predicate;
  friend bool operator==(const Selector&, const Selector&) = default;
};

enum class Axis { Child, Descendant, Following, Preceding };

struct Step {
  Axis axis;
  Selector selector;
  friend bool operator==(const Step&, const Step&) = default;
};

struct PathExpr {
  std::vector<Step> steps;
  friend bool operator==(const PathExpr&, const PathExpr&) = default;
};

// ---------------------------------------------------------------------------
// Matching

/// Name literal semantics. Exact equality, except that a literal containing
/// no digit also matches the literal followed by a decimal instance number:
/// "upload" matches "upload1" and "upload12", "o1v2" matches only "o1v2".
inline bool name_matches(std::string_view literal, std::string_view name) {
  if (literal == name) return true;
  if (literal.empty() || name.size() <= literal.size()) return false;
  for (char c : literal)
    if (c >= '0' && c <= '9') return false;
  if (!name.starts_with(literal)) return false;
  for (char c : name.substr(literal.size()))
    if (c < '0' || c > '9') return false;
  return true;
}

inline bool any_name_matches(const std::vector<std::string>& literals,
                             std::string_view name) {
  for (const auto& l : literals)
    if (name_matches(l, name)) return true;
  return false;
}

/// A graph argument "G_i" or "G" refers to whatever graph is being
/// evaluated; anything else must equal the graph id.
inline bool graph_ref_matches(std::string_view ref, const ProvenanceGraph& g) {
  return ref.empty() || ref == "G_i" || ref == "G" || ref == g.id();
}

inline bool test_matches(const ProvenanceGraph& g, VertexIndex v,
                         const NodeTest& test) {
  const Vertex& vx = g.vertex(v);
  return std::visit(
      [&](const auto& t) -> bool {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, TypedV>) {
          return vx.type == t.type && graph_ref_matches(t.graph, g);
        } else if constexpr (std::is_same_v<T, TypedVNamed>) {
          return vx.type == t.type && graph_ref_matches(t.graph, g) &&
                 any_name_matches(t.names, vx.name);
        } else if constexpr (std::is_same_v<T, AttV>) {
          if (vx.type != t.type || !graph_ref_matches(t.graph, g)) return false;
          for (const auto& [name, value] : attributes_of(g, v))
            for (const auto& want : t.values)
              if (value == want) return true;
          return false;
        } else if constexpr (std::is_same_v<T, NameLiteral>) {
          return any_name_matches(t.names, vx.name);
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          return true;
        } else {
          return t.kind == TerminalKind::Start ? is_chronological_start(g, v)
                                               : is_chronological_end(g, v);
        }
      },
      test);
}

inline bool selector_matches(const ProvenanceGraph& g, VertexIndex v,
                             const Selector& s) {
  if (!test_matches(g, v, s.test)) return false;
  if (s.predicate &&
      !has_attribute(g, v, s.predicate->name, s.predicate->value))
    return false;
  return true;
}

/// Indices of every vertex matching `s`, ascending.
inline std::vector<VertexIndex> select(const ProvenanceGraph& g,
                                       const Selector& s) {
  std::vector<VertexIndex> out;
  for (VertexIndex v = 0; v < g.vertex_count(); ++v)
    if (selector_matches(g, v, s)) out.push_back(v);
  return out;
}

inline bool is_terminal(const Selector& s, TerminalKind kind) {
  auto* t = std::get_if<Terminal>(&s.test);
  return t && t->kind == kind;
}

// ---------------------------------------------------------------------------
// Printing

namespace detail {

inline bool is_plain_name(std::string_view s) {
  if (s.empty() || s == "START" || s == "END") return false;
  if (s.starts_with("TypedV_") || s.starts_with("AttV_")) return false;
  for (char c : s) {
    switch (c) {
      case '/': case '[': case ']': case '(': case ')': case '@': case '=':
      case '\'': case ',': case '*': case '|': case '\\': case ' ': case '\t':
      case '\n': case '\r':
        return false;
      default:
        break;
    }
  }
  return true;
}

inline std::string quote_literal(std::string_view s) {
  if (is_plain_name(s)) return std::string(s);
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

inline std::string join_alternation(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += '|';
    out += quote_literal(xs[i]);
  }
  return out;
}

// Arguments inside typed selectors are read up to ',' or ')', so only those
// characters (and quotes/pipes) force quoting there.
inline std::string quote_arg(std::string_view s) {
  bool plain = !s.empty() && s.front() != ' ' && s.back() != ' ';
  for (char c : s)
    if (c == ',' || c == ')' || c == '(' || c == '\'' || c == '|' || c == '\\')
      plain = false;
  if (plain) return std::string(s);
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

inline std::string join_args(const std::vector<std::string>& xs) {
  std::string out;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += '|';
    out += quote_arg(xs[i]);
  }
  return out;
}

}  // namespace detail

inline std::string to_string(const NodeTest& test) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, TypedV>) {
          return "TypedV_" + std::string(type_code(t.type)) + "(" +
                 detail::quote_arg(t.graph) + ")";
        } else if constexpr (std::is_same_v<T, TypedVNamed>) {
          return "TypedV_" + std::string(type_code(t.type)) + "'(" +
                 detail::quote_arg(t.graph) + ", " +
                 detail::join_args(t.names) + ")";
        } else if constexpr (std::is_same_v<T, AttV>) {
          return "AttV_" + std::string(type_code(t.type)) + "(" +
                 detail::quote_arg(t.graph) + ", " +
                 detail::join_args(t.values) + ")";
        } else if constexpr (std::is_same_v<T, NameLiteral>) {
          return detail::join_alternation(t.names);
        } else if constexpr (std::is_same_v<T, Wildcard>) {
          return "*";
        } else {
          return t.kind == TerminalKind::Start ? "START" : "END";
        }
      },
      test);
}

inline std::string to_string(const Selector& s) {
  std::string out = to_string(s.test);
  if (s.predicate) {
    out += "[@" + detail::quote_literal(s.predicate->name) + "='";
    for (char c : s.predicate->value) {
      if (c == '\'' || c == '\\') out += '\\';
      out += c;
    }
    out += "']";
  }
  return out;
}

inline std::string to_string(const PathExpr& e) {
  std::string out;
  for (const Step& s : e.steps) {
    switch (s.axis) {
      case Axis::Child: out += "/"; break;
      case Axis::Descendant: out += "//"; break;
      case Axis::Following: out += "/following::"; break;
      case Axis::Preceding: out += "/preceding::"; break;
    }
    out += to_string(s.selector);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Parsing

/// Recursive-descent scanner shared by the path-expression and partition
/// parsers. Positions are byte offsets into the original text.
class ExprScanner {
 public:
  explicit ExprScanner(std::string_view text, std::size_t base_offset = 0)
      : text_(text), base_(base_offset) {}

  std::size_t pos() const { return pos_; }
  std::size_t offset() const { return base_ + pos_; }
  bool at_end() const { return pos_ >= text_.size(); }
  std::string_view rest() const { return text_.substr(pos_); }

  void skip_ws() {
    while (!at_end() && is_space(text_[pos_])) ++pos_;
  }

  bool peek(std::string_view tok) const { return rest().starts_with(tok); }

  bool accept(std::string_view tok) {
    if (!peek(tok)) return false;
    pos_ += tok.size();
    return true;
  }

  void expect(std::string_view tok) {
    if (!accept(tok)) fail("unexpected input", {std::string("'") + std::string(tok) + "'"});
  }

  [[noreturn]] void fail(const std::string& message,
                         std::vector<std::string> expected = {}) const {
    std::string msg = message;
    if (at_end()) {
      msg += " at end of input";
    } else {
      msg += " near '" + std::string(rest().substr(0, 12)) + "'";
    }
    throw SyntaxError(msg, offset(), std::move(expected));
  }

  /// Axis token. Returns nullopt if none is present.
  std::optional<Axis> axis() {
    skip_ws();
    Axis axis;
    if (accept("//")) {
      axis = Axis::Descendant;
    } else if (accept("\\v+")) {
      return Axis::Descendant;
    } else if (accept("/")) {
      axis = Axis::Child;
    } else {
      return std::nullopt;
    }
    skip_ws();
    if (accept("following::")) return Axis::Following;
    if (accept("preceding::") || accept("preceeding::")) return Axis::Preceding;
    return axis;
  }

  Selector selector() {
    skip_ws();
    Selector s{test(), std::nullopt};
    skip_ws();
    if (accept("[")) {
      skip_ws();
      if (!accept("@")) fail("expected attribute predicate", {"'@'"});
      AttrPredicate p;
      p.name = literal("attribute name");
      skip_ws();
      expect("=");
      skip_ws();
      p.value = quoted_or_bare_value();
      skip_ws();
      expect("]");
      s.predicate = std::move(p);
    }
    return s;
  }

  NodeTest test() {
    if (at_end()) fail("expected a node test", expected_tests());
    if (accept("*")) return Wildcard{};
    if (accept("\xE2\x97\x81")) return Terminal{TerminalKind::Start};  // ◁
    if (accept("\xE2\x96\xB7")) return Terminal{TerminalKind::End};    // ▷
    if (keyword("START")) return Terminal{TerminalKind::Start};
    if (keyword("END")) return Terminal{TerminalKind::End};
    if (peek("TypedV_") || peek("AttV_")) return typed_selector();
    NameLiteral lit;
    lit.names.push_back(literal("name"));
    while (accept("|")) lit.names.push_back(literal("name"));
    return lit;
  }

 private:
  static bool is_space(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r';
  }

  static bool is_name_char(char c) {
    switch (c) {
      case '/': case '[': case ']': case '(': case ')': case '@': case '=':
      case '\'': case ',': case '*': case '|': case '\\':
        return false;
      default:
        return !is_space(c);
    }
  }

  static std::vector<std::string> expected_tests() {
    return {"name", "'*'", "'START'", "'END'", "'TypedV_'", "'AttV_'"};
  }

  bool keyword(std::string_view kw) {
    if (!peek(kw)) return false;
    std::size_t after = pos_ + kw.size();
    if (after < text_.size() && is_name_char(text_[after])) return false;
    pos_ = after;
    return true;
  }

  std::string quoted() {
    const char q = text_[pos_++];
    std::string out;
    while (!at_end() && text_[pos_] != q) {
      if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
      out += text_[pos_++];
    }
    if (at_end()) fail("unterminated string literal", {std::string("closing ") + q});
    ++pos_;
    return out;
  }

  std::string literal(const char* what) {
    skip_ws();
    if (!at_end() && (text_[pos_] == '\'' || text_[pos_] == '"')) {
      std::string s = quoted();
      if (s.empty()) fail(std::string("empty ") + what);
      return s;
    }
    std::size_t start = pos_;
    while (!at_end() && is_name_char(text_[pos_])) ++pos_;
    if (pos_ == start) fail(std::string("expected ") + what, {what});
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string quoted_or_bare_value() {
    if (!at_end() && (text_[pos_] == '\'' || text_[pos_] == '"')) return quoted();
    // Accept the typographic quotes that appear in copied policy text.
    for (std::string_view q : {"\xE2\x80\x99", "\xE2\x80\x98"}) {
      if (accept(q)) {
        std::size_t start = pos_;
        while (!at_end() && !peek("\xE2\x80\x99") && !peek("\xE2\x80\x98")) ++pos_;
        if (at_end()) fail("unterminated string literal");
        std::string out(text_.substr(start, pos_ - start));
        pos_ += 3;
        return out;
      }
    }
    return literal("attribute value");
  }

  // Typed-selector argument: read up to ',' '|' or ')', trimming blanks.
  std::string arg() {
    skip_ws();
    if (!at_end() && (text_[pos_] == '\'' || text_[pos_] == '"')) {
      std::string s = quoted();
      skip_ws();
      return s;
    }
    std::size_t start = pos_;
    while (!at_end() && text_[pos_] != ',' && text_[pos_] != ')' &&
           text_[pos_] != '|')
      ++pos_;
    std::string_view s = text_.substr(start, pos_ - start);
    while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
    if (s.empty()) fail("expected an argument", {"argument"});
    return std::string(s);
  }

  NodeTest typed_selector() {
    const bool att = accept("AttV_");
    if (!att) expect("TypedV_");
    VertexType type;
    if (accept("Att")) {
      type = VertexType::Attribute;
    } else if (accept("Ag")) {
      type = VertexType::Agent;
    } else if (accept("A")) {
      type = VertexType::Artifact;
    } else if (accept("P")) {
      type = VertexType::Process;
    } else {
      fail("expected a vertex type", {"'Ag'", "'A'", "'P'", "'Att'"});
    }
    const bool primed = accept("'") || accept("\xE2\x80\xB2");  // ' or ′
    skip_ws();
    expect("(");
    std::string graph = arg();
    std::vector<std::string> literals;
    skip_ws();
    if (accept(",")) {
      literals.push_back(arg());
      while (accept("|")) literals.push_back(arg());
    }
    skip_ws();
    expect(")");
    if (att) {
      if (literals.empty()) fail("AttV needs a value argument", {"','"});
      return AttV{type, std::move(graph), std::move(literals)};
    }
    if (literals.empty()) {
      if (primed) fail("TypedV' needs a name argument", {"','"});
      return TypedV{type, std::move(graph)};
    }
    return TypedVNamed{type, std::move(graph), std::move(literals)};
  }

  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

/// Parses a standalone selector such as "TypedV_P'(G_i, review|grade)".
inline Selector parse_selector(std::string_view text) {
  ExprScanner sc(text);
  Selector s = sc.selector();
  sc.skip_ws();
  if (!sc.at_end()) sc.fail("trailing input after selector", {"end of input"});
  return s;
}

/// Parses a query expression. Throws SyntaxError with byte offset.
inline PathExpr parse_path_expr(std::string_view text) {
  ExprScanner sc(text);
  PathExpr expr;
  sc.skip_ws();
  while (!sc.at_end()) {
    std::size_t step_offset = sc.offset();
    auto axis = sc.axis();
    if (!axis) sc.fail("expected an axis", {"'/'", "'//'", "'\\v+'"});
    Step step{*axis, sc.selector()};
    if (auto* t = std::get_if<Terminal>(&step.selector.test)) {
      (void)t;
      expr.steps.push_back(std::move(step));
      sc.skip_ws();
      // A terminal is only allowed first or last.
      if (expr.steps.size() > 1 && !sc.at_end())
        throw SyntaxError("terminal START/END must be the first or last step",
                          step_offset);
      continue;
    }
    expr.steps.push_back(std::move(step));
    sc.skip_ws();
  }
  if (expr.steps.empty())
    sc.fail("empty expression", {"'/'", "'//'", "'\\v+'"});
  return expr;
}

}  // namespace provpolicy
