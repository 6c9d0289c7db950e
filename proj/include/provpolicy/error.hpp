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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace provpolicy {

/// Base class for every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structural misuse of a graph: unknown vertex ids, duplicate ids.
class GraphError : public Error {
 public:
  using Error::Error;
};

/// Syntax error in a path expression or partition expression.
///
/// `offset` is the byte offset into the parsed text; `expected` lists the
/// tokens that would have been accepted at that point.
class SyntaxError : public Error {
 public:
  SyntaxError(std::string message, std::size_t offset,
              std::vector<std::string> expected = {})
      : Error(format(message, offset, expected)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept {
    return expected_;
  }

 private:
  static std::string format(const std::string& message, std::size_t offset,
                            const std::vector<std::string>& expected) {
    std::string out = "syntax error at offset " + std::to_string(offset) +
                      ": " + message;
    if (!expected.empty()) {
      out += " (expected one of:";
      for (const auto& e : expected) out += " " + e;
      out += ")";
    }
    return out;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

/// Malformed document (graph JSON, policy XML, VCD, merge table).
/// `location` is a human-readable position such as "line 3" or
/// "vertices[2].type".
class DocumentError : public Error {
 public:
  DocumentError(std::string location, const std::string& message)
      : Error(location + ": " + message), location_(std::move(location)) {}

  const std::string& location() const noexcept { return location_; }

 private:
  std::string location_;
};

/// A transformation could not be applied (missing VCD category, replace
/// would introduce a cycle, ...).
class TransformError : public Error {
 public:
  using Error::Error;
};

}  // namespace provpolicy
