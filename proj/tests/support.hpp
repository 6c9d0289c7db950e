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

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "provpolicy/provpolicy.hpp"

namespace testing_support {

inline std::string data_path(const std::string& name) {
  return std::string(PROVPOLICY_DATA_DIR) + "/" + name;
}

inline std::string read_data(const std::string& name) {
  std::ifstream in(data_path(name), std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline provpolicy::ProvenanceGraph load_data_graph(const std::string& name) {
  return provpolicy::load_graph(read_data(name));
}

inline provpolicy::Selector sel(const std::string& text) {
  return provpolicy::parse_selector(text);
}

/// Random schema-valid graph with at most 12 vertices.
inline provpolicy::ProvenanceGraph small_graph(std::uint64_t seed) {
  provpolicy::Rng rng(seed * 7919 + 17);
  for (;;) {
    provpolicy::GenConfig cfg;
    cfg.agents = rng.below(3);
    cfg.processes = 1 + rng.below(4);
    cfg.artifacts = 1 + rng.below(4);
    cfg.edge_density = 0.1 + 0.4 * static_cast<double>(rng.below(100)) / 100.0;
    cfg.attribute_density = 0.3;
    cfg.seed = rng.next();
    auto g = provpolicy::gen_graph(cfg, 0);
    if (g.vertex_count() <= 12) return g;
  }
}

/// Selectors worth trying on `g`: names, stems, types, attribute values,
/// wildcard.
inline std::vector<provpolicy::Selector> some_selectors(const provpolicy::ProvenanceGraph& g) {
  return provpolicy::literal_selectors(g);
}

inline std::vector<std::string> ids(const provpolicy::ProvenanceGraph& g) {
  std::vector<std::string> out;
  for (const auto& v : g.vertices()) out.push_back(v.id);
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace testing_support
