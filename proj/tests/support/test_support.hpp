// Copyright 2026 The subjidx Authors
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

#ifndef SUBJIDX_TESTS_TEST_SUPPORT_HPP_
#define SUBJIDX_TESTS_TEST_SUPPORT_HPP_

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "subjidx/model.hpp"

namespace subjidx::testing {

namespace fs = std::filesystem;

inline fs::path fixture(std::string_view rel) { return fs::path(SUBJIDX_FIXTURE_DIR) / rel; }
inline fs::path generated(std::string_view rel) { return fs::path(SUBJIDX_GENERATED_DIR) / rel; }

/// Fresh, empty scratch directory under the build tree.
inline fs::path scratch(std::string_view name) {
  fs::path p = fs::path(SUBJIDX_SCRATCH_DIR) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

inline std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

inline void spit(const fs::path& p, std::string_view body) {
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << body;
}

using Edges = std::vector<std::pair<std::string, std::string>>;

/// child -> parent edges plus optional declared tops.
inline IndexingSystem hierarchy(const Edges& bt, const std::vector<std::string>& tops = {},
                                bool virtual_root = false) {
  SystemBuilder b("test");
  for (const auto& [c, p] : bt) b.add_broader(c, p);
  for (const auto& t : tops) b.add_top(t);
  b.set_virtual_root(virtual_root);
  return b.build();
}

inline DescriptorId id(const IndexingSystem& s, std::string_view label) {
  return s.descriptor_id(label);
}

inline std::vector<std::string> labels(const IndexingSystem& s, const std::vector<DescriptorId>& ids) {
  std::vector<std::string> out;
  for (auto d : ids) out.push_back(s.descriptor(d).label);
  return out;
}

template <class Span>
std::vector<std::string> labels_of(const IndexingSystem& s, Span ids) {
  std::vector<std::string> out;
  for (auto d : ids) out.push_back(s.descriptor(d).label);
  return out;
}

/// Two numeric columns of a '#'-headed TSV table.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> table(const fs::path& p) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> rows;
  std::istringstream in(slurp(p));
  for (std::string line; std::getline(in, line);) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream f(line);
    std::uint64_t a = 0, b = 0;
    f >> a >> b;
    rows.emplace_back(a, b);
  }
  return rows;
}

}  // namespace subjidx::testing

#endif  // SUBJIDX_TESTS_TEST_SUPPORT_HPP_
