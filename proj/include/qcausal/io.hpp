// Copyright 2026 The qcausal Authors
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

#include <cstdint>
#include <map>
#include <optional>
#include <string>

#include "qcausal/classical.hpp"
#include "qcausal/graph.hpp"
#include "qcausal/process.hpp"

namespace qcausal {

constexpr int kFormatVersion = 1;
// Quantum payloads above this side length are written as triplets.
constexpr std::size_t kDenseLimit = 512;

/**
 * On-disk process. Exactly one of `quantum`, `classical` is set. Quantum
 * payloads are row-major in canonical order (per node: in, then dual out).
 */
struct ProcessFile {
  std::optional<ProcessOperator> quantum;
  std::optional<ClassicalProcess> classical;
  std::optional<DirectedGraph> graph;
  std::map<std::string, std::string> metadata;

  bool is_classical() const { return classical.has_value(); }
  std::vector<std::string> node_names() const;
};

/** Throws ParseError with a location for malformed or inconsistent input. */
ProcessFile parse_process_file(const std::string& text);
ProcessFile load_process_file(const std::string& path);

std::string dump_process_file(const ProcessFile& file);
void save_process_file(const ProcessFile& file, const std::string& path);

/** FNV-1a, 64 bit, printed as 16 hex digits. */
std::uint64_t fnv1a(const std::string& bytes);
std::string hex_digest(const std::string& bytes);

}  // namespace qcausal
