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

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace qcausal {

using Edge = std::pair<std::string, std::string>;

/** Directed graph over node names; cycles allowed, self-loops on request. */
class DirectedGraph {
 public:
  DirectedGraph() = default;
  explicit DirectedGraph(std::vector<std::string> vertices,
                         bool allow_self_loops = false);
  DirectedGraph(std::vector<std::string> vertices, const std::vector<Edge>& edges,
                bool allow_self_loops = false);

  void add_edge(const std::string& from, const std::string& to);
  void remove_edge(const std::string& from, const std::string& to);
  bool has_edge(const std::string& from, const std::string& to) const;

  const std::set<std::string>& vertices() const { return vertices_; }
  const std::set<Edge>& edges() const { return edges_; }
  std::set<std::string> parents(const std::string& v) const;

  bool is_acyclic() const;
  // Some directed cycle as a closed vertex walk (first == last), if any.
  std::optional<std::vector<std::string>> find_cycle() const;
  // Kahn order; ties broken by `preference` (defaults to name order).
  std::optional<std::vector<std::string>> topological_order(
      const std::vector<std::string>& preference = {}) const;

  /** Graphviz text; vertices and edges in lexicographic order. */
  std::string to_dot(const std::string& name = "G") const;

  bool operator==(const DirectedGraph& o) const {
    return vertices_ == o.vertices_ && edges_ == o.edges_;
  }

 private:
  void check_vertex(const std::string& v) const;

  std::set<std::string> vertices_;
  std::set<Edge> edges_;
  bool allow_self_loops_ = false;
};

}  // namespace qcausal
