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

#include "qcausal/graph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <sstream>

#include "qcausal/error.hpp"

namespace qcausal {

DirectedGraph::DirectedGraph(std::vector<std::string> vertices,
                             bool allow_self_loops)
    : allow_self_loops_(allow_self_loops) {
  for (auto& v : vertices)
    if (!vertices_.insert(std::move(v)).second) throw LabelError("duplicate vertex");
}

DirectedGraph::DirectedGraph(std::vector<std::string> vertices,
                             const std::vector<Edge>& edges, bool allow_self_loops)
    : DirectedGraph(std::move(vertices), allow_self_loops) {
  for (const auto& [a, b] : edges) add_edge(a, b);
}

void DirectedGraph::check_vertex(const std::string& v) const {
  if (!vertices_.count(v)) throw LabelError("unknown vertex " + v);
}

void DirectedGraph::add_edge(const std::string& from, const std::string& to) {
  check_vertex(from);
  check_vertex(to);
  if (from == to && !allow_self_loops_)
    throw LabelError("self-loop on " + from + " is not enabled");
  edges_.emplace(from, to);
}

void DirectedGraph::remove_edge(const std::string& from, const std::string& to) {
  if (!edges_.erase({from, to})) throw LabelError("no edge " + from + " -> " + to);
}

bool DirectedGraph::has_edge(const std::string& from, const std::string& to) const {
  return edges_.count({from, to}) > 0;
}

std::set<std::string> DirectedGraph::parents(const std::string& v) const {
  check_vertex(v);
  std::set<std::string> p;
  for (const auto& [a, b] : edges_)
    if (b == v) p.insert(a);
  return p;
}

std::optional<std::vector<std::string>> DirectedGraph::find_cycle() const {
  std::map<std::string, int> color;
  std::vector<std::string> stack;
  std::optional<std::vector<std::string>> found;
  std::function<bool(const std::string&)> dfs = [&](const std::string& v) {
    color[v] = 1;
    stack.push_back(v);
    for (const auto& [a, b] : edges_) {
      if (a != v) continue;
      if (color[b] == 1) {
        auto it = std::find(stack.begin(), stack.end(), b);
        std::vector<std::string> cyc(it, stack.end());
        cyc.push_back(b);
        found = cyc;
        return true;
      }
      if (color[b] == 0 && dfs(b)) return true;
    }
    stack.pop_back();
    color[v] = 2;
    return false;
  };
  for (const auto& v : vertices_)
    if (color[v] == 0 && dfs(v)) break;
  return found;
}

bool DirectedGraph::is_acyclic() const { return !find_cycle().has_value(); }

std::optional<std::vector<std::string>> DirectedGraph::topological_order(
    const std::vector<std::string>& preference) const {
  std::vector<std::string> pref = preference;
  for (const auto& v : vertices_)
    if (std::find(pref.begin(), pref.end(), v) == pref.end()) pref.push_back(v);
  std::map<std::string, int> indeg;
  for (const auto& v : vertices_) indeg[v] = 0;
  for (const auto& e : edges_) ++indeg[e.second];
  std::vector<std::string> order;
  std::set<std::string> done;
  while (order.size() < vertices_.size()) {
    bool progressed = false;
    for (const auto& v : pref) {
      if (done.count(v) || indeg[v] != 0) continue;
      order.push_back(v);
      done.insert(v);
      for (const auto& e : edges_)
        if (e.first == v) --indeg[e.second];
      progressed = true;
      break;
    }
    if (!progressed) return std::nullopt;
  }
  return order;
}

std::string DirectedGraph::to_dot(const std::string& name) const {
  std::ostringstream os;
  os << "digraph \"" << name << "\" {\n";
  for (const auto& v : vertices_) os << "  \"" << v << "\";\n";
  for (const auto& [a, b] : edges_) os << "  \"" << a << "\" -> \"" << b << "\";\n";
  os << "}\n";
  return os.str();
}

}  // namespace qcausal
