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

#include "qcausal/unitary.hpp"

#include "qcausal/error.hpp"

namespace qcausal {

UnitaryProcess::UnitaryProcess(std::vector<QuantumNode> nodes, Matrix unitary)
    : unitary_(std::move(unitary)) {
  Systems ins, outs;
  for (const auto& n : nodes) {
    ins.emplace_back(n.name, n.d_in, false);
    outs.emplace_back(n.name, n.d_out, false);
  }
  if (total_dim(ins) != total_dim(outs))
    throw DimensionError("unitary process needs equal total in and out dimensions");
  w_ = cj_vector(unitary_, ins, outs).reorder(process_systems(nodes));
  process_ = ProcessOperator(nodes, w_.projector().matrix());
}

double UnitaryProcess::unitarity_residual() const {
  const auto n = unitary_.cols();
  return (unitary_.adjoint() * unitary_ - Matrix::Identity(n, n)).norm() /
         std::sqrt(static_cast<double>(n));
}

LabeledOperator UnitaryProcess::influence_marginal(const std::string& node) const {
  Systems keep{in_label(process_.node(node))};
  for (const auto& n : nodes()) keep.push_back(out_label(n));
  return w_.reduced(keep);
}

UnitaryProcess split_root(const UnitaryProcess& up, const std::string& root,
                          const std::vector<QuantumNode>& parts) {
  const QuantumNode& r = up.process().node(root);
  if (r.d_in != 1) throw PreconditionError("node " + root + " is not a root");
  std::size_t d = 1;
  for (const auto& p : parts) {
    if (p.d_in != 1) throw DimensionError("split part " + p.name + " must have d_in = 1");
    d *= p.d_out;
  }
  if (d != r.d_out)
    throw DimensionError("split parts do not factor the output of " + root);
  std::vector<QuantumNode> nodes;
  for (const auto& n : up.nodes()) {
    if (n.name == root)
      nodes.insert(nodes.end(), parts.begin(), parts.end());
    else
      nodes.push_back(n);
  }
  return UnitaryProcess(nodes, up.unitary());
}

UnitaryProcess trivial_extension(const UnitaryProcess& up, std::string leaf_name) {
  std::vector<QuantumNode> nodes = up.nodes();
  for (const auto& n : up.nodes()) nodes.push_back(QuantumNode{"lambda_" + n.name, 1, 1});
  nodes.push_back(QuantumNode{std::move(leaf_name), 1, 1});
  return UnitaryProcess(nodes, up.unitary());
}

}  // namespace qcausal
