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

#include <string>
#include <vector>

#include "qcausal/process.hpp"

namespace qcausal {

/**
 * σ = |W><W| for a unitary U from ⊗ A_i^out to ⊗ A_i^in. Rows of U are
 * indexed by the in-spaces in node order, columns by the out-spaces.
 */
class UnitaryProcess {
 public:
  UnitaryProcess() = default;
  UnitaryProcess(std::vector<QuantumNode> nodes, Matrix unitary);

  const std::vector<QuantumNode>& nodes() const { return process_.nodes(); }
  const ProcessOperator& process() const { return process_; }
  const Matrix& unitary() const { return unitary_; }
  // CJ vector in canonical process order.
  const LabeledVector& cj() const { return w_; }

  double unitarity_residual() const;
  /** Tr over every in-space except `node`'s; keeps all out-duals. */
  LabeledOperator influence_marginal(const std::string& node) const;

 private:
  ProcessOperator process_;
  Matrix unitary_;
  LabeledVector w_;
};

/** Replace a root node (d_in = 1) by several roots whose outs factor it. */
UnitaryProcess split_root(const UnitaryProcess& up, const std::string& root,
                          const std::vector<QuantumNode>& parts);

/** Append trivial λ roots "lambda_<X>" and a trivial leaf. */
UnitaryProcess trivial_extension(const UnitaryProcess& up,
                                 std::string leaf_name = "F");

}  // namespace qcausal
