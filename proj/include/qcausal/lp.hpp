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

#include <Eigen/Dense>
#include <cstddef>

namespace qcausal {

enum class LPStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LPResult {
  LPStatus status = LPStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  std::size_t pivots = 0;
};

/**
 * min c·x subject to A x = b, x >= 0. Dense two-phase tableau simplex with
 * Bland's rule; redundant equality rows are dropped after phase one.
 */
LPResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A,
                  const Eigen::VectorXd& b, double eps = 1e-10,
                  std::size_t max_pivots = 200000);

}  // namespace qcausal
