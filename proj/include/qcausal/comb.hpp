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

#include <cstddef>
#include <string>
#include <vector>

#include "qcausal/graph.hpp"
#include "qcausal/process.hpp"
#include "qcausal/unitary.hpp"

namespace qcausal {

using TotalOrder = std::vector<std::string>;

/** Nested trace conditions of a comb; residuals[l] belongs to order[l]. */
struct CombVerdict {
  TotalOrder order;
  std::vector<double> residuals;
  bool accepted = false;
};

CombVerdict comb_check(const ProcessOperator& sigma, const TotalOrder& order,
                       double tol = kDefaultTol);

struct CombSearchResult {
  std::vector<TotalOrder> orders;  // lexicographic
  std::size_t scanned = 0;         // n!
};

constexpr std::size_t kDefaultCombBudget = 8;

/** Every order for which sigma is a comb. Throws BudgetError past `budget` nodes. */
CombSearchResult comb_search(const ProcessOperator& sigma, double tol = kDefaultTol,
                             std::size_t budget = kDefaultCombBudget);

/** ‖σ − ww†‖/‖σ‖ for the best rank-one guess w. */
double isometric_residual(const ProcessOperator& sigma);
bool is_isometric(const ProcessOperator& sigma, double tol = kDefaultTol);

struct UnitarySeparability {
  bool separable = false;
  DirectedGraph graph;
  TotalOrder order;                 // separable: a topological order
  std::vector<std::string> cycle;   // nonseparable: closed walk
  CombVerdict comb;                 // comb_check on `order`
};

UnitarySeparability unitary_causal_separability(const UnitaryProcess& up,
                                                double tol = kDefaultTol);

enum class SeparabilityStatus { Separable, Inconclusive };

/**
 * σ = X + Y with X ⪰ 0 in the A≺B comb subspace and Y ⪰ 0 in the B≺A one.
 * Inconclusive never means nonseparable.
 */
struct SeparabilityVerdict {
  SeparabilityStatus status = SeparabilityStatus::Inconclusive;
  TotalOrder first;   // X order (A,B); Y is the reverse
  double p = 0.0;     // Tr X / Tr σ
  Matrix X, Y;        // canonical system order of σ
  double residual = 0.0;
  std::size_t iterations = 0;
  std::string method;
};

constexpr std::size_t kDefaultMaxIter = 5000;

SeparabilityVerdict bipartite_separability(const ProcessOperator& sigma,
                                           double tol = kDefaultTol,
                                           std::size_t max_iter = kDefaultMaxIter);

}  // namespace qcausal
