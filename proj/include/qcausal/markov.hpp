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

#include <map>
#include <set>
#include <string>
#include <vector>

#include "qcausal/graph.hpp"
#include "qcausal/process.hpp"
#include "qcausal/unitary.hpp"

namespace qcausal {

/** A ↛ D for a unitary channel CJ: Tr_{outputs≠D} ρ = M ⊗ 1_{A*}. */
bool channel_no_influence(const ChannelOperator& rho_u, const SystemLabel& in_sys,
                          const SystemLabel& out_sys, double tol = kDefaultTol);
double channel_no_influence_residual(const ChannelOperator& rho_u,
                                     const SystemLabel& in_sys,
                                     const SystemLabel& out_sys);

/** A_from^out ↛ A_to^in inside a unitary process. */
double no_influence_residual(const UnitaryProcess& up, const std::string& from,
                             const std::string& to);
bool no_influence(const UnitaryProcess& up, const std::string& from,
                  const std::string& to, double tol = kDefaultTol);

DirectedGraph causal_structure_unitary(const UnitaryProcess& up,
                                       double tol = kDefaultTol);

struct ChannelFactor {
  std::string child;
  std::set<std::string> parents;
  ChannelOperator op;  // on A_child^in ⊗ (Pa^out)*
};

ChannelFactor marginal_factor(const ProcessOperator& sigma, const std::string& node,
                              const std::set<std::string>& parents);

struct MarkovFactorization {
  std::vector<ChannelFactor> factors;
  std::vector<double> factor_min_eigenvalue;
  std::vector<double> factor_tp_residual;
  Eigen::MatrixXd commutation_residuals;
  double product_residual = 0.0;
  bool accepted = false;
  std::string reason;
};

MarkovFactorization markov_check(const ProcessOperator& sigma,
                                 const DirectedGraph& graph,
                                 double tol = kDefaultTol);

struct EdgeSignal {
  bool signalling = false;
  double residual = 0.0;
};

struct FaithfulnessReport {
  std::map<Edge, EdgeSignal> edges;
  bool faithful = false;
};

FaithfulnessReport faithfulness_check(const DirectedGraph& graph,
                                      const MarkovFactorization& factors,
                                      double tol = kDefaultTol);

/** State fed into a λ root of an extension; `state` acts on (λ^out)*. */
struct LambdaState {
  std::string root;
  std::string target;
  Matrix state;
};

struct CompatibilityReport {
  bool compatible = false;
  double marginal_residual = 0.0;
  std::vector<std::string> violated;
};

CompatibilityReport compatibility_check(const ProcessOperator& sigma,
                                        const DirectedGraph& graph,
                                        const UnitaryProcess& extension,
                                        const std::vector<LambdaState>& lambdas,
                                        double tol = kDefaultTol);

struct DiscoveryResult {
  DirectedGraph graph;
  std::map<Edge, double> edge_residuals;
  MarkovFactorization markov;
};

DiscoveryResult discover(const ProcessOperator& sigma, double tol = kDefaultTol);

}  // namespace qcausal
