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

namespace qcausal {

struct ClassicalNode {
  std::string name;
  std::size_t in_card = 1;
  std::size_t out_card = 1;
};

/**
 * κ over (X_1^in, X_1^out, ..., X_n^in, X_n^out), row-major with the first
 * variable most significant.
 */
class ClassicalProcess {
 public:
  ClassicalProcess() = default;
  ClassicalProcess(std::vector<ClassicalNode> nodes, std::vector<double> kappa);

  const std::vector<ClassicalNode>& nodes() const { return nodes_; }
  const std::vector<double>& kappa() const { return kappa_; }
  std::vector<std::size_t> shape() const;
  std::size_t node_index(const std::string& name) const;

  std::size_t flat_index(const std::vector<std::size_t>& ins,
                         const std::vector<std::size_t>& outs) const;
  double at(const std::vector<std::size_t>& ins, const std::vector<std::size_t>& outs) const {
    return kappa_[flat_index(ins, outs)];
  }

 private:
  std::vector<ClassicalNode> nodes_;
  std::vector<double> kappa_;
};

constexpr std::size_t kDefaultClassicalBudget = 1000000;

struct ClassicalValidity {
  bool valid = false;
  bool entries_ok = false;     // all entries in [0, 1]
  double worst_deviation = 0;  // max |Σ κ Π P − 1| over deterministic locals
  std::size_t tuples = 0;
};

/** Normalization for every tuple of deterministic local channels. */
ClassicalValidity validate_classical(const ClassicalProcess& kp, double tol = kDefaultTol,
                                     std::size_t budget = kDefaultClassicalBudget);

/** f: out tuple -> in tuple, both as mixed-radix indices (first node most significant). */
class DeterministicProcess {
 public:
  DeterministicProcess() = default;
  DeterministicProcess(std::vector<ClassicalNode> nodes, std::vector<std::size_t> table);

  const std::vector<ClassicalNode>& nodes() const { return nodes_; }
  const std::vector<std::size_t>& table() const { return table_; }
  std::size_t node_index(const std::string& name) const;

  std::vector<std::size_t> ins_for(const std::vector<std::size_t>& outs) const;
  ClassicalProcess kappa() const;

 private:
  std::vector<ClassicalNode> nodes_;
  std::vector<std::size_t> table_;
};

/** Build from a per-node component function. */
template <class F>
DeterministicProcess make_deterministic(const std::vector<ClassicalNode>& nodes, F&& f);

std::size_t out_space(const std::vector<ClassicalNode>& nodes);
std::size_t in_space(const std::vector<ClassicalNode>& nodes);
std::vector<std::size_t> unpack_outs(const std::vector<ClassicalNode>& nodes, std::size_t idx);
std::vector<std::size_t> unpack_ins(const std::vector<ClassicalNode>& nodes, std::size_t idx);
std::size_t pack_outs(const std::vector<ClassicalNode>& nodes, const std::vector<std::size_t>& v);
std::size_t pack_ins(const std::vector<ClassicalNode>& nodes, const std::vector<std::size_t>& v);

/** Exactly one fixed point under every tuple of local functions. */
bool validate_deterministic(const DeterministicProcess& dp,
                            std::size_t budget = kDefaultClassicalBudget);

/** P(k, X^out | X^in) stored [k][in][out]. */
struct ClassicalInstrument {
  std::string node;
  std::size_t outcomes = 1;
  std::size_t in_card = 1, out_card = 1;
  std::vector<double> p;

  double at(std::size_t k, std::size_t in, std::size_t out) const {
    return p[(k * in_card + in) * out_card + out];
  }
};

Distribution classical_joint_probabilities(const ClassicalProcess& kp,
                                           const std::vector<ClassicalInstrument>& instruments);

DirectedGraph causal_structure_deterministic(const DeterministicProcess& dp);

struct ClassicalFactor {
  std::string child;
  std::vector<std::string> parents;  // node order
  // P(child^in | parent outs), index = pa_tuple * in_card + in.
  std::vector<double> table;
};

struct ClassicalMarkov {
  bool accepted = false;
  std::vector<ClassicalFactor> factors;
  double stochastic_residual = 0.0;
  double product_residual = 0.0;
  std::string reason;
};

ClassicalMarkov classical_markov_check(const ClassicalProcess& kp, const DirectedGraph& g,
                                       double tol = kDefaultTol);

constexpr std::size_t kDefaultEnumerationBudget = 16;

/** All valid deterministic processes; out-state space capped by `budget`. */
std::vector<DeterministicProcess> enumerate_deterministic_processes(
    const std::vector<ClassicalNode>& nodes, std::size_t budget = kDefaultEnumerationBudget);

struct PolytopeMembership {
  bool inside = false;
  std::vector<double> weights;
  double residual = 0.0;  // L1 distance to the polytope
};

PolytopeMembership polytope_membership(const ClassicalProcess& kp,
                                       const std::vector<DeterministicProcess>& vertices,
                                       double tol = kDefaultTol);

/** Mixture of deterministic processes. */
ClassicalProcess mix(const std::vector<double>& weights,
                     const std::vector<DeterministicProcess>& fs);

/**
 * A valid classical process on `nodes` outside the deterministic polytope,
 * found as an LP optimum of a random objective. Empty if none is found.
 */
std::vector<ClassicalProcess> outside_polytope_candidates(
    const std::vector<ClassicalNode>& nodes, const std::vector<DeterministicProcess>& vertices,
    unsigned seed, std::size_t attempts = 200);

struct LambdaRoot {
  std::string name;
  std::string target;  // empty for a shared root
  std::vector<double> distribution;
};

/**
 * g(x, (i, z)) = (z ⊕ f_i(x), (x, i)). Nodes of g: sources, λ roots
 * (in_card 1), leaf (out_card 1).
 */
struct ReversibleExtension {
  DeterministicProcess g;
  std::vector<std::string> sources;
  std::vector<LambdaRoot> lambdas;
  std::string leaf;
};

ReversibleExtension reversible_extension(const std::vector<double>& weights,
                                         const std::vector<DeterministicProcess>& fs);
/** Split the single λ of an m = 1 extension into one root per source. */
ReversibleExtension split_lambda(const ReversibleExtension& ext);

/** g is a bijection from (X^out, λ^out) to (X^in, F^in). */
bool is_reversible(const ReversibleExtension& ext);
/** Feed the λ distributions and discard the leaf. */
ClassicalProcess extension_marginal(const ReversibleExtension& ext);
/** Slice of g at one λ value, leaf discarded. */
DeterministicProcess extension_slice(const ReversibleExtension& ext,
                                     const std::vector<std::size_t>& lambda_values);

struct ClassicalCompatibility {
  bool compatible = false;
  double marginal_residual = 0.0;
  std::vector<std::string> violated;
};

ClassicalCompatibility classical_compatibility_check(const ClassicalProcess& kp,
                                                     const DirectedGraph& g,
                                                     const ReversibleExtension& ext,
                                                     double tol = kDefaultTol);

/** Diagonal process operator with κ on the product computational basis. */
ProcessOperator quantize(const ClassicalProcess& kp);
std::vector<QuantumNode> quantum_nodes(const std::vector<ClassicalNode>& nodes);

// ------------------------------------------------------------------ impl

template <class F>
DeterministicProcess make_deterministic(const std::vector<ClassicalNode>& nodes, F&& f) {
  const std::size_t n = out_space(nodes);
  std::vector<std::size_t> table(n);
  for (std::size_t i = 0; i < n; ++i) table[i] = pack_ins(nodes, f(unpack_outs(nodes, i)));
  return DeterministicProcess(nodes, std::move(table));
}

}  // namespace qcausal
