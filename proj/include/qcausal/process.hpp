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
#include <string>
#include <vector>

#include "qcausal/tensor.hpp"

namespace qcausal {

struct QuantumNode {
  std::string name;
  std::size_t d_in = 1;
  std::size_t d_out = 1;
};

// A^in is the primal slot named after the node, (A^out)* the dual one.
SystemLabel in_label(const QuantumNode& node);
SystemLabel out_label(const QuantumNode& node);
Systems process_systems(const std::vector<QuantumNode>& nodes);

/** σ over ⊗_i (A_i^in ⊗ (A_i^out)*), systems always in canonical order. */
class ProcessOperator {
 public:
  ProcessOperator() = default;
  ProcessOperator(std::vector<QuantumNode> nodes, Matrix matrix);
  // Reorders `op` into canonical order; its systems must match the nodes.
  ProcessOperator(std::vector<QuantumNode> nodes, const LabeledOperator& op);

  const std::vector<QuantumNode>& nodes() const { return nodes_; }
  const LabeledOperator& op() const { return op_; }
  const Matrix& matrix() const { return op_.matrix(); }

  std::size_t node_index(const std::string& name) const;
  const QuantumNode& node(const std::string& name) const;
  double out_dim_product() const;
  std::vector<std::string> node_names() const;

 private:
  std::vector<QuantumNode> nodes_;
  LabeledOperator op_;
};

struct ValidityVerdict {
  bool hermitian = false;
  bool psd = false;
  bool trace = false;
  bool type_terms = false;
  double hermiticity_residual = 0.0;
  double min_eigenvalue = 0.0;
  double trace_value = 0.0;
  double trace_expected = 0.0;
  std::vector<std::string> offending_types;
  std::map<std::string, double> offending_norms;

  bool valid() const { return hermitian && psd && trace && type_terms; }
};

ValidityVerdict validate_process(const ProcessOperator& sigma,
                                 double tol = kDefaultTol);

/** Name of an HS type, e.g. "A^in A^out B^in". */
std::string type_name(const std::vector<QuantumNode>& nodes, TypeMask mask);

/** τ = (ρ^E)^T on (A^out)* ⊗ A^in. */
struct InstrumentElement {
  QuantumNode node;
  LabeledOperator tau;
};

struct Instrument {
  QuantumNode node;
  std::vector<InstrumentElement> elements;
};

/** Element from Kraus operators of E^k: A^in → A^out. */
InstrumentElement instrument_element(const QuantumNode& node,
                                     const std::vector<Matrix>& kraus);
Instrument make_instrument(const QuantumNode& node,
                           const std::vector<std::vector<Matrix>>& kraus_sets);
/** Residual of Tr_{(A^out)*} Σ_k τ^k = 1_{A^in}. */
double instrument_tp_residual(const Instrument& instrument);
double element_tp_residual(const InstrumentElement& element);

struct Distribution {
  std::vector<std::size_t> shape;
  std::vector<double> p;  // row-major over outcome tuples

  double at(const std::vector<std::size_t>& outcome) const;
  double total() const;
};

Distribution joint_probabilities(const ProcessOperator& sigma,
                                 const std::vector<Instrument>& instruments);

/** No signalling from the node set S to its complement. */
bool no_signalling(const ProcessOperator& sigma,
                   const std::vector<std::string>& S, double tol = kDefaultTol);
double no_signalling_residual(const ProcessOperator& sigma,
                              const std::vector<std::string>& S);

/**
 * Tr_node[σ τ] renormalized so the trace is the product of the remaining
 * output dimensions.
 */
ProcessOperator conditional_process(const ProcessOperator& sigma,
                                    const std::string& node,
                                    const InstrumentElement& tau,
                                    double tol = kDefaultTol);

/**
 * σ ⊗ ancilla with each ancilla system appended to the input space of the
 * node named in `owner` (ancilla system name -> node name).
 */
ProcessOperator extend_nodes(const ProcessOperator& sigma,
                             const LabeledOperator& ancilla,
                             const std::map<std::string, std::string>& owner,
                             double tol = kDefaultTol);

/** A node breaking a wire: `in_wire` feeds A^in, `out_wire` leaves A^out. */
struct NodeSlot {
  std::string node;
  std::string in_wire;
  std::string out_wire;
  std::size_t d_in = 1;
  std::size_t d_out = 1;
};

/**
 * Link product of a circuit. Wires are primal on the producing piece and
 * dual on the consuming channel. Unconsumed primal wires are discarded;
 * unconsumed slot outputs get an identity.
 */
ProcessOperator comb_from_circuit(const LabeledOperator& initial_state,
                                  const std::vector<ChannelOperator>& channels,
                                  const std::vector<NodeSlot>& slots);

}  // namespace qcausal
