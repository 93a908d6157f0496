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
#include <string>
#include <vector>

#include "qcausal/classical.hpp"
#include "qcausal/decomposition.hpp"
#include "qcausal/graph.hpp"
#include "qcausal/markov.hpp"
#include "qcausal/process.hpp"
#include "qcausal/unitary.hpp"

namespace qcausal {

/** Nodes A, B (dim d), root P (out 2d = control ⊗ target), leaf F (in 2d). */
UnitaryProcess make_switch(std::size_t d = 2);
/** The SWITCH with F traced out: nodes A, B, P. */
ProcessOperator make_reduced_switch(std::size_t d = 2);
DirectedGraph switch_graph();
DirectedGraph reduced_switch_graph();

/** f(a, b, c) = (¬b∧c, ¬c∧a, ¬a∧b) on bit nodes A, B, C. */
DeterministicProcess af_function();
ProcessOperator make_af();
DirectedGraph af_graph();

/** Permutation unitary on A, B, C, P (out λ_A λ_B λ_C), F (in a b c). */
UnitaryProcess make_bw_extension();
/** P split into roots lambda_A, lambda_B, lambda_C. */
UnitaryProcess bw_split(const UnitaryProcess& bw);
std::vector<LambdaState> bw_lambda_states();

/**
 * Feed `tau` (on the root's dual output) into `root` and discard `leaf`;
 * either name may be empty.
 */
ProcessOperator marginalize(const UnitaryProcess& up, const std::string& root,
                            const Matrix& tau, const std::string& leaf);

/** Control c routes the order: c = 0 gives A before B. */
DeterministicProcess make_classical_switch(std::size_t d = 2);

struct MethodsCounterexample {
  // P(A^in = 0 | B^out, C^out) and P(B^in = 0 | A^out, C^out), index 2x + y.
  std::vector<double> p_a0{0.4, 0.3, 0.8, 0.3};
  std::vector<double> p_b0{0.5, 0.3, 0.25, 0.1};

  /** P(A^in|..) P(B^in|..) P(C^in) on bit nodes A, B, C. */
  ClassicalProcess product(const std::vector<double>& p_c_in) const;
  /** The two channels at C^out = 0, on bit nodes A, B. */
  ClassicalProcess slice_c0() const;
};

MethodsCounterexample make_methods_counterexample();

SwitchParts switch_decomposition(std::size_t d = 2);
/** V_1 and W_0 with SWAP and identity exchanged. */
SwitchParts switch_decomposition_swapped(std::size_t d = 2);
BWParts bw_decomposition();

/** ρ ⊗ 1 ⊗ (1/2)1 ⊗ 1 over A^in, A^out, B^in, B^out. */
ProcessOperator make_mix_example(const Matrix& rho_a_in);
/** CNOT circuit with ancilla |bit><bit|: B^in = A^out ⊕ bit. */
ProcessOperator make_cnot_process(const Matrix& rho_a_in, int bit);

/** Anything the CLI can write out. */
struct Exemplar {
  std::string name;
  std::string description;
  std::optional<ProcessOperator> quantum;
  std::optional<ClassicalProcess> classical;
  std::optional<DirectedGraph> graph;
};

std::vector<std::string> exemplar_names();
/** Throws LabelError for unknown names. */
Exemplar make_exemplar(const std::string& name);

}  // namespace qcausal
