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
#include <utility>
#include <vector>

#include "qcausal/tensor.hpp"
#include "qcausal/unitary.hpp"

namespace qcausal {

struct Wire {
  std::string name;
  std::size_t dim = 1;
};

using Wires = std::vector<Wire>;

/** Linear map between named wires; rows follow `outs`, columns `ins`. */
class LabeledMap {
 public:
  LabeledMap() = default;
  LabeledMap(Wires outs, Wires ins, Matrix matrix);
  static LabeledMap identity(const Wires& wires);

  const Wires& outs() const { return outs_; }
  const Wires& ins() const { return ins_; }
  const Matrix& matrix() const { return m_; }

  // Apply `gate` to some of the current output wires; the rest pass through.
  LabeledMap then(const LabeledMap& gate) const;

  // Matrix with rows/columns permuted to the given wire names. Wires of
  // dimension one may be omitted.
  Matrix matrix(const std::vector<std::string>& out_order,
                const std::vector<std::string>& in_order) const;

 private:
  Wires outs_, ins_;
  Matrix m_;
};

/** Rows offset..offset+Π parts of a `total`-dimensional wire, as parts. */
LabeledMap block_projection(const Wire& from, std::size_t offset, const Wires& parts);
LabeledMap block_injection(const Wires& parts, const Wire& to, std::size_t offset);

struct DecompositionReport {
  bool holds = false;
  double reconstruction_residual = 0.0;
  // SWITCH shape only: (A -> B signalling, B -> A signalling) per block.
  std::vector<std::pair<bool, bool>> block_signalling;
  std::string message;
};

/**
 * U = (1 ⊗ T ⊗ 1)(⊕_i V_i ⊗ W_i)(1 ⊗ S ⊗ 1) with
 *   S: P^out -> ⊕ P_i^L ⊗ P_i^R,   V_i: A^out ⊗ P_i^L -> B^in ⊗ F_i^L,
 *   W_i: P_i^R ⊗ B^out -> F_i^R ⊗ A^in,   T: ⊕ F_i^L ⊗ F_i^R -> F^in.
 */
struct SwitchParts {
  std::size_t d_a_in = 2, d_a_out = 2, d_b_in = 2, d_b_out = 2;
  Matrix S, T;
  std::vector<Matrix> V, W;
  std::vector<std::pair<std::size_t, std::size_t>> p_dims;  // (P_i^L, P_i^R)
  std::vector<std::pair<std::size_t, std::size_t>> f_dims;  // (F_i^L, F_i^R)
};

/**
 * U = (1 ⊗ W)(⊕_{ijk} P_ij ⊗ Q_ik ⊗ R_jk)(1 ⊗ S ⊗ 1 ⊗ T ⊗ V ⊗ 1) with
 *   P_ij: λ_C ⊗ X_i^L ⊗ Y_j^L -> C^in ⊗ G1_ij,
 *   Q_ik: X_i^R ⊗ λ_B ⊗ Z_k^L -> B^in ⊗ G2_ik,
 *   R_jk: Y_j^R ⊗ Z_k^R ⊗ λ_A -> A^in ⊗ G3_jk.
 * P^out is λ_A ⊗ λ_B ⊗ λ_C.
 */
struct BWParts {
  std::size_t d_lambda = 2, d_in = 2;
  Matrix S, T, V, W;
  std::vector<std::vector<Matrix>> P, Q, R;
  std::vector<std::pair<std::size_t, std::size_t>> x_dims, y_dims, z_dims;
  std::vector<std::vector<std::size_t>> g1_dims, g2_dims, g3_dims;
};

/** Rows A^in, B^in, F^in; columns A^out, B^out, P^out. */
Matrix reconstruct(const SwitchParts& parts);
/** Rows A^in, B^in, C^in, F^in; columns A^out, B^out, C^out, P^out. */
Matrix reconstruct(const BWParts& parts);

DecompositionReport verify_decomposition(const Matrix& u, const SwitchParts& parts,
                                         double tol = kDefaultTol);
DecompositionReport verify_decomposition(const Matrix& u, const BWParts& parts,
                                         double tol = kDefaultTol);

/**
 * Same check against a unitary process with nodes A, B, a root P and a leaf
 * F, in any node order.
 */
DecompositionReport switch_type_decomposition_check(const UnitaryProcess& up,
                                                    const SwitchParts& parts,
                                                    double tol = kDefaultTol);

}  // namespace qcausal
