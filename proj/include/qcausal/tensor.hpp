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
#include <complex>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace qcausal {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

constexpr double kDefaultTol = 1e-9;

/** A finite-dimensional system; `dual` marks H*_X. Duality is a label only. */
struct SystemLabel {
  std::string name;
  std::size_t dim = 1;
  bool dual = false;

  SystemLabel() = default;
  SystemLabel(std::string n, std::size_t d, bool is_dual = false)
      : name(std::move(n)), dim(d), dual(is_dual) {}

  bool same_slot(const SystemLabel& other) const {
    return name == other.name && dual == other.dual;
  }
  bool operator==(const SystemLabel& other) const {
    return same_slot(other) && dim == other.dim;
  }
  std::string str() const { return dual ? name + "*" : name; }
};

using Systems = std::vector<SystemLabel>;

std::size_t total_dim(const Systems& systems);

/**
 * Dense operator over an ordered list of systems. The first listed system is
 * the most significant digit of the composite index.
 */
class LabeledOperator {
 public:
  LabeledOperator() = default;
  LabeledOperator(Systems systems, Matrix matrix);

  const Systems& systems() const { return systems_; }
  const Matrix& matrix() const { return matrix_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  // Position of the (name, dual) slot; throws LabelError if absent.
  std::size_t index_of(const SystemLabel& label) const;
  bool has(const SystemLabel& label) const;
  const SystemLabel& find(const std::string& name, bool dual) const;

 private:
  Systems systems_;
  Matrix matrix_;
};

/** Pure vector over labelled systems, used for CJ vectors of unitaries. */
class LabeledVector {
 public:
  LabeledVector() = default;
  LabeledVector(Systems systems, Vector vec);

  const Systems& systems() const { return systems_; }
  const Vector& vec() const { return vec_; }

  // Tr over everything not in `keep` of |v><v|, systems in `keep` order.
  LabeledOperator reduced(const Systems& keep) const;
  LabeledVector reorder(const Systems& order) const;
  LabeledOperator projector() const;

 private:
  Systems systems_;
  Vector vec_;
};

// Multi-index offsets of `subset` (most significant first) inside `all`.
std::vector<std::size_t> subsystem_offsets(const Systems& all,
                                           const Systems& subset);

LabeledOperator identity_operator(const Systems& systems);
LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b);
LabeledOperator partial_trace(const LabeledOperator& op, const Systems& subset);
cplx trace(const LabeledOperator& op);

/** Reorder to `order`, which must list every system of `op` exactly once. */
LabeledOperator reorder(const LabeledOperator& op, const Systems& order);
LabeledOperator reorder(const LabeledOperator& op,
                        const std::vector<std::size_t>& permutation);

/** op ⊗ 1 on the missing systems, arranged in `target` order. */
LabeledOperator embed(const LabeledOperator& op, const Systems& target);

LabeledOperator relabel(const LabeledOperator& op, const SystemLabel& from,
                        const SystemLabel& to);
/** Reinterpret one composite system as consecutive factors. */
LabeledOperator split_system(const LabeledOperator& op, const SystemLabel& from,
                             const Systems& parts);
/** Merge consecutive systems into one label of the product dimension. */
LabeledOperator merge_systems(const LabeledOperator& op, const Systems& parts,
                              const SystemLabel& to);

LabeledOperator partial_transpose(const LabeledOperator& op,
                                  const Systems& subset);
LabeledOperator transpose(const LabeledOperator& op);

/** (1/d_S) Tr_S[op] ⊗ 1_S, in the original system order. */
LabeledOperator trace_replace(const LabeledOperator& op, const Systems& subset);

/**
 * Relative Frobenius distance between op and trace_replace(op, subset),
 * computed without materializing the replaced operator.
 */
double trace_replace_residual(const LabeledOperator& op, const Systems& subset);

/** Tr_{local systems}[op (1 ⊗ local)]. */
LabeledOperator contract(const LabeledOperator& op, const LabeledOperator& local);

/** (local ⊗ 1) · full, with local acting on a subset of full's systems. */
LabeledOperator apply_left(const LabeledOperator& local,
                           const LabeledOperator& full);

/**
 * Link product: contracts systems that appear in both operands with
 * opposite dual flags, Tr_Y[(a^{T_Y} ⊗ 1)(1 ⊗ b)].
 */
LabeledOperator link(const LabeledOperator& a, const LabeledOperator& b);

double frobenius(const Matrix& m);
/** ‖a − b‖_F / max(‖a‖_F, ‖b‖_F); zero when both vanish. */
double relative_distance(const Matrix& a, const Matrix& b);
double relative_distance(const LabeledOperator& a, const LabeledOperator& b);
double hermiticity_residual(const Matrix& m);

struct PsdCertificate {
  bool psd = false;
  // Smallest eigenvalue, or a lower bound when the low-rank path certified.
  double min_eigenvalue = 0.0;
  std::string method;
};

/** PSD test with threshold −tol·max(1, ‖m‖_F). */
PsdCertificate psd_check(const Matrix& m, double tol = kDefaultTol);

// ---------------------------------------------------------------- channels

class ChannelOperator {
 public:
  ChannelOperator() = default;
  ChannelOperator(LabeledOperator base, Systems outputs, Systems inputs);

  const LabeledOperator& base() const { return base_; }
  const Systems& outputs() const { return outputs_; }
  const Systems& inputs() const { return inputs_; }

  // PSD and Tr_out = 1 on the dual inputs.
  bool is_cptp(double tol = kDefaultTol) const;
  double tp_residual() const;

 private:
  LabeledOperator base_;
  Systems outputs_;
  Systems inputs_;
};

/**
 * ρ^E_{B|A} = Σ_ij E(|i><j|) ⊗ |i><j|_{A*}. `in_label` is stored dual,
 * `out_label` primal, whatever flags the caller passes.
 */
ChannelOperator cj_from_kraus(const std::vector<Matrix>& kraus,
                              const SystemLabel& in_label,
                              const SystemLabel& out_label);

/** CJ vector Σ_x M|x> ⊗ |x> over outputs ++ dual inputs. */
LabeledVector cj_vector(const Matrix& map, const Systems& outputs,
                        const Systems& inputs);

// ------------------------------------------------------- Hilbert–Schmidt

/** Generalized Gell-Mann basis; element 0 is the identity direction. */
struct HSBasis {
  std::size_t dim = 1;
  std::vector<Matrix> elements;
};

HSBasis gell_mann_basis(std::size_t d);

using TypeMask = std::uint64_t;

/**
 * Coefficients α_k = Tr[(⊗ η^{k_i}) op] over a product basis. Stored in an
 * N×N buffer whose (row, column) digit pair for system i encodes k_i.
 */
class HSExpansion {
 public:
  HSExpansion(Systems systems, Matrix coefficients, std::vector<HSBasis> bases);

  const Systems& systems() const { return systems_; }
  const Matrix& coefficients() const { return coeff_; }

  // Frobenius norm of the coefficients of each type (bit i: system i
  // carries a non-identity element).
  std::map<TypeMask, double> type_norms() const;
  LabeledOperator reconstruct() const;

 private:
  Systems systems_;
  Matrix coeff_;
  std::vector<HSBasis> bases_;
};

HSExpansion hs_expand(const LabeledOperator& op);
HSExpansion hs_expand(const LabeledOperator& op,
                      const std::vector<HSBasis>& bases);

}  // namespace qcausal
