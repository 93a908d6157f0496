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

#include <random>

#include <unsupported/Eigen/KroneckerProduct>

#include "qcausal/tensor.hpp"

namespace qcausal::testing {

inline Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

inline Matrix random_unitary(std::size_t d, std::mt19937& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d, d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

inline Matrix random_density(std::size_t d, std::mt19937& rng) {
  Matrix a = random_matrix(d, d, rng);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline Matrix ket_bra(std::size_t d, std::size_t i, std::size_t j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

}  // namespace qcausal::testing
