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

#include "doctest.h"
#include "helpers.hpp"
#include "qcausal/comb.hpp"
#include "qcausal/error.hpp"
#include "qcausal/exemplars.hpp"

using namespace qcausal;
using namespace qcausal::testing;

namespace {

// Diagonal channel operator for a boolean function of the parent outputs,
// laid out as in canonical order with the child's input at `child_pos`.
Matrix boolean_factor(int child_pos, int (*f)(int, int)) {
  Matrix m = Matrix::Zero(8, 8);
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      const int v = f(x, y);
      int idx = 0;
      if (child_pos == 0) idx = v * 4 + x * 2 + y;
      if (child_pos == 1) idx = x * 4 + v * 2 + y;
      if (child_pos == 2) idx = x * 4 + y * 2 + v;
      m(idx, idx) = 1.0;
    }
  return m;
}

}  // namespace

TEST_SUITE("exemplars") {

TEST_CASE("switch is a rank-one valid process") {
  const UnitaryProcess sw = make_switch(2);
  CHECK(sw.unitarity_residual() < 1e-12);
  const ProcessOperator& s = sw.process();
  CHECK(s.matrix().rows() == 256);
  CHECK(validate_process(s).valid());
  CHECK(std::abs(s.matrix().trace().real() - 16.0) < 1e-9);
  Eigen::SelfAdjointEigenSolver<Matrix> es(s.matrix());
  int rank = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) rank += es.eigenvalues()(i) > 1e-9;
  CHECK(rank == 1);
}

TEST_CASE("switch causal structure and separability") {
  const UnitaryProcess sw = make_switch(2);
  CHECK(causal_structure_unitary(sw) == switch_graph());
  const CombSearchResult cs = comb_search(sw.process());
  CHECK(cs.orders.empty());
  CHECK(cs.scanned == 24);
  const UnitarySeparability us = unitary_causal_separability(sw);
  CHECK_FALSE(us.separable);
  CHECK(us.cycle.size() >= 2);
}

TEST_CASE("switch Markov and faithful on its graph") {
  const ProcessOperator s = make_switch(2).process();
  const MarkovFactorization mf = markov_check(s, switch_graph());
  CHECK_MESSAGE(mf.accepted, mf.reason);
  CHECK(mf.product_residual < 1e-9);
  CHECK(faithfulness_check(switch_graph(), mf).faithful);
}

TEST_CASE("reduced switch dynamical order") {
  const ProcessOperator r = make_reduced_switch(2);
  CHECK(validate_process(r).valid());
  const MarkovFactorization mf = markov_check(r, reduced_switch_graph());
  CHECK_MESSAGE(mf.accepted, mf.reason);
  CHECK(faithfulness_check(reduced_switch_graph(), mf).faithful);
  const QuantumNode p = r.node("P");
  for (int c = 0; c < 2; ++c) {
    Matrix ket = Matrix::Zero(4, 1);
    ket(c * 2, 0) = 1.0;
    const ProcessOperator cond = conditional_process(r, "P", instrument_element(p, {ket}));
    const TotalOrder good = c == 0 ? TotalOrder{"A", "B"} : TotalOrder{"B", "A"};
    const TotalOrder bad = c == 0 ? TotalOrder{"B", "A"} : TotalOrder{"A", "B"};
    CHECK(comb_check(cond, good).accepted);
    CHECK_FALSE(comb_check(cond, bad).accepted);
  }
}

TEST_CASE("AF process from its function") {
  const ProcessOperator af = make_af();
  CHECK(validate_process(af).valid());
  const MarkovFactorization mf = markov_check(af, af_graph());
  REQUIRE_MESSAGE(mf.accepted, mf.reason);
  CHECK(faithfulness_check(af_graph(), mf).faithful);
  for (const auto& f : mf.factors) {
    Matrix expect;
    if (f.child == "A") expect = boolean_factor(0, [](int b, int c) { return int(!b && c); });
    if (f.child == "B") expect = boolean_factor(1, [](int a, int c) { return int(!c && a); });
    if (f.child == "C") expect = boolean_factor(2, [](int a, int b) { return int(!a && b); });
    CHECK((f.op.base().matrix() - expect).norm() == 0.0);
  }
}

TEST_CASE("BW extension marginal is AF") {
  const UnitaryProcess bw = make_bw_extension();
  CHECK(bw.unitarity_residual() < 1e-12);
  Matrix tau = Matrix::Zero(8, 8);
  tau(0, 0) = 1.0;
  const ProcessOperator m = marginalize(bw, "P", tau, "F");
  CHECK((m.matrix() - make_af().matrix()).norm() == 0.0);
  const UnitaryProcess split = bw_split(bw);
  const CompatibilityReport cr =
      compatibility_check(make_af(), af_graph(), split, bw_lambda_states());
  CHECK(cr.compatible);
  CHECK(cr.violated.empty());
  CHECK(comb_search(bw.process()).orders.empty());
}

TEST_CASE("given decompositions reconstruct") {
  const DecompositionReport sw =
      verify_decomposition(make_switch(2).unitary(), switch_decomposition(2));
  CHECK_MESSAGE(sw.holds, sw.message);
  CHECK(sw.reconstruction_residual < 1e-12);
  const DecompositionReport bad =
      verify_decomposition(make_switch(2).unitary(), switch_decomposition_swapped(2));
  CHECK_FALSE(bad.holds);
  const DecompositionReport bw = verify_decomposition(make_bw_extension().unitary(), bw_decomposition());
  CHECK_MESSAGE(bw.holds, bw.message);
  CHECK(bw.reconstruction_residual < 1e-12);
}

TEST_CASE("mixture of CNOT processes") {
  Matrix rho = ket_bra(2, 0, 0);
  const ProcessOperator s0 = make_cnot_process(rho, 0);
  const ProcessOperator s1 = make_cnot_process(rho, 1);
  CHECK(validate_process(s0).valid());
  CHECK(validate_process(s1).valid());
  const ProcessOperator mix = make_mix_example(rho);
  CHECK(relative_distance((s0.matrix() + s1.matrix()) / 2.0, mix.matrix()) < 1e-12);
  // A signals to B in each branch, not in the mixture.
  CHECK_FALSE(no_signalling(s0, {"A"}));
  CHECK(no_signalling(mix, {"A"}));
}

TEST_CASE("classical switch") {
  const DeterministicProcess cs = make_classical_switch(2);
  CHECK(validate_deterministic(cs));
  CHECK(validate_classical(cs.kappa()).valid);
  CHECK(causal_structure_deterministic(cs) == switch_graph());
}

TEST_CASE("registry") {
  for (const auto& n : exemplar_names()) {
    const Exemplar e = make_exemplar(n);
    CHECK(e.name == n);
    CHECK((e.quantum.has_value() || e.classical.has_value()));
    if (e.quantum && n != "bw-extension") CHECK_MESSAGE(validate_process(*e.quantum).valid(), n);
  }
  CHECK_THROWS_AS(make_exemplar("nope"), LabelError);
}

}  // TEST_SUITE
