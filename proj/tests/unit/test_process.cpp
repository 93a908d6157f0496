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

#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "qcausal/error.hpp"
#include "qcausal/process.hpp"
#include "qcausal/unitary.hpp"

using namespace qcausal;
using namespace qcausal::testing;

namespace {

// A measures in the computational basis and reprepares, U carries A^out to
// B^in, B measures. Built with the circuit builder.
struct Chain {
  Matrix rho, u;
  ProcessOperator sigma;
};

Chain make_chain(std::mt19937& rng) {
  Chain c;
  c.rho = random_density(2, rng);
  c.u = random_unitary(2, rng);
  const SystemLabel a("a", 2), a1("a1", 2), b("b", 2);
  ChannelOperator ch = cj_from_kraus({c.u}, a1, b);
  c.sigma = comb_from_circuit(LabeledOperator({a}, c.rho), {ch},
                              {NodeSlot{"A", "a", "a1", 2, 2}, NodeSlot{"B", "b", "b1", 2, 2}});
  return c;
}

Instrument computational(const QuantumNode& n) {
  std::vector<std::vector<Matrix>> sets;
  for (std::size_t k = 0; k < n.d_in; ++k) {
    Matrix m = Matrix::Zero(n.d_out, n.d_in);
    m(k % n.d_out, k) = 1.0;
    sets.push_back({m});
  }
  return make_instrument(n, sets);
}

}  // namespace

TEST_SUITE("process") {

TEST_CASE("canonical systems interleave in and out-dual") {
  std::vector<QuantumNode> nodes{{"A", 2, 3}, {"B", 4, 1}};
  Systems s = process_systems(nodes);
  REQUIRE(s.size() == 4);
  CHECK(s[0] == SystemLabel("A", 2, false));
  CHECK(s[1] == SystemLabel("A", 3, true));
  CHECK(s[2] == SystemLabel("B", 4, false));
  CHECK(s[3] == SystemLabel("B", 1, true));
  CHECK_THROWS_AS(ProcessOperator({{"A", 2, 2}, {"A", 2, 2}}, Matrix::Identity(16, 16)),
                  LabelError);
  CHECK_THROWS_AS(ProcessOperator({{"A", 2, 2}}, Matrix::Identity(3, 3)), DimensionError);
}

TEST_CASE("a circuit comb is a valid process") {
  std::mt19937 rng(21);
  Chain c = make_chain(rng);
  ValidityVerdict v = validate_process(c.sigma);
  CHECK(v.valid());
  CHECK(v.trace_value == doctest::Approx(4.0));
}

TEST_CASE("a closed loop is rejected with its offending type") {
  // |1>><<1| between A^in and A^out: the identity feedback channel.
  QuantumNode a{"A", 2, 2};
  LabeledVector w = cj_vector(Matrix::Identity(2, 2), {in_label(a)}, {SystemLabel("A", 2)});
  ProcessOperator sigma({a}, w.projector());
  ValidityVerdict v = validate_process(sigma);
  CHECK(v.hermitian);
  CHECK(v.psd);
  CHECK(v.trace);
  CHECK_FALSE(v.type_terms);
  CHECK_FALSE(v.valid());
  REQUIRE_FALSE(v.offending_types.empty());
  CHECK(v.offending_types.front() == "A^in A^out");
  CHECK(type_name({a}, 0b11) == "A^in A^out");
}

TEST_CASE("wrong trace and negative operators are rejected") {
  QuantumNode a{"A", 2, 2};
  Matrix m = Matrix::Identity(4, 4);
  CHECK_FALSE(validate_process(ProcessOperator({a}, m)).trace);
  Matrix n = Matrix::Identity(4, 4) / 2.0;
  n(0, 0) = -0.5;
  n(1, 1) = 1.5;
  ValidityVerdict v = validate_process(ProcessOperator({a}, n));
  CHECK_FALSE(v.psd);
  CHECK(v.trace);
}

TEST_CASE("joint probabilities match a direct circuit calculation") {
  std::mt19937 rng(22);
  Chain c = make_chain(rng);
  Instrument ia = computational(c.sigma.node("A"));
  Instrument ib = computational(c.sigma.node("B"));
  CHECK(instrument_tp_residual(ia) < 1e-12);
  Distribution p = joint_probabilities(c.sigma, {ib, ia});
  REQUIRE(p.shape == std::vector<std::size_t>{2, 2});
  for (std::size_t x = 0; x < 2; ++x)
    for (std::size_t y = 0; y < 2; ++y) {
      const double expect = c.rho(x, x).real() * std::norm(c.u(y, x));
      CHECK(p.at({x, y}) == doctest::Approx(expect).epsilon(1e-10));
    }
  CHECK(p.total() == doctest::Approx(1.0));
}

TEST_CASE("no-signalling follows the direction of the wire") {
  std::mt19937 rng(23);
  Chain c = make_chain(rng);
  CHECK(no_signalling(c.sigma, {"B"}));
  CHECK_FALSE(no_signalling(c.sigma, {"A"}));
  CHECK(no_signalling_residual(c.sigma, {"A"}) > 0.1);
  CHECK_THROWS_AS(no_signalling(c.sigma, {"A", "B"}), LabelError);
}

TEST_CASE("conditioning on the first node gives the post-measurement state") {
  std::mt19937 rng(24);
  Chain c = make_chain(rng);
  Instrument ia = computational(c.sigma.node("A"));
  ProcessOperator cond = conditional_process(c.sigma, "A", ia.elements[1]);
  CHECK(validate_process(cond).valid());
  // B receives U|1>; conditioned σ_B = U|1><1|U† ⊗ 1.
  Vector k = c.u.col(1);
  Matrix expect = Eigen::kroneckerProduct((k * k.adjoint()).eval(), Matrix::Identity(2, 2)).eval();
  CHECK((cond.matrix() - expect).norm() < 1e-10);
}

TEST_CASE("conditioning on a later node that is signalled to is refused") {
  std::mt19937 rng(25);
  Chain c = make_chain(rng);
  Instrument ib = computational(c.sigma.node("B"));
  CHECK_THROWS_AS(conditional_process(c.sigma, "B", ib.elements[0]), PreconditionError);
  // A deterministic element is always fine.
  InstrumentElement sum = instrument_element(c.sigma.node("B"),
                                             {ket_bra(2, 0, 0), ket_bra(2, 1, 1)});
  CHECK(validate_process(conditional_process(c.sigma, "B", sum)).valid());
}

TEST_CASE("impossible outcomes are reported") {
  QuantumNode a{"A", 2, 2};
  LabeledOperator s = tensor(LabeledOperator({in_label(a)}, ket_bra(2, 0, 0)),
                             identity_operator({out_label(a)}));
  ProcessOperator sigma({a}, s);
  InstrumentElement e = instrument_element(a, {ket_bra(2, 1, 1)});
  CHECK_THROWS_AS(conditional_process(sigma, "A", e), PreconditionError);
}

TEST_CASE("ancilla extension keeps validity and merges input spaces") {
  std::mt19937 rng(26);
  Chain c = make_chain(rng);
  LabeledOperator anc({SystemLabel("e", 3)}, random_density(3, rng));
  ProcessOperator ext = extend_nodes(c.sigma, anc, {{"e", "A"}});
  CHECK(ext.node("A").d_in == 6);
  CHECK(validate_process(ext).valid());
  LabeledOperator bad({SystemLabel("e", 3)}, Matrix::Identity(3, 3));
  CHECK_THROWS_AS(extend_nodes(c.sigma, bad, {{"e", "A"}}), PreconditionError);
}

TEST_CASE("unitary process of a chain equals the circuit comb") {
  // P prepares, A is a slot, F is the final leaf; U is the identity wiring.
  std::vector<QuantumNode> nodes{{"P", 1, 2}, {"A", 2, 2}, {"F", 2, 1}};
  UnitaryProcess up(nodes, Matrix::Identity(4, 4));
  CHECK(up.unitarity_residual() < 1e-12);
  CHECK(validate_process(up.process()).valid());
  const SystemLabel p("p", 2), a("a", 2);
  ChannelOperator id1 = cj_from_kraus({Matrix::Identity(2, 2)}, SystemLabel("p1", 2), p);
  ChannelOperator id2 = cj_from_kraus({Matrix::Identity(2, 2)}, SystemLabel("a1", 2), a);
  ProcessOperator comb = comb_from_circuit(
      LabeledOperator({}, Matrix::Identity(1, 1)), {id1, id2},
      {NodeSlot{"P", "", "p1", 1, 2}, NodeSlot{"A", "p", "a1", 2, 2}, NodeSlot{"F", "a", "", 2, 1}});
  CHECK(relative_distance(comb.matrix(), up.process().matrix()) < 1e-12);
  CHECK_THROWS_AS(UnitaryProcess({{"A", 2, 3}}, Matrix::Identity(2, 3)), DimensionError);
}

}
