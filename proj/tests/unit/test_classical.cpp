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

#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "helpers.hpp"
#include "qcausal/classical.hpp"
#include "qcausal/error.hpp"
#include "qcausal/exemplars.hpp"
#include "qcausal/lp.hpp"
#include "qcausal/markov.hpp"

using namespace qcausal;
using namespace qcausal::testing;

namespace {

const std::vector<ClassicalNode> kBits{{"A", 2, 2}, {"B", 2, 2}};

// f maps (a_out, b_out) at index 2a+b to (a_in, b_in) at index 2a+b.
bool fixed_point_oracle(const std::array<int, 4>& f) {
  for (int ga = 0; ga < 4; ++ga)
    for (int gb = 0; gb < 4; ++gb) {
      // local map g(x) on a bit, encoded by its truth table
      auto apply = [](int g, int x) { return (g >> x) & 1; };
      int count = 0;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          count += f[2 * apply(ga, a) + apply(gb, b)] == 2 * a + b;
      if (count != 1) return false;
    }
  return true;
}

std::vector<double> random_weights(std::size_t n, std::mt19937& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> w(n);
  double s = 0;
  for (auto& x : w) s += (x = e(rng));
  for (auto& x : w) x /= s;
  return w;
}

}  // namespace

TEST_SUITE("lp") {

TEST_CASE("small optimum") {
  // min -x - y, x + y + s = 1, x - y + t = 0
  Eigen::VectorXd c(4);
  c << -1, -2, 0, 0;
  Eigen::MatrixXd A(2, 4);
  A << 1, 1, 1, 0, 1, -1, 0, 1;
  Eigen::VectorXd b(2);
  b << 1, 0;
  const LPResult r = solve_lp(c, A, b);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.objective == doctest::Approx(-2.0));
  CHECK(r.x(1) == doctest::Approx(1.0));
}

TEST_CASE("infeasible and unbounded") {
  Eigen::MatrixXd A(1, 2);
  A << 1, 1;
  Eigen::VectorXd b(1);
  b << -1;
  CHECK(solve_lp(Eigen::VectorXd::Zero(2), A, b).status == LPStatus::Infeasible);
  Eigen::MatrixXd A2(1, 2);
  A2 << 1, -1;
  Eigen::VectorXd b2(1);
  b2 << 0;
  Eigen::VectorXd c(2);
  c << -1, 0;
  CHECK(solve_lp(c, A2, b2).status == LPStatus::Unbounded);
}

TEST_CASE("redundant rows") {
  Eigen::MatrixXd A(3, 2);
  A << 1, 1, 2, 2, 1, 0;
  Eigen::VectorXd b(3);
  b << 1, 2, 0.25;
  Eigen::VectorXd c(2);
  c << 0, 1;
  const LPResult r = solve_lp(c, A, b);
  REQUIRE(r.status == LPStatus::Optimal);
  CHECK(r.x(1) == doctest::Approx(0.75));
}

}  // TEST_SUITE

TEST_SUITE("classical") {

TEST_CASE("enumeration matches the fixed-point oracle") {
  std::set<std::vector<std::size_t>> oracle;
  for (int code = 0; code < 256; ++code) {
    std::array<int, 4> f{};
    for (int k = 0; k < 4; ++k) f[k] = (code >> (2 * k)) & 3;
    if (!fixed_point_oracle(f)) continue;
    std::vector<std::size_t> table(4);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        const int v = f[2 * a + b];
        table[pack_outs(kBits, {a, b})] =
            pack_ins(kBits, {static_cast<std::size_t>(v >> 1), static_cast<std::size_t>(v & 1)});
      }
    oracle.insert(table);
  }
  std::set<std::vector<std::size_t>> got;
  for (const auto& dp : enumerate_deterministic_processes(kBits)) {
    CHECK(validate_deterministic(dp));
    got.insert(dp.table());
  }
  CHECK(got == oracle);
  CHECK(oracle.size() > 0);
}

TEST_CASE("enumeration budget") {
  std::vector<ClassicalNode> big;
  for (int i = 0; i < 5; ++i) big.push_back({std::string(1, char('A' + i)), 2, 2});
  CHECK_THROWS_AS(enumerate_deterministic_processes(big), BudgetError);
}

TEST_CASE("validity of deterministic and stochastic tables") {
  CHECK(validate_deterministic(af_function()));
  CHECK(validate_classical(af_function().kappa()).valid);
  const auto cf = make_methods_counterexample();
  for (int c = 0; c < 2; ++c) {
    std::vector<double> p{0.0, 0.0};
    p[c] = 1.0;
    CHECK_FALSE(validate_classical(cf.product(p)).valid);
  }
  CHECK_FALSE(validate_classical(cf.product({0.5, 0.5})).valid);
}

TEST_CASE("AF causal structure") {
  CHECK(causal_structure_deterministic(af_function()) == af_graph());
}

TEST_CASE("mixtures sit inside the polytope and extend reversibly") {
  std::mt19937 rng(5);
  const auto vertices = enumerate_deterministic_processes(kBits);
  for (int k = 0; k < 5; ++k) {
    const auto w = random_weights(vertices.size(), rng);
    const ClassicalProcess kp = mix(w, vertices);
    CHECK(validate_classical(kp).valid);
    const PolytopeMembership pm = polytope_membership(kp, vertices);
    REQUIRE(pm.inside);
    const ClassicalProcess back = mix(pm.weights, vertices);
    double err = 0;
    for (std::size_t i = 0; i < kp.kappa().size(); ++i)
      err = std::max(err, std::abs(back.kappa()[i] - kp.kappa()[i]));
    CHECK(err < 1e-9);
    const ReversibleExtension ext = reversible_extension(w, vertices);
    CHECK(is_reversible(ext));
    CHECK(extension_marginal(ext).kappa() == kp.kappa());
  }
}

TEST_CASE("no LP optimum escapes the two-node polytope") {
  const auto vertices = enumerate_deterministic_processes(kBits);
  CHECK(outside_polytope_candidates(kBits, vertices, 7, 50).empty());
}

TEST_CASE("an LP optimum outside the three-node polytope") {
  const std::vector<ClassicalNode> three{{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}};
  const auto vertices = enumerate_deterministic_processes(three);
  const auto outside = outside_polytope_candidates(three, vertices, 7);
  REQUIRE_FALSE(outside.empty());
  CHECK(validate_classical(outside.front()).valid);
  const PolytopeMembership pm = polytope_membership(outside.front(), vertices);
  MESSAGE(vertices.size() << " vertices");
  CHECK_FALSE(pm.inside);
  CHECK(pm.residual > 1e-6);
}

TEST_CASE("AF compatible through its split reversible extension") {
  const DeterministicProcess af = af_function();
  const ReversibleExtension ext = split_lambda(reversible_extension({1.0}, {af}));
  CHECK(is_reversible(ext));
  CHECK(extension_marginal(ext).kappa() == af.kappa().kappa());
  const ClassicalCompatibility cc = classical_compatibility_check(af.kappa(), af_graph(), ext);
  CHECK(cc.compatible);
  DirectedGraph smaller = af_graph();
  smaller.remove_edge("A", "B");
  CHECK_FALSE(classical_compatibility_check(af.kappa(), smaller, ext).compatible);
}

TEST_CASE("classical and quantum Markov agree") {
  const ClassicalProcess af = af_function().kappa();
  CHECK(classical_markov_check(af, af_graph()).accepted);
  CHECK(markov_check(quantize(af), af_graph()).accepted);
  DirectedGraph smaller = af_graph();
  smaller.remove_edge("B", "A");
  CHECK_FALSE(classical_markov_check(af, smaller).accepted);
  CHECK_FALSE(markov_check(quantize(af), smaller).accepted);
}

TEST_CASE("quantize keeps the classical distribution") {
  const ClassicalProcess cs = make_classical_switch(2).kappa();
  const ProcessOperator q = quantize(cs);
  CHECK(validate_process(q).valid());
  CHECK(q.matrix().isDiagonal());
}

}  // TEST_SUITE
