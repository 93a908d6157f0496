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

// Acceptance suite: one [PASS]/[FAIL] line per criterion, details indented.

#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <unsupported/Eigen/KroneckerProduct>

#include "qcausal/classical.hpp"
#include "qcausal/comb.hpp"
#include "qcausal/decomposition.hpp"
#include "qcausal/error.hpp"
#include "qcausal/exemplars.hpp"
#include "qcausal/io.hpp"
#include "qcausal/markov.hpp"

using namespace qcausal;
namespace fs = std::filesystem;

namespace {

// --------------------------------------------------------------- helpers

struct Check {
  std::vector<std::string> notes;
  bool ok = true;

  void expect(bool cond, const std::string& what) {
    if (!cond) {
      ok = false;
      notes.push_back("failed: " + what);
    }
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string num(double x) {
  std::ostringstream os;
  os.precision(3);
  os << x;
  return os.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Matrix random_matrix(std::size_t r, std::size_t c, std::mt19937& rng) {
  std::normal_distribution<double> g;
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = cplx(g(rng), g(rng));
  return m;
}

Matrix random_unitary(std::size_t d, std::mt19937& rng) {
  Eigen::HouseholderQR<Matrix> qr(random_matrix(d, d, rng));
  return qr.householderQ() * Matrix::Identity(d, d);
}

Matrix random_density(std::size_t d, std::mt19937& rng) {
  Matrix a = random_matrix(d, d, rng);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

Matrix ket_bra(std::size_t d, std::size_t i, std::size_t j) {
  Matrix m = Matrix::Zero(d, d);
  m(i, j) = 1.0;
  return m;
}

bool exactly_equal(const Matrix& a, const Matrix& b) {
  return a.rows() == b.rows() && a.cols() == b.cols() && (a.array() == b.array()).all();
}

std::size_t rank_of(const Matrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  const double top = es.eigenvalues().cwiseAbs().maxCoeff();
  std::size_t r = 0;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    r += es.eigenvalues()(i) > tol * std::max(1.0, top);
  return r;
}

/**
 * Channel from the parents' outputs to the child's input, computed from the
 * unitary's action with maximally mixed states on the other outputs.
 */
LabeledOperator channel_oracle(const UnitaryProcess& up, const std::string& child,
                               const std::set<std::string>& parents) {
  Systems ins, outs, pa, rest;
  for (const auto& n : up.nodes()) {
    ins.push_back(in_label(n));
    outs.push_back(out_label(n));
    (parents.count(n.name) ? pa : rest).push_back(out_label(n));
  }
  const QuantumNode& c = up.process().node(child);
  Systems other_ins;
  for (const auto& s : ins)
    if (s.name != child) other_ins.push_back(s);
  const std::size_t dp = total_dim(pa), dr = total_dim(rest);
  const LabeledOperator mixed(rest, Matrix::Identity(dr, dr) / static_cast<double>(dr));
  Matrix j = Matrix::Zero(c.d_in * dp, c.d_in * dp);
  for (std::size_t a = 0; a < dp; ++a)
    for (std::size_t b = 0; b < dp; ++b) {
      const LabeledOperator x = reorder(tensor(LabeledOperator(pa, ket_bra(dp, a, b)), mixed), outs);
      const Matrix y = up.unitary() * x.matrix() * up.unitary().adjoint();
      const LabeledOperator out = partial_trace(LabeledOperator(ins, y), other_ins);
      j += Eigen::kroneckerProduct(out.matrix(), ket_bra(dp, a, b)).eval();
    }
  Systems sys{in_label(c)};
  sys.insert(sys.end(), pa.begin(), pa.end());
  return LabeledOperator(sys, j);
}

double max_commutator(const MarkovFactorization& mf) {
  return mf.commutation_residuals.size() ? mf.commutation_residuals.maxCoeff() : 0.0;
}

// Every single-edge deletion must flip the Markov verdict.
bool deletions_reject(const ProcessOperator& s, const DirectedGraph& g, Check& c) {
  bool all = true;
  for (const auto& [a, b] : g.edges()) {
    DirectedGraph h = g;
    h.remove_edge(a, b);
    if (markov_check(s, h).accepted) {
      c.note("still Markov without " + a + " -> " + b);
      all = false;
    }
  }
  return all;
}

// Random qubit channel with a two-dimensional environment.
std::vector<Matrix> random_kraus(std::mt19937& rng) {
  const Matrix v = random_unitary(4, rng).leftCols(2);  // isometry 2 -> 2 ⊗ 2
  return {v.topRows(2), v.bottomRows(2)};
}

// P -> X_{π1} -> ... -> X_{πk} -> F with a qubit memory riding along.
UnitaryProcess random_chain(std::size_t k, std::mt19937& rng) {
  std::vector<QuantumNode> nodes{{"P", 1, 4}};
  std::vector<std::string> names;
  for (std::size_t i = 0; i < k; ++i) {
    names.push_back("X" + std::to_string(i + 1));
    nodes.push_back({names.back(), 2, 2});
  }
  nodes.push_back({"F", 4, 1});
  std::vector<std::string> chain = names;
  std::shuffle(chain.begin(), chain.end(), rng);

  Wires start{{"P_out", 4}};
  for (const auto& n : names) start.push_back({n + "_out", 2});
  LabeledMap m = LabeledMap::identity(start);
  m = m.then(LabeledMap({{chain[0] + "_in", 2}, {"M0", 2}}, {{"P_out", 4}}, random_unitary(4, rng)));
  for (std::size_t j = 1; j < k; ++j) {
    const std::string mem = "M" + std::to_string(j - 1), next = "M" + std::to_string(j);
    m = m.then(LabeledMap({{chain[j] + "_in", 2}, {next, 2}}, {{chain[j - 1] + "_out", 2}, {mem, 2}},
                          random_unitary(4, rng)));
  }
  const std::string last = "M" + std::to_string(k - 1);
  m = m.then(
      LabeledMap({{"F_in", 4}}, {{chain[k - 1] + "_out", 2}, {last, 2}}, random_unitary(4, rng)));
  std::vector<std::string> rows, cols{"P_out"};
  for (const auto& n : names) {
    rows.push_back(n + "_in");
    cols.push_back(n + "_out");
  }
  rows.push_back("F_in");
  return UnitaryProcess(nodes, m.matrix(rows, cols));
}

struct Shell {
  int code = -1;
  std::string out, err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Shell cli(const std::string& args, const fs::path& work) {
  const fs::path o = work / "stdout.txt", e = work / "stderr.txt";
  const std::string cmd = "cd '" + work.string() + "' && '" + std::string(QCAUSAL_CLI) + "' " +
                          args + " > '" + o.string() + "' 2> '" + e.string() + "'";
  const int st = std::system(cmd.c_str());
  Shell r;
  r.code = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  r.out = slurp(o);
  r.err = slurp(e);
  return r;
}

// ------------------------------------------------------------- criteria

void switch_suite(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const UnitaryProcess sw = make_switch(2);
  const ProcessOperator& s = sw.process();
  c.expect(s.matrix().rows() == 256, "256 x 256");
  const ValidityVerdict v = validate_process(s);
  c.expect(v.valid(), "validate_process");
  const double tr = s.matrix().trace().real();
  c.expect(std::abs(tr - 16.0) < 1e-9, "trace 16 (got " + num(tr) + ")");
  const std::size_t rank = rank_of(s.matrix(), 1e-9);
  c.expect(rank == 1, "rank 1 (got " + std::to_string(rank) + ")");
  const DirectedGraph g = causal_structure_unitary(sw);
  c.expect(g == switch_graph() && g.edges().size() == 7, "causal structure is the 7-edge graph");
  const CombSearchResult cs = comb_search(s);
  c.expect(cs.orders.empty() && cs.scanned == 24, "comb_search empty over 24 orders");
  const UnitarySeparability us = unitary_causal_separability(sw);
  std::set<Edge> cyc;
  for (std::size_t i = 0; i + 1 < us.cycle.size(); ++i) cyc.insert({us.cycle[i], us.cycle[i + 1]});
  c.expect(!us.separable, "nonseparable");
  c.expect(cyc == std::set<Edge>{{"A", "B"}, {"B", "A"}}, "cycle A -> B -> A");
  const double t = seconds_since(t0);
  c.note("runtime " + num(t) + " s");
  c.expect(t < 10.0, "runtime < 10 s");
}

void markov_suite(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const UnitaryProcess sw = make_switch(2);
  const ProcessOperator& s = sw.process();
  const MarkovFactorization mf = markov_check(s, switch_graph());
  c.expect(mf.accepted, "SWITCH Markov (" + mf.reason + ")");
  c.expect(mf.factors.size() == 4, "four factors");
  c.expect(max_commutator(mf) < 1e-9, "commutators < 1e-9 (max " + num(max_commutator(mf)) + ")");
  c.expect(mf.product_residual < 1e-9, "product residual < 1e-9");
  double worst = 0.0;
  for (const auto& f : mf.factors) {
    const LabeledOperator want = channel_oracle(sw, f.child, f.parents);
    worst = std::max(worst, relative_distance(reorder(f.op.base(), want.systems()), want));
  }
  c.expect(worst < 1e-9, "SWITCH factors match the channel oracle (" + num(worst) + ")");
  c.expect(faithfulness_check(switch_graph(), mf).faithful, "SWITCH faithful");
  c.expect(deletions_reject(s, switch_graph(), c), "SWITCH edge deletions reject");

  const ProcessOperator af = make_af();
  const MarkovFactorization ma = markov_check(af, af_graph());
  c.expect(ma.accepted, "AF Markov (" + ma.reason + ")");
  // ρ_{A|BC}, ρ_{B|AC}, ρ_{C|AB} as diagonal 0/1 tables
  auto expect_factor = [](const std::string& child) {
    Matrix m = Matrix::Zero(8, 8);
    for (int x = 0; x < 2; ++x)
      for (int y = 0; y < 2; ++y) {
        int idx = 0;
        if (child == "A") idx = int(!x && y) * 4 + x * 2 + y;      // (A^in, B^out, C^out)
        if (child == "B") idx = x * 4 + int(!y && x) * 2 + y;      // (A^out, B^in, C^out)
        if (child == "C") idx = x * 4 + y * 2 + int(!x && y);      // (A^out, B^out, C^in)
        m(idx, idx) = 1.0;
      }
    return m;
  };
  bool exact = ma.factors.size() == 3;
  for (const auto& f : ma.factors) exact = exact && exactly_equal(f.op.base().matrix(), expect_factor(f.child));
  c.expect(exact, "AF factors entrywise exact");
  c.expect(ma.accepted && faithfulness_check(af_graph(), ma).faithful, "AF faithful");
  c.expect(deletions_reject(af, af_graph(), c), "AF edge deletions reject");
  const double t = seconds_since(t0);
  c.note("runtime " + num(t) + " s");
  c.expect(t < 20.0, "runtime < 20 s");
}

void bw_suite(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  const UnitaryProcess bw = make_bw_extension();
  Matrix tau = Matrix::Zero(8, 8);
  tau(0, 0) = 1.0;
  const ProcessOperator m = marginalize(bw, "P", tau, "F");
  const double dist = (m.matrix() - make_af().matrix()).norm();
  c.expect(dist == 0.0, "marginal at |000> equals AF (distance " + num(dist) + ")");

  const UnitaryProcess split = bw_split(bw);
  double worst = 0.0;
  // λ_X reaches only X and F; no node influences itself
  for (const std::string x : {"A", "B", "C"}) {
    worst = std::max(worst, no_influence_residual(split, x, x));
    for (const std::string y : {"A", "B", "C"})
      if (x != y) worst = std::max(worst, no_influence_residual(split, "lambda_" + x, y));
  }
  c.expect(worst == 0.0, "no-influence conditions exact (worst residual " + num(worst) + ")");
  bool reaches = true;
  for (const std::string x : {"A", "B", "C"})
    reaches = reaches && !no_influence(split, "lambda_" + x, x) && !no_influence(split, "lambda_" + x, "F");
  c.expect(reaches, "lambda_X influences X and F");
  const CompatibilityReport cr = compatibility_check(make_af(), af_graph(), split, bw_lambda_states());
  c.expect(cr.compatible, "compatibility_check");

  const DecompositionReport ds = verify_decomposition(make_switch(2).unitary(), switch_decomposition(2));
  c.expect(ds.holds && ds.reconstruction_residual < 1e-12,
           "SWITCH decomposition (" + num(ds.reconstruction_residual) + ")");
  const DecompositionReport db = verify_decomposition(bw.unitary(), bw_decomposition());
  c.expect(db.holds && db.reconstruction_residual < 1e-12,
           "BW decomposition (" + num(db.reconstruction_residual) + ")");
  const double t = seconds_since(t0);
  c.note("runtime " + num(t) + " s");
  c.expect(t < 30.0, "runtime < 30 s");
}

void bipartite_suite(Check& c) {
  std::mt19937 rng(101);
  const std::vector<QuantumNode> nodes{{"A", 2, 2}, {"B", 2, 2}};
  const SystemLabel a_in = in_label(nodes[0]), a_out = out_label(nodes[0]);
  const SystemLabel b_in = in_label(nodes[1]), b_out = out_label(nodes[1]);
  const std::string full = type_name(nodes, 0b1111);
  int bad_pair = 0, good_const = 0, draws = 0;
  for (int k = 0; k < 100; ++k) {
    ChannelOperator ab, ba;
    // strictly signalling: the output depends on the input
    do {
      ab = cj_from_kraus(random_kraus(rng), b_out, a_in);
      ++draws;
    } while (trace_replace_residual(ab.base(), {b_out}) < 1e-3);
    do {
      ba = cj_from_kraus(random_kraus(rng), a_out, b_in);
      ++draws;
    } while (trace_replace_residual(ba.base(), {a_out}) < 1e-3);
    const ValidityVerdict v = validate_process(ProcessOperator(nodes, tensor(ab.base(), ba.base())));
    const bool has_full = std::find(v.offending_types.begin(), v.offending_types.end(), full) !=
                          v.offending_types.end();
    bad_pair += !v.valid() && has_full;

    const LabeledOperator const_a =
        tensor(LabeledOperator({a_in}, random_density(2, rng)), identity_operator({b_out}));
    const LabeledOperator const_b =
        tensor(LabeledOperator({b_in}, random_density(2, rng)), identity_operator({a_out}));
    good_const += validate_process(ProcessOperator(nodes, tensor(const_a, ba.base()))).valid() &&
                  validate_process(ProcessOperator(nodes, tensor(ab.base(), const_b))).valid();
  }
  c.note(std::to_string(draws) + " channels drawn");
  c.expect(bad_pair == 100, "signalling pairs fail on " + full + " (" + std::to_string(bad_pair) + "/100)");
  c.expect(good_const == 100, "constant factor gives a process (" + std::to_string(good_const) + "/100)");
}

void separability_suite(Check& c) {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937 rng(303);
  const UnitaryProcess sw = make_switch(2);
  int ok = 0;
  double worst = 0.0;
  std::size_t most_iter = 0;
  for (int k = 0; k < 50; ++k) {
    const Matrix u = Eigen::kroneckerProduct(Matrix::Identity(4, 4), random_unitary(4, rng)).eval() *
                     sw.unitary() *
                     Eigen::kroneckerProduct(Matrix::Identity(4, 4), random_unitary(4, rng)).eval();
    const UnitaryProcess v(sw.nodes(), u);
    const ProcessOperator s = marginalize(v, "P", random_density(4, rng).transpose(), "F");
    const SeparabilityVerdict r = bipartite_separability(s, 1e-6, 5000);
    const bool sep = r.status == SeparabilityStatus::Separable && r.residual < 1e-6 &&
                     r.iterations <= 5000;
    ok += sep;
    worst = std::max(worst, r.residual);
    most_iter = std::max(most_iter, r.iterations);
  }
  c.note("worst residual " + num(worst) + ", most iterations " + std::to_string(most_iter));
  c.expect(ok == 50, "separable instances " + std::to_string(ok) + "/50");
  const DecompositionReport d = verify_decomposition(sw.unitary(), switch_decomposition(2));
  bool one_way = d.holds;
  for (const auto& [ab, ba] : d.block_signalling) one_way = one_way && !(ab && ba);
  c.expect(one_way, "per-block one-way signalling");
  const double t = seconds_since(t0);
  c.note("runtime " + num(t) + " s");
  c.expect(t < 300.0, "runtime < 5 min");
}

void comb_suite(Check& c) {
  std::mt19937 rng(404);
  int agree = 0;
  for (int k = 0; k < 100; ++k) {
    const UnitaryProcess up = random_chain(2 + static_cast<std::size_t>(k % 2), rng);
    const bool acyclic = causal_structure_unitary(up).is_acyclic();
    const bool comb = !comb_search(up.process()).orders.empty();
    agree += acyclic && comb;
  }
  c.expect(agree == 100, "random chains acyclic with a comb order (" + std::to_string(agree) + "/100)");
  const UnitaryProcess sw = make_switch(2), bw = make_bw_extension();
  c.expect(!causal_structure_unitary(sw).is_acyclic() && comb_search(sw.process()).orders.empty(),
           "SWITCH cyclic, no comb order");
  c.expect(!causal_structure_unitary(bw).is_acyclic() && comb_search(bw.process()).orders.empty(),
           "BW cyclic, no comb order");
}

void counterexample_suite(Check& c) {
  const MethodsCounterexample ce = make_methods_counterexample();
  const std::vector<std::vector<double>> dists{{1, 0}, {0, 1}, {0.5, 0.5}, {0.2, 0.8}, {0.9, 0.1}};
  int failed = 0;
  for (const auto& d : dists) failed += !validate_classical(ce.product(d)).valid;
  c.expect(failed == 5, "products invalid for every P(C^in) (" + std::to_string(failed) + "/5)");
  const ValidityVerdict v = validate_process(quantize(ce.slice_c0()));
  const std::vector<QuantumNode> nodes = quantum_nodes(ce.slice_c0().nodes());
  const std::string full = type_name(nodes, 0b1111);
  const bool flagged = std::find(v.offending_types.begin(), v.offending_types.end(), full) !=
                       v.offending_types.end();
  c.expect(!v.type_terms && flagged, "C^out = 0 slice fails on " + full);
}

void classical_suite(Check& c) {
  const std::vector<ClassicalNode> bits{{"A", 2, 2}, {"B", 2, 2}};
  // brute force: unique fixed point under every pair of local bit maps
  std::set<std::vector<std::size_t>> oracle;
  for (int code = 0; code < 256; ++code) {
    std::vector<std::size_t> table(4);
    for (int k = 0; k < 4; ++k) table[k] = static_cast<std::size_t>((code >> (2 * k)) & 3);
    bool ok = true;
    for (int ga = 0; ga < 4 && ok; ++ga)
      for (int gb = 0; gb < 4 && ok; ++gb) {
        int count = 0;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            const int oa = (ga >> a) & 1, ob = (gb >> b) & 1;
            count += table[static_cast<std::size_t>(2 * oa + ob)] == static_cast<std::size_t>(2 * a + b);
          }
        ok = count == 1;
      }
    if (ok) oracle.insert(table);
  }
  const auto vertices = enumerate_deterministic_processes(bits);
  std::set<std::vector<std::size_t>> got;
  for (const auto& v : vertices) got.insert(v.table());
  c.note(std::to_string(oracle.size()) + " deterministic processes on two bits");
  c.expect(got == oracle && got.size() == vertices.size(), "enumeration matches the oracle");

  std::mt19937 rng(808);
  std::exponential_distribution<double> ex(1.0);
  int inside = 0, exact_ext = 0;
  double worst = 0.0;
  std::vector<ClassicalProcess> corpus;
  for (int k = 0; k < 50; ++k) {
    std::vector<double> w(vertices.size());
    double s = 0.0;
    for (auto& x : w) s += (x = ex(rng));
    for (auto& x : w) x /= s;
    const ClassicalProcess kp = mix(w, vertices);
    corpus.push_back(kp);
    const PolytopeMembership pm = polytope_membership(kp, vertices);
    const ClassicalProcess back = mix(pm.weights, vertices);
    double err = 0.0;
    for (std::size_t i = 0; i < kp.kappa().size(); ++i)
      err = std::max(err, std::abs(back.kappa()[i] - kp.kappa()[i]));
    worst = std::max(worst, err);
    inside += pm.inside && err < 1e-9;
    const ReversibleExtension ext = reversible_extension(w, vertices);
    exact_ext += is_reversible(ext) && extension_marginal(ext).kappa() == kp.kappa();
  }
  c.note("worst weight reconstruction " + num(worst));
  c.expect(inside == 50, "mixtures inside (" + std::to_string(inside) + "/50)");
  c.expect(exact_ext == 50, "extension marginals exact (" + std::to_string(exact_ext) + "/50)");

  const std::vector<ClassicalNode> three{{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}};
  const auto v3 = enumerate_deterministic_processes(three);
  const auto outside = outside_polytope_candidates(three, v3, 17);
  const bool found = !outside.empty();
  c.expect(found, "LP finds a three-bit process outside the polytope");
  if (found) {
    c.expect(validate_classical(outside.front()).valid, "outside process is valid");
    c.expect(!polytope_membership(outside.front(), v3).inside, "outside process: inside = false");
    corpus.push_back(outside.front());
  }

  // Markov verdict agreement, classical vs quantized
  const MethodsCounterexample ce = make_methods_counterexample();
  corpus.push_back(af_function().kappa());
  corpus.push_back(make_classical_switch(2).kappa());
  corpus.push_back(ce.product({0.5, 0.5}));
  corpus.push_back(ce.slice_c0());
  for (const auto& v : vertices) corpus.push_back(v.kappa());
  int agree = 0, total = 0, accepted = 0;
  for (const auto& kp : corpus) {
    std::vector<std::string> names;
    for (const auto& n : kp.nodes()) names.push_back(n.name);
    std::vector<Edge> all;
    for (const auto& a : names)
      for (const auto& b : names)
        if (a != b) all.emplace_back(a, b);
    std::vector<DirectedGraph> graphs{DirectedGraph(names, all), DirectedGraph(names, {})};
    if (names.size() == 3) graphs.push_back(af_graph());
    for (const auto& e : all) {
      DirectedGraph g(names, all);
      g.remove_edge(e.first, e.second);
      graphs.push_back(g);
    }
    for (const auto& g : graphs) {
      const bool cm = classical_markov_check(kp, g).accepted;
      const bool qm = markov_check(quantize(kp), g).accepted;
      agree += cm == qm;
      accepted += cm;
      ++total;
    }
  }
  c.note(std::to_string(total) + " (process, graph) pairs, " + std::to_string(accepted) + " Markov");
  c.expect(agree == total, "classical/quantum Markov agreement " + std::to_string(agree) + "/" +
                               std::to_string(total));
}

void reduced_switch_suite(Check& c) {
  const ProcessOperator r = make_reduced_switch(2);
  const MarkovFactorization mf = markov_check(r, reduced_switch_graph());
  c.expect(mf.accepted, "reduced SWITCH Markov (" + mf.reason + ")");
  c.expect(mf.accepted && faithfulness_check(reduced_switch_graph(), mf).faithful, "faithful");
  const QuantumNode p = r.node("P");
  for (std::size_t ctl = 0; ctl < 2; ++ctl) {
    std::vector<Matrix> kraus;
    for (std::size_t t = 0; t < 2; ++t) {
      Matrix ket = Matrix::Zero(4, 1);
      ket(static_cast<Eigen::Index>(ctl * 2 + t), 0) = 1.0 / std::sqrt(2.0);
      kraus.push_back(ket);
    }
    const ProcessOperator cond = conditional_process(r, "P", instrument_element(p, kraus));
    const TotalOrder order = ctl == 0 ? TotalOrder{"A", "B"} : TotalOrder{"B", "A"};
    const CombVerdict v = comb_check(cond, order);
    double worst = 0.0;
    for (double x : v.residuals) worst = std::max(worst, x);
    c.expect(v.accepted && worst < 1e-9, "control " + std::to_string(ctl) + ": comb for " +
                                             order[0] + " < " + order[1] + " (" + num(worst) + ")");
    const TotalOrder other{order[1], order[0]};
    c.expect(!comb_check(cond, other).accepted,
             "control " + std::to_string(ctl) + ": not a comb for " + other[0] + " < " + other[1]);
  }
}

void cli_suite(Check& c) {
  const fs::path work = fs::path(QCAUSAL_WORK_DIR) / "acceptance";
  fs::create_directories(work);
  for (const auto& name : exemplar_names()) {
    const Shell s = cli("exemplar " + name + " --out " + name + ".json", work);
    c.expect(s.code == 0, "exemplar " + name + " exits 0");
  }
  for (const std::string name : {"switch", "af"}) {
    const Shell a = cli("discover " + name + ".json --dot " + name + "_1.dot", work);
    const Shell b = cli("discover " + name + ".json --dot " + name + "_2.dot", work);
    const std::string d1 = slurp(work / (name + "_1.dot")), d2 = slurp(work / (name + "_2.dot"));
    const std::string gold = slurp(fs::path(QCAUSAL_GOLDEN_DIR) / (name + ".dot"));
    c.expect(a.code == 0 && b.code == 0, "discover " + name + " exits 0");
    c.expect(!d1.empty() && d1 == d2, name + " DOT identical across runs");
    c.expect(d1 == gold, name + " DOT matches the golden file");
  }
  int exact = 0;
  for (const auto& name : exemplar_names()) {
    const std::string text = slurp(work / (name + ".json"));
    const ProcessFile f = parse_process_file(text);
    const Exemplar e = make_exemplar(name);
    bool same = dump_process_file(f) == text;
    if (e.quantum) same = same && f.quantum && exactly_equal(f.quantum->matrix(), e.quantum->matrix());
    if (e.classical) same = same && f.classical && f.classical->kappa() == e.classical->kappa();
    if (e.graph) same = same && f.graph && *f.graph == *e.graph;
    if (!same) c.note("round trip differs: " + name);
    exact += same;
  }
  c.expect(exact == static_cast<int>(exemplar_names().size()), "round trip bit-exact for all exemplars");

  {
    std::ofstream bad(work / "truncated.json", std::ios::binary);
    const std::string text = slurp(work / "switch.json");
    bad << text.substr(0, text.size() / 3);
  }
  const Shell valid = cli("validate switch.json", work);
  const Shell invalid = cli("validate counterexample.json", work);
  const Shell broken = cli("validate truncated.json", work);
  c.expect(valid.code == 0, "valid input exits 0 (got " + std::to_string(valid.code) + ")");
  c.expect(invalid.code == 1, "invalid input exits 1 (got " + std::to_string(invalid.code) + ")");
  c.expect(broken.code == 2, "malformed input exits 2 (got " + std::to_string(broken.code) + ")");
  const Shell again = cli("validate switch.json", work);
  auto strip_runtime = [](const std::string& s) {
    std::string out;
    std::istringstream in(s);
    for (std::string line; std::getline(in, line);)
      if (line.find("\"runtime_ms\"") == std::string::npos) out += line + "\n";
    return out;
  };
  c.expect(strip_runtime(valid.out) == strip_runtime(again.out), "reports reproducible");
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    std::function<void(Check&)> run;
  };
  const std::vector<Criterion> all{
      {1, "switch suite", switch_suite},
      {2, "markov and faithfulness", markov_suite},
      {3, "bw and af", bw_suite},
      {4, "bipartite signalling pairs", bipartite_suite},
      {5, "switch-family separability", separability_suite},
      {6, "acyclic iff comb", comb_suite},
      {7, "commuting-product counterexample", counterexample_suite},
      {8, "classical suite", classical_suite},
      {9, "reduced switch dynamical order", reduced_switch_suite},
      {10, "cli golden files", cli_suite},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (const auto& cr : all) {
    if (!only.empty() && !only.count(cr.id)) continue;
    Check c;
    try {
      cr.run(c);
    } catch (const std::exception& e) {
      c.ok = false;
      c.notes.push_back(std::string("exception: ") + e.what());
    }
    std::printf("[%s] %d %s\n", c.ok ? "PASS" : "FAIL", cr.id, cr.name);
    for (const auto& n : c.notes) std::printf("    %s\n", n.c_str());
    std::fflush(stdout);
    failures += !c.ok;
  }
  return failures == 0 ? 0 : 1;
}
