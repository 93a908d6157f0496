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

#include "qcausal/exemplars.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include "qcausal/error.hpp"

namespace qcausal {

namespace {

Matrix swap_matrix(std::size_t d) {
  const auto n = static_cast<Eigen::Index>(d * d);
  Matrix m = Matrix::Zero(n, n);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b < d; ++b) m(b * d + a, a * d + b) = 1.0;
  return m;
}

Matrix identity(std::size_t d) {
  return Matrix::Identity(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(d));
}

Matrix not_gate() {
  Matrix m = Matrix::Zero(2, 2);
  m(0, 1) = m(1, 0) = 1.0;
  return m;
}

}  // namespace

// --------------------------------------------------------------- SWITCH

UnitaryProcess make_switch(std::size_t d) {
  if (d < 2) throw DimensionError("SWITCH needs d >= 2");
  const std::size_t p = 2 * d;
  std::vector<QuantumNode> nodes{{"A", d, d}, {"B", d, d}, {"P", 1, p}, {"F", p, 1}};
  // rows (A^in, B^in, F^in), columns (A^out, B^out, P^out)
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(d * d * p),
                          static_cast<Eigen::Index>(d * d * p));
  auto row = [&](std::size_t ai, std::size_t bi, std::size_t fi) { return (ai * d + bi) * p + fi; };
  for (std::size_t ao = 0; ao < d; ++ao)
    for (std::size_t bo = 0; bo < d; ++bo)
      for (std::size_t s = 0; s < d; ++s) {
        const std::size_t col0 = (ao * d + bo) * p + s;
        const std::size_t col1 = (ao * d + bo) * p + d + s;
        u(static_cast<Eigen::Index>(row(s, ao, bo)), static_cast<Eigen::Index>(col0)) = 1.0;
        u(static_cast<Eigen::Index>(row(bo, s, d + ao)), static_cast<Eigen::Index>(col1)) = 1.0;
      }
  return UnitaryProcess(nodes, u);
}

ProcessOperator make_reduced_switch(std::size_t d) {
  return marginalize(make_switch(d), "", Matrix(), "F");
}

DirectedGraph switch_graph() {
  return DirectedGraph({"A", "B", "P", "F"}, {{"P", "A"},
                                              {"P", "B"},
                                              {"P", "F"},
                                              {"A", "B"},
                                              {"B", "A"},
                                              {"A", "F"},
                                              {"B", "F"}});
}

DirectedGraph reduced_switch_graph() {
  return DirectedGraph({"A", "B", "P"}, {{"P", "A"}, {"P", "B"}, {"A", "B"}, {"B", "A"}});
}

ProcessOperator marginalize(const UnitaryProcess& up, const std::string& root, const Matrix& tau,
                            const std::string& leaf) {
  const ProcessOperator& s = up.process();
  std::vector<QuantumNode> rest;
  Systems keep;
  for (const auto& n : up.nodes()) {
    if (n.name == leaf) continue;
    keep.push_back(in_label(n));
    keep.push_back(out_label(n));
    if (n.name != root) rest.push_back(n);
  }
  if (!leaf.empty()) s.node(leaf);
  LabeledOperator op = up.cj().reduced(keep);
  if (!root.empty()) {
    const QuantumNode& r = s.node(root);
    if (r.d_in != 1) throw PreconditionError(root + " is not a root node");
    op = contract(op, LabeledOperator({out_label(r)}, tau));
    op = partial_trace(op, {in_label(r)});
  }
  return ProcessOperator(rest, op);
}

// ------------------------------------------------------------------ AF

DeterministicProcess af_function() {
  const std::vector<ClassicalNode> nodes{{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}};
  return make_deterministic(nodes, [](const std::vector<std::size_t>& o) {
    const bool a = o[0], b = o[1], c = o[2];
    return std::vector<std::size_t>{!b && c, !c && a, !a && b};
  });
}

ProcessOperator make_af() { return quantize(af_function().kappa()); }

DirectedGraph af_graph() {
  return DirectedGraph({"A", "B", "C"},
                       {{"A", "B"}, {"B", "A"}, {"B", "C"}, {"C", "B"}, {"A", "C"}, {"C", "A"}});
}

UnitaryProcess make_bw_extension() {
  std::vector<QuantumNode> nodes{{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}, {"P", 1, 8}, {"F", 8, 1}};
  // rows (A^in, B^in, C^in, F^in), columns (A^out, B^out, C^out, P^out = l m n)
  Matrix u = Matrix::Zero(64, 64);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int l = 0; l < 2; ++l)
          for (int m = 0; m < 2; ++m)
            for (int n = 0; n < 2; ++n) {
              const int ai = l ^ (!b && c), bi = m ^ (!c && a), ci = n ^ (!a && b);
              const int f = a * 4 + b * 2 + c;
              const int row = ((ai * 2 + bi) * 2 + ci) * 8 + f;
              const int col = ((a * 2 + b) * 2 + c) * 8 + (l * 4 + m * 2 + n);
              u(row, col) = 1.0;
            }
  return UnitaryProcess(nodes, u);
}

UnitaryProcess bw_split(const UnitaryProcess& bw) {
  return split_root(bw, "P", {{"lambda_A", 1, 2}, {"lambda_B", 1, 2}, {"lambda_C", 1, 2}});
}

std::vector<LambdaState> bw_lambda_states() {
  Matrix zero = Matrix::Zero(2, 2);
  zero(0, 0) = 1.0;
  return {{"lambda_A", "A", zero}, {"lambda_B", "B", zero}, {"lambda_C", "C", zero}};
}

// ------------------------------------------------------ classical SWITCH

DeterministicProcess make_classical_switch(std::size_t d) {
  if (d < 2) throw DimensionError("SWITCH needs d >= 2");
  const std::vector<ClassicalNode> nodes{{"A", d, d}, {"B", d, d}, {"P", 1, 2 * d}, {"F", 2 * d, 1}};
  return make_deterministic(nodes, [d](const std::vector<std::size_t>& o) {
    const std::size_t a = o[0], b = o[1], c = o[2] / d, s = o[2] % d;
    if (c == 0) return std::vector<std::size_t>{s, a, 0, b};
    return std::vector<std::size_t>{b, s, 0, d + a};
  });
}

// -------------------------------------------------------- counterexample

ClassicalProcess MethodsCounterexample::product(const std::vector<double>& p_c_in) const {
  if (p_c_in.size() != 2) throw DimensionError("P(C^in) needs two entries");
  const std::vector<ClassicalNode> nodes{{"A", 2, 2}, {"B", 2, 2}, {"C", 2, 2}};
  std::vector<double> k(64, 0.0);
  ClassicalProcess proto(nodes, k);
  for (std::size_t ai = 0; ai < 2; ++ai)
    for (std::size_t ao = 0; ao < 2; ++ao)
      for (std::size_t bi = 0; bi < 2; ++bi)
        for (std::size_t bo = 0; bo < 2; ++bo)
          for (std::size_t ci = 0; ci < 2; ++ci)
            for (std::size_t co = 0; co < 2; ++co) {
              const double pa = ai == 0 ? p_a0[bo * 2 + co] : 1.0 - p_a0[bo * 2 + co];
              const double pb = bi == 0 ? p_b0[ao * 2 + co] : 1.0 - p_b0[ao * 2 + co];
              k[proto.flat_index({ai, bi, ci}, {ao, bo, co})] = pa * pb * p_c_in[ci];
            }
  return ClassicalProcess(nodes, std::move(k));
}

ClassicalProcess MethodsCounterexample::slice_c0() const {
  const std::vector<ClassicalNode> nodes{{"A", 2, 2}, {"B", 2, 2}};
  std::vector<double> k(16, 0.0);
  ClassicalProcess proto(nodes, k);
  for (std::size_t ai = 0; ai < 2; ++ai)
    for (std::size_t ao = 0; ao < 2; ++ao)
      for (std::size_t bi = 0; bi < 2; ++bi)
        for (std::size_t bo = 0; bo < 2; ++bo) {
          const double pa = ai == 0 ? p_a0[bo * 2] : 1.0 - p_a0[bo * 2];
          const double pb = bi == 0 ? p_b0[ao * 2] : 1.0 - p_b0[ao * 2];
          k[proto.flat_index({ai, bi}, {ao, bo})] = pa * pb;
        }
  return ClassicalProcess(nodes, std::move(k));
}

MethodsCounterexample make_methods_counterexample() { return {}; }

// --------------------------------------------------------- decompositions

SwitchParts switch_decomposition(std::size_t d) {
  SwitchParts p;
  p.d_a_in = p.d_a_out = p.d_b_in = p.d_b_out = d;
  p.S = identity(2 * d);
  p.T = identity(2 * d);
  p.p_dims = {{1, d}, {d, 1}};
  p.f_dims = {{1, d}, {d, 1}};
  p.V = {identity(d), swap_matrix(d)};
  p.W = {swap_matrix(d), identity(d)};
  return p;
}

SwitchParts switch_decomposition_swapped(std::size_t d) {
  SwitchParts p = switch_decomposition(d);
  p.V[1] = identity(d * d);
  p.W[0] = identity(d * d);
  return p;
}

BWParts bw_decomposition() {
  BWParts p;
  p.d_lambda = 2;
  p.d_in = 2;
  p.S = p.T = p.V = identity(2);
  p.W = identity(8);
  p.x_dims = p.y_dims = p.z_dims = {{1, 1}, {1, 1}};
  p.g1_dims = p.g2_dims = p.g3_dims = {{1, 1}, {1, 1}};
  p.P = p.Q = p.R = {{identity(2), identity(2)}, {identity(2), identity(2)}};
  for (int x = 0; x < 2; ++x)
    for (int y = 0; y < 2; ++y) {
      if (!x && y) p.P[x][y] = not_gate();  // i = x, j = y
      if (!y && x) p.Q[x][y] = not_gate();  // i = x, k = y
      if (!x && y) p.R[x][y] = not_gate();  // j = x, k = y
    }
  return p;
}

// ------------------------------------------------------------------ mix

ProcessOperator make_mix_example(const Matrix& rho) {
  if (rho.rows() != 2 || rho.cols() != 2) throw DimensionError("rho must be a qubit state");
  const QuantumNode a{"A", 2, 2}, b{"B", 2, 2};
  LabeledOperator s = tensor(LabeledOperator({in_label(a)}, rho), identity_operator({out_label(a)}));
  s = tensor(s, LabeledOperator({in_label(b)}, identity(2) / 2.0));
  s = tensor(s, identity_operator({out_label(b)}));
  return ProcessOperator({a, b}, s);
}

ProcessOperator make_cnot_process(const Matrix& rho, int bit) {
  if (rho.rows() != 2 || rho.cols() != 2) throw DimensionError("rho must be a qubit state");
  Matrix cnot = Matrix::Zero(4, 4);
  cnot(0, 0) = cnot(1, 1) = cnot(3, 2) = cnot(2, 3) = 1.0;
  std::vector<Matrix> kraus;
  for (int c = 0; c < 2; ++c) {
    Matrix bra = Matrix::Zero(1, 2);
    bra(0, c) = 1.0;
    kraus.push_back(Eigen::kroneckerProduct(bra, identity(2)).eval() * cnot);
  }
  const SystemLabel joint("a_out+ap", 4), b("b", 2);
  ChannelOperator ch = cj_from_kraus(kraus, joint, b);
  const LabeledOperator split = split_system(
      ch.base(), ch.inputs().front(), {SystemLabel("a_out", 2, true), SystemLabel("ap", 2, true)});
  const ChannelOperator channel(split, {b}, {SystemLabel("a_out", 2, true), SystemLabel("ap", 2, true)});
  Matrix anc = Matrix::Zero(2, 2);
  anc(bit ? 1 : 0, bit ? 1 : 0) = 1.0;
  const LabeledOperator init =
      tensor(LabeledOperator({SystemLabel("a", 2)}, rho), LabeledOperator({SystemLabel("ap", 2)}, anc));
  return comb_from_circuit(init, {channel},
                           {NodeSlot{"A", "a", "a_out", 2, 2}, NodeSlot{"B", "b", "b_out", 2, 2}});
}

// ------------------------------------------------------------- registry

std::vector<std::string> exemplar_names() {
  return {"af",     "af-classical", "bw-extension", "classical-switch", "counterexample",
          "marginal-switch", "mix", "reduced-switch", "sigma0", "sigma1", "switch"};
}

namespace {

Matrix plus_state() {
  Matrix m = Matrix::Constant(2, 2, 0.5);
  return m;
}

}  // namespace

Exemplar make_exemplar(const std::string& name) {
  Exemplar e;
  e.name = name;
  if (name == "switch") {
    e.description = "quantum SWITCH, d = 2";
    e.quantum = make_switch(2).process();
    e.graph = switch_graph();
  } else if (name == "reduced-switch") {
    e.description = "quantum SWITCH with F traced out";
    e.quantum = make_reduced_switch(2);
    e.graph = reduced_switch_graph();
  } else if (name == "af") {
    e.description = "Araujo-Feix process";
    e.quantum = make_af();
    e.graph = af_graph();
  } else if (name == "af-classical") {
    e.description = "Araujo-Feix process, classical table";
    e.classical = af_function().kappa();
    e.graph = af_graph();
  } else if (name == "bw-extension") {
    e.description = "Baumeler-Wolf unitary extension of the AF process";
    e.quantum = make_bw_extension().process();
  } else if (name == "mix") {
    e.description = "mixture of the two CNOT processes, A^in in |0>";
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    e.quantum = make_mix_example(rho);
  } else if (name == "sigma0" || name == "sigma1") {
    e.description = "CNOT process with ancilla |" + name.substr(5) + ">, A^in in |0>";
    Matrix rho = Matrix::Zero(2, 2);
    rho(0, 0) = 1.0;
    e.quantum = make_cnot_process(rho, name == "sigma1");
  } else if (name == "classical-switch") {
    e.description = "classical SWITCH, d = 2";
    e.classical = make_classical_switch(2).kappa();
    e.graph = switch_graph();
  } else if (name == "counterexample") {
    e.description = "product of two signalling channels with uniform P(C^in)";
    e.classical = make_methods_counterexample().product({0.5, 0.5});
  } else if (name == "marginal-switch") {
    e.description = "SWITCH on A, B with control |+> and target |0>, F discarded";
    Matrix zero = Matrix::Zero(2, 2);
    zero(0, 0) = 1.0;
    const Matrix tau = Eigen::kroneckerProduct(plus_state(), zero).eval();
    e.quantum = marginalize(make_switch(2), "P", tau, "F");
  } else {
    std::string list;
    for (const auto& n : exemplar_names()) list += (list.empty() ? "" : ", ") + n;
    throw LabelError("unknown exemplar '" + name + "'; available: " + list);
  }
  return e;
}

}  // namespace qcausal
