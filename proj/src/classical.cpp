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

#include "qcausal/classical.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "qcausal/error.hpp"
#include "qcausal/lp.hpp"

namespace qcausal {

namespace {

void check_nodes(const std::vector<ClassicalNode>& nodes) {
  std::set<std::string> names;
  for (const auto& n : nodes) {
    if (n.name.empty()) throw LabelError("node name must not be empty");
    if (n.in_card == 0 || n.out_card == 0)
      throw DimensionError("node " + n.name + " has a zero cardinality");
    if (!names.insert(n.name).second) throw LabelError("duplicate node " + n.name);
  }
}

std::size_t find_node(const std::vector<ClassicalNode>& nodes, const std::string& name) {
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (nodes[i].name == name) return i;
  throw LabelError("unknown node " + name);
}

std::size_t checked_mul(std::size_t a, std::size_t b, std::size_t limit, const char* what) {
  if (b != 0 && a > limit / b) throw BudgetError(std::string(what) + " exceeds the budget");
  return a * b;
}

// Advance a mixed-radix counter; false once it wraps around.
bool advance(std::vector<std::size_t>& digits, const std::vector<std::size_t>& radix) {
  for (std::size_t i = digits.size(); i-- > 0;) {
    if (++digits[i] < radix[i]) return true;
    digits[i] = 0;
  }
  return false;
}

// Deterministic local functions of one node: index -> table in -> out.
std::vector<std::size_t> local_function(std::size_t idx, const ClassicalNode& n) {
  std::vector<std::size_t> g(n.in_card);
  for (std::size_t x = n.in_card; x-- > 0;) {
    g[x] = idx % n.out_card;
    idx /= n.out_card;
  }
  return g;
}

std::size_t local_function_count(const ClassicalNode& n, std::size_t budget) {
  std::size_t c = 1;
  for (std::size_t i = 0; i < n.in_card; ++i) c = checked_mul(c, n.out_card, budget, "local functions");
  return c;
}

std::vector<std::size_t> local_function_counts(const std::vector<ClassicalNode>& nodes,
                                               std::size_t budget) {
  std::vector<std::size_t> radix;
  std::size_t total = 1;
  for (const auto& n : nodes) {
    radix.push_back(local_function_count(n, budget));
    total = checked_mul(total, radix.back(), budget, "tuple count of deterministic locals");
  }
  return radix;
}

}  // namespace

// ------------------------------------------------------------ processes

std::size_t out_space(const std::vector<ClassicalNode>& nodes) {
  std::size_t s = 1;
  for (const auto& n : nodes) s *= n.out_card;
  return s;
}

std::size_t in_space(const std::vector<ClassicalNode>& nodes) {
  std::size_t s = 1;
  for (const auto& n : nodes) s *= n.in_card;
  return s;
}

std::vector<std::size_t> unpack_outs(const std::vector<ClassicalNode>& nodes, std::size_t idx) {
  std::vector<std::size_t> v(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    v[i] = idx % nodes[i].out_card;
    idx /= nodes[i].out_card;
  }
  return v;
}

std::vector<std::size_t> unpack_ins(const std::vector<ClassicalNode>& nodes, std::size_t idx) {
  std::vector<std::size_t> v(nodes.size());
  for (std::size_t i = nodes.size(); i-- > 0;) {
    v[i] = idx % nodes[i].in_card;
    idx /= nodes[i].in_card;
  }
  return v;
}

std::size_t pack_outs(const std::vector<ClassicalNode>& nodes, const std::vector<std::size_t>& v) {
  if (v.size() != nodes.size()) throw DimensionError("output tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (v[i] >= nodes[i].out_card) throw DimensionError("output value out of range");
    idx = idx * nodes[i].out_card + v[i];
  }
  return idx;
}

std::size_t pack_ins(const std::vector<ClassicalNode>& nodes, const std::vector<std::size_t>& v) {
  if (v.size() != nodes.size()) throw DimensionError("input tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (v[i] >= nodes[i].in_card) throw DimensionError("input value out of range");
    idx = idx * nodes[i].in_card + v[i];
  }
  return idx;
}

ClassicalProcess::ClassicalProcess(std::vector<ClassicalNode> nodes, std::vector<double> kappa)
    : nodes_(std::move(nodes)), kappa_(std::move(kappa)) {
  check_nodes(nodes_);
  std::size_t n = 1;
  for (const auto& x : nodes_) n *= x.in_card * x.out_card;
  if (kappa_.size() != n)
    throw DimensionError("kappa has " + std::to_string(kappa_.size()) + " entries, expected " +
                         std::to_string(n));
  for (double v : kappa_)
    if (!std::isfinite(v)) throw DimensionError("kappa has a non-finite entry");
}

std::vector<std::size_t> ClassicalProcess::shape() const {
  std::vector<std::size_t> s;
  for (const auto& n : nodes_) {
    s.push_back(n.in_card);
    s.push_back(n.out_card);
  }
  return s;
}

std::size_t ClassicalProcess::node_index(const std::string& name) const {
  return find_node(nodes_, name);
}

std::size_t ClassicalProcess::flat_index(const std::vector<std::size_t>& ins,
                                         const std::vector<std::size_t>& outs) const {
  if (ins.size() != nodes_.size() || outs.size() != nodes_.size())
    throw DimensionError("tuple arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (ins[i] >= nodes_[i].in_card || outs[i] >= nodes_[i].out_card)
      throw DimensionError("value out of range for node " + nodes_[i].name);
    idx = (idx * nodes_[i].in_card + ins[i]) * nodes_[i].out_card + outs[i];
  }
  return idx;
}

ClassicalValidity validate_classical(const ClassicalProcess& kp, double tol, std::size_t budget) {
  const auto& nodes = kp.nodes();
  ClassicalValidity v;
  v.entries_ok = std::all_of(kp.kappa().begin(), kp.kappa().end(),
                             [tol](double x) { return x >= -tol && x <= 1.0 + tol; });
  const auto radix = local_function_counts(nodes, budget);
  std::vector<std::size_t> digits(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> g(nodes.size());
  const std::size_t nin = in_space(nodes);
  do {
    for (std::size_t i = 0; i < nodes.size(); ++i) g[i] = local_function(digits[i], nodes[i]);
    double total = 0.0;
    for (std::size_t x = 0; x < nin; ++x) {
      const auto ins = unpack_ins(nodes, x);
      std::vector<std::size_t> outs(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) outs[i] = g[i][ins[i]];
      total += kp.at(ins, outs);
    }
    v.worst_deviation = std::max(v.worst_deviation, std::abs(total - 1.0));
    ++v.tuples;
  } while (advance(digits, radix));
  v.valid = v.entries_ok && v.worst_deviation <= tol;
  return v;
}

DeterministicProcess::DeterministicProcess(std::vector<ClassicalNode> nodes,
                                           std::vector<std::size_t> table)
    : nodes_(std::move(nodes)), table_(std::move(table)) {
  check_nodes(nodes_);
  if (table_.size() != out_space(nodes_))
    throw DimensionError("function table must list every output tuple");
  const std::size_t nin = in_space(nodes_);
  for (auto v : table_)
    if (v >= nin) throw DimensionError("function table value out of range");
}

std::size_t DeterministicProcess::node_index(const std::string& name) const {
  return find_node(nodes_, name);
}

std::vector<std::size_t> DeterministicProcess::ins_for(const std::vector<std::size_t>& outs) const {
  return unpack_ins(nodes_, table_[pack_outs(nodes_, outs)]);
}

ClassicalProcess DeterministicProcess::kappa() const {
  std::size_t n = 1;
  for (const auto& x : nodes_) n *= x.in_card * x.out_card;
  std::vector<double> k(n, 0.0);
  ClassicalProcess proto(nodes_, k);
  for (std::size_t o = 0; o < table_.size(); ++o)
    k[proto.flat_index(unpack_ins(nodes_, table_[o]), unpack_outs(nodes_, o))] = 1.0;
  return ClassicalProcess(nodes_, std::move(k));
}

bool validate_deterministic(const DeterministicProcess& dp, std::size_t budget) {
  const auto& nodes = dp.nodes();
  const auto radix = local_function_counts(nodes, budget);
  std::vector<std::size_t> digits(nodes.size(), 0);
  std::vector<std::vector<std::size_t>> g(nodes.size());
  std::vector<std::vector<std::size_t>> ins_of;
  for (std::size_t o = 0; o < dp.table().size(); ++o)
    ins_of.push_back(unpack_ins(nodes, dp.table()[o]));
  do {
    for (std::size_t i = 0; i < nodes.size(); ++i) g[i] = local_function(digits[i], nodes[i]);
    std::size_t fixed = 0;
    for (std::size_t o = 0; o < ins_of.size() && fixed < 2; ++o) {
      const auto outs = unpack_outs(nodes, o);
      bool same = true;
      for (std::size_t i = 0; i < nodes.size() && same; ++i) same = g[i][ins_of[o][i]] == outs[i];
      fixed += same;
    }
    if (fixed != 1) return false;
  } while (advance(digits, radix));
  return true;
}

Distribution classical_joint_probabilities(const ClassicalProcess& kp,
                                           const std::vector<ClassicalInstrument>& instruments) {
  const auto& nodes = kp.nodes();
  if (instruments.size() != nodes.size())
    throw LabelError("one instrument per node is required");
  std::vector<const ClassicalInstrument*> ordered;
  for (const auto& n : nodes) {
    const ClassicalInstrument* found = nullptr;
    for (const auto& ins : instruments)
      if (ins.node == n.name) found = &ins;
    if (!found) throw LabelError("no instrument for node " + n.name);
    if (found->in_card != n.in_card || found->out_card != n.out_card ||
        found->p.size() != found->outcomes * n.in_card * n.out_card)
      throw DimensionError("instrument shape does not match node " + n.name);
    ordered.push_back(found);
  }
  Distribution d;
  std::size_t total = 1;
  for (const auto* ins : ordered) {
    d.shape.push_back(ins->outcomes);
    total *= ins->outcomes;
  }
  d.p.assign(total, 0.0);
  std::vector<std::size_t> radix;
  for (const auto& n : nodes) {
    radix.push_back(n.in_card);
    radix.push_back(n.out_card);
  }
  std::vector<std::size_t> digits(radix.size(), 0);
  std::size_t flat = 0;
  do {
    const double k = kp.kappa()[flat++];
    if (k == 0.0) continue;
    std::vector<std::size_t> outcome(nodes.size(), 0);
    for (std::size_t t = 0; t < total; ++t) {
      double w = k;
      for (std::size_t i = 0; i < nodes.size() && w != 0.0; ++i)
        w *= ordered[i]->at(outcome[i], digits[2 * i], digits[2 * i + 1]);
      d.p[t] += w;
      advance(outcome, d.shape);
    }
  } while (advance(digits, radix));
  return d;
}

DirectedGraph causal_structure_deterministic(const DeterministicProcess& dp) {
  const auto& nodes = dp.nodes();
  std::vector<std::string> names;
  for (const auto& n : nodes) names.push_back(n.name);
  DirectedGraph g(names);
  for (std::size_t o = 0; o < dp.table().size(); ++o) {
    const auto outs = unpack_outs(nodes, o);
    const auto ins = unpack_ins(nodes, dp.table()[o]);
    for (std::size_t i = 0; i < nodes.size(); ++i)
      for (std::size_t v = 0; v < nodes[i].out_card; ++v) {
        if (v == outs[i]) continue;
        auto alt = outs;
        alt[i] = v;
        const auto alt_ins = dp.ins_for(alt);
        for (std::size_t j = 0; j < nodes.size(); ++j)
          if (j != i && alt_ins[j] != ins[j] && !g.has_edge(names[i], names[j]))
            g.add_edge(names[i], names[j]);
      }
  }
  return g;
}

ClassicalMarkov classical_markov_check(const ClassicalProcess& kp, const DirectedGraph& g,
                                       double tol) {
  const auto& nodes = kp.nodes();
  std::set<std::string> names;
  for (const auto& n : nodes) names.insert(n.name);
  if (g.vertices() != names) throw LabelError("graph vertices do not match the process nodes");

  ClassicalMarkov res;
  std::vector<std::vector<std::size_t>> pa_idx(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    ClassicalFactor f;
    f.child = nodes[i].name;
    std::size_t rows = 1;
    const auto parents = g.parents(nodes[i].name);
    for (std::size_t j = 0; j < nodes.size(); ++j) {
      if (parents.count(nodes[j].name)) {
        f.parents.push_back(nodes[j].name);
        pa_idx[i].push_back(j);
        rows *= nodes[j].out_card;
      }
    }
    f.table.assign(rows * nodes[i].in_card, 0.0);
    res.factors.push_back(std::move(f));
  }

  std::vector<std::size_t> radix;
  for (const auto& n : nodes) {
    radix.push_back(n.in_card);
    radix.push_back(n.out_card);
  }
  auto pa_tuple = [&](std::size_t i, const std::vector<std::size_t>& digits) {
    std::size_t t = 0;
    for (std::size_t j : pa_idx[i]) t = t * nodes[j].out_card + digits[2 * j + 1];
    return t;
  };

  std::vector<std::size_t> digits(radix.size(), 0);
  std::size_t flat = 0;
  do {
    const double k = kp.kappa()[flat++];
    for (std::size_t i = 0; i < nodes.size(); ++i)
      res.factors[i].table[pa_tuple(i, digits) * nodes[i].in_card + digits[2 * i]] += k;
  } while (advance(digits, radix));

  for (std::size_t i = 0; i < nodes.size(); ++i) {
    double norm = 1.0;
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (std::find(pa_idx[i].begin(), pa_idx[i].end(), j) == pa_idx[i].end())
        norm *= static_cast<double>(nodes[j].out_card);
    auto& t = res.factors[i].table;
    for (double& x : t) x /= norm;
    const std::size_t card = nodes[i].in_card;
    for (std::size_t r = 0; r < t.size() / card; ++r) {
      double s = 0.0;
      for (std::size_t x = 0; x < card; ++x) {
        s += t[r * card + x];
        res.stochastic_residual = std::max(res.stochastic_residual, -t[r * card + x]);
      }
      res.stochastic_residual = std::max(res.stochastic_residual, std::abs(s - 1.0));
    }
  }

  std::fill(digits.begin(), digits.end(), 0);
  flat = 0;
  do {
    double prod = 1.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      prod *= res.factors[i].table[pa_tuple(i, digits) * nodes[i].in_card + digits[2 * i]];
    res.product_residual = std::max(res.product_residual, std::abs(prod - kp.kappa()[flat++]));
  } while (advance(digits, radix));

  if (res.stochastic_residual > tol) res.reason += "factors are not stochastic; ";
  if (res.product_residual > tol) res.reason += "product of factors differs from kappa; ";
  res.accepted = res.reason.empty();
  return res;
}

// ----------------------------------------------------------- polytope

std::vector<DeterministicProcess> enumerate_deterministic_processes(
    const std::vector<ClassicalNode>& nodes, std::size_t budget) {
  check_nodes(nodes);
  const std::size_t nout = out_space(nodes);
  if (nout > budget)
    throw BudgetError("output space of " + std::to_string(nout) + " exceeds the budget of " +
                      std::to_string(budget));
  const std::size_t n = nodes.size();
  // Component i is a function of the other nodes' outputs; dependence on
  // its own output never has a unique fixed point for every intervention.
  std::vector<std::size_t> other(n, 1), radix(n, 1);
  std::size_t candidates = 1;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) other[i] *= nodes[j].out_card;
    for (std::size_t k = 0; k < other[i]; ++k)
      radix[i] = checked_mul(radix[i], nodes[i].in_card, 10000000, "candidate count");
    candidates = checked_mul(candidates, radix[i], 10000000, "candidate count");
  }
  auto other_index = [&](std::size_t i, const std::vector<std::size_t>& outs) {
    std::size_t t = 0;
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) t = t * nodes[j].out_card + outs[j];
    return t;
  };
  std::vector<std::vector<std::size_t>> outs_of(nout);
  for (std::size_t o = 0; o < nout; ++o) outs_of[o] = unpack_outs(nodes, o);

  std::vector<DeterministicProcess> result;
  std::vector<std::size_t> digits(n, 0);
  do {
    std::vector<std::vector<std::size_t>> comp(n);
    for (std::size_t i = 0; i < n; ++i) {
      comp[i].resize(other[i]);
      std::size_t d = digits[i];
      for (std::size_t k = other[i]; k-- > 0;) {
        comp[i][k] = d % nodes[i].in_card;
        d /= nodes[i].in_card;
      }
    }
    std::vector<std::size_t> table(nout);
    for (std::size_t o = 0; o < nout; ++o) {
      std::vector<std::size_t> ins(n);
      for (std::size_t i = 0; i < n; ++i) ins[i] = comp[i][other_index(i, outs_of[o])];
      table[o] = pack_ins(nodes, ins);
    }
    DeterministicProcess dp(nodes, std::move(table));
    if (validate_deterministic(dp)) result.push_back(std::move(dp));
  } while (advance(digits, radix));
  return result;
}

ClassicalProcess mix(const std::vector<double>& weights,
                     const std::vector<DeterministicProcess>& fs) {
  if (weights.size() != fs.size() || fs.empty())
    throw DimensionError("mixture needs one weight per process");
  std::vector<double> k;
  for (std::size_t i = 0; i < fs.size(); ++i) {
    const ClassicalProcess c = fs[i].kappa();
    if (k.empty()) k.assign(c.kappa().size(), 0.0);
    if (c.kappa().size() != k.size()) throw DimensionError("mixture components differ in shape");
    for (std::size_t e = 0; e < k.size(); ++e) k[e] += weights[i] * c.kappa()[e];
  }
  return ClassicalProcess(fs.front().nodes(), std::move(k));
}

PolytopeMembership polytope_membership(const ClassicalProcess& kp,
                                       const std::vector<DeterministicProcess>& vertices,
                                       double tol) {
  const auto N = static_cast<Eigen::Index>(kp.kappa().size());
  const auto V = static_cast<Eigen::Index>(vertices.size());
  // Variables: q (V), s+ (N), s- (N). Rows: N entries + normalization.
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(N + 1, V + 2 * N);
  Eigen::VectorXd b(N + 1), c = Eigen::VectorXd::Zero(V + 2 * N);
  for (Eigen::Index v = 0; v < V; ++v) {
    const ClassicalProcess k = vertices[static_cast<std::size_t>(v)].kappa();
    if (static_cast<Eigen::Index>(k.kappa().size()) != N)
      throw DimensionError("vertex shape differs from the process");
    for (Eigen::Index e = 0; e < N; ++e) A(e, v) = k.kappa()[static_cast<std::size_t>(e)];
    A(N, v) = 1.0;
  }
  for (Eigen::Index e = 0; e < N; ++e) {
    A(e, V + e) = 1.0;
    A(e, V + N + e) = -1.0;
    b(e) = kp.kappa()[static_cast<std::size_t>(e)];
  }
  b(N) = 1.0;
  c.tail(2 * N).setOnes();
  PolytopeMembership m;
  if (V == 0) {
    m.residual = std::numeric_limits<double>::infinity();
    return m;
  }
  const LPResult r = solve_lp(c, A, b);
  if (r.status != LPStatus::Optimal) {
    m.residual = std::numeric_limits<double>::infinity();
    return m;
  }
  m.weights.assign(r.x.data(), r.x.data() + V);
  m.residual = r.objective;
  m.inside = m.residual <= tol;
  return m;
}

std::vector<ClassicalProcess> outside_polytope_candidates(
    const std::vector<ClassicalNode>& nodes, const std::vector<DeterministicProcess>& vertices,
    unsigned seed, std::size_t attempts) {
  const auto radix = local_function_counts(nodes, kDefaultClassicalBudget);
  std::size_t N = 1;
  for (const auto& n : nodes) N *= n.in_card * n.out_card;
  const ClassicalProcess proto(nodes, std::vector<double>(N, 0.0));
  std::vector<Eigen::VectorXd> rows;
  std::vector<std::size_t> digits(nodes.size(), 0);
  const std::size_t nin = in_space(nodes);
  do {
    Eigen::VectorXd row = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(N));
    std::vector<std::vector<std::size_t>> g(nodes.size());
    for (std::size_t i = 0; i < nodes.size(); ++i) g[i] = local_function(digits[i], nodes[i]);
    for (std::size_t x = 0; x < nin; ++x) {
      const auto ins = unpack_ins(nodes, x);
      std::vector<std::size_t> outs(nodes.size());
      for (std::size_t i = 0; i < nodes.size(); ++i) outs[i] = g[i][ins[i]];
      row(static_cast<Eigen::Index>(proto.flat_index(ins, outs))) += 1.0;
    }
    rows.push_back(row);
  } while (advance(digits, radix));
  Eigen::MatrixXd A(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(N));
  for (std::size_t r = 0; r < rows.size(); ++r) A.row(static_cast<Eigen::Index>(r)) = rows[r];
  const Eigen::VectorXd b = Eigen::VectorXd::Ones(A.rows());

  std::vector<Eigen::VectorXd> vk;
  for (const auto& v : vertices) {
    const std::vector<double> k = v.kappa().kappa();
    vk.emplace_back(Eigen::Map<const Eigen::VectorXd>(k.data(), static_cast<Eigen::Index>(k.size())));
  }
  std::mt19937 rng(seed);
  std::normal_distribution<double> gauss;
  for (std::size_t t = 0; t < attempts; ++t) {
    Eigen::VectorXd c(static_cast<Eigen::Index>(N));
    for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = gauss(rng);
    const LPResult r = solve_lp(-c, A, b);
    if (r.status != LPStatus::Optimal) continue;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& k : vk) best = std::max(best, c.dot(k));
    if (c.dot(r.x) > best + 1e-6)
      return {ClassicalProcess(nodes, std::vector<double>(r.x.data(), r.x.data() + r.x.size()))};
  }
  return {};
}

// ----------------------------------------------------------- extension

ReversibleExtension reversible_extension(const std::vector<double>& weights,
                                         const std::vector<DeterministicProcess>& fs) {
  if (fs.empty() || weights.size() != fs.size())
    throw PreconditionError("mixture needs one weight per process");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw PreconditionError("mixture weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-9) throw PreconditionError("mixture weights must sum to one");
  const auto& src = fs.front().nodes();
  for (const auto& f : fs) {
    if (f.nodes().size() != src.size())
      throw PreconditionError("mixture components have different nodes");
    for (std::size_t i = 0; i < src.size(); ++i)
      if (f.nodes()[i].name != src[i].name || f.nodes()[i].in_card != src[i].in_card ||
          f.nodes()[i].out_card != src[i].out_card)
        throw PreconditionError("mixture components have different nodes");
    if (!validate_deterministic(f)) throw PreconditionError("mixture component is not valid");
  }
  const std::size_t m = fs.size(), nin = in_space(src), nout = out_space(src);
  std::vector<ClassicalNode> nodes = src;
  ReversibleExtension ext;
  for (const auto& n : src) ext.sources.push_back(n.name);
  ext.leaf = "F";
  const std::string lam = "lambda";
  for (const auto& n : src)
    if (n.name == lam || n.name == ext.leaf)
      throw LabelError("source node name " + n.name + " clashes with the extension nodes");
  nodes.push_back(ClassicalNode{lam, 1, m * nin});
  nodes.push_back(ClassicalNode{ext.leaf, nout * m, 1});

  LambdaRoot root{lam, "", std::vector<double>(m * nin, 0.0)};
  for (std::size_t i = 0; i < m; ++i) root.distribution[i * nin] = weights[i];
  ext.lambdas.push_back(root);

  const std::size_t n = src.size();
  ext.g = make_deterministic(nodes, [&](const std::vector<std::size_t>& outs) {
    const std::vector<std::size_t> x(outs.begin(), outs.begin() + static_cast<long>(n));
    const std::size_t i = outs[n] / nin;
    const auto z = unpack_ins(src, outs[n] % nin);
    const auto fi = fs[i].ins_for(x);
    std::vector<std::size_t> ins(n + 2, 0);
    for (std::size_t k = 0; k < n; ++k) ins[k] = (z[k] + fi[k]) % src[k].in_card;
    ins[n + 1] = pack_outs(src, x) * m + i;
    return ins;
  });
  return ext;
}

ReversibleExtension split_lambda(const ReversibleExtension& ext) {
  if (ext.lambdas.size() != 1 || !ext.lambdas.front().target.empty())
    throw PreconditionError("extension already has per-node lambda roots");
  const auto& gn = ext.g.nodes();
  const std::size_t n = ext.sources.size();
  std::vector<ClassicalNode> src(gn.begin(), gn.begin() + static_cast<long>(n));
  const std::size_t nin = in_space(src);
  const LambdaRoot& root = ext.lambdas.front();
  if (gn[n].out_card != nin || root.distribution.size() != nin || root.distribution[0] != 1.0)
    throw PreconditionError("only a single-component extension with z = 0 can be split");

  std::vector<ClassicalNode> nodes = src;
  ReversibleExtension out;
  out.sources = ext.sources;
  out.leaf = ext.leaf;
  for (const auto& s : src) {
    const std::string name = "lambda_" + s.name;
    nodes.push_back(ClassicalNode{name, 1, s.in_card});
    std::vector<double> dist(s.in_card, 0.0);
    dist[0] = 1.0;
    out.lambdas.push_back(LambdaRoot{name, s.name, dist});
  }
  nodes.push_back(gn[n + 1]);
  out.g = make_deterministic(nodes, [&](const std::vector<std::size_t>& outs) {
    std::vector<std::size_t> old(outs.begin(), outs.begin() + static_cast<long>(n));
    const std::vector<std::size_t> z(outs.begin() + static_cast<long>(n),
                                     outs.begin() + static_cast<long>(2 * n));
    old.push_back(pack_ins(src, z));
    old.push_back(0);
    const auto ins = ext.g.ins_for(old);
    std::vector<std::size_t> res(ins.begin(), ins.begin() + static_cast<long>(n));
    res.insert(res.end(), n, 0);
    res.push_back(ins[n + 1]);
    return res;
  });
  return out;
}

bool is_reversible(const ReversibleExtension& ext) {
  const auto& nodes = ext.g.nodes();
  if (out_space(nodes) != in_space(nodes)) return false;
  std::vector<bool> hit(in_space(nodes), false);
  for (auto v : ext.g.table()) {
    if (hit[v]) return false;
    hit[v] = true;
  }
  return true;
}

namespace {

struct ExtLayout {
  std::vector<std::size_t> src, lam;
  std::size_t leaf = 0;
};

ExtLayout layout(const ReversibleExtension& ext) {
  ExtLayout l;
  for (const auto& s : ext.sources) l.src.push_back(ext.g.node_index(s));
  for (const auto& r : ext.lambdas) {
    const std::size_t i = ext.g.node_index(r.name);
    const auto& n = ext.g.nodes()[i];
    if (n.in_card != 1) throw PreconditionError("lambda " + r.name + " is not a root");
    if (r.distribution.size() != n.out_card)
      throw DimensionError("lambda distribution for " + r.name + " has the wrong size");
    l.lam.push_back(i);
  }
  l.leaf = ext.g.node_index(ext.leaf);
  if (ext.g.nodes()[l.leaf].out_card != 1) throw PreconditionError("leaf must have out_card 1");
  if (l.src.size() + l.lam.size() + 1 != ext.g.nodes().size())
    throw LabelError("extension has nodes that are neither sources, lambdas nor the leaf");
  return l;
}

}  // namespace

ClassicalProcess extension_marginal(const ReversibleExtension& ext) {
  const ExtLayout l = layout(ext);
  const auto& gn = ext.g.nodes();
  std::vector<ClassicalNode> src;
  for (auto i : l.src) src.push_back(gn[i]);
  std::size_t N = 1;
  for (const auto& n : src) N *= n.in_card * n.out_card;
  ClassicalProcess proto(src, std::vector<double>(N, 0.0));
  std::vector<double> k(N, 0.0);
  for (std::size_t o = 0; o < ext.g.table().size(); ++o) {
    const auto outs = unpack_outs(gn, o);
    double w = 1.0;
    for (std::size_t r = 0; r < l.lam.size(); ++r) w *= ext.lambdas[r].distribution[outs[l.lam[r]]];
    if (w == 0.0) continue;
    const auto ins = unpack_ins(gn, ext.g.table()[o]);
    std::vector<std::size_t> si, so;
    for (auto i : l.src) {
      si.push_back(ins[i]);
      so.push_back(outs[i]);
    }
    k[proto.flat_index(si, so)] += w;
  }
  return ClassicalProcess(src, std::move(k));
}

DeterministicProcess extension_slice(const ReversibleExtension& ext,
                                     const std::vector<std::size_t>& lambda_values) {
  const ExtLayout l = layout(ext);
  if (lambda_values.size() != l.lam.size()) throw DimensionError("one value per lambda root");
  const auto& gn = ext.g.nodes();
  std::vector<ClassicalNode> src;
  for (auto i : l.src) src.push_back(gn[i]);
  return make_deterministic(src, [&](const std::vector<std::size_t>& x) {
    std::vector<std::size_t> outs(gn.size(), 0);
    for (std::size_t k = 0; k < l.src.size(); ++k) outs[l.src[k]] = x[k];
    for (std::size_t r = 0; r < l.lam.size(); ++r) outs[l.lam[r]] = lambda_values[r];
    const auto ins = ext.g.ins_for(outs);
    std::vector<std::size_t> res;
    for (auto i : l.src) res.push_back(ins[i]);
    return res;
  });
}

ClassicalCompatibility classical_compatibility_check(const ClassicalProcess& kp,
                                                     const DirectedGraph& g,
                                                     const ReversibleExtension& ext,
                                                     double tol) {
  const auto& nodes = kp.nodes();
  std::set<std::string> names;
  for (const auto& n : nodes) names.insert(n.name);
  if (g.vertices() != names) throw LabelError("graph vertices do not match the process nodes");
  const ExtLayout l = layout(ext);
  if (l.src.size() != nodes.size()) throw LabelError("extension sources do not match the process");
  const auto& gn = ext.g.nodes();
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& s = gn[l.src[k]];
    if (s.name != nodes[k].name || s.in_card != nodes[k].in_card ||
        s.out_card != nodes[k].out_card)
      throw LabelError("extension source " + s.name + " does not match the process");
  }
  std::set<std::string> targets;
  for (const auto& r : ext.lambdas) {
    if (r.target.empty() || !names.count(r.target))
      throw PreconditionError("lambda " + r.name + " must target one process node");
    if (!targets.insert(r.target).second)
      throw PreconditionError("node " + r.target + " has two lambda roots");
  }

  ClassicalCompatibility res;
  const ClassicalProcess marg = extension_marginal(ext);
  for (std::size_t e = 0; e < marg.kappa().size(); ++e)
    res.marginal_residual =
        std::max(res.marginal_residual, std::abs(marg.kappa()[e] - kp.kappa()[e]));
  if (res.marginal_residual > tol) res.violated.push_back("marginal");

  // Forbidden dependencies of each source's input.
  std::vector<std::set<std::size_t>> forbidden(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto pa = g.parents(nodes[k].name);
    for (std::size_t j = 0; j < nodes.size(); ++j)
      if (!pa.count(nodes[j].name)) forbidden[k].insert(l.src[j]);
    for (std::size_t r = 0; r < ext.lambdas.size(); ++r)
      if (ext.lambdas[r].target != nodes[k].name) forbidden[k].insert(l.lam[r]);
  }
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (std::size_t o = 0; o < ext.g.table().size(); ++o) {
    const auto outs = unpack_outs(gn, o);
    const auto ins = unpack_ins(gn, ext.g.table()[o]);
    for (std::size_t k = 0; k < nodes.size(); ++k)
      for (std::size_t v : forbidden[k]) {
        if (seen.count({v, k})) continue;
        for (std::size_t val = 0; val < gn[v].out_card; ++val) {
          if (val == outs[v]) continue;
          auto alt = outs;
          alt[v] = val;
          if (ext.g.ins_for(alt)[l.src[k]] != ins[l.src[k]]) {
            seen.insert({v, k});
            res.violated.push_back(gn[v].name + " -> " + nodes[k].name);
            break;
          }
        }
      }
  }
  res.compatible = res.violated.empty();
  return res;
}

// ------------------------------------------------------------ quantize

std::vector<QuantumNode> quantum_nodes(const std::vector<ClassicalNode>& nodes) {
  std::vector<QuantumNode> q;
  for (const auto& n : nodes) q.push_back(QuantumNode{n.name, n.in_card, n.out_card});
  return q;
}

ProcessOperator quantize(const ClassicalProcess& kp) {
  const auto n = static_cast<Eigen::Index>(kp.kappa().size());
  Matrix m = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) m(i, i) = kp.kappa()[static_cast<std::size_t>(i)];
  return ProcessOperator(quantum_nodes(kp.nodes()), std::move(m));
}

}  // namespace qcausal
