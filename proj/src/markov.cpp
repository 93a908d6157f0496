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

#include "qcausal/markov.hpp"

#include <algorithm>
#include <sstream>

#include "qcausal/error.hpp"

namespace qcausal {

double channel_no_influence_residual(const ChannelOperator& rho_u,
                                     const SystemLabel& in_sys,
                                     const SystemLabel& out_sys) {
  const auto has = [](const Systems& s, const SystemLabel& l) {
    return std::any_of(s.begin(), s.end(), [&](const SystemLabel& x) { return x.same_slot(l); });
  };
  if (!has(rho_u.inputs(), in_sys)) throw LabelError(in_sys.str() + " is not a channel input");
  if (!has(rho_u.outputs(), out_sys))
    throw LabelError(out_sys.str() + " is not a channel output");
  Systems traced;
  for (const auto& o : rho_u.outputs())
    if (!o.same_slot(out_sys)) traced.push_back(o);
  const LabeledOperator m = partial_trace(rho_u.base(), traced);
  return trace_replace_residual(m, {m.systems()[m.index_of(in_sys)]});
}

bool channel_no_influence(const ChannelOperator& rho_u, const SystemLabel& in_sys,
                          const SystemLabel& out_sys, double tol) {
  return channel_no_influence_residual(rho_u, in_sys, out_sys) <= tol;
}

double no_influence_residual(const UnitaryProcess& up, const std::string& from,
                             const std::string& to) {
  const LabeledOperator m = up.influence_marginal(to);
  return trace_replace_residual(m, {out_label(up.process().node(from))});
}

bool no_influence(const UnitaryProcess& up, const std::string& from,
                  const std::string& to, double tol) {
  return no_influence_residual(up, from, to) <= tol;
}

DirectedGraph causal_structure_unitary(const UnitaryProcess& up, double tol) {
  DirectedGraph g(up.process().node_names());
  for (const auto& target : up.nodes()) {
    const LabeledOperator m = up.influence_marginal(target.name);
    for (const auto& source : up.nodes()) {
      if (source.name == target.name) continue;
      if (trace_replace_residual(m, {out_label(source)}) > tol)
        g.add_edge(source.name, target.name);
    }
  }
  return g;
}

ChannelFactor marginal_factor(const ProcessOperator& sigma, const std::string& node,
                              const std::set<std::string>& parents) {
  sigma.node_index(node);
  for (const auto& p : parents) sigma.node_index(p);
  Systems traced, inputs;
  double norm = 1.0;
  for (const auto& n : sigma.nodes()) {
    if (n.name != node) traced.push_back(in_label(n));
    if (parents.count(n.name)) {
      inputs.push_back(out_label(n));
    } else {
      traced.push_back(out_label(n));
      norm *= static_cast<double>(n.d_out);
    }
  }
  const LabeledOperator t = partial_trace(sigma.op(), traced);
  LabeledOperator base(t.systems(), t.matrix() / norm);
  return ChannelFactor{node, parents,
                       ChannelOperator(std::move(base), {in_label(sigma.node(node))}, inputs)};
}

namespace {

Systems union_systems(const Systems& a, const Systems& b, const Systems& order) {
  Systems out;
  for (const auto& s : order) {
    const auto in = [&](const Systems& x) {
      return std::any_of(x.begin(), x.end(), [&](const SystemLabel& y) { return y.same_slot(s); });
    };
    if (in(a) || in(b)) out.push_back(s);
  }
  return out;
}

}  // namespace

MarkovFactorization markov_check(const ProcessOperator& sigma,
                                 const DirectedGraph& graph, double tol) {
  std::set<std::string> names;
  for (const auto& n : sigma.nodes()) names.insert(n.name);
  if (graph.vertices() != names)
    throw LabelError("graph vertices do not match the process nodes");

  MarkovFactorization mf;
  std::ostringstream why;
  for (const auto& n : sigma.nodes()) {
    mf.factors.push_back(marginal_factor(sigma, n.name, graph.parents(n.name)));
    const auto& f = mf.factors.back();
    const PsdCertificate cert = psd_check(f.op.base().matrix(), tol);
    mf.factor_min_eigenvalue.push_back(cert.min_eigenvalue);
    mf.factor_tp_residual.push_back(f.op.tp_residual());
    if (!cert.psd) why << "factor " << n.name << " is not positive; ";
    if (mf.factor_tp_residual.back() > tol) why << "factor " << n.name << " is not trace preserving; ";
  }

  const std::size_t k = mf.factors.size();
  const Systems& full = sigma.op().systems();
  mf.commutation_residuals = Eigen::MatrixXd::Zero(k, k);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) {
      const auto& a = mf.factors[i].op.base();
      const auto& b = mf.factors[j].op.base();
      const Systems u = union_systems(a.systems(), b.systems(), full);
      const Matrix ea = embed(a, u).matrix();
      const Matrix eb = embed(b, u).matrix();
      const double scale = ea.norm() * eb.norm();
      const double r = scale == 0.0 ? 0.0 : (ea * eb - eb * ea).norm() / scale;
      mf.commutation_residuals(i, j) = mf.commutation_residuals(j, i) = r;
      if (r > tol)
        why << "factors " << mf.factors[i].child << " and " << mf.factors[j].child
            << " do not commute; ";
    }

  LabeledOperator prod = embed(mf.factors.front().op.base(), full);
  for (std::size_t i = 1; i < k; ++i) prod = apply_left(mf.factors[i].op.base(), prod);
  mf.product_residual = relative_distance(prod.matrix(), sigma.matrix());
  if (mf.product_residual > tol) why << "product of factors differs from the process; ";

  mf.reason = why.str();
  mf.accepted = mf.reason.empty();
  return mf;
}

FaithfulnessReport faithfulness_check(const DirectedGraph& graph,
                                      const MarkovFactorization& factors, double tol) {
  FaithfulnessReport rep;
  rep.faithful = true;
  for (const auto& e : graph.edges()) {
    const ChannelFactor* f = nullptr;
    for (const auto& c : factors.factors)
      if (c.child == e.second) f = &c;
    if (!f) throw LabelError("no factor for node " + e.second);
    const auto& base = f->op.base();
    const SystemLabel& parent = base.find(e.first, true);
    EdgeSignal s;
    s.residual = trace_replace_residual(base, {parent});
    s.signalling = s.residual > tol;
    rep.edges[e] = s;
    rep.faithful = rep.faithful && s.signalling;
  }
  return rep;
}

CompatibilityReport compatibility_check(const ProcessOperator& sigma,
                                        const DirectedGraph& graph,
                                        const UnitaryProcess& extension,
                                        const std::vector<LambdaState>& lambdas,
                                        double tol) {
  std::set<std::string> names;
  for (const auto& n : sigma.nodes()) names.insert(n.name);
  if (graph.vertices() != names)
    throw LabelError("graph vertices do not match the process nodes");
  const ProcessOperator& ext = extension.process();
  for (const auto& n : sigma.nodes()) {
    const QuantumNode& e = ext.node(n.name);
    if (e.d_in != n.d_in || e.d_out != n.d_out)
      throw DimensionError("extension node " + n.name + " has different dimensions");
  }
  std::set<std::string> roots;
  for (const auto& l : lambdas) {
    const QuantumNode& r = ext.node(l.root);
    if (r.d_in != 1) throw LabelError("lambda " + l.root + " is not a root node");
    if (!names.count(l.target)) throw LabelError("lambda target " + l.target + " unknown");
    if (names.count(l.root) || !roots.insert(l.root).second)
      throw LabelError("lambda root " + l.root + " clashes with another node");
    if (l.state.rows() != static_cast<Eigen::Index>(r.d_out) ||
        l.state.cols() != static_cast<Eigen::Index>(r.d_out))
      throw DimensionError("lambda state for " + l.root + " has the wrong size");
  }
  std::vector<QuantumNode> leaves;
  for (const auto& n : ext.nodes())
    if (!names.count(n.name) && !roots.count(n.name)) leaves.push_back(n);
  if (leaves.size() != 1 || leaves.front().d_out != 1)
    throw LabelError("extension must have exactly one leaf node besides the lambdas");
  const QuantumNode& leaf = leaves.front();

  CompatibilityReport rep;
  Systems keep;
  for (const auto& s : ext.op().systems())
    if (s.name != leaf.name) keep.push_back(s);
  LabeledOperator marg = extension.cj().reduced(keep);
  for (const auto& l : lambdas) {
    const QuantumNode& r = ext.node(l.root);
    marg = contract(marg, LabeledOperator({out_label(r)}, l.state));
    marg = partial_trace(marg, {in_label(r)});
  }
  rep.marginal_residual = relative_distance(ProcessOperator(sigma.nodes(), marg).matrix(),
                                            sigma.matrix());
  if (rep.marginal_residual > tol) rep.violated.push_back("marginal");

  for (const auto& target : sigma.nodes()) {
    const LabeledOperator m = extension.influence_marginal(target.name);
    const auto pa = graph.parents(target.name);
    for (const auto& source : sigma.nodes()) {
      if (source.name == target.name || pa.count(source.name)) continue;
      if (trace_replace_residual(m, {out_label(source)}) > tol)
        rep.violated.push_back(source.name + " -> " + target.name);
    }
    for (const auto& l : lambdas) {
      if (l.target == target.name) continue;
      if (trace_replace_residual(m, {out_label(ext.node(l.root))}) > tol)
        rep.violated.push_back(l.root + " -> " + target.name);
    }
  }
  rep.compatible = rep.violated.empty();
  return rep;
}

DiscoveryResult discover(const ProcessOperator& sigma, double tol) {
  DiscoveryResult res;
  res.graph = DirectedGraph(sigma.node_names());
  for (const auto& target : sigma.nodes()) {
    Systems traced;
    for (const auto& n : sigma.nodes())
      if (n.name != target.name) traced.push_back(in_label(n));
    const LabeledOperator m = partial_trace(sigma.op(), traced);
    for (const auto& source : sigma.nodes()) {
      if (source.name == target.name) continue;
      const double r = trace_replace_residual(m, {out_label(source)});
      if (r > tol) {
        res.graph.add_edge(source.name, target.name);
        res.edge_residuals[{source.name, target.name}] = r;
      }
    }
  }
  res.markov = markov_check(sigma, res.graph, tol);
  return res;
}

}  // namespace qcausal
