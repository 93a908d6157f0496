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

#include "qcausal/process.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

#include "qcausal/error.hpp"

namespace qcausal {

SystemLabel in_label(const QuantumNode& node) {
  return SystemLabel(node.name, node.d_in, false);
}

SystemLabel out_label(const QuantumNode& node) {
  return SystemLabel(node.name, node.d_out, true);
}

Systems process_systems(const std::vector<QuantumNode>& nodes) {
  Systems sys;
  for (const auto& n : nodes) {
    sys.push_back(in_label(n));
    sys.push_back(out_label(n));
  }
  return sys;
}

namespace {

void check_nodes(const std::vector<QuantumNode>& nodes) {
  std::set<std::string> names;
  for (const auto& n : nodes) {
    if (n.name.empty()) throw LabelError("node name must not be empty");
    if (n.d_in == 0 || n.d_out == 0)
      throw DimensionError("node " + n.name + " has a zero dimension");
    if (!names.insert(n.name).second) throw LabelError("duplicate node " + n.name);
  }
}

}  // namespace

ProcessOperator::ProcessOperator(std::vector<QuantumNode> nodes, Matrix matrix)
    : nodes_(std::move(nodes)) {
  check_nodes(nodes_);
  op_ = LabeledOperator(process_systems(nodes_), std::move(matrix));
}

ProcessOperator::ProcessOperator(std::vector<QuantumNode> nodes,
                                 const LabeledOperator& op)
    : nodes_(std::move(nodes)) {
  check_nodes(nodes_);
  op_ = reorder(op, process_systems(nodes_));
}

std::size_t ProcessOperator::node_index(const std::string& name) const {
  for (std::size_t i = 0; i < nodes_.size(); ++i)
    if (nodes_[i].name == name) return i;
  throw LabelError("unknown node " + name);
}

const QuantumNode& ProcessOperator::node(const std::string& name) const {
  return nodes_[node_index(name)];
}

double ProcessOperator::out_dim_product() const {
  double p = 1.0;
  for (const auto& n : nodes_) p *= static_cast<double>(n.d_out);
  return p;
}

std::vector<std::string> ProcessOperator::node_names() const {
  std::vector<std::string> names;
  for (const auto& n : nodes_) names.push_back(n.name);
  return names;
}

std::string type_name(const std::vector<QuantumNode>& nodes, TypeMask mask) {
  if (mask == 0) return "identity";
  std::string out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    for (int side = 0; side < 2; ++side) {
      if (mask & (TypeMask{1} << (2 * i + side))) {
        if (!out.empty()) out += ' ';
        out += nodes[i].name + (side == 0 ? "^in" : "^out");
      }
    }
  }
  return out;
}

ValidityVerdict validate_process(const ProcessOperator& sigma, double tol) {
  ValidityVerdict v;
  const Matrix& m = sigma.matrix();
  v.hermiticity_residual = hermiticity_residual(m);
  v.hermitian = v.hermiticity_residual <= tol;

  const PsdCertificate cert = psd_check(m, tol);
  v.psd = cert.psd;
  v.min_eigenvalue = cert.min_eigenvalue;

  v.trace_value = m.trace().real();
  v.trace_expected = sigma.out_dim_product();
  v.trace = std::abs(v.trace_value - v.trace_expected) <=
            tol * std::max(1.0, v.trace_expected);

  const double threshold = tol * m.norm();
  const auto norms = hs_expand(sigma.op()).type_norms();
  const auto& nodes = sigma.nodes();
  v.type_terms = true;
  for (const auto& [mask, norm] : norms) {
    if (mask == 0 || norm <= threshold) continue;
    bool ok = false;
    for (std::size_t i = 0; i < nodes.size() && !ok; ++i) {
      const bool in = mask & (TypeMask{1} << (2 * i));
      const bool out = mask & (TypeMask{1} << (2 * i + 1));
      ok = in && !out;
    }
    if (!ok) {
      v.type_terms = false;
      const std::string name = type_name(nodes, mask);
      v.offending_types.push_back(name);
      v.offending_norms[name] = norm;
    }
  }
  return v;
}

InstrumentElement instrument_element(const QuantumNode& node,
                                     const std::vector<Matrix>& kraus) {
  const ChannelOperator ch = cj_from_kraus(kraus, SystemLabel(node.name, node.d_in, true),
                                           SystemLabel(node.name, node.d_out, false));
  // Transposition moves the CJ operator onto (A^out)* ⊗ A^in.
  LabeledOperator tau({out_label(node), in_label(node)}, ch.base().matrix().transpose());
  return InstrumentElement{node, std::move(tau)};
}

Instrument make_instrument(const QuantumNode& node,
                           const std::vector<std::vector<Matrix>>& kraus_sets) {
  Instrument ins{node, {}};
  for (const auto& k : kraus_sets) ins.elements.push_back(instrument_element(node, k));
  return ins;
}

double element_tp_residual(const InstrumentElement& element) {
  const LabeledOperator t = partial_trace(element.tau, {out_label(element.node)});
  return relative_distance(t.matrix(), identity_operator(t.systems()).matrix());
}

double instrument_tp_residual(const Instrument& instrument) {
  if (instrument.elements.empty()) return 1.0;
  Matrix sum = Matrix::Zero(instrument.elements.front().tau.matrix().rows(),
                            instrument.elements.front().tau.matrix().cols());
  for (const auto& e : instrument.elements)
    sum += reorder(e.tau, instrument.elements.front().tau.systems()).matrix();
  return element_tp_residual(InstrumentElement{
      instrument.node,
      LabeledOperator(instrument.elements.front().tau.systems(), sum)});
}

double Distribution::at(const std::vector<std::size_t>& outcome) const {
  if (outcome.size() != shape.size()) throw DimensionError("outcome arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (outcome[i] >= shape[i]) throw DimensionError("outcome out of range");
    idx = idx * shape[i] + outcome[i];
  }
  return p[idx];
}

double Distribution::total() const {
  double t = 0.0;
  for (double x : p) t += x;
  return t;
}

Distribution joint_probabilities(const ProcessOperator& sigma,
                                 const std::vector<Instrument>& instruments) {
  const auto& nodes = sigma.nodes();
  if (instruments.size() != nodes.size())
    throw LabelError("one instrument per node is required");
  std::vector<const Instrument*> ordered;
  for (const auto& n : nodes) {
    const Instrument* found = nullptr;
    for (const auto& ins : instruments)
      if (ins.node.name == n.name) found = &ins;
    if (!found) throw LabelError("no instrument for node " + n.name);
    if (found->node.d_in != n.d_in || found->node.d_out != n.d_out)
      throw DimensionError("instrument dimensions do not match node " + n.name);
    ordered.push_back(found);
  }
  Distribution dist;
  for (const auto* ins : ordered) dist.shape.push_back(ins->elements.size());

  std::function<void(const LabeledOperator&, std::size_t)> rec =
      [&](const LabeledOperator& cur, std::size_t depth) {
        if (depth == ordered.size()) {
          dist.p.push_back(cur.matrix()(0, 0).real());
          return;
        }
        for (const auto& e : ordered[depth]->elements) rec(contract(cur, e.tau), depth + 1);
      };
  rec(sigma.op(), 0);
  return dist;
}

namespace {

std::vector<std::size_t> subset_indices(const ProcessOperator& sigma,
                                        const std::vector<std::string>& S) {
  std::vector<std::size_t> idx;
  for (const auto& s : S) {
    const std::size_t i = sigma.node_index(s);
    if (std::find(idx.begin(), idx.end(), i) != idx.end())
      throw LabelError("node " + s + " listed twice");
    idx.push_back(i);
  }
  if (idx.empty() || idx.size() >= sigma.nodes().size())
    throw LabelError("node subset must be proper and nonempty");
  return idx;
}

}  // namespace

double no_signalling_residual(const ProcessOperator& sigma,
                              const std::vector<std::string>& S) {
  const auto idx = subset_indices(sigma, S);
  if (idx.size() > 16) throw BudgetError("node subset too large");
  const auto& nodes = sigma.nodes();
  double worst = 0.0;
  for (std::size_t t = 1; t < (std::size_t{1} << idx.size()); ++t) {
    Systems traced;
    std::vector<std::size_t> active;
    for (std::size_t k = 0; k < idx.size(); ++k) {
      if (t & (std::size_t{1} << k)) {
        active.push_back(idx[k]);
      } else {
        traced.push_back(in_label(nodes[idx[k]]));
        traced.push_back(out_label(nodes[idx[k]]));
      }
    }
    const LabeledOperator x = partial_trace(sigma.op(), traced);
    LabeledOperator y = x;
    for (auto a : active) {
      const LabeledOperator d = trace_replace(y, {out_label(nodes[a])});
      y = LabeledOperator(y.systems(), y.matrix() - d.matrix());
    }
    const double nx = x.matrix().norm();
    if (nx > 0.0) worst = std::max(worst, y.matrix().norm() / nx);
  }
  return worst;
}

bool no_signalling(const ProcessOperator& sigma, const std::vector<std::string>& S,
                   double tol) {
  return no_signalling_residual(sigma, S) <= tol;
}

ProcessOperator conditional_process(const ProcessOperator& sigma,
                                    const std::string& node,
                                    const InstrumentElement& tau, double tol) {
  const QuantumNode& n = sigma.node(node);
  if (tau.node.name != n.name || tau.node.d_in != n.d_in || tau.node.d_out != n.d_out)
    throw LabelError("instrument element does not belong to node " + node);
  std::vector<std::string> rest;
  std::vector<QuantumNode> rest_nodes;
  for (const auto& m : sigma.nodes())
    if (m.name != node) {
      rest.push_back(m.name);
      rest_nodes.push_back(m);
    }
  // Deterministic elements are always admissible; otherwise the remaining
  // nodes must not signal to the conditioned node.
  if (!rest.empty() && element_tp_residual(tau) > tol &&
      !no_signalling(sigma, rest, tol)) {
    throw PreconditionError("nodes other than " + node + " signal to " + node +
                            "; conditional process is not well defined");
  }
  const LabeledOperator r = contract(sigma.op(), tau.tau);
  const double tr = r.matrix().trace().real();
  if (std::abs(tr) <= tol * std::max(1.0, r.matrix().norm()))
    throw PreconditionError("impossible outcome: Tr[sigma tau] vanishes");
  double target = 1.0;
  for (const auto& m : rest_nodes) target *= static_cast<double>(m.d_out);
  return ProcessOperator(rest_nodes,
                         LabeledOperator(r.systems(), r.matrix() * (target / tr)));
}

ProcessOperator extend_nodes(const ProcessOperator& sigma,
                             const LabeledOperator& ancilla,
                             const std::map<std::string, std::string>& owner,
                             double tol) {
  for (const auto& s : ancilla.systems()) {
    if (s.dual) throw LabelError("ancilla system " + s.str() + " must be primal");
    auto it = owner.find(s.name);
    if (it == owner.end()) throw LabelError("ancilla system " + s.name + " has no owner");
    sigma.node_index(it->second);
  }
  const Matrix& a = ancilla.matrix();
  if (hermiticity_residual(a) > tol || !psd_check(a, tol).psd ||
      std::abs(a.trace().real() - 1.0) > tol)
    throw PreconditionError("ancilla must be a density operator");

  LabeledOperator joint = tensor(sigma.op(), ancilla);
  std::vector<QuantumNode> nodes = sigma.nodes();
  for (auto& n : nodes) {
    Systems parts{in_label(n)};
    for (const auto& s : ancilla.systems())
      if (owner.at(s.name) == n.name) parts.push_back(s);
    if (parts.size() == 1) continue;
    const std::size_t d = total_dim(parts);
    joint = merge_systems(joint, parts, SystemLabel(n.name, d, false));
    n.d_in = d;
  }
  return ProcessOperator(nodes, joint);
}

ProcessOperator comb_from_circuit(const LabeledOperator& initial_state,
                                  const std::vector<ChannelOperator>& channels,
                                  const std::vector<NodeSlot>& slots) {
  for (const auto& s : initial_state.systems())
    if (s.dual) throw LabelError("initial state system " + s.str() + " must be primal");
  LabeledOperator acc = initial_state;
  for (const auto& ch : channels) acc = link(acc, ch.base());

  const std::string tmp = "\x02slot:";
  std::vector<QuantumNode> nodes;
  for (const auto& slot : slots) {
    nodes.push_back(QuantumNode{slot.node, slot.d_in, slot.d_out});
    const SystemLabel tin(tmp + slot.node, slot.d_in, false);
    const SystemLabel tout(tmp + slot.node, slot.d_out, true);
    bool found_in = false;
    for (const auto& s : acc.systems())
      if (!s.dual && s.name == slot.in_wire) {
        if (s.dim != slot.d_in)
          throw DimensionError("wire " + slot.in_wire + " has dimension " +
                               std::to_string(s.dim) + " but slot " + slot.node +
                               " expects " + std::to_string(slot.d_in));
        acc = relabel(acc, s, tin);
        found_in = true;
        break;
      }
    if (!found_in) {
      if (slot.d_in != 1)
        throw DimensionError("slot " + slot.node + " input wire " + slot.in_wire +
                             " is not produced by the circuit");
      acc = tensor(acc, identity_operator({tin}));
    }
    bool found_out = false;
    for (const auto& s : acc.systems())
      if (s.dual && s.name == slot.out_wire) {
        if (s.dim != slot.d_out)
          throw DimensionError("wire " + slot.out_wire + " has dimension " +
                               std::to_string(s.dim) + " but slot " + slot.node +
                               " emits " + std::to_string(slot.d_out));
        acc = relabel(acc, s, tout);
        found_out = true;
        break;
      }
    if (!found_out) acc = tensor(acc, identity_operator({tout}));
  }
  Systems discard;
  for (const auto& s : acc.systems()) {
    if (s.name.rfind(tmp, 0) == 0) continue;
    if (s.dual)
      throw LabelError("channel input " + s.name + " is not fed by any node output");
    discard.push_back(s);
  }
  acc = partial_trace(acc, discard);
  for (const auto& n : nodes) {
    acc = relabel(acc, SystemLabel(tmp + n.name, n.d_in, false), in_label(n));
    acc = relabel(acc, SystemLabel(tmp + n.name, n.d_out, true), out_label(n));
  }
  return ProcessOperator(nodes, acc);
}

}  // namespace qcausal
