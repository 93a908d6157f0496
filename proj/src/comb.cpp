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

#include "qcausal/comb.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <set>

#include "qcausal/error.hpp"
#include "qcausal/markov.hpp"

namespace qcausal {

namespace {

using Mask = std::uint64_t;

// Nodes outside `keep` traced out completely.
LabeledOperator keep_nodes(const ProcessOperator& sigma, Mask keep) {
  Systems traced;
  const auto& nodes = sigma.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i)
    if (!(keep & (Mask{1} << i))) {
      traced.push_back(in_label(nodes[i]));
      traced.push_back(out_label(nodes[i]));
    }
  return partial_trace(sigma.op(), traced);
}

std::vector<std::size_t> order_indices(const ProcessOperator& sigma, const TotalOrder& order) {
  if (order.size() != sigma.nodes().size())
    throw LabelError("order must list every node exactly once");
  std::vector<std::size_t> idx;
  std::set<std::size_t> seen;
  for (const auto& name : order) {
    const std::size_t i = sigma.node_index(name);
    if (!seen.insert(i).second) throw LabelError("node " + name + " repeated in order");
    idx.push_back(i);
  }
  return idx;
}

}  // namespace

CombVerdict comb_check(const ProcessOperator& sigma, const TotalOrder& order, double tol) {
  const auto idx = order_indices(sigma, order);
  if (idx.size() > 63) throw BudgetError("too many nodes");
  CombVerdict v;
  v.order = order;
  Mask keep = 0;
  for (std::size_t i : idx) {
    keep |= Mask{1} << i;
    const LabeledOperator m = keep_nodes(sigma, keep);
    v.residuals.push_back(trace_replace_residual(m, {out_label(sigma.nodes()[i])}));
  }
  v.accepted = std::all_of(v.residuals.begin(), v.residuals.end(),
                           [tol](double r) { return r <= tol; });
  return v;
}

CombSearchResult comb_search(const ProcessOperator& sigma, double tol, std::size_t budget) {
  const auto& nodes = sigma.nodes();
  const std::size_t n = nodes.size();
  if (n > budget)
    throw BudgetError("comb search over " + std::to_string(n) + " nodes exceeds the budget of " +
                      std::to_string(budget));
  CombSearchResult res;
  res.scanned = 1;
  for (std::size_t k = 2; k <= n; ++k) res.scanned *= k;

  std::vector<std::size_t> by_name(n);
  for (std::size_t i = 0; i < n; ++i) by_name[i] = i;
  std::sort(by_name.begin(), by_name.end(),
            [&](std::size_t a, std::size_t b) { return nodes[a].name < nodes[b].name; });

  std::map<Mask, LabeledOperator> marginals;
  std::map<std::pair<Mask, std::size_t>, bool> memo;
  auto holds = [&](Mask keep, std::size_t last) {
    auto key = std::make_pair(keep, last);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    auto m = marginals.find(keep);
    if (m == marginals.end()) m = marginals.emplace(keep, keep_nodes(sigma, keep)).first;
    const bool ok = trace_replace_residual(m->second, {out_label(nodes[last])}) <= tol;
    memo.emplace(key, ok);
    return ok;
  };

  TotalOrder prefix;
  std::function<void(Mask)> dfs = [&](Mask used) {
    if (prefix.size() == n) {
      res.orders.push_back(prefix);
      return;
    }
    for (std::size_t i : by_name) {
      const Mask bit = Mask{1} << i;
      if (used & bit) continue;
      if (!holds(used | bit, i)) continue;
      prefix.push_back(nodes[i].name);
      dfs(used | bit);
      prefix.pop_back();
    }
  };
  dfs(0);
  return res;
}

double isometric_residual(const ProcessOperator& sigma) {
  const Matrix& s = sigma.matrix();
  const double ns = s.norm();
  if (ns == 0.0) return 0.0;
  Eigen::Index k = 0;
  s.diagonal().real().maxCoeff(&k);
  const double skk = s(k, k).real();
  if (skk <= 0.0) return 1.0;
  const Vector w = s.col(k) / std::sqrt(skk);
  return (s - w * w.adjoint()).norm() / ns;
}

bool is_isometric(const ProcessOperator& sigma, double tol) {
  return isometric_residual(sigma) <= tol;
}

UnitarySeparability unitary_causal_separability(const UnitaryProcess& up, double tol) {
  UnitarySeparability r;
  r.graph = causal_structure_unitary(up, tol);
  if (auto cyc = r.graph.find_cycle()) {
    r.separable = false;
    r.cycle = *cyc;
    return r;
  }
  r.separable = true;
  r.order = *r.graph.topological_order(up.process().node_names());
  r.comb = comb_check(up.process(), r.order, tol);
  return r;
}

// ------------------------------------------------------------ bipartite

namespace {

// Systems of a two-node process: A^in, A^out*, B^in, B^out*.
using Pattern = unsigned;  // bit k: system k carries a non-identity part

bool allowed_ab(Pattern p) {
  const bool ao = p & 2, bi = p & 4, bo = p & 8;
  if (bo) return false;
  if (ao && !bi) return false;
  return true;
}

bool allowed_ba(Pattern p) {
  const bool ai = p & 1, ao = p & 2, bo = p & 8;
  if (ao) return false;
  if (bo && !ai) return false;
  return true;
}

class TypeSplitter {
 public:
  explicit TypeSplitter(const Systems& systems) : systems_(systems) {}

  std::array<Matrix, 16> components(const Matrix& x) const {
    std::array<Matrix, 16> out;
    std::vector<std::pair<Matrix, Pattern>> parts{{x, 0}};
    for (unsigned k = 0; k < 4; ++k) {
      std::vector<std::pair<Matrix, Pattern>> next;
      for (auto& [m, p] : parts) {
        const Matrix d = trace_replace(LabeledOperator(systems_, m), {systems_[k]}).matrix();
        next.emplace_back(d, p);
        next.emplace_back(m - d, p | (1u << k));
      }
      parts = std::move(next);
    }
    for (auto& [m, p] : parts) out[p] = std::move(m);
    return out;
  }

 private:
  Systems systems_;
};

Matrix psd_part(const Matrix& m) {
  const Matrix h = (m + m.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<Matrix> es(h);
  const Eigen::VectorXd w = es.eigenvalues().cwiseMax(0.0);
  return es.eigenvectors() * w.asDiagonal() * es.eigenvectors().adjoint();
}

double min_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es((m + m.adjoint()) / 2.0, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

}  // namespace

SeparabilityVerdict bipartite_separability(const ProcessOperator& sigma, double tol,
                                           std::size_t max_iter) {
  if (sigma.nodes().size() != 2)
    throw PreconditionError("bipartite separability needs exactly two nodes");
  const std::string a = sigma.nodes()[0].name, b = sigma.nodes()[1].name;
  const Matrix& s = sigma.matrix();
  const double ns = s.norm();
  const double tr = s.trace().real();
  const Eigen::Index n = s.rows();

  SeparabilityVerdict v;
  v.first = {a, b};
  if (comb_check(sigma, {a, b}, tol).accepted) {
    v.status = SeparabilityStatus::Separable;
    v.p = 1.0;
    v.X = s;
    v.Y = Matrix::Zero(n, n);
    v.method = "comb " + a + " < " + b;
    return v;
  }
  if (comb_check(sigma, {b, a}, tol).accepted) {
    v.status = SeparabilityStatus::Separable;
    v.p = 0.0;
    v.X = Matrix::Zero(n, n);
    v.Y = s;
    v.method = "comb " + b + " < " + a;
    return v;
  }

  const TypeSplitter split(sigma.op().systems());
  const auto sc = split.components(s);
  auto project_affine = [&](const Matrix& x, const Matrix& y, Matrix& px, Matrix& py) {
    const auto xc = split.components(x);
    const auto yc = split.components(y);
    px = Matrix::Zero(n, n);
    py = Matrix::Zero(n, n);
    for (Pattern p = 0; p < 16; ++p) {
      const bool in_ab = allowed_ab(p), in_ba = allowed_ba(p);
      if (in_ab && in_ba) {
        const Matrix c = (xc[p] + sc[p] - yc[p]) / 2.0;
        px += c;
        py += sc[p] - c;
      } else if (in_ab) {
        px += sc[p];
      } else if (in_ba) {
        py += sc[p];
      }
    }
  };

  Matrix x, y;
  project_affine(s / 2.0, s / 2.0, x, y);
  Matrix px = Matrix::Zero(n, n), py = px, qx = px, qy = px;
  v.method = "dykstra";
  v.residual = std::max({0.0, -min_eig(x), -min_eig(y)}) / ns;
  std::size_t it = 0;
  while (v.residual > tol && it < max_iter) {
    ++it;
    const Matrix cx = psd_part(x + px), cy = psd_part(y + py);
    px += x - cx;
    py += y - cy;
    Matrix nx, ny;
    project_affine(cx + qx, cy + qy, nx, ny);
    qx += cx - nx;
    qy += cy - ny;
    x = std::move(nx);
    y = std::move(ny);
    v.residual = std::max({0.0, -min_eig(x), -min_eig(y)}) / ns;
  }
  v.iterations = it;
  v.X = x;
  v.Y = y;
  v.p = x.trace().real() / tr;

  // Independent re-check before certifying.
  const bool psd_ok = min_eig(x) >= -tol * ns && min_eig(y) >= -tol * ns;
  const bool sum_ok = (x + y - s).norm() <= tol * ns;
  auto in_order = [&](const Matrix& m, const TotalOrder& order) {
    return m.norm() <= tol * ns ||
           comb_check(ProcessOperator(sigma.nodes(), m), order, tol).accepted;
  };
  const bool comb_ok = in_order(x, {a, b}) && in_order(y, {b, a});
  v.status = psd_ok && sum_ok && comb_ok ? SeparabilityStatus::Separable
                                         : SeparabilityStatus::Inconclusive;
  return v;
}

}  // namespace qcausal
