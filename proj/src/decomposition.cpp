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

#include "qcausal/decomposition.hpp"

#include <unsupported/Eigen/KroneckerProduct>

#include <map>
#include <set>

#include "qcausal/error.hpp"
#include "qcausal/markov.hpp"

namespace qcausal {

namespace {

std::size_t wires_dim(const Wires& w) {
  std::size_t d = 1;
  for (const auto& x : w) d *= x.dim;
  return d;
}

// new_to_old[n] for the composite index after permuting wires to `perm`.
std::vector<Eigen::Index> permutation_map(const Wires& wires,
                                          const std::vector<std::size_t>& perm) {
  const std::size_t k = wires.size();
  std::vector<std::size_t> new_dims(k), old_stride(k);
  std::size_t s = 1;
  for (std::size_t i = k; i-- > 0;) {
    old_stride[i] = s;
    s *= wires[i].dim;
  }
  for (std::size_t i = 0; i < k; ++i) new_dims[i] = wires[perm[i]].dim;
  std::vector<Eigen::Index> map(s);
  std::vector<std::size_t> digit(k, 0);
  for (std::size_t n = 0; n < s; ++n) {
    std::size_t old = 0;
    for (std::size_t i = 0; i < k; ++i) old += digit[i] * old_stride[perm[i]];
    map[n] = static_cast<Eigen::Index>(old);
    for (std::size_t i = k; i-- > 0;) {
      if (++digit[i] < new_dims[i]) break;
      digit[i] = 0;
    }
  }
  return map;
}

std::size_t wire_index(const Wires& w, const std::string& name) {
  for (std::size_t i = 0; i < w.size(); ++i)
    if (w[i].name == name) return i;
  throw LabelError("no wire named " + name);
}

void check_unique(const Wires& w) {
  std::set<std::string> seen;
  for (const auto& x : w) {
    if (x.dim == 0) throw DimensionError("wire " + x.name + " has dimension zero");
    if (!seen.insert(x.name).second) throw LabelError("wire " + x.name + " listed twice");
  }
}

// Full permutation from a partial name list; unlisted wires must be trivial.
std::vector<std::size_t> order_perm(const Wires& w, const std::vector<std::string>& names) {
  std::vector<std::size_t> perm;
  std::vector<bool> used(w.size(), false);
  for (const auto& n : names) {
    const std::size_t i = wire_index(w, n);
    if (used[i]) throw LabelError("wire " + n + " listed twice");
    used[i] = true;
    perm.push_back(i);
  }
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!used[i]) {
      if (w[i].dim != 1) throw LabelError("wire " + w[i].name + " missing from order");
      perm.push_back(i);
    }
  return perm;
}

}  // namespace

LabeledMap::LabeledMap(Wires outs, Wires ins, Matrix matrix)
    : outs_(std::move(outs)), ins_(std::move(ins)), m_(std::move(matrix)) {
  check_unique(outs_);
  check_unique(ins_);
  if (static_cast<std::size_t>(m_.rows()) != wires_dim(outs_) ||
      static_cast<std::size_t>(m_.cols()) != wires_dim(ins_))
    throw DimensionError("map matrix does not match its wires");
}

LabeledMap LabeledMap::identity(const Wires& wires) {
  const auto d = static_cast<Eigen::Index>(wires_dim(wires));
  return LabeledMap(wires, wires, Matrix::Identity(d, d));
}

LabeledMap LabeledMap::then(const LabeledMap& gate) const {
  std::vector<std::size_t> perm;
  std::vector<bool> used(outs_.size(), false);
  for (const auto& g : gate.ins()) {
    const std::size_t i = wire_index(outs_, g.name);
    if (outs_[i].dim != g.dim)
      throw DimensionError("wire " + g.name + " has dimension " + std::to_string(outs_[i].dim) +
                           ", gate expects " + std::to_string(g.dim));
    used[i] = true;
    perm.push_back(i);
  }
  Wires rest;
  for (std::size_t i = 0; i < outs_.size(); ++i)
    if (!used[i]) {
      perm.push_back(i);
      rest.push_back(outs_[i]);
    }
  const auto map = permutation_map(outs_, perm);
  Matrix permuted(m_.rows(), m_.cols());
  for (Eigen::Index r = 0; r < m_.rows(); ++r) permuted.row(r) = m_.row(map[r]);
  const auto dr = static_cast<Eigen::Index>(wires_dim(rest));
  Matrix out = Eigen::kroneckerProduct(gate.matrix(), Matrix::Identity(dr, dr)).eval() * permuted;
  Wires new_outs = gate.outs();
  new_outs.insert(new_outs.end(), rest.begin(), rest.end());
  return LabeledMap(std::move(new_outs), ins_, std::move(out));
}

Matrix LabeledMap::matrix(const std::vector<std::string>& out_order,
                          const std::vector<std::string>& in_order) const {
  const auto rmap = permutation_map(outs_, order_perm(outs_, out_order));
  const auto cmap = permutation_map(ins_, order_perm(ins_, in_order));
  Matrix out(m_.rows(), m_.cols());
  for (Eigen::Index r = 0; r < m_.rows(); ++r)
    for (Eigen::Index c = 0; c < m_.cols(); ++c) out(r, c) = m_(rmap[r], cmap[c]);
  return out;
}

LabeledMap block_projection(const Wire& from, std::size_t offset, const Wires& parts) {
  const std::size_t d = wires_dim(parts);
  if (offset + d > from.dim)
    throw DimensionError("block of size " + std::to_string(d) + " at offset " +
                         std::to_string(offset) + " overflows " + from.name);
  Matrix m = Matrix::Zero(static_cast<Eigen::Index>(d), static_cast<Eigen::Index>(from.dim));
  for (std::size_t i = 0; i < d; ++i) m(i, offset + i) = 1.0;
  return LabeledMap(parts, {from}, std::move(m));
}

LabeledMap block_injection(const Wires& parts, const Wire& to, std::size_t offset) {
  const LabeledMap p = block_projection(to, offset, parts);
  return LabeledMap({to}, parts, p.matrix().adjoint());
}

// ------------------------------------------------------------- SWITCH

namespace {

void expect_shape(const Matrix& m, std::size_t rows, std::size_t cols, const std::string& what) {
  if (static_cast<std::size_t>(m.rows()) != rows || static_cast<std::size_t>(m.cols()) != cols)
    throw DimensionError(what + " is " + std::to_string(m.rows()) + "x" +
                         std::to_string(m.cols()) + ", expected " + std::to_string(rows) + "x" +
                         std::to_string(cols));
}

std::size_t block_total(const std::vector<std::pair<std::size_t, std::size_t>>& dims) {
  std::size_t t = 0;
  for (const auto& [l, r] : dims) t += l * r;
  return t;
}

void check_switch(const SwitchParts& p) {
  const std::size_t n = p.V.size();
  if (p.W.size() != n || p.p_dims.size() != n || p.f_dims.size() != n || n == 0)
    throw DimensionError("SWITCH parts need the same nonzero number of V, W and block dims");
  const std::size_t dp = block_total(p.p_dims), df = block_total(p.f_dims);
  expect_shape(p.S, dp, dp, "S");
  expect_shape(p.T, df, df, "T");
  for (std::size_t i = 0; i < n; ++i) {
    const std::string b = " (block " + std::to_string(i) + ")";
    expect_shape(p.V[i], p.d_b_in * p.f_dims[i].first, p.d_a_out * p.p_dims[i].first, "V" + b);
    expect_shape(p.W[i], p.f_dims[i].second * p.d_a_in, p.p_dims[i].second * p.d_b_out, "W" + b);
  }
}

bool signals(const Matrix& u, const Systems& outs, const Systems& ins, std::size_t from,
             std::size_t to, double tol) {
  const LabeledVector v = cj_vector(u, outs, ins);
  Systems dual_ins;
  for (const auto& s : ins) dual_ins.emplace_back(s.name, s.dim, true);
  const ChannelOperator ch(v.projector(), outs, dual_ins);
  return !channel_no_influence(ch, dual_ins[from], outs[to], tol);
}

}  // namespace

Matrix reconstruct(const SwitchParts& p) {
  check_switch(p);
  const std::size_t dp = block_total(p.p_dims), df = block_total(p.f_dims);
  const Wire a_out{"A_out", p.d_a_out}, b_out{"B_out", p.d_b_out}, p_out{"P_out", dp};
  const Wire a_in{"A_in", p.d_a_in}, b_in{"B_in", p.d_b_in}, f_sum{"F_sum", df}, f_in{"F_in", df};
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(p.d_a_in * p.d_b_in * df),
                          static_cast<Eigen::Index>(p.d_a_out * p.d_b_out * dp));
  std::size_t po = 0, fo = 0;
  for (std::size_t i = 0; i < p.V.size(); ++i) {
    const Wire pl{"P_L", p.p_dims[i].first}, pr{"P_R", p.p_dims[i].second};
    const Wire fl{"F_L", p.f_dims[i].first}, fr{"F_R", p.f_dims[i].second};
    const LabeledMap m = LabeledMap::identity({a_out, b_out, p_out})
                             .then(LabeledMap({p_out}, {p_out}, p.S))
                             .then(block_projection(p_out, po, {pl, pr}))
                             .then(LabeledMap({b_in, fl}, {a_out, pl}, p.V[i]))
                             .then(LabeledMap({fr, a_in}, {pr, b_out}, p.W[i]))
                             .then(block_injection({fl, fr}, f_sum, fo))
                             .then(LabeledMap({f_in}, {f_sum}, p.T));
    u += m.matrix({"A_in", "B_in", "F_in"}, {"A_out", "B_out", "P_out"});
    po += pl.dim * pr.dim;
    fo += fl.dim * fr.dim;
  }
  return u;
}

DecompositionReport verify_decomposition(const Matrix& u, const SwitchParts& p, double tol) {
  DecompositionReport rep;
  const Matrix r = reconstruct(p);
  if (r.rows() != u.rows() || r.cols() != u.cols())
    throw DimensionError("decomposition does not match the unitary's dimensions");
  rep.reconstruction_residual = relative_distance(r, u);
  bool one_way = true;
  for (std::size_t i = 0; i < p.V.size(); ++i) {
    const SystemLabel a_out("A_out", p.d_a_out), pl("P_L", p.p_dims[i].first);
    const SystemLabel b_in("B_in", p.d_b_in), fl("F_L", p.f_dims[i].first);
    const SystemLabel pr("P_R", p.p_dims[i].second), b_out("B_out", p.d_b_out);
    const SystemLabel fr("F_R", p.f_dims[i].second), a_in("A_in", p.d_a_in);
    const bool ab = signals(p.V[i], {b_in, fl}, {a_out, pl}, 0, 0, tol);
    const bool ba = signals(p.W[i], {fr, a_in}, {pr, b_out}, 1, 1, tol);
    rep.block_signalling.emplace_back(ab, ba);
    if (ab && ba) {
      one_way = false;
      rep.message += "block " + std::to_string(i) + " signals both ways; ";
    }
  }
  if (rep.reconstruction_residual > tol) rep.message += "reconstruction differs from U; ";
  rep.holds = one_way && rep.reconstruction_residual <= tol;
  return rep;
}

DecompositionReport switch_type_decomposition_check(const UnitaryProcess& up,
                                                    const SwitchParts& parts, double tol) {
  const ProcessOperator& s = up.process();
  const QuantumNode &a = s.node("A"), &b = s.node("B"), &p = s.node("P"), &f = s.node("F");
  if (up.nodes().size() != 4) throw LabelError("expected exactly the nodes A, B, P, F");
  if (p.d_in != 1) throw PreconditionError("P must be a root node");
  if (f.d_out != 1) throw PreconditionError("F must be a leaf node");
  if (a.d_in != parts.d_a_in || a.d_out != parts.d_a_out || b.d_in != parts.d_b_in ||
      b.d_out != parts.d_b_out)
    throw DimensionError("parts do not match the dimensions of A and B");
  Wires ins, outs;
  for (const auto& n : up.nodes()) {
    ins.push_back(Wire{n.name + "_in", n.d_in});
    outs.push_back(Wire{n.name + "_out", n.d_out});
  }
  const LabeledMap um(ins, outs, up.unitary());
  return verify_decomposition(um.matrix({"A_in", "B_in", "F_in"}, {"A_out", "B_out", "P_out"}),
                              parts, tol);
}

// ----------------------------------------------------------------- BW

namespace {

void check_bw(const BWParts& p) {
  const std::size_t ni = p.x_dims.size(), nj = p.y_dims.size(), nk = p.z_dims.size();
  if (!ni || !nj || !nk) throw DimensionError("BW parts need nonempty index ranges");
  auto grid = [](const auto& g, std::size_t r, std::size_t c, const std::string& what) {
    if (g.size() != r) throw DimensionError(what + " has the wrong number of rows");
    for (const auto& row : g)
      if (row.size() != c) throw DimensionError(what + " has the wrong number of columns");
  };
  grid(p.P, ni, nj, "P");
  grid(p.Q, ni, nk, "Q");
  grid(p.R, nj, nk, "R");
  grid(p.g1_dims, ni, nj, "G1 dims");
  grid(p.g2_dims, ni, nk, "G2 dims");
  grid(p.g3_dims, nj, nk, "G3 dims");
  const std::size_t da = block_total(p.x_dims), db = block_total(p.y_dims),
                    dc = block_total(p.z_dims);
  expect_shape(p.S, da, da, "S");
  expect_shape(p.T, db, db, "T");
  expect_shape(p.V, dc, dc, "V");
  std::size_t dg = 0;
  const std::size_t l = p.d_lambda;
  for (std::size_t i = 0; i < ni; ++i)
    for (std::size_t j = 0; j < nj; ++j)
      for (std::size_t k = 0; k < nk; ++k) {
        const std::string b =
            " (block " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(k) + ")";
        expect_shape(p.P[i][j], p.d_in * p.g1_dims[i][j],
                     l * p.x_dims[i].first * p.y_dims[j].first, "P" + b);
        expect_shape(p.Q[i][k], p.d_in * p.g2_dims[i][k],
                     p.x_dims[i].second * l * p.z_dims[k].first, "Q" + b);
        expect_shape(p.R[j][k], p.d_in * p.g3_dims[j][k],
                     p.y_dims[j].second * p.z_dims[k].second * l, "R" + b);
        dg += p.g1_dims[i][j] * p.g2_dims[i][k] * p.g3_dims[j][k];
      }
  expect_shape(p.W, static_cast<std::size_t>(p.W.rows()), dg, "W");
  if (static_cast<std::size_t>(p.W.rows()) != dg) throw DimensionError("W must be square");
}

}  // namespace

Matrix reconstruct(const BWParts& p) {
  check_bw(p);
  const std::size_t l = p.d_lambda, di = p.d_in;
  const std::size_t da = block_total(p.x_dims), db = block_total(p.y_dims),
                    dc = block_total(p.z_dims);
  const std::size_t dg = static_cast<std::size_t>(p.W.rows());
  const Wire a_out{"A_out", da}, b_out{"B_out", db}, c_out{"C_out", dc}, p_out{"P_out", l * l * l};
  const Wire la{"lambda_A", l}, lb{"lambda_B", l}, lc{"lambda_C", l};
  const Wire a_in{"A_in", di}, b_in{"B_in", di}, c_in{"C_in", di};
  const Wire g{"G", dg}, f_in{"F_in", dg};
  const auto dl = static_cast<Eigen::Index>(l * l * l);
  Matrix u = Matrix::Zero(static_cast<Eigen::Index>(di * di * di * dg),
                          static_cast<Eigen::Index>(da * db * dc) * dl);
  std::size_t go = 0;
  std::size_t xo = 0;
  for (std::size_t i = 0; i < p.x_dims.size(); ++i) {
    std::size_t yo = 0;
    for (std::size_t j = 0; j < p.y_dims.size(); ++j) {
      std::size_t zo = 0;
      for (std::size_t k = 0; k < p.z_dims.size(); ++k) {
        const Wire xl{"X_L", p.x_dims[i].first}, xr{"X_R", p.x_dims[i].second};
        const Wire yl{"Y_L", p.y_dims[j].first}, yr{"Y_R", p.y_dims[j].second};
        const Wire zl{"Z_L", p.z_dims[k].first}, zr{"Z_R", p.z_dims[k].second};
        const Wire g1{"G1", p.g1_dims[i][j]}, g2{"G2", p.g2_dims[i][k]}, g3{"G3", p.g3_dims[j][k]};
        const LabeledMap m =
            LabeledMap::identity({a_out, b_out, c_out, p_out})
                .then(LabeledMap({la, lb, lc}, {p_out}, Matrix::Identity(dl, dl)))
                .then(LabeledMap({a_out}, {a_out}, p.S))
                .then(block_projection(a_out, xo, {xl, xr}))
                .then(LabeledMap({b_out}, {b_out}, p.T))
                .then(block_projection(b_out, yo, {yl, yr}))
                .then(LabeledMap({c_out}, {c_out}, p.V))
                .then(block_projection(c_out, zo, {zl, zr}))
                .then(LabeledMap({c_in, g1}, {lc, xl, yl}, p.P[i][j]))
                .then(LabeledMap({b_in, g2}, {xr, lb, zl}, p.Q[i][k]))
                .then(LabeledMap({a_in, g3}, {yr, zr, la}, p.R[j][k]))
                .then(block_injection({g1, g2, g3}, g, go))
                .then(LabeledMap({f_in}, {g}, p.W));
        u += m.matrix({"A_in", "B_in", "C_in", "F_in"}, {"A_out", "B_out", "C_out", "P_out"});
        go += g1.dim * g2.dim * g3.dim;
        zo += zl.dim * zr.dim;
      }
      yo += p.y_dims[j].first * p.y_dims[j].second;
    }
    xo += p.x_dims[i].first * p.x_dims[i].second;
  }
  return u;
}

DecompositionReport verify_decomposition(const Matrix& u, const BWParts& p, double tol) {
  DecompositionReport rep;
  const Matrix r = reconstruct(p);
  if (r.rows() != u.rows() || r.cols() != u.cols())
    throw DimensionError("decomposition does not match the unitary's dimensions");
  rep.reconstruction_residual = relative_distance(r, u);
  rep.holds = rep.reconstruction_residual <= tol;
  if (!rep.holds) rep.message = "reconstruction differs from U";
  return rep;
}

}  // namespace qcausal
