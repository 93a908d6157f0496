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

#include "qcausal/tensor.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <unsupported/Eigen/KroneckerProduct>

#include "qcausal/error.hpp"

namespace qcausal {

namespace {

std::vector<std::size_t> strides_of(const Systems& systems) {
  std::vector<std::size_t> s(systems.size(), 1);
  for (std::size_t i = systems.size(); i-- > 1;) s[i - 1] = s[i] * systems[i].dim;
  return s;
}

std::size_t slot_index(const Systems& systems, const SystemLabel& label) {
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].same_slot(label)) {
      if (systems[i].dim != label.dim) {
        throw DimensionError(
            "system " + label.str() + " has dimension " +
            std::to_string(systems[i].dim) + ", expected " +
            std::to_string(label.dim));
      }
      return i;
    }
  }
  throw LabelError("unknown system " + label.str());
}

bool contains_slot(const Systems& systems, const SystemLabel& label) {
  return std::any_of(systems.begin(), systems.end(),
                     [&](const SystemLabel& s) { return s.same_slot(label); });
}

Systems complement(const Systems& all, const Systems& subset) {
  for (const auto& s : subset) slot_index(all, s);
  Systems out;
  for (const auto& s : all)
    if (!contains_slot(subset, s)) out.push_back(s);
  return out;
}

void check_unique(const Systems& systems) {
  for (std::size_t i = 0; i < systems.size(); ++i) {
    if (systems[i].dim == 0)
      throw DimensionError("system " + systems[i].str() + " has dimension 0");
    for (std::size_t j = i + 1; j < systems.size(); ++j)
      if (systems[i].same_slot(systems[j]))
        throw LabelError("duplicate system " + systems[i].str());
  }
}

}  // namespace

std::size_t total_dim(const Systems& systems) {
  std::size_t n = 1;
  for (const auto& s : systems) n *= s.dim;
  return n;
}

LabeledOperator::LabeledOperator(Systems systems, Matrix matrix)
    : systems_(std::move(systems)), matrix_(std::move(matrix)) {
  check_unique(systems_);
  const auto n = static_cast<Eigen::Index>(total_dim(systems_));
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw DimensionError("operator side " + std::to_string(matrix_.rows()) +
                         "x" + std::to_string(matrix_.cols()) +
                         " does not match system dimension " +
                         std::to_string(n));
  }
}

std::size_t LabeledOperator::index_of(const SystemLabel& label) const {
  return slot_index(systems_, label);
}

bool LabeledOperator::has(const SystemLabel& label) const {
  return contains_slot(systems_, label);
}

const SystemLabel& LabeledOperator::find(const std::string& name,
                                         bool dual) const {
  for (const auto& s : systems_)
    if (s.name == name && s.dual == dual) return s;
  throw LabelError("unknown system " + (dual ? name + "*" : name));
}

LabeledVector::LabeledVector(Systems systems, Vector vec)
    : systems_(std::move(systems)), vec_(std::move(vec)) {
  check_unique(systems_);
  if (static_cast<std::size_t>(vec_.size()) != total_dim(systems_))
    throw DimensionError("vector length does not match system dimension");
}

LabeledOperator LabeledVector::reduced(const Systems& keep) const {
  const Systems traced = complement(systems_, keep);
  const auto offk = subsystem_offsets(systems_, keep);
  const auto offt = subsystem_offsets(systems_, traced);
  Matrix psi(offk.size(), offt.size());
  for (std::size_t t = 0; t < offt.size(); ++t)
    for (std::size_t i = 0; i < offk.size(); ++i) psi(i, t) = vec_(offk[i] + offt[t]);
  Systems kept;
  for (const auto& k : keep) kept.push_back(systems_[slot_index(systems_, k)]);
  return LabeledOperator(kept, psi * psi.adjoint());
}

LabeledVector LabeledVector::reorder(const Systems& order) const {
  if (order.size() != systems_.size())
    throw LabelError("reorder must list every system exactly once");
  const auto old = subsystem_offsets(systems_, order);
  Vector out(vec_.size());
  for (std::size_t i = 0; i < old.size(); ++i) out(i) = vec_(old[i]);
  Systems sys;
  for (const auto& o : order) sys.push_back(systems_[slot_index(systems_, o)]);
  return LabeledVector(sys, out);
}

LabeledOperator LabeledVector::projector() const {
  return LabeledOperator(systems_, vec_ * vec_.adjoint());
}

std::vector<std::size_t> subsystem_offsets(const Systems& all,
                                           const Systems& subset) {
  const auto strides = strides_of(all);
  std::vector<std::size_t> off{0};
  for (const auto& s : subset) {
    const std::size_t i = slot_index(all, s);
    const std::size_t d = all[i].dim;
    std::vector<std::size_t> next;
    next.reserve(off.size() * d);
    for (auto o : off)
      for (std::size_t k = 0; k < d; ++k) next.push_back(o + k * strides[i]);
    off.swap(next);
  }
  return off;
}

LabeledOperator identity_operator(const Systems& systems) {
  const auto n = static_cast<Eigen::Index>(total_dim(systems));
  return LabeledOperator(systems, Matrix::Identity(n, n));
}

LabeledOperator tensor(const LabeledOperator& a, const LabeledOperator& b) {
  for (const auto& s : b.systems())
    if (a.has(s)) throw LabelError("label collision on " + s.str());
  Systems sys = a.systems();
  sys.insert(sys.end(), b.systems().begin(), b.systems().end());
  Matrix m = Eigen::kroneckerProduct(a.matrix(), b.matrix()).eval();
  return LabeledOperator(sys, std::move(m));
}

LabeledOperator partial_trace(const LabeledOperator& op, const Systems& subset) {
  const Systems kept = complement(op.systems(), subset);
  if (subset.empty()) return op;
  const auto offk = subsystem_offsets(op.systems(), kept);
  const auto offt = subsystem_offsets(op.systems(), subset);
  const Matrix& m = op.matrix();
  const auto nk = static_cast<Eigen::Index>(offk.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index j = 0; j < nk; ++j)
    for (Eigen::Index i = 0; i < nk; ++i) {
      cplx acc = 0;
      for (auto t : offt) acc += m(offk[i] + t, offk[j] + t);
      out(i, j) = acc;
    }
  return LabeledOperator(kept, std::move(out));
}

cplx trace(const LabeledOperator& op) { return op.matrix().trace(); }

LabeledOperator reorder(const LabeledOperator& op, const Systems& order) {
  if (order.size() != op.systems().size())
    throw LabelError("reorder must list every system exactly once");
  Systems sys;
  for (const auto& o : order) sys.push_back(op.systems()[op.index_of(o)]);
  check_unique(sys);
  const auto old = subsystem_offsets(op.systems(), order);
  const auto n = static_cast<Eigen::Index>(old.size());
  const Matrix& m = op.matrix();
  Matrix out(n, n);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index i = 0; i < n; ++i) out(i, j) = m(old[i], old[j]);
  return LabeledOperator(sys, std::move(out));
}

LabeledOperator reorder(const LabeledOperator& op,
                        const std::vector<std::size_t>& permutation) {
  const auto& sys = op.systems();
  if (permutation.size() != sys.size())
    throw LabelError("permutation length does not match system count");
  std::vector<bool> seen(sys.size(), false);
  Systems order;
  for (auto p : permutation) {
    if (p >= sys.size() || seen[p]) throw LabelError("permutation is not a bijection");
    seen[p] = true;
    order.push_back(sys[p]);
  }
  return reorder(op, order);
}

LabeledOperator embed(const LabeledOperator& op, const Systems& target) {
  for (const auto& s : op.systems()) slot_index(target, s);
  Systems missing;
  for (const auto& t : target)
    if (!op.has(t)) missing.push_back(t);
  if (missing.empty()) return reorder(op, target);
  return reorder(tensor(op, identity_operator(missing)), target);
}

LabeledOperator relabel(const LabeledOperator& op, const SystemLabel& from,
                        const SystemLabel& to) {
  Systems sys = op.systems();
  const std::size_t i = op.index_of(from);
  if (to.dim != sys[i].dim)
    throw DimensionError("relabel " + from.str() + " -> " + to.str() +
                         " changes the dimension");
  sys[i] = to;
  return LabeledOperator(sys, op.matrix());
}

LabeledOperator split_system(const LabeledOperator& op, const SystemLabel& from,
                             const Systems& parts) {
  const std::size_t i = op.index_of(from);
  if (total_dim(parts) != op.systems()[i].dim)
    throw DimensionError("split of " + from.str() + " does not preserve dimension");
  Systems sys;
  for (std::size_t k = 0; k < op.systems().size(); ++k) {
    if (k == i)
      sys.insert(sys.end(), parts.begin(), parts.end());
    else
      sys.push_back(op.systems()[k]);
  }
  return LabeledOperator(sys, op.matrix());
}

LabeledOperator merge_systems(const LabeledOperator& op, const Systems& parts,
                              const SystemLabel& to) {
  if (parts.empty()) throw LabelError("merge needs at least one system");
  if (total_dim(parts) != to.dim)
    throw DimensionError("merge into " + to.str() + " does not preserve dimension");
  const std::size_t first = op.index_of(parts.front());
  Systems order;
  for (std::size_t k = 0; k < op.systems().size(); ++k) {
    const auto& s = op.systems()[k];
    if (contains_slot(parts, s)) {
      if (k == first) order.insert(order.end(), parts.begin(), parts.end());
      continue;
    }
    order.push_back(s);
  }
  LabeledOperator r = reorder(op, order);
  Systems sys;
  for (const auto& s : r.systems()) {
    if (contains_slot(parts, s)) {
      if (s.same_slot(parts.front())) sys.push_back(to);
      continue;
    }
    sys.push_back(s);
  }
  return LabeledOperator(sys, r.matrix());
}

LabeledOperator partial_transpose(const LabeledOperator& op,
                                  const Systems& subset) {
  const Systems kept = complement(op.systems(), subset);
  const auto offk = subsystem_offsets(op.systems(), kept);
  const auto offs = subsystem_offsets(op.systems(), subset);
  const Matrix& m = op.matrix();
  Matrix out(m.rows(), m.cols());
  for (auto k2 : offk)
    for (auto s2 : offs)
      for (auto k1 : offk)
        for (auto s1 : offs) out(k1 + s1, k2 + s2) = m(k1 + s2, k2 + s1);
  return LabeledOperator(op.systems(), std::move(out));
}

LabeledOperator transpose(const LabeledOperator& op) {
  return LabeledOperator(op.systems(), op.matrix().transpose());
}

LabeledOperator trace_replace(const LabeledOperator& op, const Systems& subset) {
  const Systems kept = complement(op.systems(), subset);
  const LabeledOperator t = partial_trace(op, subset);
  const auto offk = subsystem_offsets(op.systems(), kept);
  const auto offs = subsystem_offsets(op.systems(), subset);
  const double inv = 1.0 / static_cast<double>(offs.size());
  Matrix out = Matrix::Zero(op.matrix().rows(), op.matrix().cols());
  for (std::size_t j = 0; j < offk.size(); ++j)
    for (std::size_t i = 0; i < offk.size(); ++i) {
      const cplx v = t.matrix()(i, j) * inv;
      for (auto s : offs) out(offk[i] + s, offk[j] + s) = v;
    }
  return LabeledOperator(op.systems(), std::move(out));
}

double trace_replace_residual(const LabeledOperator& op, const Systems& subset) {
  const Systems kept = complement(op.systems(), subset);
  const LabeledOperator t = partial_trace(op, subset);
  const auto offk = subsystem_offsets(op.systems(), kept);
  const auto offs = subsystem_offsets(op.systems(), subset);
  const double ds = static_cast<double>(offs.size());
  const Matrix& m = op.matrix();
  double diff2 = 0.0;
  for (std::size_t j = 0; j < offk.size(); ++j)
    for (std::size_t i = 0; i < offk.size(); ++i) {
      const cplx v = t.matrix()(i, j) / ds;
      for (std::size_t b = 0; b < offs.size(); ++b)
        for (std::size_t a = 0; a < offs.size(); ++a) {
          cplx x = m(offk[i] + offs[a], offk[j] + offs[b]);
          if (a == b) x -= v;
          diff2 += std::norm(x);
        }
    }
  const double na = m.norm();
  const double nb = t.matrix().norm() / std::sqrt(ds);
  const double scale = std::max(na, nb);
  return scale == 0.0 ? 0.0 : std::sqrt(diff2) / scale;
}

LabeledOperator contract(const LabeledOperator& op, const LabeledOperator& local) {
  const Systems kept = complement(op.systems(), local.systems());
  const auto offk = subsystem_offsets(op.systems(), kept);
  const auto offl = subsystem_offsets(op.systems(), local.systems());
  const Matrix& m = op.matrix();
  const Matrix& l = local.matrix();
  const auto nk = static_cast<Eigen::Index>(offk.size());
  Matrix out = Matrix::Zero(nk, nk);
  for (Eigen::Index j = 0; j < nk; ++j)
    for (Eigen::Index i = 0; i < nk; ++i) {
      cplx acc = 0;
      for (std::size_t b = 0; b < offl.size(); ++b)
        for (std::size_t a = 0; a < offl.size(); ++a)
          acc += m(offk[i] + offl[a], offk[j] + offl[b]) * l(b, a);
      out(i, j) = acc;
    }
  return LabeledOperator(kept, std::move(out));
}

LabeledOperator apply_left(const LabeledOperator& local,
                           const LabeledOperator& full) {
  const Systems rest = complement(full.systems(), local.systems());
  const auto offl = subsystem_offsets(full.systems(), local.systems());
  const auto offr = subsystem_offsets(full.systems(), rest);
  const Matrix& x = full.matrix();
  const Matrix& l = local.matrix();
  Matrix out(x.rows(), x.cols());
  Vector in(offl.size());
  for (Eigen::Index c = 0; c < x.cols(); ++c)
    for (auto r : offr) {
      for (std::size_t a = 0; a < offl.size(); ++a) in(a) = x(offl[a] + r, c);
      const Vector y = l * in;
      for (std::size_t a = 0; a < offl.size(); ++a) out(offl[a] + r, c) = y(a);
    }
  return LabeledOperator(full.systems(), std::move(out));
}

LabeledOperator link(const LabeledOperator& a, const LabeledOperator& b) {
  Systems ya, yb, link_sys, arest, brest;
  for (const auto& s : a.systems()) {
    SystemLabel partner(s.name, s.dim, !s.dual);
    bool matched = false;
    for (const auto& t : b.systems()) {
      if (t.same_slot(partner)) {
        if (t.dim != s.dim)
          throw DimensionError("link over " + s.name + ": dimensions " +
                               std::to_string(s.dim) + " and " +
                               std::to_string(t.dim));
        ya.push_back(s);
        yb.push_back(t);
        link_sys.emplace_back("\x01link:" + s.name, s.dim, false);
        matched = true;
      }
    }
    if (!matched) arest.push_back(s);
  }
  for (const auto& t : b.systems())
    if (!contains_slot(yb, t)) brest.push_back(t);
  for (const auto& t : brest)
    if (contains_slot(arest, t)) throw LabelError("label collision on " + t.str());

  LabeledOperator ap = partial_transpose(a, ya);
  LabeledOperator bp = b;
  for (std::size_t k = 0; k < ya.size(); ++k) {
    ap = relabel(ap, ya[k], link_sys[k]);
    bp = relabel(bp, yb[k], link_sys[k]);
  }
  Systems all = arest;
  all.insert(all.end(), link_sys.begin(), link_sys.end());
  all.insert(all.end(), brest.begin(), brest.end());
  const LabeledOperator ea = embed(ap, all);
  const LabeledOperator eb = apply_left(ea, embed(bp, all));
  return partial_trace(eb, link_sys);
}

double frobenius(const Matrix& m) { return m.norm(); }

double relative_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw DimensionError("relative_distance on matrices of different shape");
  const double scale = std::max(a.norm(), b.norm());
  return scale == 0.0 ? 0.0 : (a - b).norm() / scale;
}

double relative_distance(const LabeledOperator& a, const LabeledOperator& b) {
  if (a.systems().size() != b.systems().size())
    throw LabelError("relative_distance on operators with different systems");
  return relative_distance(a.matrix(), reorder(b, a.systems()).matrix());
}

double hermiticity_residual(const Matrix& m) {
  const double n = m.norm();
  return n == 0.0 ? 0.0 : (m - m.adjoint()).norm() / n;
}

PsdCertificate psd_check(const Matrix& m, double tol) {
  const double scale = std::max(1.0, m.norm());
  const double floor = -tol * scale;
  const Eigen::Index n = m.rows();
  PsdCertificate cert;
  if (n == 0) {
    cert.psd = true;
    cert.method = "empty";
    return cert;
  }
  if (n > 1024) {
    // Pivoted partial Cholesky; the Schur remainder is PSD iff m is.
    const Eigen::Index max_rank = std::min<Eigen::Index>(n, 64);
    Eigen::VectorXd d(n);
    for (Eigen::Index i = 0; i < n; ++i) d(i) = m(i, i).real();
    Matrix l(n, max_rank);
    Eigen::Index rank = 0;
    bool negative = false;
    for (; rank < max_rank; ++rank) {
      Eigen::Index p;
      const double dp = d.maxCoeff(&p);
      if (dp <= tol * scale) break;
      Vector col = m.col(p);
      if (rank > 0) col -= l.leftCols(rank) * l.row(p).leftCols(rank).adjoint();
      col /= std::sqrt(dp);
      l.col(rank) = col;
      for (Eigen::Index i = 0; i < n; ++i) d(i) -= std::norm(col(i));
      if (d.minCoeff() < floor) {
        negative = true;
        ++rank;
        break;
      }
    }
    if (!negative) {
      double r2 = 0.0;
      for (Eigen::Index c = 0; c < n; ++c) {
        Vector rc = m.col(c);
        if (rank > 0) rc -= l.leftCols(rank) * l.row(c).leftCols(rank).adjoint();
        r2 += rc.squaredNorm();
      }
      const double rem = std::sqrt(r2);
      if (rem <= tol * scale) {
        cert.psd = true;
        cert.min_eigenvalue = -rem;
        cert.method = "pivoted-cholesky";
        return cert;
      }
    }
  }
  const Matrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<Matrix> es(h, Eigen::EigenvaluesOnly);
  cert.min_eigenvalue = es.eigenvalues().minCoeff();
  cert.psd = cert.min_eigenvalue >= floor;
  cert.method = "eigensolver";
  return cert;
}

// ---------------------------------------------------------------- channels

ChannelOperator::ChannelOperator(LabeledOperator base, Systems outputs,
                                 Systems inputs)
    : base_(std::move(base)), outputs_(std::move(outputs)), inputs_(std::move(inputs)) {
  for (const auto& o : outputs_) {
    if (o.dual) throw LabelError("channel output " + o.str() + " must be primal");
    base_.index_of(o);
  }
  for (const auto& i : inputs_) {
    if (!i.dual) throw LabelError("channel input " + i.str() + " must be dual");
    base_.index_of(i);
  }
  if (outputs_.size() + inputs_.size() != base_.systems().size())
    throw LabelError("channel systems must be split into outputs and inputs");
}

double ChannelOperator::tp_residual() const {
  const LabeledOperator t = partial_trace(base_, outputs_);
  return relative_distance(t.matrix(), identity_operator(t.systems()).matrix());
}

bool ChannelOperator::is_cptp(double tol) const {
  return psd_check(base_.matrix(), tol).psd && tp_residual() <= tol;
}

ChannelOperator cj_from_kraus(const std::vector<Matrix>& kraus,
                              const SystemLabel& in_label,
                              const SystemLabel& out_label) {
  const SystemLabel in(in_label.name, in_label.dim, true);
  const SystemLabel out(out_label.name, out_label.dim, false);
  const auto din = static_cast<Eigen::Index>(in.dim);
  const auto dout = static_cast<Eigen::Index>(out.dim);
  Matrix rho = Matrix::Zero(din * dout, din * dout);
  for (std::size_t k = 0; k < kraus.size(); ++k) {
    const Matrix& K = kraus[k];
    if (K.rows() != dout || K.cols() != din)
      throw DimensionError("Kraus operator " + std::to_string(k) + " is " +
                           std::to_string(K.rows()) + "x" +
                           std::to_string(K.cols()) + ", expected " +
                           std::to_string(dout) + "x" + std::to_string(din));
    Vector v(din * dout);
    for (Eigen::Index b = 0; b < dout; ++b)
      for (Eigen::Index a = 0; a < din; ++a) v(b * din + a) = K(b, a);
    rho += v * v.adjoint();
  }
  return ChannelOperator(LabeledOperator({out, in}, std::move(rho)), {out}, {in});
}

LabeledVector cj_vector(const Matrix& map, const Systems& outputs,
                        const Systems& inputs) {
  const auto dout = static_cast<Eigen::Index>(total_dim(outputs));
  const auto din = static_cast<Eigen::Index>(total_dim(inputs));
  if (map.rows() != dout || map.cols() != din)
    throw DimensionError("map shape does not match its labelled systems");
  Systems sys = outputs;
  for (auto s : inputs) {
    s.dual = true;
    sys.push_back(s);
  }
  Vector w(dout * din);
  for (Eigen::Index o = 0; o < dout; ++o)
    for (Eigen::Index i = 0; i < din; ++i) w(o * din + i) = map(o, i);
  return LabeledVector(sys, std::move(w));
}

// ------------------------------------------------------- Hilbert–Schmidt

HSBasis gell_mann_basis(std::size_t d) {
  if (d == 0) throw DimensionError("HS basis needs d >= 1");
  const auto n = static_cast<Eigen::Index>(d);
  HSBasis basis;
  basis.dim = d;
  basis.elements.push_back(Matrix::Identity(n, n) / std::sqrt(static_cast<double>(d)));
  const double r2 = 1.0 / std::sqrt(2.0);
  for (Eigen::Index j = 0; j < n; ++j)
    for (Eigen::Index k = j + 1; k < n; ++k) {
      Matrix s = Matrix::Zero(n, n);
      s(j, k) = r2;
      s(k, j) = r2;
      basis.elements.push_back(s);
      Matrix a = Matrix::Zero(n, n);
      a(j, k) = cplx(0, -r2);
      a(k, j) = cplx(0, r2);
      basis.elements.push_back(a);
    }
  for (Eigen::Index l = 1; l < n; ++l) {
    Matrix g = Matrix::Zero(n, n);
    const double c = 1.0 / std::sqrt(static_cast<double>(l * (l + 1)));
    for (Eigen::Index j = 0; j < l; ++j) g(j, j) = c;
    g(l, l) = -c * static_cast<double>(l);
    basis.elements.push_back(g);
  }
  return basis;
}

namespace {

// Applies a d²×d² map to the (row digit, column digit) pair of one system.
void transform_pair(Matrix& m, const Systems& systems, std::size_t sys,
                    const Matrix& map) {
  const std::size_t d = systems[sys].dim;
  if (d == 1) return;
  const auto strides = strides_of(systems);
  const std::size_t s = strides[sys];
  Systems others;
  for (std::size_t k = 0; k < systems.size(); ++k)
    if (k != sys) others.push_back(systems[k]);
  const auto off = subsystem_offsets(systems, others);
  const auto dd = static_cast<Eigen::Index>(d * d);
  Vector v(dd);
  for (auto c0 : off)
    for (auto r0 : off) {
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) v(a * d + b) = m(r0 + a * s, c0 + b * s);
      const Vector w = map * v;
      for (std::size_t k = 0; k < d * d; ++k) m(r0 + (k / d) * s, c0 + (k % d) * s) = w(k);
    }
}

Matrix forward_map(const HSBasis& basis) {
  const std::size_t d = basis.dim;
  Matrix f(d * d, d * d);
  for (std::size_t k = 0; k < d * d; ++k)
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        f(k, a * d + b) = std::conj(basis.elements[k](a, b));
  return f;
}

std::vector<TypeMask> digit_masks(const Systems& systems) {
  const std::size_t n = total_dim(systems);
  const auto strides = strides_of(systems);
  std::vector<TypeMask> masks(n, 0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < systems.size(); ++k)
      if ((i / strides[k]) % systems[k].dim != 0) masks[i] |= (TypeMask{1} << k);
  return masks;
}

}  // namespace

HSExpansion::HSExpansion(Systems systems, Matrix coefficients,
                         std::vector<HSBasis> bases)
    : systems_(std::move(systems)), coeff_(std::move(coefficients)), bases_(std::move(bases)) {}

std::map<TypeMask, double> HSExpansion::type_norms() const {
  if (systems_.size() > 20) throw BudgetError("too many systems for type table");
  const auto masks = digit_masks(systems_);
  std::vector<double> acc(std::size_t{1} << systems_.size(), 0.0);
  for (Eigen::Index c = 0; c < coeff_.cols(); ++c)
    for (Eigen::Index r = 0; r < coeff_.rows(); ++r)
      acc[masks[r] | masks[c]] += std::norm(coeff_(r, c));
  std::map<TypeMask, double> out;
  for (std::size_t t = 0; t < acc.size(); ++t)
    if (acc[t] > 0.0) out[t] = std::sqrt(acc[t]);
  return out;
}

LabeledOperator HSExpansion::reconstruct() const {
  Matrix m = coeff_;
  for (std::size_t k = 0; k < systems_.size(); ++k)
    transform_pair(m, systems_, k, forward_map(bases_[k]).adjoint());
  return LabeledOperator(systems_, std::move(m));
}

HSExpansion hs_expand(const LabeledOperator& op) {
  std::vector<HSBasis> bases;
  for (const auto& s : op.systems()) bases.push_back(gell_mann_basis(s.dim));
  return hs_expand(op, bases);
}

HSExpansion hs_expand(const LabeledOperator& op,
                      const std::vector<HSBasis>& bases) {
  if (bases.size() != op.systems().size())
    throw DimensionError("one HS basis per system is required");
  for (std::size_t k = 0; k < bases.size(); ++k)
    if (bases[k].dim != op.systems()[k].dim ||
        bases[k].elements.size() != bases[k].dim * bases[k].dim)
      throw DimensionError("HS basis for " + op.systems()[k].str() +
                           " has the wrong dimension");
  Matrix m = op.matrix();
  for (std::size_t k = 0; k < bases.size(); ++k)
    transform_pair(m, op.systems(), k, forward_map(bases[k]));
  return HSExpansion(op.systems(), std::move(m), bases);
}

}  // namespace qcausal
