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

#include "qcausal/lp.hpp"

#include <limits>
#include <vector>

#include "qcausal/error.hpp"

namespace qcausal {

namespace {

// Tableau: rows 0..m-1 constraints, row m objective (reduced costs); last
// column is the right-hand side.
struct Tableau {
  Eigen::MatrixXd t;
  std::vector<Eigen::Index> basis;

  Eigen::Index rows() const { return t.rows() - 1; }
  Eigen::Index cols() const { return t.cols() - 1; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t.row(r) /= t(r, c);
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      if (i != r && t(i, c) != 0.0) t.row(i) -= t(i, c) * t.row(r);
    basis[static_cast<std::size_t>(r)] = c;
  }

  void price(const Eigen::VectorXd& cost) {
    t.row(rows()).setZero();
    t.row(rows()).head(cost.size()) = cost.transpose();
    for (Eigen::Index i = 0; i < rows(); ++i) {
      const double cb = t(rows(), basis[static_cast<std::size_t>(i)]);
      if (cb != 0.0) t.row(rows()) -= cb * t.row(i);
    }
  }

  // Minimize over columns [0, ncols). Returns Optimal or Unbounded.
  LPStatus run(Eigen::Index ncols, double eps, std::size_t max_pivots, std::size_t& pivots) {
    const Eigen::Index m = rows();
    while (true) {
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < ncols; ++j)
        if (t(m, j) < -eps) {
          enter = j;
          break;
        }
      if (enter < 0) return LPStatus::Optimal;
      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < m; ++i) {
        if (t(i, enter) <= eps) continue;
        const double ratio = t(i, cols()) / t(i, enter);
        if (ratio < best - eps ||
            (ratio <= best + eps && leave >= 0 &&
             basis[static_cast<std::size_t>(i)] < basis[static_cast<std::size_t>(leave)])) {
          best = std::min(best, ratio);
          leave = i;
        }
      }
      if (leave < 0) return LPStatus::Unbounded;
      if (++pivots > max_pivots) return LPStatus::IterationLimit;
      pivot(leave, enter);
    }
  }
};

}  // namespace

LPResult solve_lp(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  double eps, std::size_t max_pivots) {
  const Eigen::Index m = A.rows(), n = A.cols();
  if (c.size() != n || b.size() != m) throw DimensionError("LP dimensions do not agree");
  LPResult res;
  res.x = Eigen::VectorXd::Zero(n);

  Tableau tab;
  tab.t = Eigen::MatrixXd::Zero(m + 1, n + m + 1);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = b(i) < 0 ? -1.0 : 1.0;
    tab.t.row(i).head(n) = s * A.row(i);
    tab.t(i, n + i) = 1.0;
    tab.t(i, n + m) = s * b(i);
    tab.basis.push_back(n + i);
  }

  // Phase one: minimize the artificial sum.
  Eigen::VectorXd art = Eigen::VectorXd::Zero(n + m);
  art.tail(m).setOnes();
  tab.price(art);
  LPStatus st = tab.run(n + m, eps, max_pivots, res.pivots);
  if (st == LPStatus::IterationLimit) {
    res.status = st;
    return res;
  }
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  if (-tab.t(m, n + m) > 1e3 * eps * scale) {
    res.status = LPStatus::Infeasible;
    return res;
  }

  // Drive artificials out of the basis; rows that cannot pivot are redundant.
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < tab.rows(); ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < n) {
      keep.push_back(i);
      continue;
    }
    Eigen::Index col = -1;
    double big = eps * 1e2;
    for (Eigen::Index j = 0; j < n; ++j)
      if (std::abs(tab.t(i, j)) > big) {
        big = std::abs(tab.t(i, j));
        col = j;
      }
    if (col >= 0) {
      tab.pivot(i, col);
      keep.push_back(i);
    }
  }
  Tableau p2;
  const auto mk = static_cast<Eigen::Index>(keep.size());
  p2.t = Eigen::MatrixXd::Zero(mk + 1, n + 1);
  for (Eigen::Index r = 0; r < mk; ++r) {
    const Eigen::Index i = keep[static_cast<std::size_t>(r)];
    p2.t.row(r).head(n) = tab.t.row(i).head(n);
    p2.t(r, n) = tab.t(i, n + m);
    p2.basis.push_back(tab.basis[static_cast<std::size_t>(i)]);
  }
  p2.price(c);
  st = p2.run(n, eps, max_pivots, res.pivots);
  res.status = st;
  if (st != LPStatus::Optimal) return res;
  for (Eigen::Index r = 0; r < mk; ++r)
    res.x(p2.basis[static_cast<std::size_t>(r)]) = std::max(0.0, p2.t(r, n));
  res.objective = c.dot(res.x);
  return res;
}

}  // namespace qcausal
