// Copyright 2026 The screwplan Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

/// \file lcp.hpp
/// \brief The per-step contact LCP: assembly, Lemke's method, verification
/// and uniqueness diagnostics.
///
/// The problem is: find z >= 0 with w = q + M z >= 0 and z_i w_i = 0.
/// For the planner, z_i is the compensating speed at contact i and w_i the
/// linearized clearance surplus psi_i^{t+h} - eps.

#ifndef SCREWPLAN_LCP_HPP_
#define SCREWPLAN_LCP_HPP_

#include <Eigen/Core>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "screwplan/contacts.hpp"
#include "screwplan/error.hpp"
#include "screwplan/kinematics.hpp"

namespace screwplan {

struct LcpProblem {
  Eigen::MatrixXd M;
  Eigen::VectorXd q;
  std::vector<ContactInfo> contacts;  // row i <-> contacts[i]
  /// Row i is N_i^T J_ci (1 x n). Empty for problems built by hand.
  Eigen::MatrixXd normal_rows;
  /// Column i is P J_ci^+ N_i; the joint increment of the compensating
  /// speeds is h^2 * compensation * z.
  Eigen::MatrixXd compensation;

  Eigen::Index size() const { return q.size(); }
};

enum class LcpStatus { solved, ray_termination, iteration_limit };

inline const char* to_string(LcpStatus s) {
  switch (s) {
    case LcpStatus::solved:
      return "solved";
    case LcpStatus::ray_termination:
      return "ray-termination";
    case LcpStatus::iteration_limit:
      return "iteration-limit";
  }
  return "?";
}

struct LcpSolution {
  Eigen::VectorXd z;
  Eigen::VectorXd w;
  LcpStatus status = LcpStatus::solved;
  int pivots = 0;
};

/// N_i = [n_i; 0 0 0], so N_i^T J_ci is the linear part of J_ci along n_i.
/// `task_velocity` is gamma-dot: the unconstrained step is h * B *
/// task_velocity. `projector` (n x n) confines the compensating joint rates
/// to its range; pass nullptr for the plain joint-space form.
inline LcpProblem assemble_step_lcp(const Eigen::MatrixXd& B,
                                    const Eigen::VectorXd& task_velocity,
                                    std::span<const ContactInfo> contacts,
                                    std::span<const Matrix6X> contact_jacobians,
                                    double h, double eps, double lambda = 0.0,
                                    const Eigen::MatrixXd* projector = nullptr) {
  if (contacts.size() != contact_jacobians.size()) {
    throw InvalidInput("assemble_step_lcp: " + std::to_string(contacts.size()) +
                       " contacts but " +
                       std::to_string(contact_jacobians.size()) +
                       " contact Jacobians");
  }
  if (!(h > 0.0)) throw InvalidInput("assemble_step_lcp: h must be positive");
  if (B.cols() != task_velocity.size()) {
    throw InvalidInput("assemble_step_lcp: B and task velocity disagree");
  }
  const Eigen::Index nc = static_cast<Eigen::Index>(contacts.size());
  const Eigen::Index n = B.rows();
  LcpProblem p;
  p.contacts.assign(contacts.begin(), contacts.end());
  p.normal_rows.resize(nc, n);
  p.compensation.resize(n, nc);
  const Eigen::VectorXd free_rate = B * task_velocity;
  p.q.resize(nc);
  for (Eigen::Index i = 0; i < nc; ++i) {
    const Matrix6X& Jc = contact_jacobians[i];
    if (Jc.cols() != n) {
      throw InvalidInput("assemble_step_lcp: contact Jacobian " +
                         std::to_string(i) + " has wrong column count");
    }
    Eigen::Matrix<double, 6, 1> N = Eigen::Matrix<double, 6, 1>::Zero();
    N.head<3>() = contacts[i].normal;
    p.normal_rows.row(i) = N.transpose() * Jc;
    // With a projector P the compensation is the least-norm null-space
    // motion P (J_ci P)^+ N_i. Premultiplying J_ci^+ N_i by P instead can flip
    // the sign of the normal gain.
    const Eigen::VectorXd col =
        projector == nullptr
            ? Eigen::VectorXd(pseudoinverse(Jc, lambda) * N)
            : Eigen::VectorXd((*projector) * (pseudoinverse(Jc * (*projector), lambda) * N));
    p.compensation.col(i) = col;
    p.q(i) = contacts[i].psi + h * p.normal_rows.row(i).dot(free_rate) - eps;
  }
  p.M = (h * h) * (p.normal_rows * p.compensation);
  return p;
}

namespace detail {

/// Tableau for w - M z - e z0 = q. Columns: w (0..n-1), z (n..2n-1), z0 (2n),
/// rhs (2n+1).
class LemkeTableau {
 public:
  LemkeTableau(const Eigen::MatrixXd& M, const Eigen::VectorXd& q)
      : n_(q.size()), T_(n_, 2 * n_ + 2), basis_(n_) {
    T_.setZero();
    T_.leftCols(n_).setIdentity();
    T_.block(0, n_, n_, n_) = -M;
    T_.col(2 * n_).setConstant(-1.0);
    T_.col(2 * n_ + 1) = q;
    for (Eigen::Index i = 0; i < n_; ++i) basis_[i] = i;
  }

  Eigen::Index z0() const { return 2 * n_; }
  Eigen::Index rhs() const { return 2 * n_ + 1; }
  Eigen::Index basic(Eigen::Index row) const { return basis_[row]; }
  double value(Eigen::Index row) const { return T_(row, rhs()); }

  Eigen::Index complement(Eigen::Index var) const {
    return var < n_ ? var + n_ : var - n_;
  }

  /// Lexicographic minimum ratio test on column `col` (entries a_i > 0):
  /// minimizes (rhs_i, B^-1 row i) / a_i, preferring the z0 row on a tie in
  /// the first component. Returns -1 when the column has no positive entry.
  Eigen::Index ratio_test(Eigen::Index col) const {
    const double colmax = T_.col(col).cwiseAbs().maxCoeff();
    const double piv_tol = 1e-11 * colmax;
    std::vector<Eigen::Index> cand;
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double a = T_(i, col);
      if (a > piv_tol && a > 0.0) {
        best = std::min(best, T_(i, rhs()) / a);
        cand.push_back(i);
      }
    }
    if (cand.empty()) return -1;
    const double rtol = 1e-12 * (1.0 + std::abs(best));
    std::vector<Eigen::Index> ties;
    for (Eigen::Index i : cand) {
      if (T_(i, rhs()) / T_(i, col) <= best + rtol) ties.push_back(i);
    }
    for (Eigen::Index i : ties) {
      if (basis_[i] == z0()) return i;
    }
    for (Eigen::Index k = 0; k < n_ && ties.size() > 1; ++k) {
      double lo = std::numeric_limits<double>::infinity();
      for (Eigen::Index i : ties) lo = std::min(lo, T_(i, k) / T_(i, col));
      std::vector<Eigen::Index> keep;
      const double ktol = 1e-12 * (1.0 + std::abs(lo));
      for (Eigen::Index i : ties) {
        if (T_(i, k) / T_(i, col) <= lo + ktol) keep.push_back(i);
      }
      ties.swap(keep);
    }
    return ties.front();
  }

  /// Row of the initial pivot: z0 enters at the most negative q.
  Eigen::Index initial_row() const {
    Eigen::Index row = 0;
    for (Eigen::Index i = 1; i < n_; ++i) {
      const double qi = T_(i, rhs());
      const double qr = T_(row, rhs());
      // Equal q: the later row is lexicographically smaller in (q, I).
      if (qi < qr || qi == qr) row = i;
    }
    return row;
  }

  /// Pivots `col` into the basis at `row`; returns the leaving variable.
  Eigen::Index pivot(Eigen::Index row, Eigen::Index col) {
    T_.row(row) /= T_(row, col);
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (i != row && T_(i, col) != 0.0) {
        T_.row(i) -= T_(i, col) * T_.row(row);
      }
    }
    const Eigen::Index leaving = basis_[row];
    basis_[row] = col;
    return leaving;
  }

  Eigen::VectorXd z() const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(n_);
    for (Eigen::Index i = 0; i < n_; ++i) {
      if (basis_[i] >= n_ && basis_[i] < 2 * n_) {
        out(basis_[i] - n_) = std::max(0.0, T_(i, rhs()));
      }
    }
    return out;
  }

 private:
  Eigen::Index n_;
  Eigen::MatrixXd T_;
  std::vector<Eigen::Index> basis_;
};

/// Re-solves M_SS z_S = -q_S on the support of z; keeps the refined vector
/// only if it is still a complementary solution and no worse.
inline Eigen::VectorXd polish(const Eigen::MatrixXd& M,
                              const Eigen::VectorXd& q,
                              const Eigen::VectorXd& z) {
  std::vector<Eigen::Index> S;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    if (z(i) > 0.0) S.push_back(i);
  }
  if (S.empty()) return z;
  const Eigen::Index k = static_cast<Eigen::Index>(S.size());
  Eigen::MatrixXd Mss(k, k);
  Eigen::VectorXd qs(k);
  for (Eigen::Index a = 0; a < k; ++a) {
    qs(a) = q(S[a]);
    for (Eigen::Index b = 0; b < k; ++b) Mss(a, b) = M(S[a], S[b]);
  }
  const Eigen::FullPivLU<Eigen::MatrixXd> lu(Mss);
  if (!lu.isInvertible()) return z;
  const Eigen::VectorXd zs = lu.solve(-qs);
  Eigen::VectorXd out = Eigen::VectorXd::Zero(z.size());
  for (Eigen::Index a = 0; a < k; ++a) out(S[a]) = std::max(0.0, zs(a));
  auto residual = [&](const Eigen::VectorXd& v) {
    const Eigen::VectorXd w = q + M * v;
    double r = 0.0;
    for (Eigen::Index i = 0; i < v.size(); ++i) {
      r = std::max({r, -w(i), std::abs(v(i) * w(i))});
    }
    return r;
  };
  return residual(out) <= residual(z) ? out : z;
}

}  // namespace detail

/// Lemke's complementary pivoting with covering vector e = 1 and
/// lexicographic degeneracy resolution. q >= 0 returns z = 0 immediately.
/// `max_pivots` < 0 selects the default 50 * n.
inline LcpSolution solve_lcp(const Eigen::MatrixXd& M, const Eigen::VectorXd& q,
                             int max_pivots = -1) {
  const Eigen::Index n = q.size();
  if (M.rows() != n || M.cols() != n) {
    throw InvalidInput("solve_lcp: M must be square and match q");
  }
  LcpSolution s;
  if (n == 0 || q.minCoeff() >= 0.0) {
    s.z = Eigen::VectorXd::Zero(n);
    s.w = q;
    return s;
  }
  if (max_pivots < 0) max_pivots = static_cast<int>(50 * n);

  detail::LemkeTableau tab(M, q);
  Eigen::Index entering = tab.z0();
  Eigen::Index leaving = tab.pivot(tab.initial_row(), entering);
  s.pivots = 1;
  entering = tab.complement(leaving);
  while (true) {
    if (s.pivots >= max_pivots) {
      s.status = LcpStatus::iteration_limit;
      break;
    }
    const Eigen::Index row = tab.ratio_test(entering);
    if (row < 0) {
      s.status = LcpStatus::ray_termination;
      break;
    }
    leaving = tab.pivot(row, entering);
    ++s.pivots;
    if (leaving == tab.z0()) {
      s.status = LcpStatus::solved;
      break;
    }
    entering = tab.complement(leaving);
  }
  s.z = tab.z();
  if (s.status == LcpStatus::solved) s.z = detail::polish(M, q, s.z);
  s.w = q + M * s.z;
  return s;
}

inline LcpSolution solve_lcp(const LcpProblem& p, int max_pivots = -1) {
  return solve_lcp(p.M, p.q, max_pivots);
}

struct LcpResidual {
  double min_z = 0.0;
  double min_w = 0.0;
  double max_product = 0.0;
  bool pass = true;
  std::optional<Eigen::Index> violated;  // first offending component
};

inline constexpr double kLcpSignTol = 1e-9;
inline constexpr double kLcpProductTol = 1e-8;

inline LcpResidual verify_solution(const Eigen::MatrixXd& M,
                                   const Eigen::VectorXd& q,
                                   const Eigen::VectorXd& z) {
  LcpResidual r;
  const Eigen::VectorXd w = q + M * z;
  if (z.size() == 0) return r;
  r.min_z = z.minCoeff();
  r.min_w = w.minCoeff();
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    const double prod = z(i) * w(i);
    r.max_product = std::max(r.max_product, prod);
    const bool bad =
        z(i) < -kLcpSignTol || w(i) < -kLcpSignTol || prod > kLcpProductTol;
    if (bad && !r.violated) r.violated = i;
  }
  r.pass = !r.violated.has_value();
  return r;
}

inline LcpResidual verify_solution(const LcpProblem& p, const LcpSolution& s) {
  return verify_solution(p.M, p.q, s.z);
}

struct UniquenessReport {
  bool unique = false;
  std::string reason;
};

/// Unique solvability for every q holds exactly when M is a P-matrix (all
/// principal minors positive). Each minor is normalized by the product of its
/// row norms, so the test is invariant to h and to positive row scaling, and
/// `rel_tol` rejects numerically singular minors. A single contact has
/// M_11 = h^2 > 0 when its Jacobian has full row rank; two contacts on one such
/// link have det M = h^4 (1 - c^2) with c the cosine between the normals.
inline UniquenessReport uniqueness_diagnostic(const LcpProblem& p, double rel_tol = 1e-9) {
  const Eigen::Index n = p.size();
  if (n == 0) return {true, "no contacts"};
  for (unsigned mask = 1; mask < (1u << n); ++mask) {
    std::vector<Eigen::Index> S;
    for (Eigen::Index i = 0; i < n; ++i) {
      if (mask & (1u << i)) S.push_back(i);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(S.size());
    Eigen::MatrixXd sub(k, k);
    double scale = 1.0;
    for (Eigen::Index a = 0; a < k; ++a) {
      for (Eigen::Index b = 0; b < k; ++b) sub(a, b) = p.M(S[a], S[b]);
      scale *= sub.row(a).norm();
    }
    const double minor = sub.determinant();
    if (!(scale > 0.0) || !(minor > rel_tol * scale)) {
      std::string rows;
      for (Eigen::Index i : S) rows += (rows.empty() ? "" : ",") + std::to_string(i + 1);
      return {false, "M is not a P-matrix: principal minor {" + rows +
                         "} = " + std::to_string(minor) + " is not positive"};
    }
  }
  if (n == 1) return {true, "single contact with positive gain M_11"};
  return {true, "M is a P-matrix"};
}

}  // namespace screwplan

#endif  // SCREWPLAN_LCP_HPP_
