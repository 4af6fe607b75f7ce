// Copyright 2026 The rsvp Authors
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

#pragma once

// Error metrics between matrices held as factors. Each one reduces to a
// small core built from the stacked factors [U_x, U_y] and [V_x, V_y] with
// D = blkdiag(diag(d_x), -diag(d_y)), so X - Y = U_s D V_s^H is never formed.

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <cmath>
#include <limits>
#include <string>

#include "rsvp/core/factor.hpp"
#include "rsvp/rand/factored_svd.hpp"

namespace rsvp {

namespace detail {

template <Field S>
Matrix<S> hstack(const Matrix<S>& a, const Matrix<S>& b) {
  Matrix<S> out(a.rows(), a.cols() + b.cols());
  out << a, b;
  return out;
}

inline RealVector difference_values(const RealVector& dx, const RealVector& dy) {
  RealVector d(dx.size() + dy.size());
  d << dx, -dy;
  return d;
}

template <Field S>
double nuclear_norm(const Matrix<S>& B) {
  if (B.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix<S>> svd(B);
  return svd.singularValues().sum();
}

template <Field S>
void require_same_shape(const FactorTriple<S>& X, const FactorTriple<S>& Y, const char* what) {
  require(X.rows() == Y.rows() && X.cols() == Y.cols(),
          std::string(what) + ": factors describe matrices of different shapes");
}

}  // namespace detail

/// ||X - Y||_F^2 from the triangular cores of the stacked factors:
/// ||U_s D V_s^H||_F = ||R_U D R_V^H||_F. O((m + n) k^2) with k = r_x + r_y.
template <Field S>
double frob_sq_factored(const FactorTriple<S>& X, const FactorTriple<S>& Y) {
  detail::require_same_shape(X, Y, "frob_sq_factored");
  const Index k = X.rank() + Y.rank();
  const RealVector d = detail::difference_values(X.d(), Y.d());
  if (k == 0) return 0.0;
  if (k > std::min(X.rows(), X.cols())) return (X.dense() - Y.dense()).squaredNorm();
  const Matrix<S> Us = detail::hstack(X.U(), Y.U());
  const QrResult<S> qu = thin_qr(Us);
  if (X.is_symmetric() && Y.is_symmetric()) {
    const Matrix<S> core = qu.R * d.template cast<S>().asDiagonal() * qu.R.adjoint();
    return core.squaredNorm();
  }
  const QrResult<S> qv = thin_qr(detail::hstack(X.V(), Y.V()));
  const Matrix<S> core = qu.R * d.template cast<S>().asDiagonal() * qv.R.adjoint();
  return core.squaredNorm();
}

/// Nuclear norm ||X - Y||_* (no 1/2 factor) via factored_svd of the stacked
/// difference. Both factors must be symmetric.
template <Field S>
double trace_distance_factored(const FactorTriple<S>& X, const FactorTriple<S>& Y) {
  detail::require_same_shape(X, Y, "trace_distance_factored");
  if (!X.is_symmetric() || !Y.is_symmetric())
    throw contract_error("trace_distance_factored: both factors must be symmetric");
  const Index k = X.rank() + Y.rank();
  if (k == 0) return 0.0;
  const RealVector d = detail::difference_values(X.d(), Y.d());
  if (k > X.rows()) {
    Eigen::JacobiSVD<Matrix<S>> svd(X.dense() - Y.dense());
    return svd.singularValues().sum();
  }
  const Matrix<S> Us = detail::hstack(X.U(), Y.U());
  return factored_svd<S>(Us, d, Us).sigma.sum();
}

/// sqrt(x^H Y x): the fidelity ||sqrt(X) sqrt(Y)||_* for the rank-1
/// projector X = x x^H. O(n r_Y).
template <Field S>
double fidelity_rank1(const Vector<S>& x, const FactorTriple<S>& Y) {
  require(x.size() == Y.rows(), "fidelity_rank1: vector length does not match Y");
  if (std::abs(x.norm() - 1.0) > 1e-10) throw contract_error("fidelity_rank1: x must be a unit vector");
  if (!Y.is_symmetric()) throw contract_error("fidelity_rank1: Y must be symmetric");
  if (Y.rank() > 0 && Y.d().minCoeff() < 0.0) throw contract_error("fidelity_rank1: Y must be PSD");
  const Vector<S> c = Y.U().adjoint() * x;
  double q = 0.0;
  for (Index k = 0; k < Y.rank(); ++k) q += Y.d()(k) * std::norm(c(k));
  return std::sqrt(std::max(q, 0.0));
}

/// ||sqrt(X) sqrt(Y)||_* for PSD factors of any rank. With X = U D U^H the
/// value is the nuclear norm of B = D^{1/2} U^H U_y D_y^{1/2}, since
/// sqrt(X) Y sqrt(X) is unitarily similar to B B^H.
template <Field S>
double fidelity_factored(const FactorTriple<S>& X, const FactorTriple<S>& Y) {
  detail::require_same_shape(X, Y, "fidelity_factored");
  if (!X.is_symmetric() || !Y.is_symmetric())
    throw contract_error("fidelity_factored: both factors must be symmetric");
  if ((X.rank() > 0 && X.d().minCoeff() < 0.0) || (Y.rank() > 0 && Y.d().minCoeff() < 0.0))
    throw contract_error("fidelity_factored: factors must be PSD");
  if (X.rank() == 0 || Y.rank() == 0) return 0.0;
  const Matrix<S> B = X.d().cwiseSqrt().template cast<S>().asDiagonal() * (X.U().adjoint() * Y.U()) *
                      Y.d().cwiseSqrt().template cast<S>().asDiagonal();
  return detail::nuclear_norm(B);
}

/// Dense ||sqrt(X) sqrt(Y)||_* for Hermitian PSD X, Y, under the dense size limit.
template <Field S>
double fidelity_dense(const Matrix<S>& X, const Matrix<S>& Y, Index size_limit = kDenseSizeLimit) {
  require(X.rows() == X.cols() && Y.rows() == X.rows() && Y.cols() == X.cols(),
          "fidelity_dense: inputs must be square and of equal size");
  if (X.rows() > size_limit) throw size_limit_error("fidelity_dense: matrix exceeds the dense size limit");
  auto psd_sqrt = [](const Matrix<S>& A) {
    Eigen::SelfAdjointEigenSolver<Matrix<S>> es((A + A.adjoint()) * 0.5);
    const RealVector lam = es.eigenvalues();
    // Rounding-level eigenvalues would contribute O(sqrt(eps)) to the root.
    const double floor = 10.0 * static_cast<double>(A.rows()) * std::numeric_limits<double>::epsilon() *
                         std::max(lam.cwiseAbs().maxCoeff(), 1e-300);
    const RealVector s = lam.unaryExpr([floor](double v) { return v > floor ? std::sqrt(v) : 0.0; });
    return Matrix<S>(es.eigenvectors() * s.template cast<S>().asDiagonal() * es.eigenvectors().adjoint());
  };
  Eigen::JacobiSVD<Matrix<S>> svd(psd_sqrt(X) * psd_sqrt(Y));
  return svd.singularValues().sum();
}

struct MetricRecord {
  double frob_sq = 0.0;     // ||X - X*||_F^2
  double frob_error = 0.0;  // ||X - X*||_F / ||X*||_F
  double trace_dist = std::numeric_limits<double>::quiet_NaN();
  double fidelity = std::numeric_limits<double>::quiet_NaN();
  double fidelity_sq = std::numeric_limits<double>::quiet_NaN();
};

/// All metrics of an estimate against a low-rank truth. Trace distance and
/// fidelity are filled in only when both factors are symmetric (and PSD for
/// fidelity).
template <Field S>
MetricRecord compute_metrics(const FactorTriple<S>& X, const FactorTriple<S>& truth) {
  MetricRecord m;
  m.frob_sq = frob_sq_factored(X, truth);
  const double t = truth.frobenius_norm();
  m.frob_error = t > 0.0 ? std::sqrt(m.frob_sq) / t : std::sqrt(m.frob_sq);
  if (X.is_symmetric() && truth.is_symmetric()) {
    m.trace_dist = trace_distance_factored(X, truth);
    const bool psd = (X.rank() == 0 || X.d().minCoeff() >= 0.0) &&
                     (truth.rank() == 0 || truth.d().minCoeff() >= 0.0);
    if (psd) {
      m.fidelity = fidelity_factored(X, truth);
      m.fidelity_sq = m.fidelity * m.fidelity;
    }
  }
  return m;
}

}  // namespace rsvp
