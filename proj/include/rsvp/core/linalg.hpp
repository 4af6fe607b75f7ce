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

// Dense small-scale kernels: thin QR, SVD and Hermitian eigendecomposition.
// These only ever see blocks of width r + rho (or explicit test matrices), so
// they are thin wrappers over Eigen with the sorting and sign conventions the
// rest of the library relies on.

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "rsvp/core/types.hpp"

namespace rsvp {

template <Field S>
struct QrResult {
  Matrix<S> Q;  // m x k, orthonormal columns
  Matrix<S> R;  // k x k, upper triangular with real nonnegative diagonal
  bool rank_deficient = false;
};

template <Field S>
struct SvdResult {
  Matrix<S> U;
  RealVector sigma;  // non-increasing, >= 0
  Matrix<S> V;
};

template <Field S>
struct EigResult {
  Matrix<S> U;
  RealVector lambda;  // sorted by |lambda| non-increasing, ties by index
};

/// Max-norm distance of Q^H Q from the identity.
template <Field S>
double orthonormality_error(const Matrix<S>& Q) {
  if (Q.cols() == 0) return 0.0;
  const Matrix<S> G = Q.adjoint() * Q;
  return (G - Matrix<S>::Identity(G.rows(), G.cols())).cwiseAbs().maxCoeff();
}

/// Householder thin QR. A rank-deficient M still yields an orthonormal Q: the
/// Householder reflectors complete the basis, and `rank_deficient` is raised
/// whenever some |R_ii| falls below rank_tol * max |R_jj|.
template <Field S>
QrResult<S> thin_qr(const Matrix<S>& M, double rank_tol = 1e-12) {
  const Index m = M.rows();
  const Index k = M.cols();
  require(k <= m, "thin_qr: more columns than rows");
  require_finite(M, "thin_qr");

  QrResult<S> out;
  if (k == 0) {
    out.Q = Matrix<S>(m, 0);
    out.R = Matrix<S>(0, 0);
    return out;
  }
  Eigen::HouseholderQR<Matrix<S>> qr(M);
  out.Q = qr.householderQ() * Matrix<S>::Identity(m, k);
  out.R = qr.matrixQR().topRows(k).template triangularView<Eigen::Upper>();

  // Normalize so that diag(R) is real and nonnegative.
  double max_diag = 0.0;
  for (Index i = 0; i < k; ++i) {
    const S rii = out.R(i, i);
    const double a = std::abs(rii);
    max_diag = std::max(max_diag, a);
    if (a > 0.0) {
      const S phase = rii / a;
      out.Q.col(i) *= phase;
      out.R.row(i) *= S(1) / phase;
    }
  }
  for (Index i = 0; i < k; ++i) {
    if (std::abs(out.R(i, i)) <= rank_tol * max_diag || max_diag == 0.0) {
      out.rank_deficient = true;
      break;
    }
  }
  return out;
}

/// Thin SVD, singular values descending. Refuses inputs whose smaller
/// dimension exceeds `size_limit`.
template <Field S>
SvdResult<S> dense_svd(const Matrix<S>& M, Index size_limit = kDenseSizeLimit) {
  if (std::min(M.rows(), M.cols()) > size_limit)
    throw size_limit_error("dense_svd: matrix exceeds dense size limit " +
                           std::to_string(size_limit));
  require_finite(M, "dense_svd");
  SvdResult<S> out;
  if (M.size() == 0) {
    out.U = Matrix<S>(M.rows(), 0);
    out.V = Matrix<S>(M.cols(), 0);
    out.sigma = RealVector(0);
    return out;
  }
  Eigen::BDCSVD<Matrix<S>> svd(M, Eigen::ComputeThinU | Eigen::ComputeThinV);
  out.U = svd.matrixU();
  out.sigma = svd.singularValues();
  out.V = svd.matrixV();
  return out;
}

/// Relative Hermitian defect ||M - M^H||_F / ||M||_F (0 for the zero matrix).
template <Field S>
double hermitian_defect(const Matrix<S>& M) {
  const double nrm = M.norm();
  if (nrm == 0.0) return 0.0;
  return (M - M.adjoint()).norm() / nrm;
}

/// Sort permutation by |values| non-increasing, stable in the original index.
inline std::vector<Index> magnitude_order(const RealVector& values) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Index a, Index b) {
    return std::abs(values(a)) > std::abs(values(b));
  });
  return idx;
}

/// Sort permutation by value non-increasing, stable in the original index.
inline std::vector<Index> value_order(const RealVector& values) {
  std::vector<Index> idx(static_cast<std::size_t>(values.size()));
  std::iota(idx.begin(), idx.end(), Index{0});
  std::stable_sort(idx.begin(), idx.end(),
                   [&](Index a, Index b) { return values(a) > values(b); });
  return idx;
}

template <Field S>
void permute_columns(Matrix<S>& U, RealVector& values, const std::vector<Index>& order) {
  Matrix<S> U2(U.rows(), U.cols());
  RealVector v2(values.size());
  for (std::size_t j = 0; j < order.size(); ++j) {
    U2.col(static_cast<Index>(j)) = U.col(order[j]);
    v2(static_cast<Index>(j)) = values(order[j]);
  }
  U = std::move(U2);
  values = std::move(v2);
}

/// Hermitian eigendecomposition M = U diag(lambda) U^H with eigenvalues
/// ordered by magnitude. Inputs with ||M - M^H||_F > 1e-8 ||M||_F are rejected.
template <Field S>
EigResult<S> dense_eig_hermitian(const Matrix<S>& M, Index size_limit = kDenseSizeLimit) {
  require(M.rows() == M.cols(), "dense_eig_hermitian: matrix not square");
  if (M.rows() > size_limit)
    throw size_limit_error("dense_eig_hermitian: matrix exceeds dense size limit " +
                           std::to_string(size_limit));
  require_finite(M, "dense_eig_hermitian");
  if (hermitian_defect(M) > 1e-8)
    throw contract_error("dense_eig_hermitian: input is not Hermitian");

  EigResult<S> out;
  if (M.rows() == 0) {
    out.U = Matrix<S>(0, 0);
    out.lambda = RealVector(0);
    return out;
  }
  const Matrix<S> H = (M + M.adjoint()) * 0.5;
  Eigen::SelfAdjointEigenSolver<Matrix<S>> es(H);
  if (es.info() != Eigen::Success) throw numerical_error("dense_eig_hermitian: solver failed");
  out.U = es.eigenvectors();
  out.lambda = es.eigenvalues();
  permute_columns(out.U, out.lambda, magnitude_order(out.lambda));
  return out;
}

}  // namespace rsvp
