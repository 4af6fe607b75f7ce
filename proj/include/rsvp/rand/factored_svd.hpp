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

#include "rsvp/core/linalg.hpp"

namespace rsvp {

/// SVD of X = Ut * D * Vt^H given only the factors (Ut: m x k, D: k x k,
/// Vt: n x k). Two thin QRs reduce the problem to a k x k dense SVD, for
/// O((m + n) k^2 + k^3) work; the m x n product is never formed.
template <Field S>
SvdResult<S> factored_svd(const Matrix<S>& Ut, const Matrix<S>& D, const Matrix<S>& Vt) {
  const Index k = D.rows();
  require(D.cols() == k, "factored_svd: core matrix must be square");
  require(Ut.cols() == k && Vt.cols() == k, "factored_svd: factor widths do not match core");
  require(k <= std::min(Ut.rows(), Vt.rows()), "factored_svd: k exceeds min(m, n)");

  const QrResult<S> qu = thin_qr(Ut);
  const QrResult<S> qv = thin_qr(Vt);
  const Matrix<S> core = qu.R * D * qv.R.adjoint();
  SvdResult<S> small = dense_svd(core);
  SvdResult<S> out;
  out.U = qu.Q * small.U;
  out.sigma = std::move(small.sigma);
  out.V = qv.Q * small.V;
  return out;
}

/// Diagonal-core convenience overload.
template <Field S>
SvdResult<S> factored_svd(const Matrix<S>& Ut, const RealVector& d, const Matrix<S>& Vt) {
  const Matrix<S> D = d.template cast<S>().asDiagonal();
  return factored_svd(Ut, D, Vt);
}

/// Hermitian counterpart: eigendecomposition of Ut * D * Ut^H with D Hermitian.
template <Field S>
EigResult<S> factored_eig(const Matrix<S>& Ut, const Matrix<S>& D) {
  const Index k = D.rows();
  require(D.cols() == k && Ut.cols() == k, "factored_eig: factor widths do not match core");
  require(k <= Ut.rows(), "factored_eig: k exceeds n");
  const QrResult<S> qu = thin_qr(Ut);
  Matrix<S> core = qu.R * D * qu.R.adjoint();
  core = (core + core.adjoint()) * 0.5;
  EigResult<S> small = dense_eig_hermitian(core);
  EigResult<S> out;
  out.U = qu.Q * small.U;
  out.lambda = std::move(small.lambda);
  return out;
}

}  // namespace rsvp
