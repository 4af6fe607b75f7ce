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

// Metrics against a depolarized truth T = (1 - gamma) L + (gamma / n) I, where
// L is a low-rank PSD factor. T has full rank, but every metric below only
// needs L's factors and the scalar shift c = gamma / n.

#include <cmath>

#include "rsvp/metrics/factored.hpp"

namespace rsvp {

template <Field S>
struct DepolarizedTruth {
  FactorTriple<S> low_rank;  // L, symmetric PSD
  double gamma = 0.0;

  Index dimension() const { return low_rank.rows(); }
  double shift() const { return gamma / static_cast<double>(dimension()); }
  FactorTriple<S> scaled_low_rank() const { return low_rank.with_values((1.0 - gamma) * low_rank.d()); }

  /// ||T||_F^2 = (1-g)^2 ||L||^2 + 2 (1-g) c tr L + c^2 n.
  double frobenius_sq() const {
    const double c = shift();
    const double n = static_cast<double>(dimension());
    const double g1 = 1.0 - gamma;
    return g1 * g1 * low_rank.d().squaredNorm() + 2.0 * g1 * c * low_rank.d().sum() + c * c * n;
  }
};

/// ||X - T||_F^2 = ||A||^2 - 2 c tr(A) + c^2 n with A = X - (1 - gamma) L.
template <Field S>
double frob_sq_depolarized(const FactorTriple<S>& X, const DepolarizedTruth<S>& T) {
  require(X.is_symmetric(), "frob_sq_depolarized: estimate must be symmetric");
  const FactorTriple<S> L = T.scaled_low_rank();
  const double c = T.shift();
  const double trace_a = X.d().sum() - L.d().sum();
  const double v = frob_sq_factored(X, L) - 2.0 * c * trace_a +
                   c * c * static_cast<double>(T.dimension());
  return std::max(v, 0.0);
}

/// ||X - T||_*: A has eigenvalues lambda_i on the k-dimensional span of the
/// stacked factors and 0 elsewhere, so the shifted spectrum is
/// {lambda_i - c} together with n - k copies of -c.
template <Field S>
double trace_distance_depolarized(const FactorTriple<S>& X, const DepolarizedTruth<S>& T) {
  require(X.is_symmetric(), "trace_distance_depolarized: estimate must be symmetric");
  const FactorTriple<S> L = T.scaled_low_rank();
  const Index n = T.dimension();
  const Index k = X.rank() + L.rank();
  const double c = T.shift();
  if (k > n) {
    const Matrix<S> A = X.dense() - L.dense() - c * Matrix<S>::Identity(n, n);
    Eigen::SelfAdjointEigenSolver<Matrix<S>> es(A, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  const Matrix<S> Us = detail::hstack(X.U(), L.U());
  const RealVector d = detail::difference_values(X.d(), L.d());
  const Matrix<S> D = d.template cast<S>().asDiagonal();
  const EigResult<S> eig = factored_eig<S>(Us, D);
  double sum = static_cast<double>(n - k) * c;
  for (Index i = 0; i < eig.lambda.size(); ++i) sum += std::abs(eig.lambda(i) - c);
  return sum;
}

/// ||sqrt(X) sqrt(T)||_* for PSD X = U D U^H: the k x k core
/// D^{1/2} U^H T U D^{1/2} with U^H T U = (1-g) U^H L U + c I.
template <Field S>
double fidelity_depolarized(const FactorTriple<S>& X, const DepolarizedTruth<S>& T) {
  require(X.is_symmetric(), "fidelity_depolarized: estimate must be symmetric");
  if (X.rank() > 0 && X.d().minCoeff() < 0.0) throw contract_error("fidelity_depolarized: X must be PSD");
  const Index k = X.rank();
  if (k == 0) return 0.0;
  const FactorTriple<S> L = T.scaled_low_rank();
  // sqrt(X) T sqrt(X) ~ B B^H with B = D^{1/2} [U^H U_L D_L^{1/2}, sqrt(shift) I].
  Matrix<S> B(k, L.rank() + k);
  B.leftCols(L.rank()) = (X.U().adjoint() * L.U()) * L.d().cwiseSqrt().template cast<S>().asDiagonal();
  B.rightCols(k) = std::sqrt(T.shift()) * Matrix<S>::Identity(k, k);
  B = X.d().cwiseSqrt().template cast<S>().asDiagonal() * B;
  return detail::nuclear_norm(B);
}

template <Field S>
MetricRecord compute_metrics(const FactorTriple<S>& X, const DepolarizedTruth<S>& T) {
  MetricRecord m;
  m.frob_sq = frob_sq_depolarized(X, T);
  m.frob_error = std::sqrt(m.frob_sq / T.frobenius_sq());
  m.trace_dist = trace_distance_depolarized(X, T);
  if (X.rank() == 0 || X.d().minCoeff() >= 0.0) {
    m.fidelity = fidelity_depolarized(X, T);
    m.fidelity_sq = m.fidelity * m.fidelity;
  }
  return m;
}

}  // namespace rsvp
