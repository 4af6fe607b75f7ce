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

// Randomized fixed-rank SVD / Hermitian EIG of an implicitly given matrix.
//
// With l = r + rho Gaussian probes and q power rounds the sketch is
//   Q = qr(X Omega),  then q times { Z = qr(X^H Q); Q = qr(X Z) },
// and X~ = Q Q^H X (rank l) is returned alongside its rank-r truncation.
// For q = 0 the expected squared Frobenius error of X~ is at most
// (1 + r / (rho - 1)) times the optimal rank-r error.
//
// All blocks are at most max(m, n) x l; the only products with X go through
// the ImplicitMatrix callbacks.

#include <string>

#include "rsvp/core/factor.hpp"
#include "rsvp/rand/factored_svd.hpp"
#include "rsvp/rand/gaussian.hpp"
#include "rsvp/rand/implicit_matrix.hpp"

namespace rsvp {

struct RandProjConfig {
  Index rank = 1;
  Index oversampling = 5;
  int power_iters = 0;
  /// Verify adjoint (or Hermitian) consistency of the map on 2 probe columns
  /// before sketching. Costs two extra block products.
  bool probe_check = true;

  Index sketch_width() const { return rank + oversampling; }

  /// Approximation factor of the expected-error bound, r / (rho - 1).
  double epsilon() const {
    return static_cast<double>(rank) / static_cast<double>(oversampling - 1);
  }

  void validate(Index m, Index n) const {
    require(rank >= 1, "RandProjConfig: rank must be >= 1");
    require(oversampling >= 2, "RandProjConfig: oversampling must be >= 2");
    require(power_iters >= 0, "RandProjConfig: power iterations must be >= 0");
    require(sketch_width() <= std::min(m, n),
            "RandProjConfig: r + rho = " + std::to_string(sketch_width()) +
                " exceeds min(m, n) = " + std::to_string(std::min(m, n)));
  }
};

inline constexpr double kProbeTol = 1e-8;

template <Field S>
struct RandProjResult {
  FactorTriple<S> truncated;  // rank r
  FactorTriple<S> aux;        // rank l intermediate X~
  double epsilon = 0.0;
  bool rank_deficient = false;  // some sketch block lost rank
};

namespace detail {

template <Field S>
Matrix<S> orthonormalize(const Matrix<S>& W, bool& deficient) {
  QrResult<S> qr = thin_qr(W);
  deficient = deficient || qr.rank_deficient;
  return std::move(qr.Q);
}

/// Range sketch shared by the SVD and EIG variants. Returns Q (m x l) with
/// X ~ Q Q^H X and Z = X^H Q.
template <Field S>
std::pair<Matrix<S>, Matrix<S>> range_sketch(const ImplicitMatrix<S>& X,
                                             const RandProjConfig& cfg, Rng& rng,
                                             bool& deficient) {
  const Index l = cfg.sketch_width();
  const Matrix<S> omega = gaussian_test_block<S>(X.cols, l, rng);
  Matrix<S> Q = orthonormalize<S>(X(omega), deficient);
  for (int j = 0; j < cfg.power_iters; ++j) {
    const Matrix<S> Z = orthonormalize<S>(X.adjoint(Q), deficient);
    Q = orthonormalize<S>(X(Z), deficient);
  }
  Matrix<S> Z = X.adjoint(Q);
  return {std::move(Q), std::move(Z)};
}

}  // namespace detail

/// Randomized SVD. `aux` is the rank-l matrix Q Q^H X; `truncated` keeps its
/// leading r singular triples.
template <Field S>
RandProjResult<S> rand_svd(const ImplicitMatrix<S>& X, const RandProjConfig& cfg, Rng& rng) {
  cfg.validate(X.rows, X.cols);
  if (cfg.probe_check && adjoint_mismatch(X) > kProbeTol)
    throw contract_error("rand_svd: forward and adjoint maps are inconsistent");

  RandProjResult<S> out;
  out.epsilon = cfg.epsilon();
  auto [Q, Z] = detail::range_sketch(X, cfg, rng, out.rank_deficient);
  const Index l = cfg.sketch_width();
  SvdResult<S> svd = factored_svd<S>(Q, Matrix<S>(Matrix<S>::Identity(l, l)), Z);
  out.aux = FactorTriple<S>(std::move(svd.U), std::move(svd.sigma), std::move(svd.V));
  out.truncated = truncate_rank(out.aux, cfg.rank);
  return out;
}

/// Randomized Hermitian eigendecomposition. `aux` is Q Q^H X Q Q^H with
/// U = V and eigenvalues of either sign, ordered by magnitude.
template <Field S>
RandProjResult<S> rand_eig(const ImplicitMatrix<S>& X, const RandProjConfig& cfg, Rng& rng) {
  require(X.rows == X.cols, "rand_eig: matrix must be square");
  cfg.validate(X.rows, X.cols);
  if (cfg.probe_check && hermitian_mismatch(X) > kProbeTol)
    throw contract_error("rand_eig: map is not Hermitian");

  RandProjResult<S> out;
  out.epsilon = cfg.epsilon();
  auto [Q, Z] = detail::range_sketch(X, cfg, rng, out.rank_deficient);
  Matrix<S> B = Q.adjoint() * Z;  // = Q^H X Q up to the Hermitian part
  B = (B + B.adjoint()) * 0.5;
  EigResult<S> eig = dense_eig_hermitian<S>(B);
  out.aux = FactorTriple<S>::symmetric(Q * eig.U, std::move(eig.lambda));
  out.truncated = truncate_rank(out.aux, cfg.rank);
  return out;
}

}  // namespace rsvp
