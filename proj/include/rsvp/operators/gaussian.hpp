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

// Dense reference operator A(X) = G vec(X) on real m x n matrices, with vec in
// column-major order. The Gaussian ensemble draws G with i.i.d. N(0, 1/p)
// entries so that E ||A(X)||^2 = ||X||_F^2.

#include <Eigen/Eigenvalues>

#include <cmath>
#include <cstdint>
#include <optional>
#include <random>

#include "rsvp/core/factor.hpp"
#include "rsvp/core/random.hpp"

namespace rsvp {

namespace detail {

inline constexpr std::uint64_t kProbeSeedGaussian = 0x5851f42d4c957f2dull;

/// Largest eigenvalue of G G^T. Exact for small Gram sizes, power iteration
/// otherwise.
inline double spectral_norm_sq(const RealMatrix& G) {
  const Index k = std::min(G.rows(), G.cols());
  if (k == 0) return 0.0;
  if (k <= 1024) {
    const RealMatrix gram = G.rows() <= G.cols() ? RealMatrix(G * G.transpose())
                                                 : RealMatrix(G.transpose() * G);
    Eigen::SelfAdjointEigenSolver<RealMatrix> es(gram, Eigen::EigenvaluesOnly);
    return es.eigenvalues().maxCoeff();
  }
  Rng rng(kProbeSeedGaussian);
  std::normal_distribution<double> normal(0.0, 1.0);
  RealVector v(G.cols());
  for (Index i = 0; i < v.size(); ++i) v(i) = normal(rng);
  v.normalize();
  double lambda = 0.0;
  for (int it = 0; it < 1000; ++it) {
    RealVector w = G.transpose() * (G * v);
    const double next = v.dot(w);
    v = w.normalized();
    if (it > 10 && std::abs(next - lambda) <= 1e-12 * next) {
      lambda = next;
      break;
    }
    lambda = next;
  }
  return lambda;
}

}  // namespace detail

class GaussianOperator {
 public:
  /// i.i.d. N(0, 1/p) entries from a generator seeded with `seed`, filled in
  /// column-major order.
  GaussianOperator(Index m, Index n, Index p, std::uint64_t seed) : m_(m), n_(n), seed_(seed) {
    require(m >= 1 && n >= 1 && p >= 1, "GaussianOperator: dimensions must be positive");
    Rng rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0 / std::sqrt(static_cast<double>(p)));
    G_.resize(p, m * n);
    for (Index c = 0; c < G_.cols(); ++c)
      for (Index r = 0; r < p; ++r) G_(r, c) = normal(rng);
    norm_sq_ = detail::spectral_norm_sq(G_);
  }

  /// Explicit measurement matrix, p x (m n).
  GaussianOperator(Index m, Index n, RealMatrix G) : m_(m), n_(n), G_(std::move(G)) {
    require(G_.cols() == m * n, "GaussianOperator: matrix must have m*n columns");
    require(G_.rows() >= 1, "GaussianOperator: need at least one measurement");
    require_finite(G_, "GaussianOperator");
    norm_sq_ = detail::spectral_norm_sq(G_);
  }

  Index rows() const { return m_; }
  Index cols() const { return n_; }
  Index measurements() const { return G_.rows(); }
  bool is_symmetric() const { return false; }
  double norm_sq() const { return norm_sq_; }
  std::optional<std::uint64_t> seed() const { return seed_; }
  void set_threads(unsigned) {}

  const RealMatrix& densify() const { return G_; }

  template <Field S>
    requires(!is_complex_v<S>)
  RealVector apply(const Matrix<S>& U, const RealVector& d, const Matrix<S>& V) const {
    require(U.rows() == m_ && V.rows() == n_, "GaussianOperator::apply: factor rows mismatch");
    require(U.cols() == d.size() && V.cols() == d.size(), "GaussianOperator::apply: width mismatch");
    const RealMatrix X = U * d.asDiagonal() * V.transpose();
    return G_ * X.reshaped();
  }

  template <Field S>
    requires(!is_complex_v<S>)
  RealVector apply(const FactorTriple<S>& f) const {
    return apply<S>(f.U(), f.d(), f.V());
  }

  /// A*(z) as an m x n matrix.
  RealMatrix adjoint_matrix(const RealVector& z) const {
    require(z.size() == measurements(), "GaussianOperator: z has wrong length");
    const RealVector g = G_.transpose() * z;
    return g.reshaped(m_, n_);
  }

  template <Field S>
    requires(!is_complex_v<S>)
  Matrix<S> adjoint_apply(const RealVector& z, const Matrix<S>& W) const {
    require(W.rows() == n_, "GaussianOperator::adjoint_apply: block rows must equal n");
    return adjoint_matrix(z) * W;
  }

  template <Field S>
    requires(!is_complex_v<S>)
  Matrix<S> adjoint_apply_adj(const RealVector& z, const Matrix<S>& W) const {
    require(W.rows() == m_, "GaussianOperator::adjoint_apply_adj: block rows must equal m");
    return adjoint_matrix(z).transpose() * W;
  }

 private:
  Index m_;
  Index n_;
  std::optional<std::uint64_t> seed_;
  RealMatrix G_;
  double norm_sq_ = 0.0;
};

}  // namespace rsvp
