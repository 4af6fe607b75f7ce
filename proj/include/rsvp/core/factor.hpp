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

#include <string>
#include <utility>

#include "rsvp/core/linalg.hpp"

namespace rsvp {

/// A rank-k matrix U diag(d) V^H with orthonormal-column U (m x k) and
/// V (n x k). This is the only representation the solver keeps for iterates;
/// nothing here ever materializes the m x n product unless dense() is asked
/// for explicitly.
///
/// Symmetric factors (U diag(d) U^H, d possibly negative) share storage: V()
/// returns U().
template <Field S>
class FactorTriple {
 public:
  FactorTriple() = default;

  FactorTriple(Matrix<S> U, RealVector d, Matrix<S> V, double tol = kOrthoTol)
      : u_(std::move(U)), v_(std::move(V)), d_(std::move(d)), symmetric_(false) {
    validate(tol);
  }

  static FactorTriple symmetric(Matrix<S> U, RealVector d, double tol = kOrthoTol) {
    FactorTriple f;
    f.u_ = std::move(U);
    f.d_ = std::move(d);
    f.symmetric_ = true;
    f.validate(tol);
    return f;
  }

  /// The zero matrix carried on k columns of the identity, so widths stay
  /// uniform across iterations.
  static FactorTriple zero(Index m, Index n, Index k, bool symmetric) {
    require(k <= std::min(m, n), "FactorTriple::zero: k exceeds dimensions");
    require(!symmetric || m == n, "FactorTriple::zero: symmetric factor must be square");
    RealVector d = RealVector::Zero(k);
    if (symmetric) return FactorTriple::symmetric(Matrix<S>::Identity(m, k), std::move(d));
    return FactorTriple(Matrix<S>::Identity(m, k), std::move(d), Matrix<S>::Identity(n, k));
  }

  Index rows() const { return u_.rows(); }
  Index cols() const { return symmetric_ ? u_.rows() : v_.rows(); }
  Index rank() const { return d_.size(); }
  bool is_symmetric() const { return symmetric_; }

  const Matrix<S>& U() const { return u_; }
  const Matrix<S>& V() const { return symmetric_ ? u_ : v_; }
  const RealVector& d() const { return d_; }

  /// Same bases, new values. Used after projecting the spectrum.
  FactorTriple with_values(RealVector d) const {
    require(d.size() == d_.size(), "FactorTriple::with_values: length mismatch");
    FactorTriple f = *this;
    f.d_ = std::move(d);
    return f;
  }

  /// Frobenius norm of the represented matrix (exact given orthonormal bases).
  double frobenius_norm() const { return d_.norm(); }

  Matrix<S> dense() const { return u_ * d_.template cast<S>().asDiagonal() * V().adjoint(); }

 private:
  void validate(double tol) {
    const Index k = d_.size();
    require(u_.cols() == k, "FactorTriple: U has " + std::to_string(u_.cols()) +
                                " columns, d has length " + std::to_string(k));
    if (!symmetric_) require(v_.cols() == k, "FactorTriple: V column count differs from d");
    require(k <= std::min(rows(), cols()), "FactorTriple: rank exceeds dimensions");
    require_finite(u_, "FactorTriple U");
    require_finite(d_, "FactorTriple d");
    if (orthonormality_error(u_) > tol)
      throw contract_error("FactorTriple: U columns are not orthonormal");
    if (!symmetric_) {
      require_finite(v_, "FactorTriple V");
      if (orthonormality_error(v_) > tol)
        throw contract_error("FactorTriple: V columns are not orthonormal");
    }
  }

  Matrix<S> u_;
  Matrix<S> v_;
  RealVector d_;
  bool symmetric_ = false;
};

/// Sum of squared values beyond the first r: the squared Frobenius error of
/// truncating a sorted factor to rank r.
inline double tail_energy(const RealVector& d, Index r) {
  require(r >= 0 && r <= d.size(), "tail_energy: r out of range");
  return d.tail(d.size() - r).squaredNorm();
}

/// Keep the leading r triples. Symmetric factors must be sorted by |d|,
/// general factors by value.
template <Field S>
FactorTriple<S> truncate_rank(const FactorTriple<S>& f, Index r) {
  require(r >= 0, "truncate_rank: negative rank");
  require(r <= f.rank(), "truncate_rank: r = " + std::to_string(r) + " exceeds rank " +
                             std::to_string(f.rank()));
  const RealVector& d = f.d();
  for (Index j = 1; j < d.size(); ++j) {
    const bool ok = f.is_symmetric() ? std::abs(d(j)) <= std::abs(d(j - 1)) : d(j) <= d(j - 1);
    if (!ok) throw contract_error("truncate_rank: values are not sorted");
  }
  if (r == f.rank()) return f;
  if (f.is_symmetric())
    return FactorTriple<S>::symmetric(f.U().leftCols(r), d.head(r), kOrthoTol);
  return FactorTriple<S>(f.U().leftCols(r), d.head(r), f.V().leftCols(r), kOrthoTol);
}

}  // namespace rsvp
