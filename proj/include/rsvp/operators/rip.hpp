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

// Monte-Carlo probe of the rank-restricted isometry constant. Every sample is
// a random rank-r matrix of unit Frobenius norm, so the returned values only
// bound delta_r from below.

#include <algorithm>
#include <limits>
#include <random>

#include "rsvp/core/linalg.hpp"
#include "rsvp/operators/operator.hpp"
#include "rsvp/rand/gaussian.hpp"

namespace rsvp {

struct RipEstimate {
  double lower = 0.0;  // max over samples of 1 - ||A X||^2
  double upper = 0.0;  // max over samples of ||A X||^2 - 1
  Index samples = 0;

  double delta() const { return std::max(lower, upper); }
};

/// Samples are Hermitian (U = V) for symmetric operators.
template <Field S = double, class Op>
  requires MeasurementOperator<Op, S>
RipEstimate rip_monte_carlo(const Op& op, Index r, Index trials, Rng& rng) {
  require(r >= 1 && r <= std::min(op.rows(), op.cols()), "rip_monte_carlo: rank out of range");
  require(trials >= 1, "rip_monte_carlo: need at least one trial");
  RipEstimate est;
  est.lower = -std::numeric_limits<double>::infinity();
  est.upper = -std::numeric_limits<double>::infinity();
  std::normal_distribution<double> normal(0.0, 1.0);
  for (Index t = 0; t < trials; ++t) {
    const Matrix<S> U = thin_qr(gaussian_test_block<S>(op.rows(), r, rng)).Q;
    Matrix<S> V;
    if (op.is_symmetric()) {
      V = U;
    } else {
      V = thin_qr(gaussian_test_block<S>(op.cols(), r, rng)).Q;
    }
    RealVector d(r);
    for (Index k = 0; k < r; ++k) d(k) = normal(rng);
    d /= d.norm();
    const double energy = op.template apply<S>(U, d, V).squaredNorm();
    est.lower = std::max(est.lower, 1.0 - energy);
    est.upper = std::max(est.upper, energy - 1.0);
  }
  est.samples = trials;
  return est;
}

}  // namespace rsvp
