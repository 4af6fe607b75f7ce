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

#include <random>

#include "rsvp/core/random.hpp"
#include "rsvp/core/types.hpp"

namespace rsvp {

/// n x l block of i.i.d. standard normals, filled column by column. In the
/// complex field the real and imaginary parts are independent N(0, 1) (no
/// 1/sqrt(2) normalization).
template <Field S>
Matrix<S> gaussian_test_block(Index n, Index l, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix<S> out(n, l);
  for (Index j = 0; j < l; ++j) {
    for (Index i = 0; i < n; ++i) {
      if constexpr (is_complex_v<S>) {
        const double re = normal(rng);
        const double im = normal(rng);
        out(i, j) = S(re, im);
      } else {
        out(i, j) = normal(rng);
      }
    }
  }
  return out;
}

}  // namespace rsvp
