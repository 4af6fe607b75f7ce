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

// Closed-form contraction and noise-amplification factors of the SVP
// iteration invariant E f(X_{i+1}) <= theta f(X_i) + tau ||e||^2.

#include <algorithm>
#include <cmath>
#include <limits>

#include "rsvp/core/types.hpp"

namespace rsvp {

struct TheoryInputs {
  double delta_2r = 0.0;
  double delta_cr = 0.0;
  double epsilon = 0.0;
  Index m = 1;
  Index n = 1;
  Index p = 1;
  double C = 4.0;
  Index rank = 1;
  Index sketch_width = 0;   // l = r + rho; 0 leaves c unset
  double noise_norm_sq = 0.0;
};

struct TheoryDiagnostics {
  double delta_2r = 0.0;
  double delta_cr = 0.0;
  double epsilon = 0.0;
  Index c = 0;  // smallest integer with l <= (c - 1) r
  /// Values in force: the exact-projection closed form when epsilon == 0,
  /// the general bound otherwise.
  double theta = 0.0;
  double tau = 0.0;
  double theta_general = 0.0;
  double tau_general = 0.0;
  double noise_floor = 0.0;  // max{C^2, tau / (1 - theta)} ||e||^2; inf when theta >= 1
  bool contracts() const { return theta < 1.0; }
};

inline TheoryDiagnostics theory_bounds(const TheoryInputs& in) {
  const double d2 = in.delta_2r;
  const double dc = in.delta_cr;
  require(d2 >= 0.0 && d2 < 1.0, "theory_bounds: delta_2r must lie in [0, 1)");
  require(dc >= 0.0 && dc < 1.0, "theory_bounds: delta_cr must lie in [0, 1)");
  require(in.epsilon >= 0.0, "theory_bounds: epsilon must be >= 0");
  require(in.C >= 4.0, "theory_bounds: C must be >= 4");
  require(in.m >= 1 && in.n >= 1 && in.p >= 1, "theory_bounds: dimensions must be positive");

  TheoryDiagnostics t;
  t.delta_2r = d2;
  t.delta_cr = dc;
  t.epsilon = in.epsilon;
  if (in.sketch_width > 0) {
    require(in.rank >= 1, "theory_bounds: rank must be >= 1");
    t.c = (in.sketch_width + in.rank - 1) / in.rank + 1;
  }

  const double eps = in.epsilon;
  const double ratio = static_cast<double>(in.m) * static_cast<double>(in.n) / static_cast<double>(in.p);
  const double lead = (1.0 + d2) / (1.0 - dc);
  t.theta_general = 12.0 * lead * (eps / (1.0 + dc) * ratio + (1.0 + eps) * 3.0 * dc / (1.0 - d2));
  t.tau_general = lead * (12.0 * (1.0 + eps) * (1.0 + 2.0 * dc / (1.0 - d2)) + 8.0);

  if (eps == 0.0) {
    const double g = 2.0 * d2 / (1.0 - d2);
    t.theta = g * (1.0 + 2.0 / in.C);
    t.tau = 1.0 + g;
    // Near the threshold theta is within rounding of 1; keep its side of 1
    // consistent with contraction_threshold(C).
    const bool below = d2 < 1.0 / (3.0 + 4.0 / in.C);
    if (below && t.theta >= 1.0) t.theta = std::nextafter(1.0, 0.0);
    if (!below && t.theta < 1.0) t.theta = 1.0;
  } else {
    t.theta = t.theta_general;
    t.tau = t.tau_general;
  }

  if (t.theta < 1.0) {
    t.noise_floor = std::max(in.C * in.C, t.tau / (1.0 - t.theta)) * in.noise_norm_sq;
  } else {
    t.noise_floor = std::numeric_limits<double>::infinity();
  }
  return t;
}

inline TheoryDiagnostics theory_bounds(double delta_2r, double delta_cr, double epsilon, Index m,
                                       Index n, Index p, double C) {
  TheoryInputs in;
  in.delta_2r = delta_2r;
  in.delta_cr = delta_cr;
  in.epsilon = epsilon;
  in.m = m;
  in.n = n;
  in.p = p;
  in.C = C;
  return theory_bounds(in);
}

/// Largest delta_2r for which the exact-projection theta stays below 1.
inline double contraction_threshold(double C) { return 1.0 / (3.0 + 4.0 / C); }

}  // namespace rsvp
