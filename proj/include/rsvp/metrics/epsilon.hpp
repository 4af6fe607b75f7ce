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

// Empirical approximation quality of the randomized projector,
//   eps~ = ||X - X~||_F^2 / ||X - X_r||_F^2 - 1,
// where X~ is the rank-l intermediate (not its rank-r truncation). The
// expected value is bounded by r / (rho - 1) when q = 0.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

#include "rsvp/core/linalg.hpp"
#include "rsvp/core/random.hpp"
#include "rsvp/rand/rand_svd.hpp"

namespace rsvp {

struct EpsilonStats {
  std::vector<double> values;  // one per seed, in seed order
  double mean = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();  // standard error of the mean
  double min = std::numeric_limits<double>::quiet_NaN();
  double max = std::numeric_limits<double>::quiet_NaN();
  double bound = 0.0;       // r / (rho - 1)
  bool degenerate = false;  // X has rank <= r; eps~ undefined
};

inline void summarize(EpsilonStats& s) {
  if (s.values.empty()) return;
  const double n = static_cast<double>(s.values.size());
  double sum = 0.0;
  for (double v : s.values) sum += v;
  s.mean = sum / n;
  double ss = 0.0;
  for (double v : s.values) ss += (v - s.mean) * (v - s.mean);
  s.se = s.values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  s.min = *std::min_element(s.values.begin(), s.values.end());
  s.max = *std::max_element(s.values.begin(), s.values.end());
}

/// Seed t uses the stream make_rng(master_seed, t), so calls with different
/// (rho, q) but the same master seed share their Gaussian test blocks.
template <Field S>
EpsilonStats epsilon_tilde(const Matrix<S>& X, Index r, Index rho, int q, Index seeds,
                           std::uint64_t master_seed) {
  require(std::max(X.rows(), X.cols()) <= kDenseSizeLimit, "epsilon_tilde: matrix exceeds dense size limit");
  require(seeds >= 1, "epsilon_tilde: need at least one seed");
  RandProjConfig cfg;
  cfg.rank = r;
  cfg.oversampling = rho;
  cfg.power_iters = q;
  cfg.probe_check = false;
  cfg.validate(X.rows(), X.cols());

  EpsilonStats out;
  out.bound = cfg.epsilon();
  const SvdResult<S> svd = dense_svd(X);
  const double optimal = tail_energy(svd.sigma, r);
  if (optimal <= 1e-24 * std::max(X.squaredNorm(), std::numeric_limits<double>::min())) {
    out.degenerate = true;
    return out;
  }
  const ImplicitMatrix<S> h = ImplicitMatrix<S>::from_dense(X);
  out.values.reserve(static_cast<std::size_t>(seeds));
  for (Index t = 0; t < seeds; ++t) {
    Rng rng = make_rng(master_seed, static_cast<std::uint64_t>(t));
    const RandProjResult<S> res = rand_svd(h, cfg, rng);
    const double err = (X - res.aux.dense()).squaredNorm();
    out.values.push_back(err / optimal - 1.0);
  }
  summarize(out);
  return out;
}

}  // namespace rsvp
