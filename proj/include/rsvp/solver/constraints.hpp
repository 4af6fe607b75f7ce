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

#include <algorithm>
#include <string>
#include <string_view>
#include <vector>

#include "rsvp/core/types.hpp"

namespace rsvp {

enum class Constraint { none, psd, simplex };

inline std::string to_string(Constraint c) {
  switch (c) {
    case Constraint::none: return "none";
    case Constraint::psd: return "psd";
    case Constraint::simplex: return "simplex";
  }
  return "none";
}

inline Constraint parse_constraint(std::string_view s) {
  if (s == "none") return Constraint::none;
  if (s == "psd") return Constraint::psd;
  if (s == "simplex") return Constraint::simplex;
  throw dimension_error("unknown constraint '" + std::string(s) + "' (expected none, psd or simplex)");
}

/// Euclidean projection onto {d >= 0, sum d = 1}: with u sorted descending,
/// k = max{j : u_j > (sum_{i<=j} u_i - 1) / j} and the threshold t is that
/// average, so the result is max(d - t, 0).
inline RealVector project_simplex(const RealVector& d) {
  require(d.size() >= 1, "project_simplex: empty spectrum");
  std::vector<double> u(d.data(), d.data() + d.size());
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumsum = 0.0;
  double threshold = 0.0;
  for (std::size_t j = 0; j < u.size(); ++j) {
    cumsum += u[j];
    const double t = (cumsum - 1.0) / static_cast<double>(j + 1);
    if (u[j] - t > 0.0) threshold = t;
  }
  RealVector out = (d.array() - threshold).cwiseMax(0.0);
  // Absorb rounding so the sum is 1 to the last bit or two.
  const double sum = out.sum();
  if (sum > 0.0) {
    Index top = 0;
    out.maxCoeff(&top);
    out(top) += 1.0 - sum;
  }
  return out;
}

/// Project a spectrum onto the constraint set. psd and simplex act on
/// eigenvalues, so they require a symmetric factor.
inline RealVector project_constraint(const RealVector& d, Constraint c, bool symmetric = true) {
  if (c == Constraint::none) return d;
  if (!symmetric)
    throw contract_error("project_constraint: " + to_string(c) + " needs a symmetric factor");
  if (c == Constraint::psd) return d.cwiseMax(0.0);
  return project_simplex(d);
}

}  // namespace rsvp
