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

#include <gtest/gtest.h>

#include "rsvp/solver/theory.hpp"

namespace rsvp {
namespace {

TEST(TheoryBounds, CorollaryValues) {
  const TheoryDiagnostics t = theory_bounds(0.2, 0.2, 0.0, 16, 16, 64, 4.0);
  EXPECT_EQ(t.theta, 0.75);
  EXPECT_EQ(t.tau, 1.5);
  EXPECT_TRUE(t.contracts());
}

TEST(TheoryBounds, ContractionThreshold) {
  for (double C : {4.0, 8.0, 100.0}) {
    const double thr = contraction_threshold(C);
    EXPECT_LT(theory_bounds(thr * 0.999, 0.0, 0.0, 1, 1, 1, C).theta, 1.0);
    EXPECT_GE(theory_bounds(std::min(thr * 1.001, 0.999), 0.0, 0.0, 1, 1, 1, C).theta, 1.0);
  }
  EXPECT_DOUBLE_EQ(contraction_threshold(4.0), 0.25);
}

TEST(TheoryBounds, GeneralBoundAtZeroDeltas) {
  const TheoryDiagnostics t = theory_bounds(0.0, 0.0, 0.0, 8, 8, 32, 4.0);
  EXPECT_EQ(t.theta_general, 0.0);
  EXPECT_EQ(t.tau_general, 20.0);
  EXPECT_EQ(t.theta, 0.0);
  EXPECT_EQ(t.tau, 1.0);
}

TEST(TheoryBounds, GeneralFormula) {
  // Direct evaluation of the two displayed bounds.
  const double d2 = 0.05, dc = 0.1, eps = 0.25;
  const double ratio = 32.0 * 32.0 / 200.0;
  const double lead = (1 + d2) / (1 - dc);
  const double theta = 12 * lead * (eps / (1 + dc) * ratio + (1 + eps) * 3 * dc / (1 - d2));
  const double tau = lead * (12 * (1 + eps) * (1 + 2 * dc / (1 - d2)) + 8);
  const TheoryDiagnostics t = theory_bounds(d2, dc, eps, 32, 32, 200, 4.0);
  EXPECT_DOUBLE_EQ(t.theta, theta);
  EXPECT_DOUBLE_EQ(t.tau, tau);
  EXPECT_FALSE(t.contracts());
}

TEST(TheoryBounds, SketchConstantAndNoiseFloor) {
  TheoryInputs in;
  in.delta_2r = 0.2;
  in.delta_cr = 0.2;
  in.rank = 2;
  in.sketch_width = 7;
  in.noise_norm_sq = 0.5;
  const TheoryDiagnostics t = theory_bounds(in);
  EXPECT_EQ(t.c, 5);  // 7 <= (5 - 1) * 2
  EXPECT_DOUBLE_EQ(t.noise_floor, std::max(16.0, 1.5 / 0.25) * 0.5);
}

TEST(TheoryBounds, RejectsInvalidInputs) {
  EXPECT_THROW(theory_bounds(1.0, 0.0, 0.0, 1, 1, 1, 4.0), dimension_error);
  EXPECT_THROW(theory_bounds(0.0, 1.2, 0.0, 1, 1, 1, 4.0), dimension_error);
  EXPECT_THROW(theory_bounds(0.0, 0.0, 0.0, 1, 1, 1, 3.0), dimension_error);
}

}  // namespace
}  // namespace rsvp
