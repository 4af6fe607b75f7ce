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

#include "oracles.hpp"

namespace rsvp {
namespace {

static_assert(MeasurementOperator<GaussianOperator, double>);
static_assert(MeasurementOperator<PauliOperator, double>);
static_assert(MeasurementOperator<PauliOperator, Complex>);

TEST(GaussianOperator, ReproducibleFromSeed) {
  const GaussianOperator a(6, 5, 20, 3), b(6, 5, 20, 3), c(6, 5, 20, 4);
  EXPECT_EQ((a.densify() - b.densify()).norm(), 0.0);
  EXPECT_GT((a.densify() - c.densify()).norm(), 0.0);
  EXPECT_EQ(a.seed().value(), 3u);
}

TEST(GaussianOperator, EntryVariance) {
  const GaussianOperator op(20, 20, 200, 9);
  const double var = op.densify().squaredNorm() / static_cast<double>(op.densify().size());
  EXPECT_NEAR(var * 200.0, 1.0, 0.02);
}

TEST(GaussianOperator, ApplyAndAdjointsMatchDenseMatrix) {
  const GaussianOperator op(7, 5, 30, 10);
  Rng rng(1);
  const RealMatrix G = op.densify();
  const RealMatrix U = oracle::random_orthonormal<double>(7, 2, rng);
  const RealMatrix V = oracle::random_orthonormal<double>(5, 2, rng);
  RealVector d(2);
  d << 2, 0.5;
  const RealMatrix X = U * d.asDiagonal() * V.transpose();
  RealVector yref(30);
  for (Index j = 0; j < 30; ++j) {
    double s = 0;
    for (Index b = 0; b < 5; ++b)
      for (Index a = 0; a < 7; ++a) s += G(j, a + 7 * b) * X(a, b);
    yref(j) = s;
  }
  EXPECT_LE((op.apply<double>(U, d, V) - yref).norm(), 1e-12 * yref.norm());

  const RealVector z = gaussian_test_block<double>(30, 1, rng).col(0);
  RealMatrix M = RealMatrix::Zero(7, 5);
  for (Index j = 0; j < 30; ++j)
    for (Index b = 0; b < 5; ++b)
      for (Index a = 0; a < 7; ++a) M(a, b) += z(j) * G(j, a + 7 * b);
  const RealMatrix W = gaussian_test_block<double>(5, 3, rng);
  const RealMatrix W2 = gaussian_test_block<double>(7, 3, rng);
  EXPECT_LE((op.adjoint_apply<double>(z, W) - M * W).norm(), 1e-12 * (M * W).norm());
  EXPECT_LE((op.adjoint_apply_adj<double>(z, W2) - M.transpose() * W2).norm(), 1e-12 * (M * W).norm());
  EXPECT_EQ(op.adjoint_apply<double>(RealVector::Zero(30), W).norm(), 0.0);
}

TEST(GaussianOperator, AdjointIdentity) {
  const GaussianOperator op(9, 8, 40, 11);
  Rng rng(2);
  const RealMatrix U = oracle::random_orthonormal<double>(9, 3, rng);
  const RealMatrix V = oracle::random_orthonormal<double>(8, 3, rng);
  RealVector d = gaussian_test_block<double>(3, 1, rng).col(0);
  const RealVector z = gaussian_test_block<double>(40, 1, rng).col(0);
  const double lhs = op.apply<double>(U, d, V).dot(z);
  const double rhs = (U * d.asDiagonal() * V.transpose()).cwiseProduct(op.adjoint_matrix(z)).sum();
  EXPECT_NEAR(lhs, rhs, 1e-10 * std::abs(lhs));
}

TEST(GaussianOperator, NormMatchesDenseSpectralNorm) {
  const GaussianOperator op(12, 10, 50, 12);
  Eigen::JacobiSVD<RealMatrix> svd(op.densify());
  EXPECT_NEAR(op.norm_sq(), svd.singularValues()(0) * svd.singularValues()(0), 1e-10 * op.norm_sq());
}

TEST(GaussianOperator, NormNearMnOverPOnDefaultSize) {
  // At p << mn the squared spectral norm concentrates near (1 + sqrt(p/mn))^2 mn/p.
  for (std::uint64_t seed = 1; seed <= 3; ++seed) {
    const GaussianOperator op(64, 64, 128, seed);
    EXPECT_LE(op.norm_sq(), 1.5 * 64.0 * 64.0 / 128.0);
  }
}

TEST(GaussianOperator, ExplicitMatrixAndShapeChecks) {
  EXPECT_THROW(GaussianOperator(3, 3, RealMatrix::Zero(4, 8)), dimension_error);
  const GaussianOperator op(2, 2, RealMatrix(RealMatrix::Identity(4, 4)));
  EXPECT_FALSE(op.seed().has_value());
  EXPECT_NEAR(op.norm_sq(), 1.0, 1e-14);
  EXPECT_THROW(op.apply<double>(RealMatrix::Identity(3, 1), RealVector::Ones(1), RealMatrix::Identity(2, 1)),
               dimension_error);
}

}  // namespace
}  // namespace rsvp
