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

#include <cmath>

#include "oracles.hpp"
#include "rsvp/rand/rand_svd.hpp"

namespace rsvp {
namespace {

TEST(GaussianBlock, DeterministicPerSeed) {
  Rng a(5), b(5), c(6);
  const RealMatrix x = gaussian_test_block<double>(7, 3, a);
  const RealMatrix y = gaussian_test_block<double>(7, 3, b);
  const RealMatrix z = gaussian_test_block<double>(7, 3, c);
  EXPECT_EQ((x - y).norm(), 0.0);
  EXPECT_GT((x - z).norm(), 0.0);
}

TEST(GaussianBlock, MomentsWithinClt) {
  Rng rng(7);
  const RealMatrix x = gaussian_test_block<double>(10000, 1, rng);
  const double mean = x.mean();
  const double var = (x.array() - mean).square().sum() / (x.size() - 1);
  EXPECT_LT(std::abs(mean), 0.05);
  EXPECT_GE(var, 0.9);
  EXPECT_LE(var, 1.1);
}

TEST(GaussianBlock, ComplexPartsAreUnitVariance) {
  Rng rng(8);
  const ComplexMatrix x = gaussian_test_block<Complex>(10000, 1, rng);
  EXPECT_NEAR(x.real().squaredNorm() / 10000.0, 1.0, 0.1);
  EXPECT_NEAR(x.imag().squaredNorm() / 10000.0, 1.0, 0.1);
}

TEST(FactoredSvd, IdentityCore) {
  RealVector d(2);
  d << 2, 1;
  const SvdResult<double> s = factored_svd<double>(RealMatrix::Identity(2, 2), d, RealMatrix::Identity(2, 2));
  EXPECT_NEAR(s.sigma(0), 2.0, 1e-15);
  EXPECT_NEAR(s.sigma(1), 1.0, 1e-15);
}

TEST(FactoredSvd, RankOne) {
  RealMatrix x(3, 1), y(2, 1);
  x << 0.6, 0.8, 0;
  y << 0, 1;
  const SvdResult<double> s = factored_svd<double>(x, RealMatrix(RealMatrix::Ones(1, 1)), y);
  EXPECT_NEAR(s.sigma(0), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.U.col(0).dot(x.col(0))), 1.0, 1e-15);
  EXPECT_NEAR(std::abs(s.V.col(0).dot(y.col(0))), 1.0, 1e-15);
}

TEST(FactoredSvd, MatchesDenseSvdOfProduct) {
  Rng rng(9);
  const RealMatrix U = gaussian_test_block<double>(30, 4, rng);
  const RealMatrix D = gaussian_test_block<double>(4, 4, rng);
  const RealMatrix V = gaussian_test_block<double>(20, 4, rng);
  const RealMatrix X = U * D * V.transpose();
  const SvdResult<double> s = factored_svd<double>(U, D, V);
  Eigen::JacobiSVD<RealMatrix> ref(X);
  for (Index i = 0; i < 4; ++i) EXPECT_NEAR(s.sigma(i), ref.singularValues()(i), 1e-9 * ref.singularValues()(0));
  EXPECT_LE((s.U * s.sigma.asDiagonal() * s.V.transpose() - X).norm(), 1e-9 * X.norm());
}

TEST(FactoredSvd, RejectsOversizeCore) {
  EXPECT_THROW(factored_svd<double>(RealMatrix::Identity(3, 3), RealMatrix(RealMatrix::Identity(3, 3)),
                                     RealMatrix::Identity(2, 3)),
               dimension_error);
}

RealMatrix decaying(Index n, Rng& rng) {
  const RealMatrix U = oracle::random_orthonormal<double>(n, n, rng);
  const RealMatrix V = oracle::random_orthonormal<double>(n, n, rng);
  RealVector s(n);
  for (Index j = 0; j < n; ++j) s(j) = std::pow(2.0, -static_cast<double>(j + 1));
  return U * s.asDiagonal() * V.transpose();
}

TEST(RandSvd, ExactRankIsCaptured) {
  Rng rng(21);
  const RealMatrix A = gaussian_test_block<double>(40, 3, rng);
  const RealMatrix B = gaussian_test_block<double>(30, 3, rng);
  const RealMatrix X = A * B.transpose();
  RandProjConfig cfg;
  cfg.rank = 3;
  for (int seed = 0; seed < 5; ++seed) {
    Rng r(seed);
    const RandProjResult<double> res = rand_svd(ImplicitMatrix<double>::from_dense(X), cfg, r);
    EXPECT_LE((X - res.aux.dense()).norm(), 1e-8 * X.norm());
    EXPECT_LE((X - res.truncated.dense()).norm(), 1e-8 * X.norm());
    EXPECT_EQ(res.truncated.rank(), 3);
    EXPECT_EQ(res.aux.rank(), 8);
  }
}

TEST(RandSvd, ReportsEpsilon) {
  RandProjConfig cfg;
  cfg.rank = 3;
  cfg.oversampling = 5;
  EXPECT_DOUBLE_EQ(cfg.epsilon(), 0.75);
}

TEST(RandSvd, ExpectedErrorWithinBound) {
  Rng gen(22);
  const RealMatrix X = decaying(64, gen);
  const SvdResult<double> svd = dense_svd(X);
  const double optimal = tail_energy(svd.sigma, 3);
  RandProjConfig cfg;
  cfg.rank = 3;
  cfg.oversampling = 5;
  const auto h = ImplicitMatrix<double>::from_dense(X);
  std::vector<double> err;
  for (int seed = 0; seed < 200; ++seed) {
    Rng rng = make_rng(1000, static_cast<std::uint64_t>(seed));
    const RandProjResult<double> res = rand_svd(h, cfg, rng);
    err.push_back((X - res.aux.dense()).squaredNorm());
    EXPECT_LE(err.back(), (X - res.truncated.dense()).squaredNorm() * (1 + 1e-12));
  }
  double mean = 0, ss = 0;
  for (double e : err) mean += e;
  mean /= err.size();
  for (double e : err) ss += (e - mean) * (e - mean);
  const double se = std::sqrt(ss / (err.size() - 1) / err.size());
  EXPECT_LE(mean, (1.0 + cfg.epsilon()) * optimal + 3 * se);
}

TEST(RandSvd, PowerIterationsImprovePairedSeeds) {
  Rng gen(23);
  const RealMatrix X = decaying(64, gen);
  const double optimal = tail_energy(dense_svd(X).sigma, 3);
  const auto h = ImplicitMatrix<double>::from_dense(X);
  RandProjConfig c0, c2;
  c0.rank = c2.rank = 3;
  c2.power_iters = 2;
  int better = 0;
  const int seeds = 100;
  for (int s = 0; s < seeds; ++s) {
    Rng r0 = make_rng(5, static_cast<std::uint64_t>(s));
    Rng r2 = make_rng(5, static_cast<std::uint64_t>(s));
    const double e0 = (X - rand_svd(h, c0, r0).aux.dense()).squaredNorm() / optimal - 1;
    const double e2 = (X - rand_svd(h, c2, r2).aux.dense()).squaredNorm() / optimal - 1;
    if (e2 < e0) ++better;
  }
  EXPECT_GE(better, static_cast<int>(0.9 * seeds));
}

TEST(RandSvd, PowerIterationsUseTwoQrPerRound) {
  // Count block products: q rounds cost 2 q + 2 calls in total.
  Rng gen(24);
  const RealMatrix X = gaussian_test_block<double>(20, 20, gen);
  int fwd = 0, adj = 0;
  ImplicitMatrix<double> h;
  h.rows = h.cols = 20;
  h.apply = [&](const RealMatrix& w) { ++fwd; return RealMatrix(X * w); };
  h.apply_adjoint = [&](const RealMatrix& w) { ++adj; return RealMatrix(X.transpose() * w); };
  RandProjConfig cfg;
  cfg.rank = 2;
  cfg.power_iters = 3;
  cfg.probe_check = false;
  Rng rng(1);
  rand_svd(h, cfg, rng);
  EXPECT_EQ(fwd, 4);
  EXPECT_EQ(adj, 4);
}

TEST(RandSvd, RejectsInconsistentAdjoint) {
  Rng gen(25);
  const RealMatrix X = gaussian_test_block<double>(12, 10, gen);
  ImplicitMatrix<double> h = ImplicitMatrix<double>::from_dense(X);
  h.apply_adjoint = [X](const RealMatrix& w) { return RealMatrix(-X.transpose() * w); };
  RandProjConfig cfg;
  cfg.rank = 2;
  Rng rng(1);
  EXPECT_GT(adjoint_mismatch(h), 1e-3);
  EXPECT_THROW(rand_svd(h, cfg, rng), contract_error);
}

TEST(RandSvd, RejectsShapeMismatchAndBadConfig) {
  Rng gen(26);
  ImplicitMatrix<double> h = ImplicitMatrix<double>::from_dense(gaussian_test_block<double>(12, 10, gen));
  h.apply_adjoint = [](const RealMatrix& w) { return RealMatrix(RealMatrix::Zero(9, w.cols())); };
  RandProjConfig cfg;
  cfg.rank = 2;
  Rng rng(1);
  EXPECT_THROW(rand_svd(h, cfg, rng), dimension_error);
  RandProjConfig bad;
  bad.rank = 2;
  bad.oversampling = 1;
  EXPECT_THROW(bad.validate(10, 10), dimension_error);
  bad.oversampling = 9;
  EXPECT_THROW(bad.validate(10, 10), dimension_error);
}

TEST(ImplicitMatrix, AdjointConsistencyOfBuilders) {
  Rng gen(27);
  const ComplexMatrix X = gaussian_test_block<Complex>(9, 7, gen);
  EXPECT_LE(adjoint_mismatch(ImplicitMatrix<Complex>::from_dense(X)), 1e-12);
  const ComplexMatrix U = gaussian_test_block<Complex>(9, 2, gen);
  const ComplexMatrix V = gaussian_test_block<Complex>(7, 2, gen);
  RealVector d(2);
  d << 1.5, -0.5;
  EXPECT_LE(adjoint_mismatch(ImplicitMatrix<Complex>::from_factors(U, d, V)), 1e-12);
}

TEST(RandEig, KeepsSignsOfDominantEigenvalues) {
  RealVector lam = RealVector::Constant(20, 0.01);
  lam(0) = 5;
  lam(1) = -4;
  lam(2) = 0.1;
  Rng gen(28);
  const RealMatrix Q = oracle::random_orthonormal<double>(20, 20, gen);
  const RealMatrix X = Q * lam.asDiagonal() * Q.transpose();
  RandProjConfig cfg;
  cfg.rank = 2;
  Rng rng(3);
  const RandProjResult<double> res = rand_eig(ImplicitMatrix<double>::from_dense(X), cfg, rng);
  EXPECT_TRUE(res.truncated.is_symmetric());
  const EigResult<double> ref = dense_eig_hermitian(X);
  EXPECT_NEAR(res.truncated.d()(0), ref.lambda(0), 1e-2);
  EXPECT_NEAR(res.truncated.d()(1), ref.lambda(1), 1e-2);
  EXPECT_GT(res.truncated.d()(0), 0.0);
  EXPECT_LT(res.truncated.d()(1), 0.0);
}

TEST(RandEig, ExactPsdRecovered) {
  Rng gen(29);
  const FactorTriple<double> f = oracle::random_density<double>(30, 3, gen);
  const RealMatrix X = f.dense();
  RandProjConfig cfg;
  cfg.rank = 3;
  Rng rng(4);
  const RandProjResult<double> res = rand_eig(ImplicitMatrix<double>::from_dense(X), cfg, rng);
  EXPECT_LE((X - res.truncated.dense()).norm(), 1e-8 * X.norm());
}

TEST(RandEig, MeanErrorWithinBoundOnIndefiniteMatrix) {
  Rng gen(30);
  const RealMatrix G = gaussian_test_block<double>(40, 40, gen);
  const RealMatrix X = (G + G.transpose()) * 0.5;
  const double optimal = tail_energy(dense_svd(X).sigma, 5);
  RandProjConfig cfg;
  cfg.rank = 5;
  cfg.power_iters = 2;
  const auto h = ImplicitMatrix<double>::from_dense(X);
  double sum = 0;
  for (int s = 0; s < 200; ++s) {
    Rng rng = make_rng(77, static_cast<std::uint64_t>(s));
    sum += (X - rand_eig(h, cfg, rng).aux.dense()).squaredNorm();
  }
  EXPECT_LE(sum / 200, (1 + cfg.epsilon()) * optimal);
}

TEST(RandEig, RejectsNonHermitian) {
  Rng gen(31);
  const RealMatrix X = gaussian_test_block<double>(10, 10, gen);
  RandProjConfig cfg;
  cfg.rank = 2;
  Rng rng(1);
  EXPECT_THROW(rand_eig(ImplicitMatrix<double>::from_dense(X), cfg, rng), contract_error);
}

TEST(RandEig, Complex) {
  Rng gen(32);
  const FactorTriple<Complex> f = oracle::random_density<Complex>(24, 2, gen);
  RandProjConfig cfg;
  cfg.rank = 2;
  Rng rng(4);
  const auto res = rand_eig(ImplicitMatrix<Complex>::from_dense(f.dense()), cfg, rng);
  EXPECT_LE((f.dense() - res.truncated.dense()).norm(), 1e-8);
}

}  // namespace
}  // namespace rsvp
