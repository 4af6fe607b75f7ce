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

#include <set>

#include "oracles.hpp"

namespace rsvp {
namespace {

const Complex I(0.0, 1.0);

ComplexVector cvec(std::initializer_list<Complex> v) {
  ComplexVector out(static_cast<Index>(v.size()));
  Index i = 0;
  for (Complex x : v) out(i++) = x;
  return out;
}

TEST(PauliCode, StringAndIndexRoundTrip) {
  const PauliCode c = PauliCode::from_string("XIZY");
  EXPECT_EQ(c.to_string(), "XIZY");
  EXPECT_EQ(c.qubits(), 4);
  EXPECT_EQ(c.dimension(), 16);
  EXPECT_EQ(PauliCode::from_index(c.index(), 4), c);
  EXPECT_EQ(PauliCode::from_index(0, 3).to_string(), "III");
  EXPECT_EQ(PauliCode::from_index(1, 1).to_string(), "X");
  EXPECT_EQ(c.y_count(), 1);
  EXPECT_THROW(PauliCode::from_string("XQ"), dimension_error);
  EXPECT_THROW(PauliCode::from_string(""), dimension_error);
}

TEST(PauliApplyVector, SingleQubitDefinitions) {
  const ComplexVector z = pauli_apply_vector<double>(PauliCode::from_string("Z"), RealVector::Ones(2));
  EXPECT_EQ(z, cvec({1, -1}));
  RealVector e1(2);
  e1 << 1, 0;
  EXPECT_EQ(pauli_apply_vector<double>(PauliCode::from_string("X"), e1), cvec({0, 1}));
  EXPECT_EQ(pauli_apply_vector<double>(PauliCode::from_string("Y"), e1), cvec({0, I}));
}

TEST(PauliApplyVector, MatchesKroneckerOracle) {
  Rng rng(41);
  std::uniform_int_distribution<int> sym(0, 3);
  for (int t = 0; t < 10; ++t) {
    std::string s;
    for (int q = 0; q < 6; ++q) s.push_back("IXYZ"[sym(rng)]);
    const ComplexVector x = gaussian_test_block<Complex>(64, 1, rng).col(0);
    const ComplexVector fast = pauli_apply_vector<Complex>(PauliCode::from_string(s), x);
    const ComplexVector ref = oracle::pauli_dense(s) * x;
    EXPECT_LE((fast - ref).norm(), 1e-12 * ref.norm()) << s;
  }
}

TEST(PauliApplyVector, RejectsLengthMismatch) {
  EXPECT_THROW(pauli_apply_vector<double>(PauliCode::from_string("XX"), RealVector::Ones(3)), dimension_error);
}

TEST(PauliOperator, HalfIdentityOnOneQubit) {
  const PauliOperator op = full_pauli_operator(1);
  RealVector d(2);
  d << 0.5, 0.5;
  const RealVector y = op.apply<double>(RealMatrix::Identity(2, 2), d, RealMatrix::Identity(2, 2));
  EXPECT_NEAR(y(0), std::sqrt(0.5), 1e-15);
  EXPECT_EQ(y(1), 0.0);
  EXPECT_EQ(y(2), 0.0);
  EXPECT_EQ(y(3), 0.0);
}

TEST(PauliOperator, ZeroFactorGivesZero) {
  Rng rng(42);
  const PauliOperator op = sample_pauli_operator(3, 20, rng);
  const auto f = FactorTriple<double>::zero(8, 8, 2, true);
  EXPECT_EQ(op.apply(f).norm(), 0.0);
}

TEST(PauliOperator, ApplyMatchesDensify) {
  Rng rng(43);
  const PauliOperator op = sample_pauli_operator(4, 100, rng);
  const ComplexMatrix A = oracle::pauli_measurement_matrix(op);
  // Real symmetric and general real rank-2 inputs.
  const RealMatrix U = oracle::random_orthonormal<double>(16, 2, rng);
  const RealMatrix V = oracle::random_orthonormal<double>(16, 2, rng);
  RealVector d(2);
  d << 1.3, -0.4;
  const RealMatrix Xs = U * d.asDiagonal() * U.transpose();
  EXPECT_LE((op.apply<double>(U, d, U) - oracle::pauli_forward_dense(A, Xs.cast<Complex>())).norm(), 1e-12);
  const RealMatrix Xg = U * d.asDiagonal() * V.transpose();
  EXPECT_LE((op.apply<double>(U, d, V) - oracle::pauli_forward_dense(A, Xg.cast<Complex>())).norm(), 1e-12);
  // The library's own densify agrees with the Kronecker construction.
  EXPECT_LE((op.densify() - A).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(PauliOperator, ComplexHermitianInputMatchesDensify) {
  Rng rng(44);
  const PauliOperator op = sample_pauli_operator(4, 120, rng, /*real_mode=*/false);
  const ComplexMatrix A = oracle::pauli_measurement_matrix(op);
  const FactorTriple<Complex> f = oracle::random_density<Complex>(16, 2, rng);
  const RealVector y = op.apply(f);
  const ComplexVector ref = A * f.dense().reshaped();
  EXPECT_LE(ref.imag().norm(), 1e-12);
  EXPECT_LE((y - ref.real()).norm(), 1e-12);
}

TEST(PauliOperator, NonHermitianComplexInputIsAnError) {
  Rng rng(45);
  const PauliOperator op = full_pauli_operator(2, /*real_mode=*/false);
  const ComplexMatrix U = oracle::random_orthonormal<Complex>(4, 1, rng);
  const ComplexMatrix V = oracle::random_orthonormal<Complex>(4, 1, rng);
  RealVector d(1);
  d << 1.0;
  EXPECT_THROW(op.apply<Complex>(U, d, V), contract_error);
}

TEST(PauliOperator, RealScalarsNeedRealMode) {
  const PauliOperator op = full_pauli_operator(1, /*real_mode=*/false);
  RealVector d(1);
  d << 1;
  EXPECT_THROW(op.apply<double>(RealMatrix::Identity(2, 1), d, RealMatrix::Identity(2, 1)), contract_error);
}

TEST(PauliOperator, IdentityObservableAdjoint) {
  const PauliOperator op = full_pauli_operator(2);
  Rng rng(46);
  const RealMatrix W = gaussian_test_block<double>(4, 3, rng);
  RealVector z = RealVector::Zero(16);
  z(0) = 1.0;
  EXPECT_LE((op.adjoint_apply<double>(z, W) - op.scale() * W).norm(), 1e-15);
}

TEST(PauliOperator, SigmaXAdjointHandOracle) {
  const PauliOperator op = full_pauli_operator(1);
  RealVector z(4);
  z << 0, 1, 0, 0;
  RealMatrix e1(2, 1);
  e1 << 1, 0;
  const RealMatrix out = op.adjoint_apply<double>(z, e1);
  EXPECT_NEAR(out(0, 0), 0.0, 1e-15);
  EXPECT_NEAR(out(1, 0), op.scale(), 1e-15);
}

TEST(PauliOperator, AdjointMatchesDensifyTranspose) {
  Rng rng(47);
  const PauliOperator op = sample_pauli_operator(5, 300, rng, /*real_mode=*/false);
  const ComplexMatrix A = oracle::pauli_measurement_matrix(op);
  RealVector z = gaussian_test_block<double>(300, 1, rng).col(0);
  const ComplexMatrix W = gaussian_test_block<Complex>(32, 3, rng);
  // A*(z) = reshape(A^H z)
  const ComplexVector v = A.adjoint() * z.cast<Complex>();
  const ComplexMatrix M = v.reshaped(32, 32);
  EXPECT_LE((op.adjoint_apply<Complex>(z, W) - M * W).norm(), 1e-10 * (M * W).norm());
  EXPECT_LE((M - oracle::pauli_adjoint_dense(op, z)).norm(), 1e-10 * M.norm());
}

TEST(PauliOperator, RealModeAdjointTakesRealPart) {
  Rng rng(48);
  const PauliOperator op = sample_pauli_operator(3, 40, rng);
  const RealVector z = gaussian_test_block<double>(40, 1, rng).col(0);
  const RealMatrix W = gaussian_test_block<double>(8, 2, rng);
  const RealMatrix M = oracle::pauli_adjoint_dense(op, z).real();
  EXPECT_LE((op.adjoint_apply<double>(z, W) - M * W).norm(), 1e-12 * (M * W).norm());
}

TEST(PauliOperator, AdjointAdjEqualsAdjoint) {
  Rng rng(49);
  const PauliOperator op = sample_pauli_operator(4, 50, rng);
  const RealVector z = gaussian_test_block<double>(50, 1, rng).col(0);
  const RealMatrix W = gaussian_test_block<double>(16, 3, rng);
  EXPECT_EQ((op.adjoint_apply_adj<double>(z, W) - op.adjoint_apply<double>(z, W)).norm(), 0.0);
  EXPECT_EQ(op.adjoint_apply<double>(RealVector::Zero(50), W).norm(), 0.0);
}

TEST(PauliOperator, AdjointIdentity) {
  Rng rng(50);
  for (bool real_mode : {true, false}) {
    const PauliOperator op = sample_pauli_operator(4, 90, rng, real_mode);
    const FactorTriple<Complex> f = oracle::random_density<Complex>(16, 3, rng);
    const RealVector z = gaussian_test_block<double>(90, 1, rng).col(0);
    const double lhs = op.apply(f).dot(z);
    // <X, A*(z)> = Re tr(A*(z)^H X) = Re tr(A*(z) X)
    const ComplexMatrix M = op.adjoint_apply<Complex>(z, ComplexMatrix::Identity(16, 16));
    const double rhs = (M.adjoint() * f.dense()).trace().real();
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::abs(lhs) + 1e-12);
  }
}

TEST(PauliOperator, GramIdentityViaDensify) {
  Rng rng(51);
  for (int q = 1; q <= 4; ++q) {
    const Index n = Index{1} << q;
    const Index p = std::max<Index>(1, (n * n) / 2);
    const PauliOperator op = sample_pauli_operator(q, p, rng);
    const ComplexMatrix A = op.densify();
    const ComplexMatrix gram = A * A.adjoint();
    const double target = static_cast<double>(n * n) / static_cast<double>(p);
    EXPECT_LE((gram - target * ComplexMatrix::Identity(p, p)).cwiseAbs().maxCoeff(), 1e-10);
    EXPECT_DOUBLE_EQ(op.norm_sq(), target);
  }
}

TEST(PauliOperator, FullSetOnOneQubitIsIsometry) {
  const ComplexMatrix A = full_pauli_operator(1).densify();
  EXPECT_LE((A * A.adjoint() - ComplexMatrix::Identity(4, 4)).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(PauliOperator, ThreadCountDoesNotChangeResults) {
  Rng rng(52);
  PauliOperator op = sample_pauli_operator(10, 3000, rng);
  const RealVector z = gaussian_test_block<double>(3000, 1, rng).col(0);
  const RealMatrix W = gaussian_test_block<double>(1024, 4, rng);
  const FactorTriple<double> f = oracle::random_density<double>(1024, 2, rng);
  const RealMatrix a1 = op.adjoint_apply<double>(z, W);
  const RealVector y1 = op.apply(f);
  op.set_threads(3);
  const RealMatrix a3 = op.adjoint_apply<double>(z, W);
  const RealVector y3 = op.apply(f);
  EXPECT_EQ((a1 - a3).cwiseAbs().maxCoeff(), 0.0);
  EXPECT_EQ((y1 - y3).cwiseAbs().maxCoeff(), 0.0);
}

TEST(PauliOperator, FastPathAgreesWithStridePath) {
  Rng rng(53);
  const PauliOperator op = sample_pauli_operator(6, 30, rng, /*real_mode=*/false);
  const ComplexVector x = gaussian_test_block<Complex>(64, 1, rng).col(0);
  for (Index j = 0; j < op.measurements(); ++j) {
    RealVector z = RealVector::Zero(op.measurements());
    z(j) = 1.0 / op.scale();
    const ComplexVector fast = op.adjoint_apply<Complex>(z, ComplexMatrix(x));
    const ComplexVector stride = pauli_apply_vector<Complex>(op.codes()[static_cast<std::size_t>(j)], x);
    EXPECT_LE((fast - stride).norm(), 1e-12 * x.norm());
  }
}

TEST(PauliOperator, RejectsDuplicatesAndBadShapes) {
  std::vector<PauliCode> dup{PauliCode::from_string("XZ"), PauliCode::from_string("XZ")};
  EXPECT_THROW(PauliOperator(2, dup), dimension_error);
  std::vector<PauliCode> wrong{PauliCode::from_string("XZ")};
  EXPECT_THROW(PauliOperator(3, wrong), dimension_error);
  const PauliOperator op = full_pauli_operator(2);
  EXPECT_THROW(op.adjoint_apply<double>(RealVector::Zero(16), RealMatrix::Zero(3, 1)), dimension_error);
  EXPECT_THROW(op.adjoint_apply<double>(RealVector::Zero(15), RealMatrix::Zero(4, 1)), dimension_error);
}

TEST(PauliOperator, DensifySizeLimit) {
  Rng rng(54);
  const PauliOperator op = sample_pauli_operator(11, 10, rng);
  EXPECT_THROW(op.densify(), size_limit_error);
}

TEST(SamplePauliOperator, ExhaustiveDrawCoversAllCodes) {
  Rng rng(55);
  const PauliOperator op = sample_pauli_operator(3, 64, rng);
  std::set<std::uint64_t> idx;
  for (const PauliCode& c : op.codes()) idx.insert(c.index());
  EXPECT_EQ(idx.size(), 64u);
}

TEST(SamplePauliOperator, ReproducibleAndDistinct) {
  Rng a(56), b(56);
  const PauliOperator x = sample_pauli_operator(8, 1024, a);
  const PauliOperator y = sample_pauli_operator(8, 1024, b);
  EXPECT_EQ(x.codes(), y.codes());
  std::set<std::uint64_t> idx;
  for (const PauliCode& c : x.codes()) idx.insert(c.index());
  EXPECT_EQ(idx.size(), 1024u);
  EXPECT_EQ(x.dimension(), 256);
  EXPECT_DOUBLE_EQ(x.norm_sq(), 64.0);
}

TEST(SamplePauliOperator, RejectsTooManyCodes) {
  Rng rng(57);
  EXPECT_THROW(sample_pauli_operator(2, 17, rng), dimension_error);
}

TEST(MeasureIdentity, MatchesFactoredApply) {
  Rng rng(58);
  std::vector<PauliCode> codes{PauliCode::from_string("III"), PauliCode::from_string("XYZ"),
                               PauliCode::from_string("ZZI")};
  const PauliOperator op(3, codes);
  const auto f = FactorTriple<double>::symmetric(RealMatrix::Identity(8, 8), RealVector::Ones(8));
  EXPECT_LE((measure_identity(op) - op.apply(f)).norm(), 1e-14);
}

}  // namespace
}  // namespace rsvp
