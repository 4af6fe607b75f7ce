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

#include <complex>
#include <concepts>
#include <stdexcept>
#include <string>
#include <type_traits>

#include <Eigen/Dense>

namespace rsvp {

using Index = Eigen::Index;
using Complex = std::complex<double>;

/// The two scalar fields every numerical routine is instantiated for.
template <class S>
concept Field = std::same_as<S, double> || std::same_as<S, Complex>;

template <class S>
inline constexpr bool is_complex_v = std::same_as<S, Complex>;

template <Field S>
using Matrix = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <Field S>
using Vector = Eigen::Matrix<S, Eigen::Dynamic, 1>;

using RealMatrix = Matrix<double>;
using RealVector = Vector<double>;
using ComplexMatrix = Matrix<Complex>;
using ComplexVector = Vector<Complex>;

// Error taxonomy. Everything derives from a std exception so callers that do
// not care about the distinction can catch the standard base.
struct dimension_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct size_limit_error : std::length_error {
  using std::length_error::length_error;
};
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct contract_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Default guard for dense factorizations (min(rows, cols)).
inline constexpr Index kDenseSizeLimit = 4096;
/// Tolerance on ||Q^H Q - I||_max for stored orthonormal factors.
inline constexpr double kOrthoTol = 1e-10;

template <class Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& m) {
  return m.allFinite();
}

template <class Derived>
void require_finite(const Eigen::MatrixBase<Derived>& m, const char* what) {
  if (!m.allFinite()) throw numerical_error(std::string(what) + ": non-finite entries");
}

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw dimension_error(msg);
}

}  // namespace rsvp
