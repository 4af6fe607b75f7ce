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

#include <functional>
#include <limits>
#include <memory>
#include <string>

#include "rsvp/core/factor.hpp"
#include "rsvp/core/random.hpp"
#include "rsvp/rand/gaussian.hpp"

namespace rsvp {

/// An m x n matrix known only through block products w -> X w and
/// w -> X^H w. Both maps must be safe to call concurrently.
template <Field S>
struct ImplicitMatrix {
  using Block = Matrix<S>;
  using Map = std::function<Block(const Block&)>;

  Index rows = 0;
  Index cols = 0;
  Map apply;          // n x s -> m x s
  Map apply_adjoint;  // m x s -> n x s

  Block operator()(const Block& w) const {
    require(w.rows() == cols, "ImplicitMatrix: block has " + std::to_string(w.rows()) +
                                  " rows, expected " + std::to_string(cols));
    Block out = apply(w);
    require(out.rows() == rows && out.cols() == w.cols(),
            "ImplicitMatrix: forward map returned a block of the wrong shape");
    return out;
  }

  Block adjoint(const Block& w) const {
    require(w.rows() == rows, "ImplicitMatrix: adjoint block has " + std::to_string(w.rows()) +
                                  " rows, expected " + std::to_string(rows));
    Block out = apply_adjoint(w);
    require(out.rows() == cols && out.cols() == w.cols(),
            "ImplicitMatrix: adjoint map returned a block of the wrong shape");
    return out;
  }

  static ImplicitMatrix from_dense(Matrix<S> X) {
    auto held = std::make_shared<const Matrix<S>>(std::move(X));
    ImplicitMatrix out;
    out.rows = held->rows();
    out.cols = held->cols();
    out.apply = [held](const Block& w) -> Block { return (*held) * w; };
    out.apply_adjoint = [held](const Block& w) -> Block { return held->adjoint() * w; };
    return out;
  }

  /// U diag(d) V^H without forming it; U and V need not be orthonormal.
  static ImplicitMatrix from_factors(Matrix<S> U, RealVector d, Matrix<S> V) {
    require(U.cols() == d.size() && V.cols() == d.size(),
            "ImplicitMatrix::from_factors: width mismatch");
    auto u = std::make_shared<const Matrix<S>>(std::move(U));
    auto v = std::make_shared<const Matrix<S>>(std::move(V));
    auto dd = std::make_shared<const Vector<S>>(d.template cast<S>());
    ImplicitMatrix out;
    out.rows = u->rows();
    out.cols = v->rows();
    out.apply = [u, v, dd](const Block& w) -> Block {
      return (*u) * (dd->asDiagonal() * (v->adjoint() * w));
    };
    out.apply_adjoint = [u, v, dd](const Block& w) -> Block {
      return (*v) * (dd->conjugate().asDiagonal() * (u->adjoint() * w));
    };
    return out;
  }

  static ImplicitMatrix from_factors(const FactorTriple<S>& f) {
    return from_factors(f.U(), f.d(), f.V());
  }
};

/// Probe seed used by the consistency checks. Fixed so the checks never touch
/// the caller's random stream.
inline constexpr std::uint64_t kProbeSeed = 0x9e3779b97f4a7c15ull;

/// Relative mismatch |<X w1, w2> - <w1, X^H w2>| / (||X w1|| ||w2|| + ||w1|| ||X^H w2||)
/// over `probes` Gaussian columns.
template <Field S>
double adjoint_mismatch(const ImplicitMatrix<S>& X, Index probes = 2) {
  Rng rng(kProbeSeed);
  const Matrix<S> w1 = gaussian_test_block<S>(X.cols, probes, rng);
  const Matrix<S> w2 = gaussian_test_block<S>(X.rows, probes, rng);
  const Matrix<S> xw1 = X(w1);
  const Matrix<S> xhw2 = X.adjoint(w2);
  double worst = 0.0;
  for (Index c = 0; c < probes; ++c) {
    const S lhs = xw1.col(c).dot(w2.col(c));  // conj(X w1) . w2
    const S rhs = w1.col(c).dot(xhw2.col(c));
    const double scale =
        xw1.col(c).norm() * w2.col(c).norm() + w1.col(c).norm() * xhw2.col(c).norm();
    if (scale == 0.0) continue;
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  return worst;
}

/// Relative mismatch ||X w - X^H w|| / ||X w|| on probe columns; zero for a
/// Hermitian map.
template <Field S>
double hermitian_mismatch(const ImplicitMatrix<S>& X, Index probes = 2) {
  if (X.rows != X.cols) return std::numeric_limits<double>::infinity();
  Rng rng(kProbeSeed + 1);
  const Matrix<S> w = gaussian_test_block<S>(X.cols, probes, rng);
  const Matrix<S> a = X(w);
  const Matrix<S> b = X.adjoint(w);
  const double scale = std::max(a.norm(), b.norm());
  if (scale == 0.0) return 0.0;
  return (a - b).norm() / scale;
}

}  // namespace rsvp
