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

#include <concepts>

#include "rsvp/core/types.hpp"

namespace rsvp {

/// A matrix-free linear map from m x n matrices over S to R^p, consumed in
/// factored form. Symmetric operators (Pauli) act on Hermitian inputs and have
/// adjoint_apply_adj == adjoint_apply.
template <class Op, class S>
concept MeasurementOperator =
    Field<S> && requires(const Op& op, const Matrix<S>& W, const RealVector& v) {
      { op.rows() } -> std::convertible_to<Index>;
      { op.cols() } -> std::convertible_to<Index>;
      { op.measurements() } -> std::convertible_to<Index>;
      { op.is_symmetric() } -> std::convertible_to<bool>;
      { op.norm_sq() } -> std::convertible_to<double>;
      { op.template apply<S>(W, v, W) } -> std::same_as<RealVector>;
      { op.template adjoint_apply<S>(v, W) } -> std::same_as<Matrix<S>>;
      { op.template adjoint_apply_adj<S>(v, W) } -> std::same_as<Matrix<S>>;
    };

}  // namespace rsvp
