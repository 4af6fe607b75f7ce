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

#include "rsvp/core/factor.hpp"
#include "rsvp/core/format.hpp"
#include "rsvp/core/linalg.hpp"
#include "rsvp/core/parallel.hpp"
#include "rsvp/core/random.hpp"
#include "rsvp/core/types.hpp"
#include "rsvp/metrics/depolarized.hpp"
#include "rsvp/metrics/epsilon.hpp"
#include "rsvp/metrics/factored.hpp"
#include "rsvp/operators/gaussian.hpp"
#include "rsvp/operators/io.hpp"
#include "rsvp/operators/operator.hpp"
#include "rsvp/operators/pauli.hpp"
#include "rsvp/operators/rip.hpp"
#include "rsvp/rand/factored_svd.hpp"
#include "rsvp/rand/gaussian.hpp"
#include "rsvp/rand/implicit_matrix.hpp"
#include "rsvp/rand/rand_svd.hpp"
#include "rsvp/solver/constraints.hpp"
#include "rsvp/solver/svp.hpp"
#include "rsvp/solver/theory.hpp"
