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

// Low-memory accelerated SVP. Iterates live only as rank-r factors; each step
// builds the implicit matrix
//   h(w) = Y w - mu A*(A(Y) - y) w,   Y = (1 + beta) X_i - beta X_{i-1},
// and projects it back to rank r with the randomized SVD (or EIG when the
// operator is symmetric). mu multiplies A*(z) directly, so it is twice the
// step of the plain gradient form with grad f = 2 A*(A X - y).

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rsvp/core/factor.hpp"
#include "rsvp/core/linalg.hpp"
#include "rsvp/metrics/factored.hpp"
#include "rsvp/operators/operator.hpp"
#include "rsvp/operators/rip.hpp"
#include "rsvp/rand/implicit_matrix.hpp"
#include "rsvp/rand/rand_svd.hpp"
#include "rsvp/solver/constraints.hpp"

namespace rsvp {

struct SolverConfig {
  Index rank = 1;
  Index oversampling = 5;
  int power_iters = 0;
  std::optional<double> step;  // mu; defaults to 1 / ||A||^2
  Constraint constraint = Constraint::none;
  bool acceleration = true;
  int max_iters = 500;
  std::optional<double> f_tol;  // defaults to 1e-12 ||y||^2
  double stall_tol = 1e-8;
  int stall_window = 10;
  double divergence_factor = 1e3;
  double C = 4.0;

  RandProjConfig rand_config() const {
    RandProjConfig c;
    c.rank = rank;
    c.oversampling = oversampling;
    c.power_iters = power_iters;
    c.probe_check = false;
    return c;
  }

  void validate(Index m, Index n) const {
    rand_config().validate(m, n);
    require(!step || (*step > 0.0 && std::isfinite(*step)), "SolverConfig: step size must be > 0");
    require(max_iters >= 0, "SolverConfig: max_iters must be >= 0");
    require(stall_window >= 1, "SolverConfig: stall_window must be >= 1");
    require(stall_tol >= 0.0, "SolverConfig: stall_tol must be >= 0");
    require(divergence_factor > 1.0, "SolverConfig: divergence_factor must be > 1");
    require(C >= 4.0, "SolverConfig: C must be >= 4");
    require(!f_tol || *f_tol >= 0.0, "SolverConfig: f_tol must be >= 0");
  }
};

template <Field S>
struct IterateState {
  FactorTriple<S> current;
  FactorTriple<S> previous;
  double alpha = 1.0;
  int iteration = 0;
};

/// X_0 = X_{-1} = 0 at rank r.
template <Field S>
IterateState<S> initial_state(Index m, Index n, Index r, bool symmetric) {
  IterateState<S> s;
  s.current = FactorTriple<S>::zero(m, n, r, symmetric);
  s.previous = s.current;
  return s;
}

struct NesterovScalars {
  double alpha_next;
  double beta;
};

/// alpha_next = (1 + sqrt(4 alpha^2 + 1)) / 2 and beta = (alpha - 1) / alpha_next.
inline NesterovScalars nesterov_step_scalars(double alpha_prev) {
  require(alpha_prev >= 1.0, "nesterov_step_scalars: alpha must be >= 1");
  const double next = 0.5 * (1.0 + std::sqrt(4.0 * alpha_prev * alpha_prev + 1.0));
  return {next, (alpha_prev - 1.0) / next};
}

/// Raw width-2r factors of Y = (1 + beta) X_i - beta X_{i-1}; the columns are
/// not orthonormal as a whole.
template <Field S>
struct MomentumFactors {
  Matrix<S> U;
  RealVector d;
  Matrix<S> V;
  bool symmetric = false;

  Matrix<S> dense() const { return U * d.template cast<S>().asDiagonal() * V.adjoint(); }
};

template <Field S>
MomentumFactors<S> build_momentum_factors(const IterateState<S>& state, double beta) {
  const FactorTriple<S>& x = state.current;
  const FactorTriple<S>& xp = state.previous;
  require(x.rows() == xp.rows() && x.cols() == xp.cols(),
          "build_momentum_factors: current and previous shapes differ");
  MomentumFactors<S> f;
  f.symmetric = x.is_symmetric() && xp.is_symmetric();
  f.U.resize(x.rows(), x.rank() + xp.rank());
  f.U << x.U(), xp.U();
  f.d.resize(x.rank() + xp.rank());
  f.d << (1.0 + beta) * x.d(), -beta * xp.d();
  if (f.symmetric) {
    f.V = f.U;
  } else {
    f.V.resize(x.cols(), x.rank() + xp.rank());
    f.V << x.V(), xp.V();
  }
  return f;
}

struct WorkCounters {
  std::atomic<long> forward_applies{0};
  std::atomic<long> adjoint_columns{0};
};

template <Field S>
struct GradientMap {
  ImplicitMatrix<S> h;
  RealVector z;  // A(Y) - y
};

/// h(w) = Y w - mu A*(z) w and h_adj(w) = Y^H w - mu A*(z)^H w with the
/// residual z = A(Y) - y evaluated once here.
template <Field S, class Op>
  requires MeasurementOperator<Op, S>
GradientMap<S> build_gradient_map(const Op& op, const RealVector& y, const MomentumFactors<S>& Y,
                                  double mu, std::shared_ptr<WorkCounters> counters = nullptr) {
  require(y.size() == op.measurements(), "build_gradient_map: y has wrong length");
  GradientMap<S> g;
  g.z = op.template apply<S>(Y.U, Y.d, Y.V) - y;
  if (counters) counters->forward_applies += 1;
  auto yf = std::make_shared<const MomentumFactors<S>>(Y);
  auto z = std::make_shared<const RealVector>(g.z);
  const Op* o = &op;
  g.h.rows = op.rows();
  g.h.cols = op.cols();
  g.h.apply = [yf, z, o, mu, counters](const Matrix<S>& w) -> Matrix<S> {
    Matrix<S> out = yf->U * (yf->d.template cast<S>().asDiagonal() * (yf->V.adjoint() * w));
    if (mu != 0.0) out -= mu * o->template adjoint_apply<S>(*z, w);
    if (counters) counters->adjoint_columns += w.cols();
    return out;
  };
  g.h.apply_adjoint = [yf, z, o, mu, counters](const Matrix<S>& w) -> Matrix<S> {
    Matrix<S> out = yf->V * (yf->d.template cast<S>().asDiagonal() * (yf->U.adjoint() * w));
    if (mu != 0.0) out -= mu * o->template adjoint_apply_adj<S>(*z, w);
    if (counters) counters->adjoint_columns += w.cols();
    return out;
  };
  return g;
}

/// Reorder a factor after its values changed: by magnitude for symmetric
/// factors, by value otherwise (stable).
template <Field S>
FactorTriple<S> resort(const FactorTriple<S>& f) {
  const std::vector<Index> order = f.is_symmetric() ? magnitude_order(f.d()) : value_order(f.d());
  Matrix<S> U = f.U();
  RealVector d = f.d();
  permute_columns(U, d, order);
  if (f.is_symmetric()) return FactorTriple<S>::symmetric(std::move(U), std::move(d));
  Matrix<S> V = f.V();
  RealVector dv = f.d();
  permute_columns(V, dv, order);
  return FactorTriple<S>(std::move(U), std::move(d), std::move(V));
}

template <class Op>
double resolve_step(const Op& op, const SolverConfig& cfg) {
  if (cfg.step) return *cfg.step;
  const double nsq = op.norm_sq();
  require(nsq > 0.0 && std::isfinite(nsq), "resolve_step: operator norm is not positive");
  return 1.0 / nsq;
}

/// mu = 1 / (2 (1 + delta)) with delta the Monte-Carlo R-RIP estimate at
/// rank c r, c = ceil(l / r) + 1. Draws only from `rng`.
template <Field S = double, class Op>
  requires MeasurementOperator<Op, S>
double rip_step(const Op& op, const SolverConfig& cfg, Index samples, Rng& rng) {
  const Index r = cfg.rank;
  const Index c = (cfg.rank + cfg.oversampling + r - 1) / r + 1;
  const Index k = std::min(c * r, std::min(op.rows(), op.cols()));
  const RipEstimate est = rip_monte_carlo<S>(op, k, samples, rng);
  return 1.0 / (2.0 * (1.0 + std::max(0.0, est.delta())));
}

template <Field S>
struct StepInfo {
  ImplicitMatrix<S> h;
  double residual_norm = 0.0;  // ||A(Y) - y||
  double beta = 0.0;
  bool rank_deficient = false;
};

/// One iteration: momentum, residual, gradient map, randomized projection at
/// rank r, then the constraint on the retained values.
template <Field S, class Op>
  requires MeasurementOperator<Op, S>
IterateState<S> svp_step(const IterateState<S>& state, const Op& op, const RealVector& y,
                         const SolverConfig& cfg, Rng& rng, StepInfo<S>* info = nullptr,
                         std::shared_ptr<WorkCounters> counters = nullptr) {
  const double mu = resolve_step(op, cfg);
  const NesterovScalars ns =
      cfg.acceleration ? nesterov_step_scalars(state.alpha) : NesterovScalars{state.alpha, 0.0};
  const MomentumFactors<S> Y = build_momentum_factors(state, ns.beta);
  GradientMap<S> g = build_gradient_map<S>(op, y, Y, mu, counters);
  if (!all_finite(g.z)) throw numerical_error("svp_step: residual is not finite");

  const bool symmetric = op.is_symmetric();
  const RandProjConfig rp = cfg.rand_config();
  RandProjResult<S> res = symmetric ? rand_eig(g.h, rp, rng) : rand_svd(g.h, rp, rng);
  if (!all_finite(res.truncated.d())) throw numerical_error("svp_step: projected spectrum is not finite");

  FactorTriple<S> next = std::move(res.truncated);
  if (cfg.constraint != Constraint::none)
    next = resort(next.with_values(project_constraint(next.d(), cfg.constraint, next.is_symmetric())));

  if (info) {
    info->h = g.h;
    info->residual_norm = g.z.norm();
    info->beta = ns.beta;
    info->rank_deficient = res.rank_deficient;
  }
  IterateState<S> out;
  out.previous = state.current;
  out.current = std::move(next);
  out.alpha = ns.alpha_next;
  out.iteration = state.iteration + 1;
  return out;
}

enum class Termination { converged, stalled, max_iters, diverged, non_finite };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::converged: return "converged";
    case Termination::stalled: return "stalled";
    case Termination::max_iters: return "max_iters";
    case Termination::diverged: return "diverged";
    case Termination::non_finite: return "non_finite";
  }
  return "unknown";
}

struct IterationRecord {
  int iteration = 0;
  double f = 0.0;              // f(X_i) = ||A(X_i) - y||^2
  double residual_norm = 0.0;  // ||A(Y_i) - y|| at the momentum point
  std::optional<double> frob_sq;  // ||X_i - X*||_F^2 when a truth is supplied
  double elapsed_s = 0.0;
};

struct ConvergenceReport {
  std::vector<IterationRecord> records;  // records[0] is X_0
  Termination reason = Termination::max_iters;
  std::string message;
  int iterations = 0;
  double step = 0.0;
  double f_tol = 0.0;
  long forward_applies = 0;
  long adjoint_columns = 0;

  double final_f() const { return records.empty() ? 0.0 : records.back().f; }
  bool ok() const { return reason == Termination::converged || reason == Termination::stalled ||
                           reason == Termination::max_iters; }
};

template <Field S>
struct SolveResult {
  FactorTriple<S> solution;
  ConvergenceReport report;
};

template <Field S>
using IterationObserver = std::function<void(int, const StepInfo<S>&, const IterateState<S>&)>;

/// Runs svp_step from X_0 = 0 until f <= f_tol, a stall, divergence or
/// max_iters. Non-convergence is reported in the result, never thrown.
template <Field S = double, class Op>
  requires MeasurementOperator<Op, S>
SolveResult<S> solve(const Op& op, const RealVector& y, const SolverConfig& cfg, Rng& rng,
                     const FactorTriple<S>* truth = nullptr, IterationObserver<S> observer = {}) {
  require(y.size() == op.measurements(), "solve: y has wrong length");
  require(all_finite(y), "solve: measurements are not finite");
  cfg.validate(op.rows(), op.cols());
  if (truth) require(truth->rows() == op.rows() && truth->cols() == op.cols(), "solve: truth has wrong shape");

  using clock = std::chrono::steady_clock;
  const auto t0 = clock::now();
  auto counters = std::make_shared<WorkCounters>();

  SolveResult<S> out;
  ConvergenceReport& rep = out.report;
  rep.step = resolve_step(op, cfg);
  rep.f_tol = cfg.f_tol ? *cfg.f_tol : 1e-12 * y.squaredNorm();

  IterateState<S> state = initial_state<S>(op.rows(), op.cols(), cfg.rank, op.is_symmetric());
  auto record = [&](const IterateState<S>& s, double f, double rn) {
    IterationRecord rec;
    rec.iteration = s.iteration;
    rec.f = f;
    rec.residual_norm = rn;
    if (truth) rec.frob_sq = frob_sq_factored(s.current, *truth);
    rec.elapsed_s = std::chrono::duration<double>(clock::now() - t0).count();
    rep.records.push_back(rec);
  };

  const double f0 = y.squaredNorm();
  record(state, f0, std::sqrt(f0));
  out.solution = state.current;
  rep.reason = Termination::max_iters;

  if (f0 <= rep.f_tol) {
    rep.reason = Termination::converged;
  } else {
    for (int it = 1; it <= cfg.max_iters; ++it) {
      StepInfo<S> info;
      IterateState<S> next;
      double f = 0.0;
      try {
        next = svp_step(state, op, y, cfg, rng, &info, counters);
        f = (op.template apply<S>(next.current) - y).squaredNorm();
        counters->forward_applies += 1;
      } catch (const numerical_error& e) {
        rep.reason = Termination::non_finite;
        rep.message = e.what();
        break;
      }
      if (!std::isfinite(f)) {
        rep.reason = Termination::non_finite;
        rep.message = "objective is not finite";
        break;
      }
      state = std::move(next);
      record(state, f, info.residual_norm);
      out.solution = state.current;
      if (observer) observer(it, info, state);

      if (f <= rep.f_tol) {
        rep.reason = Termination::converged;
        break;
      }
      if (f > cfg.divergence_factor * f0) {
        rep.reason = Termination::diverged;
        rep.message = "step size too large";
        break;
      }
      if (it >= cfg.stall_window) {
        const double before = rep.records[static_cast<std::size_t>(it - cfg.stall_window)].f;
        if (before > 0.0 && std::abs(before - f) / before < cfg.stall_tol) {
          rep.reason = Termination::stalled;
          break;
        }
      }
    }
  }
  rep.iterations = state.iteration;
  rep.forward_applies = counters->forward_applies.load();
  rep.adjoint_columns = counters->adjoint_columns.load();
  return out;
}

}  // namespace rsvp
