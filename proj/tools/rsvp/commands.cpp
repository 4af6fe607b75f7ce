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

#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <limits>
#include <memory>
#include <optional>
#include <sstream>
#include <variant>

#include "config.hpp"
#include "csv.hpp"
#include "rsvp/rsvp.hpp"

namespace rsvp::cli {

const std::vector<std::string> kRecoverHeader = {
    "event", "trial", "seed", "iteration", "f", "frob_error", "trace_dist",
    "fidelity", "fidelity_sq", "status", "wall_clock_s"};
const std::vector<std::string> kEpsilonHeader = {
    "r", "rho", "q", "trials", "mean", "se", "min", "max", "bound", "degenerate"};
const std::vector<std::string> kNoiseSweepHeader = {
    "event", "p", "p_ratio", "trial", "seed", "frob_error", "trace_dist",
    "fidelity", "fidelity_sq", "status", "wall_clock_s"};
const std::vector<std::string> kRipHeader = {"rank", "trials", "delta_lower", "delta_upper", "delta"};

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct SizeGuard : std::length_error {
  using std::length_error::length_error;
};

void check(bool cond, const std::string& msg) {
  if (!cond) throw ConfigError(msg);
}

// Stream indices of the per-trial seed.
enum Stream : std::uint64_t {
  kOperatorStream = 1,
  kTruthStream = 2,
  kNoiseStream = 3,
  kSolverStream = 4,
  kStepStream = 5
};

struct Common {
  std::string out;
  std::uint64_t seed = 1;
  unsigned threads = 1;
};

struct ProblemOpts {
  int pauli = 0;
  std::vector<Index> gaussian;
  Index p = 0;
  double p_ratio = 0.0;
  bool complex = false;
  std::string save_operator;
};

struct SolverOpts {
  Index r = 1;
  Index rho = 5;
  int q = 0;
  double mu = 0.0;  // 0 selects the step rule
  std::string mu_rule = "norm";
  Index rip_samples = 100;
  std::string constraint = "auto";
  bool accel = true;
  int max_iters = 500;
  double f_tol = -1.0;
};

struct NoiseOpts {
  double snr_db = kInf;
  double gamma = 0.0;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--out", c.out, "CSV output path (default: stdout)");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_option("--threads", c.threads, "Worker threads for operator application")
      ->check(CLI::Range(1u, 1024u));
}

void add_problem(CLI::App* app, ProblemOpts& p, bool with_p = true) {
  app->add_option("--pauli", p.pauli, "Pauli tomography problem on q qubits");
  app->add_option("--gaussian", p.gaussian, "Gaussian sensing problem of size m n")->expected(2);
  if (with_p) {
    app->add_option("--p", p.p, "Number of measurements");
    app->add_option("--p-ratio", p.p_ratio, "Measurements as a multiple of n (p = ratio * n)");
  }
  app->add_flag("--complex,!--no-complex", p.complex, "Complex iterates (Pauli only; disables real mode)");
  app->add_option("--save-operator", p.save_operator, "Write the first trial's operator to this file");
}

void add_solver(CLI::App* app, SolverOpts& s) {
  app->add_option("--r", s.r, "Target rank");
  app->add_option("--rho", s.rho, "Oversampling");
  app->add_option("--q", s.q, "Power iterations");
  app->add_option("--mu", s.mu, "Step size; overrides --mu-rule");
  app->add_option("--mu-rule", s.mu_rule,
                  "norm: mu = 1 / ||A||^2; rip: mu = 1 / (2 (1 + delta_cr)) from a Monte-Carlo estimate");
  app->add_option("--rip-samples", s.rip_samples, "Samples for --mu-rule rip");
  app->add_option("--constraint", s.constraint, "none, psd, simplex or auto");
  app->add_flag("--accel,!--no-accel", s.accel, "Nesterov acceleration");
  app->add_option("--max-iters", s.max_iters, "Iteration limit");
  app->add_option("--f-tol", s.f_tol, "Stop when f <= f_tol (default 1e-12 ||y||^2)");
}

void add_noise(CLI::App* app, NoiseOpts& n) {
  app->add_option("--snr-db", n.snr_db, "AWGN level as 10 log10(||A X*||^2 / ||e||^2)");
  app->add_option("--gamma", n.gamma, "Depolarizing level of the truth (Pauli only)");
}

std::vector<double> parse_list(const std::string& s, const std::string& what) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stod(tok, &used));
      check(used == tok.size(), "bad value '" + tok + "' in " + what);
    } catch (const std::logic_error&) {
      throw ConfigError("bad value '" + tok + "' in " + what);
    }
  }
  check(!out.empty(), what + " must not be empty");
  return out;
}

std::vector<Index> parse_index_list(const std::string& s, const std::string& what) {
  std::vector<Index> out;
  for (double v : parse_list(s, what)) {
    check(v >= 0 && v == std::floor(v), what + " must hold nonnegative integers");
    out.push_back(static_cast<Index>(v));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Problem construction

struct ProblemShape {
  bool pauli = true;
  int qubits = 0;
  Index m = 0;
  Index n = 0;
  Index p = 0;
};

ProblemShape resolve_shape(const ProblemOpts& o, std::optional<Index> p_override = std::nullopt) {
  ProblemShape s;
  const bool has_pauli = o.pauli != 0;
  const bool has_gauss = !o.gaussian.empty();
  check(has_pauli != has_gauss, "exactly one of --pauli or --gaussian is required");
  if (has_pauli) {
    check(o.pauli >= 1, "--pauli must be >= 1");
    if (o.pauli > kMaxQubits) throw SizeGuard("--pauli " + std::to_string(o.pauli) + " exceeds the qubit limit");
    s.pauli = true;
    s.qubits = o.pauli;
    s.m = s.n = Index{1} << o.pauli;
  } else {
    check(o.gaussian.size() == 2 && o.gaussian[0] >= 1 && o.gaussian[1] >= 1,
          "--gaussian needs two positive sizes");
    check(!o.complex, "--complex is only available for Pauli problems");
    s.pauli = false;
    s.m = o.gaussian[0];
    s.n = o.gaussian[1];
  }
  if (p_override) {
    s.p = *p_override;
  } else {
    check(!(o.p > 0 && o.p_ratio > 0), "give either --p or --p-ratio, not both");
    if (o.p > 0) {
      s.p = o.p;
    } else {
      check(o.p_ratio > 0, "one of --p or --p-ratio is required");
      s.p = static_cast<Index>(std::llround(o.p_ratio * static_cast<double>(s.n)));
    }
  }
  check(s.p >= 1, "p must be >= 1");
  if (s.pauli) {
    const double total = std::pow(4.0, s.qubits);
    check(static_cast<double>(s.p) <= total, "p exceeds the 4^q available Pauli codes");
  } else {
    const double entries = static_cast<double>(s.p) * static_cast<double>(s.m) * static_cast<double>(s.n);
    if (entries > static_cast<double>(Index{1} << 27))
      throw SizeGuard("Gaussian operator with p*m*n = " + format_double(entries) + " entries is too large");
  }
  return s;
}

Constraint resolve_constraint(const SolverOpts& o, const ProblemShape& s) {
  if (o.constraint == "auto") return s.pauli ? Constraint::simplex : Constraint::none;
  try {
    const Constraint c = parse_constraint(o.constraint);
    check(c == Constraint::none || s.pauli, "--constraint " + o.constraint + " needs a Pauli problem");
    return c;
  } catch (const dimension_error& e) {
    throw ConfigError(e.what());
  }
}

SolverConfig make_solver_config(const SolverOpts& o, const ProblemShape& s) {
  check(o.r >= 1, "--r must be >= 1");
  check(o.rho >= 2, "--rho must be >= 2");
  check(o.q >= 0, "--q must be >= 0");
  check(o.r + o.rho <= std::min(s.m, s.n), "r + rho must not exceed min(m, n)");
  check(o.mu >= 0 && std::isfinite(o.mu), "--mu must be positive");
  check(o.max_iters >= 0, "--max-iters must be >= 0");
  check(o.mu_rule == "norm" || o.mu_rule == "rip", "--mu-rule must be norm or rip");
  check(o.rip_samples >= 1, "--rip-samples must be >= 1");
  SolverConfig cfg;
  cfg.rank = o.r;
  cfg.oversampling = o.rho;
  cfg.power_iters = o.q;
  if (o.mu > 0) cfg.step = o.mu;
  cfg.constraint = resolve_constraint(o, s);
  cfg.acceleration = o.accel;
  cfg.max_iters = o.max_iters;
  if (o.f_tol >= 0) cfg.f_tol = o.f_tol;
  return cfg;
}

void validate_noise(const NoiseOpts& n, const ProblemShape& s) {
  check(!std::isnan(n.snr_db), "--snr-db must be a number");
  check(n.gamma >= 0 && n.gamma <= 1, "--gamma must lie in [0, 1]");
  check(n.gamma == 0 || s.pauli, "--gamma needs a Pauli problem");
}

using AnyOperator = std::variant<PauliOperator, GaussianOperator>;

AnyOperator make_operator(const ProblemShape& s, const ProblemOpts& o, std::uint64_t trial_seed,
                          unsigned threads) {
  if (s.pauli) {
    Rng rng = make_rng(trial_seed, kOperatorStream);
    PauliOperator op = sample_pauli_operator(s.qubits, s.p, rng, !o.complex);
    op.set_threads(threads);
    return op;
  }
  return GaussianOperator(s.m, s.n, s.p, derive_seed(trial_seed, kOperatorStream));
}

void save_operator(const AnyOperator& op, const std::string& path) {
  std::ofstream f(path);
  if (!f) throw ConfigError("cannot write operator file '" + path + "'");
  std::visit([&](const auto& o) { write_operator(f, o); }, op);
}

/// Random unit-trace PSD factor for Pauli problems; unit-Frobenius general
/// factor for Gaussian ones. `projector` gives equal weights.
template <Field S>
FactorTriple<S> make_truth(const ProblemShape& s, Index r, Rng& rng, bool projector = false) {
  const Matrix<S> U = thin_qr(gaussian_test_block<S>(s.m, r, rng)).Q;
  std::uniform_real_distribution<double> u(0.5, 1.5);
  RealVector d(r);
  for (Index k = 0; k < r; ++k) d(k) = projector ? 1.0 : u(rng);
  std::sort(d.data(), d.data() + r, std::greater<>());
  if (s.pauli) {
    d /= d.sum();
    return FactorTriple<S>::symmetric(U, d);
  }
  d /= d.norm();
  const Matrix<S> V = thin_qr(gaussian_test_block<S>(s.n, r, rng)).Q;
  return FactorTriple<S>(U, d, V);
}

/// y = (1 - gamma) A(L) + (gamma / n) A(I) + e, with ||e|| set by the SNR.
template <Field S>
RealVector measure(const AnyOperator& any, const FactorTriple<S>& L, const NoiseOpts& noise, Rng& rng,
                   double* noise_norm_sq = nullptr) {
  RealVector y;
  if (const auto* op = std::get_if<PauliOperator>(&any)) {
    y = (1.0 - noise.gamma) * op->apply(L);
    if (noise.gamma > 0)
      y += (noise.gamma / static_cast<double>(op->dimension())) * measure_identity(*op);
  } else {
    if constexpr (is_complex_v<S>) {
      throw ConfigError("complex Gaussian problems are not supported");
    } else {
      y = std::get<GaussianOperator>(any).apply(L);
    }
  }
  double nsq = 0.0;
  if (std::isfinite(noise.snr_db)) {
    RealVector e = gaussian_test_block<double>(y.size(), 1, rng).col(0);
    const double target = y.squaredNorm() / std::pow(10.0, noise.snr_db / 10.0);
    e *= std::sqrt(target) / e.norm();
    nsq = e.squaredNorm();
    y += e;
  }
  if (noise_norm_sq) *noise_norm_sq = nsq;
  return y;
}

template <Field S>
MetricRecord metrics_against(const FactorTriple<S>& X, const FactorTriple<S>& L, double gamma) {
  if (gamma > 0) return compute_metrics(X, DepolarizedTruth<S>{L, gamma});
  return compute_metrics(X, L);
}

template <Field S>
SolveResult<S> run_solver(const AnyOperator& any, const RealVector& y, const SolverConfig& cfg, Rng& rng,
                          IterationObserver<S> observer) {
  return std::visit(
      [&](const auto& op) -> SolveResult<S> {
        using Op = std::decay_t<decltype(op)>;
        if constexpr (MeasurementOperator<Op, S>) {
          return solve<S>(op, y, cfg, rng, nullptr, observer);
        } else {
          throw ConfigError("operator does not support this scalar field");
        }
      },
      any);
}

/// Per-trial config: fills in the step for --mu-rule rip.
template <Field S>
SolverConfig trial_config(const SolverConfig& cfg, const SolverOpts& o, const AnyOperator& any,
                          std::uint64_t trial_seed) {
  if (cfg.step || o.mu_rule != "rip") return cfg;
  SolverConfig out = cfg;
  Rng rng = make_rng(trial_seed, kStepStream);
  out.step = std::visit(
      [&](const auto& op) -> double {
        using Op = std::decay_t<decltype(op)>;
        if constexpr (MeasurementOperator<Op, S>) {
          return rip_step<S>(op, cfg, o.rip_samples, rng);
        } else {
          throw ConfigError("operator does not support this scalar field");
        }
      },
      any);
  return out;
}

struct OutputSink {
  std::ofstream file;
  std::ostream* os = nullptr;
};

void open_output(OutputSink& sink, const std::string& path, std::ostream& fallback) {
  if (path.empty()) {
    sink.os = &fallback;
    return;
  }
  sink.file.open(path);
  if (!sink.file) throw ConfigError("cannot open output file '" + path + "'");
  sink.os = &sink.file;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

bool failed(const ConvergenceReport& rep) {
  return rep.reason == Termination::diverged || rep.reason == Termination::non_finite;
}

// ---------------------------------------------------------------------------
// recover

struct RecoverOpts {
  Common common;
  ProblemOpts problem;
  SolverOpts solver;
  NoiseOpts noise;
  Index trials = 1;
  double recovery_tol = 0.1;
  int record_every = 1;
};

template <Field S>
int recover_impl(const RecoverOpts& o, const ProblemShape& shape, const SolverConfig& cfg, CsvWriter& csv,
                 std::ostream& err) {
  bool all_ok = true;
  for (Index t = 0; t < o.trials; ++t) {
    const auto t0 = std::chrono::steady_clock::now();
    const std::uint64_t seed = derive_seed(o.common.seed, static_cast<std::uint64_t>(t));
    const AnyOperator op = make_operator(shape, o.problem, seed, o.common.threads);
    if (t == 0 && !o.problem.save_operator.empty()) save_operator(op, o.problem.save_operator);
    Rng truth_rng = make_rng(seed, kTruthStream);
    Rng noise_rng = make_rng(seed, kNoiseStream);
    Rng solver_rng = make_rng(seed, kSolverStream);
    const FactorTriple<S> L = make_truth<S>(shape, cfg.rank, truth_rng);
    const RealVector y = measure<S>(op, L, o.noise, noise_rng);
    const SolverConfig run_cfg = trial_config<S>(cfg, o.solver, op, seed);

    auto emit = [&](const char* event, int iteration, double f, const MetricRecord& m, const std::string& status) {
      csv.row({event, cell(static_cast<long long>(t)), cell(seed), cell(iteration), cell(f), cell(m.frob_error),
               cell(m.trace_dist), cell(m.fidelity), cell(m.fidelity_sq), status, cell(seconds_since(t0))});
    };
    const FactorTriple<S> x0 = FactorTriple<S>::zero(shape.m, shape.n, cfg.rank, shape.pauli);
    emit("iter", 0, y.squaredNorm(), metrics_against(x0, L, o.noise.gamma), "");

    std::vector<std::pair<int, MetricRecord>> iter_metrics;
    IterationObserver<S> observer = [&](int it, const StepInfo<S>&, const IterateState<S>& s) {
      if (it % o.record_every == 0) iter_metrics.emplace_back(it, metrics_against(s.current, L, o.noise.gamma));
    };
    const SolveResult<S> res = run_solver<S>(op, y, run_cfg, solver_rng, observer);
    for (const auto& [it, m] : iter_metrics)
      emit("iter", it, res.report.records[static_cast<std::size_t>(it)].f, m, "");
    const MetricRecord fin = metrics_against(res.solution, L, o.noise.gamma);
    emit("final", res.report.iterations, res.report.final_f(), fin, to_string(res.report.reason));

    const bool ok = !failed(res.report) && fin.frob_error <= o.recovery_tol;
    if (!ok) {
      all_ok = false;
      err << "trial " << t << ": " << to_string(res.report.reason) << ", relative error "
          << format_double(fin.frob_error) << (res.report.message.empty() ? "" : " (" + res.report.message + ")")
          << '\n';
    }
  }
  return all_ok ? kSuccess : kNonConvergence;
}

int cmd_recover(const RecoverOpts& o, std::ostream& out, std::ostream& err) {
  const ProblemShape shape = resolve_shape(o.problem);
  const SolverConfig cfg = make_solver_config(o.solver, shape);
  validate_noise(o.noise, shape);
  check(o.trials >= 1, "--seeds must be >= 1");
  check(o.recovery_tol > 0, "--recovery-tol must be > 0");
  check(o.record_every >= 1, "--record-every must be >= 1");
  OutputSink sink;
  open_output(sink, o.common.out, out);
  CsvWriter csv(*sink.os);
  csv.row(kRecoverHeader);
  if (o.problem.complex) return recover_impl<Complex>(o, shape, cfg, csv, err);
  return recover_impl<double>(o, shape, cfg, csv, err);
}

// ---------------------------------------------------------------------------
// epsilon-study

struct EpsilonOpts {
  Common common;
  ProblemOpts problem;
  SolverOpts solver;
  std::string ranks = "1,2,4";
  std::string oversampling = "2,5,10";
  std::string power = "0,1,2";
  Index trials = 50;
  int capture_iter = 2;
  Index dense_limit = 1024;
};

template <Field S>
Matrix<S> capture_h(const EpsilonOpts& o, const ProblemShape& shape, const SolverConfig& cfg, std::ostream& err) {
  const std::uint64_t seed = derive_seed(o.common.seed, 0);
  const AnyOperator op = make_operator(shape, o.problem, seed, o.common.threads);
  if (!o.problem.save_operator.empty()) save_operator(op, o.problem.save_operator);
  Rng truth_rng = make_rng(seed, kTruthStream);
  Rng noise_rng = make_rng(seed, kNoiseStream);
  Rng solver_rng = make_rng(seed, kSolverStream);
  const FactorTriple<S> L = make_truth<S>(shape, cfg.rank, truth_rng);
  const RealVector y = measure<S>(op, L, NoiseOpts{}, noise_rng);
  std::optional<Matrix<S>> H;
  SolverConfig run = trial_config<S>(cfg, o.solver, op, seed);
  run.max_iters = o.capture_iter;
  run.f_tol = 0.0;
  run.stall_tol = 0.0;
  IterationObserver<S> observer = [&](int it, const StepInfo<S>& info, const IterateState<S>&) {
    if (it == o.capture_iter) H = info.h(Matrix<S>::Identity(shape.n, shape.n));
  };
  const SolveResult<S> res = run_solver<S>(op, y, run, solver_rng, observer);
  if (!H) {
    err << "solver stopped before iteration " << o.capture_iter << " (" << to_string(res.report.reason) << ")\n";
    throw ConfigError("could not capture the iteration matrix");
  }
  return *H;
}

template <Field S>
int epsilon_impl(const EpsilonOpts& o, const ProblemShape& shape, const SolverConfig& cfg, CsvWriter& csv,
                 std::ostream& err) {
  const std::vector<Index> ranks = parse_index_list(o.ranks, "--ranks");
  const std::vector<Index> rhos = parse_index_list(o.oversampling, "--rhos");
  const std::vector<Index> qs = parse_index_list(o.power, "--qs");
  for (Index r : ranks) check(r >= 1, "--ranks entries must be >= 1");
  for (Index rho : rhos) check(rho >= 2, "--rhos entries must be >= 2");

  const Matrix<S> H = capture_h<S>(o, shape, cfg, err);
  const std::uint64_t master = derive_seed(o.common.seed, 1000);
  for (Index r : ranks) {
    for (Index rho : rhos) {
      if (r + rho > std::min(shape.m, shape.n)) continue;
      for (Index q : qs) {
        const EpsilonStats s = epsilon_tilde<S>(H, r, rho, static_cast<int>(q), o.trials, master);
        csv.row({cell(static_cast<long long>(r)), cell(static_cast<long long>(rho)), cell(static_cast<long long>(q)),
                 cell(static_cast<long long>(o.trials)), cell(s.mean), cell(s.se), cell(s.min), cell(s.max),
                 cell(s.bound), s.degenerate ? "1" : "0"});
      }
    }
  }
  return kSuccess;
}

int cmd_epsilon_study(const EpsilonOpts& o, std::ostream& out, std::ostream& err) {
  const ProblemShape shape = resolve_shape(o.problem);
  const SolverConfig cfg = make_solver_config(o.solver, shape);
  check(o.trials >= 2, "--trials must be >= 2");
  check(o.capture_iter >= 1, "--capture-iter must be >= 1");
  if (std::max(shape.m, shape.n) > o.dense_limit)
    throw SizeGuard("epsilon-study forms the iteration matrix densely; n exceeds --dense-limit");
  OutputSink sink;
  open_output(sink, o.common.out, out);
  CsvWriter csv(*sink.os);
  csv.row(kEpsilonHeader);
  if (o.problem.complex) return epsilon_impl<Complex>(o, shape, cfg, csv, err);
  return epsilon_impl<double>(o, shape, cfg, csv, err);
}

// ---------------------------------------------------------------------------
// noise-sweep

struct SweepOpts {
  Common common;
  ProblemOpts problem;
  SolverOpts solver;
  NoiseOpts noise;
  std::string p_ratios = "2,3,4,5,6";
  Index trials = 20;
};

double median(std::vector<double> v) {
  std::vector<double> finite;
  for (double x : v)
    if (!std::isnan(x)) finite.push_back(x);
  if (finite.empty()) return kNaN;
  std::sort(finite.begin(), finite.end());
  const std::size_t k = finite.size();
  return k % 2 ? finite[k / 2] : 0.5 * (finite[k / 2 - 1] + finite[k / 2]);
}

template <Field S>
int sweep_impl(const SweepOpts& o, CsvWriter& csv, std::ostream& err) {
  const std::vector<double> ratios = parse_list(o.p_ratios, "--p-ratios");
  bool any_failed = false;
  for (std::size_t pi = 0; pi < ratios.size(); ++pi) {
    check(ratios[pi] > 0, "--p-ratios entries must be > 0");
    ProblemOpts po = o.problem;
    po.p = 0;
    po.p_ratio = ratios[pi];
    const ProblemShape shape = resolve_shape(po);
    const SolverConfig cfg = make_solver_config(o.solver, shape);
    validate_noise(o.noise, shape);
    std::vector<double> fe, td, fi, fs;
    for (Index t = 0; t < o.trials; ++t) {
      const auto t0 = std::chrono::steady_clock::now();
      const std::uint64_t seed =
          derive_seed(derive_seed(o.common.seed, static_cast<std::uint64_t>(pi)), static_cast<std::uint64_t>(t));
      const AnyOperator op = make_operator(shape, po, seed, o.common.threads);
      if (pi == 0 && t == 0 && !po.save_operator.empty()) save_operator(op, po.save_operator);
      Rng truth_rng = make_rng(seed, kTruthStream);
      Rng noise_rng = make_rng(seed, kNoiseStream);
      Rng solver_rng = make_rng(seed, kSolverStream);
      const FactorTriple<S> L = make_truth<S>(shape, cfg.rank, truth_rng, /*projector=*/true);
      const RealVector y = measure<S>(op, L, o.noise, noise_rng);
      const SolveResult<S> res = run_solver<S>(op, y, trial_config<S>(cfg, o.solver, op, seed), solver_rng, {});
      const MetricRecord m = metrics_against(res.solution, L, o.noise.gamma);
      if (failed(res.report)) {
        any_failed = true;
        err << "p=" << shape.p << " trial " << t << ": " << to_string(res.report.reason) << '\n';
      }
      fe.push_back(m.frob_error);
      td.push_back(m.trace_dist);
      fi.push_back(m.fidelity);
      fs.push_back(m.fidelity_sq);
      csv.row({"trial", cell(static_cast<long long>(shape.p)), cell(ratios[pi]), cell(static_cast<long long>(t)),
               cell(seed), cell(m.frob_error), cell(m.trace_dist), cell(m.fidelity), cell(m.fidelity_sq),
               to_string(res.report.reason), cell(seconds_since(t0))});
    }
    csv.row({"median", cell(static_cast<long long>(shape.p)), cell(ratios[pi]), "", "", cell(median(fe)),
             cell(median(td)), cell(median(fi)), cell(median(fs)), "", ""});
  }
  return any_failed ? kNonConvergence : kSuccess;
}

int cmd_noise_sweep(const SweepOpts& o, std::ostream& out, std::ostream& err) {
  check(o.trials >= 1, "--trials must be >= 1");
  resolve_shape(o.problem, Index{1});  // validates the problem flags
  OutputSink sink;
  open_output(sink, o.common.out, out);
  CsvWriter csv(*sink.os);
  csv.row(kNoiseSweepHeader);
  if (o.problem.complex) return sweep_impl<Complex>(o, csv, err);
  return sweep_impl<double>(o, csv, err);
}

// ---------------------------------------------------------------------------
// rip-estimate

struct RipOpts {
  Common common;
  ProblemOpts problem;
  std::string ranks;
  Index r = 1;
  Index rho = 0;
  Index trials = 200;
  double delta_2r = -1.0;
  double delta_cr = -1.0;
  double epsilon = -1.0;
  double C = 4.0;
  Index dense_limit = 4096;
};

template <class Op>
RipEstimate estimate(const Op& op, Index rank, Index trials, Rng& rng) {
  return rip_monte_carlo<double>(op, std::min(rank, std::min(op.rows(), op.cols())), trials, rng);
}

int cmd_rip_estimate(const RipOpts& o, std::ostream& out, std::ostream& err) {
  check(!o.problem.complex, "rip-estimate works on real problems");
  const ProblemShape shape = resolve_shape(o.problem);
  if (std::max(shape.m, shape.n) > o.dense_limit) throw SizeGuard("rip-estimate: n exceeds --dense-limit");
  check(o.r >= 1, "--r must be >= 1");
  check(o.trials >= 1, "--trials must be >= 1");
  check(o.rho == 0 || o.rho >= 2, "--rho must be >= 2");
  check(o.C >= 4, "--C must be >= 4");
  check(o.delta_2r < 1 && o.delta_cr < 1, "delta overrides must be < 1");

  const std::uint64_t seed = derive_seed(o.common.seed, 0);
  const AnyOperator op = make_operator(shape, o.problem, seed, o.common.threads);
  if (!o.problem.save_operator.empty()) save_operator(op, o.problem.save_operator);
  Rng rng = make_rng(seed, kSolverStream);

  const Index ell = o.r + (o.rho > 0 ? o.rho : 0);
  const Index c = o.rho > 0 ? (ell + o.r - 1) / o.r + 1 : 2;
  std::vector<Index> ranks =
      o.ranks.empty() ? std::vector<Index>{o.r, 2 * o.r, c * o.r} : parse_index_list(o.ranks, "--ranks");
  std::sort(ranks.begin(), ranks.end());
  ranks.erase(std::unique(ranks.begin(), ranks.end()), ranks.end());

  OutputSink sink;
  open_output(sink, o.common.out, out);
  CsvWriter csv(*sink.os);
  csv.row(kRipHeader);
  std::map<Index, double> delta;
  for (Index k : ranks) {
    check(k >= 1, "--ranks entries must be >= 1");
    const RipEstimate est = std::visit([&](const auto& a) { return estimate(a, k, o.trials, rng); }, op);
    delta[k] = est.delta();
    csv.row({cell(static_cast<long long>(k)), cell(static_cast<long long>(o.trials)), cell(est.lower),
             cell(est.upper), cell(est.delta())});
  }
  auto lookup = [&](Index k) {
    const auto it = delta.find(k);
    if (it != delta.end()) return it->second;
    return std::visit([&](const auto& a) { return estimate(a, k, o.trials, rng).delta(); }, op);
  };

  TheoryInputs in;
  in.delta_2r = o.delta_2r >= 0 ? o.delta_2r : lookup(2 * o.r);
  in.delta_cr = o.delta_cr >= 0 ? o.delta_cr : (o.delta_2r >= 0 && o.rho == 0 ? o.delta_2r : lookup(c * o.r));
  in.epsilon = o.epsilon >= 0 ? o.epsilon
                              : (o.rho > 0 ? static_cast<double>(o.r) / static_cast<double>(o.rho - 1) : 0.0);
  in.m = shape.m;
  in.n = shape.n;
  in.p = shape.p;
  in.C = o.C;
  in.rank = o.r;
  in.sketch_width = o.rho > 0 ? ell : 0;

  std::ostream& report = o.common.out.empty() ? err : out;
  report << "delta_2r=" << format_double(in.delta_2r) << " delta_cr=" << format_double(in.delta_cr)
         << " epsilon=" << format_double(in.epsilon) << " C=" << format_double(in.C) << '\n';
  if (in.delta_2r >= 1 || in.delta_cr >= 1) {
    report << "warning: estimated delta >= 1; theta and tau are undefined\n";
    return kSuccess;
  }
  const TheoryDiagnostics t = theory_bounds(in);
  report << "theta=" << format_double(t.theta) << " tau=" << format_double(t.tau)
         << " theta_general=" << format_double(t.theta_general) << " tau_general=" << format_double(t.tau_general)
         << '\n';
  if (!t.contracts()) report << "warning: theta >= 1, no contraction guarantee\n";
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  try {
    args = expand_config(raw_args);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  CLI::App app{"Low-memory randomized SVP for affine rank minimization"};
  app.name("rsvp");
  app.require_subcommand(1);
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);

  RecoverOpts rec;
  CLI::App* recover = app.add_subcommand("recover", "Recover a low-rank matrix and report accuracy");
  recover->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  add_common(recover, rec.common);
  add_problem(recover, rec.problem);
  add_solver(recover, rec.solver);
  add_noise(recover, rec.noise);
  recover->add_option("--seeds,--trials", rec.trials, "Number of trials");
  recover->add_option("--recovery-tol", rec.recovery_tol, "Relative error above which a trial counts as failed");
  recover->add_option("--record-every", rec.record_every, "Write an iter row every k iterations");

  EpsilonOpts eps;
  CLI::App* epsilon = app.add_subcommand("epsilon-study", "Approximation quality of the randomized projector");
  epsilon->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  add_common(epsilon, eps.common);
  add_problem(epsilon, eps.problem);
  add_solver(epsilon, eps.solver);
  epsilon->add_option("--ranks", eps.ranks, "Comma-separated ranks r");
  epsilon->add_option("--rhos", eps.oversampling, "Comma-separated oversampling values");
  epsilon->add_option("--qs", eps.power, "Comma-separated power iteration counts");
  epsilon->add_option("--seeds,--trials", eps.trials, "Seeds per grid cell");
  epsilon->add_option("--capture-iter", eps.capture_iter, "Solver iteration whose matrix is studied");
  epsilon->add_option("--dense-limit", eps.dense_limit, "Largest n for the dense capture");

  SweepOpts sw;
  CLI::App* sweep = app.add_subcommand("noise-sweep", "Median error across a range of p");
  sweep->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  add_common(sweep, sw.common);
  add_problem(sweep, sw.problem, /*with_p=*/false);
  add_solver(sweep, sw.solver);
  add_noise(sweep, sw.noise);
  sweep->add_option("--p-ratios", sw.p_ratios, "Comma-separated values of p / n");
  sweep->add_option("--seeds,--trials", sw.trials, "Trials per point");

  RipOpts rip;
  CLI::App* ripc = app.add_subcommand("rip-estimate", "Monte-Carlo R-RIP estimate and theory bounds");
  ripc->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  add_common(ripc, rip.common);
  add_problem(ripc, rip.problem);
  ripc->add_option("--r", rip.r, "Solver rank r (estimates ranks r, 2r and cr)");
  ripc->add_option("--rho", rip.rho, "Oversampling; sets epsilon = r / (rho - 1) and c");
  ripc->add_option("--ranks", rip.ranks, "Comma-separated ranks to estimate");
  ripc->add_option("--seeds,--trials", rip.trials, "Monte-Carlo samples per rank");
  ripc->add_option("--delta-2r", rip.delta_2r, "Use this delta_2r instead of the estimate");
  ripc->add_option("--delta-cr", rip.delta_cr, "Use this delta_cr instead of the estimate");
  ripc->add_option("--epsilon", rip.epsilon, "Use this epsilon");
  ripc->add_option("--C", rip.C, "Noise-floor constant (>= 4)");
  ripc->add_option("--dense-limit", rip.dense_limit, "Largest n accepted");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }

  try {
    if (recover->parsed()) return cmd_recover(rec, out, err);
    if (epsilon->parsed()) return cmd_epsilon_study(eps, out, err);
    if (sweep->parsed()) return cmd_noise_sweep(sw, out, err);
    if (ripc->parsed()) return cmd_rip_estimate(rip, out, err);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  } catch (const SizeGuard& e) {
    err << "error: " << e.what() << '\n';
    return kSizeGuard;
  } catch (const size_limit_error& e) {
    err << "error: " << e.what() << '\n';
    return kSizeGuard;
  } catch (const dimension_error& e) {
    err << "error: " << e.what() << '\n';
    return kConfigError;
  }
  return kConfigError;
}

}  // namespace rsvp::cli
