// Copyright 2026 The opca authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "opca/harness.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <memory>
#include <mutex>
#include <optional>
#include <thread>

#include "json.hpp"
#include "opca/algorithms.hpp"
#include "opca/matops.hpp"
#include "opca/metrics.hpp"
#include "opca/prng.hpp"
#include "opca/schedules.hpp"

namespace opca {

namespace {

// Immutable state shared by all trials of one experiment.
struct Context {
  ExperimentConfig config;
  std::shared_ptr<const CovarianceModel> model;  // synthetic kinds
  std::shared_ptr<const Matrix> file_data;       // centered samples, file kind
  GroundTruth gt;
  CorrectionPolicy policy;
  Index n = 0;
  Index num_batches = 0;
  Index record_every = 1;
  double lambda_p = 0.0;
  double nu = 0.0;
  double alpha_paper_constant = 0.0;
  DiminishingParams paper_dim;
};

CovarianceModel build_model(const DataConfig& d) {
  switch (d.kind) {
    case DataKind::kGauGap1:
      return make_gau_gap_1(d.n, d.p, d.mu_min, d.mu_max, d.rho, d.seed);
    case DataKind::kGauGap2:
      return make_gau_gap_2(d.n, d.p, d.p1, d.mu_min, d.mu_max, d.rho, d.seed);
    case DataKind::kGauNgap:
      return make_gau_ngap(d.n, d.p, d.p_prime, d.mu_min, d.mu_max, d.rho,
                           d.seed);
    case DataKind::kFile:
      break;
  }
  throw ConfigError("build_model: not a synthetic data kind");
}

Context build_context(const ExperimentConfig& config) {
  Context ctx;
  ctx.config = config;
  if (config.data.kind == DataKind::kFile) {
    auto data = std::make_shared<Matrix>(
        load_matrix_file(config.data.path, config.data.format));
    if (config.data.center) center_columns(*data);
    if (config.data.p >= data->rows())
      throw ConfigError("data: need p < feature count " +
                        std::to_string(data->rows()));
    if (config.run.m > data->cols())
      throw ConfigError("run.m = " + std::to_string(config.run.m) +
                        " exceeds the " + std::to_string(data->cols()) +
                        " samples in '" + config.data.path + "'");
    ctx.gt = make_ground_truth_from_samples(*data, config.data.p);
    ctx.file_data = std::move(data);
    ctx.n = ctx.file_data->rows();
  } else {
    auto model = std::make_shared<CovarianceModel>(build_model(config.data));
    ctx.gt = make_ground_truth(*model, config.data.p);
    ctx.model = std::move(model);
    ctx.n = config.data.n;
  }
  ctx.policy = make_correction_policy(ctx.gt.lambda);
  ctx.num_batches = config.num_batches();
  ctx.record_every = config.effective_record_every();
  ctx.lambda_p = ctx.gt.lambda[config.data.p - 1];
  ctx.nu = ctx.gt.nu;
  if (config.stepsize.kind == StepsizeKind::kPaperConstant)
    ctx.alpha_paper_constant =
        paper_constant_alpha(ctx.num_batches, ctx.lambda_p, ctx.nu);
  if (config.stepsize.kind == StepsizeKind::kPaperDiminishing)
    ctx.paper_dim =
        paper_diminishing_params(ctx.num_batches, ctx.lambda_p, ctx.nu);
  return ctx;
}

double scalar_alpha(const Context& ctx, Index k) {
  const StepsizeConfig& s = ctx.config.stepsize;
  switch (s.kind) {
    case StepsizeKind::kConstant:
      return s.alpha;
    case StepsizeKind::kDiminishing:
      return diminishing_alpha(k, s.gamma, s.c1, s.c2, s.beta);
    case StepsizeKind::kPaperConstant:
      return ctx.alpha_paper_constant;
    case StepsizeKind::kPaperDiminishing:
      return diminishing_alpha(k, ctx.paper_dim.gamma, ctx.paper_dim.c1,
                               ctx.paper_dim.c2, ctx.paper_dim.beta);
    case StepsizeKind::kAdaOja:
    case StepsizeKind::kAdaSgn:
      break;
  }
  throw ConfigError("scalar_alpha: adaptive kinds are handled by the driver");
}

SampleBatch fetch_batch(const Context& ctx,
                        const std::optional<GaussianStream>& stream,
                        Index k) {
  if (stream) return stream->batch(k);
  const Index start = k * ctx.config.run.h;
  const Index width = std::min(ctx.config.run.h, ctx.config.run.m - start);
  SampleBatch b;
  b.index = k;
  b.data = ctx.file_data->middleCols(start, width);
  return b;
}

Matrix initial_iterate(const Context& ctx, Index trial) {
  const Index n = ctx.n;
  const Index p = ctx.config.data.p;
  if (ctx.config.run.init == InitKind::kSaddle) {
    Matrix x = Matrix::Zero(n, 1);
    x(n - 1, 0) = 1.0;
    return x;
  }
  NormalStream normals(mix_key(ctx.config.run.base_seed,
                               static_cast<std::uint64_t>(trial),
                               purpose::kInit));
  return orthonormalize(normals.gaussian_matrix(n, p));
}

TrialResult run_trial_with_context(const Context& ctx, Index trial) {
  const ExperimentConfig& config = ctx.config;
  const Index p = config.data.p;
  const Index h = config.run.h;
  const Index m = config.run.m;
  const Index big_k = ctx.num_batches;
  const bool sgn_family =
      config.algo == AlgoKind::kSgn || config.algo == AlgoKind::kAdaSgn;

  TrialResult result;
  result.trial = trial;

  std::optional<GaussianStream> stream;
  if (ctx.model)
    stream.emplace(*ctx.model,
                   StreamSpec{h, m,
                              mix_key(config.run.base_seed,
                                      static_cast<std::uint64_t>(trial))});

  double alpha = 0.0;
  Iterate it;
  try {
    it.x = initial_iterate(ctx, trial);
    it.sigma_min = 1.0;
    AdaOjaState adaoja(p, config.stepsize.b0);
    AdaSgnState adasgn;
    Matrix x_prev;

    for (Index k = 0; k < big_k; ++k) {
      const SampleBatch batch = fetch_batch(ctx, stream, k);
      bool corrected = false;

      if (sgn_family) {
        // Rank guard: restore conditioning before the Gram solve can fail.
        if (it.sigma_min >= 0.0 && it.sigma_min <= ctx.policy.threshold &&
            correct_iterate(it, ctx.policy)) {
          result.corrections += 1;
          corrected = true;
        }
        if (config.algo == AlgoKind::kAdaSgn) {
          if (k == 0) {
            alpha = 1.0;
          } else {
            const double f_prev = batch_objective(x_prev, batch);
            const double f_curr = batch_objective(it.x, batch);
            alpha = adasgn.next_alpha(f_prev, f_curr);
          }
          x_prev = it.x;
        } else {
          alpha = scalar_alpha(ctx, k);
        }
        try {
          sgn_step(it, batch, alpha);
        } catch (const GramSingularError&) {
          // One shot at recovery, then the retry's failure is final.
          if (!correct_iterate(it, ctx.policy)) throw;
          result.corrections += 1;
          corrected = true;
          sgn_step(it, batch, alpha);
        }
      } else if (config.algo == AlgoKind::kAdaOja) {
        const Matrix g = oja_gradient(it.x, batch);
        const Vector w = adaoja.update(g);
        it.x = orthonormalize(it.x + g * w.asDiagonal());
        it.k += 1;
        it.sigma_min = 1.0;
        alpha = w.mean();
      } else {
        alpha = scalar_alpha(ctx, k);
        oja_step(it, batch, alpha);
      }

      if (it.k % ctx.record_every == 0 || it.k == big_k) {
        TraceRecord rec;
        rec.trial = trial;
        rec.k = it.k;
        rec.samples_seen = std::min(it.k * h, m);
        rec.error = sin_theta_error(it.x, ctx.gt) / static_cast<double>(p);
        rec.stepsize = alpha;
        rec.fhat = batch_objective(it.x, batch);
        rec.corrected = corrected;
        if (!std::isfinite(rec.error) || !std::isfinite(rec.fhat))
          throw NonFiniteError("trial diverged: non-finite error or objective");
        result.records.push_back(rec);
      }
    }
    result.final_error = result.records.back().error;
  } catch (const Error& e) {
    result.failed = true;
    result.failure = e.what();
    TraceRecord sentinel;
    sentinel.trial = trial;
    sentinel.k = it.k;
    sentinel.samples_seen = std::min(it.k * h, m);
    sentinel.error = -1.0;
    sentinel.stepsize = alpha;
    sentinel.fhat = -1.0;
    result.records.push_back(sentinel);
  }
  return result;
}

void run_trials_parallel(const Context& ctx, int workers,
                         std::vector<TrialResult>& out) {
  const Index trials = ctx.config.run.trials;
  out.resize(static_cast<std::size_t>(trials));
  if (workers <= 1) {
    for (Index t = 0; t < trials; ++t)
      out[static_cast<std::size_t>(t)] = run_trial_with_context(ctx, t);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto work = [&] {
    try {
      while (true) {
        const Index t = next.fetch_add(1);
        if (t >= trials) return;
        out[static_cast<std::size_t>(t)] = run_trial_with_context(ctx, t);
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(error_mutex);
      if (!first_error) first_error = std::current_exception();
    }
  };
  std::vector<std::thread> pool;
  const int count = static_cast<int>(
      std::min<Index>(trials, static_cast<Index>(workers)));
  pool.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) pool.emplace_back(work);
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

ExperimentResult summarize(const Context& ctx,
                           std::vector<TrialResult>&& trials, int workers,
                           double wall_ms) {
  ExperimentResult result;
  result.trials = std::move(trials);
  result.workers = workers;
  result.wall_ms = wall_ms;
  double sum = 0.0;
  Index successes = 0;
  for (const TrialResult& t : result.trials) {
    if (t.failed) {
      result.failed_trials += 1;
    } else {
      sum += t.final_error;
      successes += 1;
    }
    result.corrections_total += t.corrections;
  }
  if (successes > 0) {
    result.mean_final_error = sum / static_cast<double>(successes);
    double ss = 0.0;
    for (const TrialResult& t : result.trials)
      if (!t.failed) {
        const double d = t.final_error - result.mean_final_error;
        ss += d * d;
      }
    result.var_final_error = ss / static_cast<double>(successes);
    result.aggregate = aggregate_trials(result.trials);
  }
  return result;
}

}  // namespace

int resolve_workers() {
  if (const char* env = std::getenv("OPCA_WORKERS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v >= 1 && v <= 4096)
      return static_cast<int>(v);
    std::cerr << "opca: ignoring invalid OPCA_WORKERS='" << env << "'\n";
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

TrialResult run_trial(const ExperimentConfig& config, Index trial_index) {
  if (trial_index < 0 || trial_index >= config.run.trials)
    throw BadRangeError("run_trial: trial index out of range");
  return run_trial_with_context(build_context(config), trial_index);
}

ExperimentResult run_experiment(const ExperimentConfig& config, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  if (workers <= 0) workers = resolve_workers();
  const Context ctx = build_context(config);
  std::vector<TrialResult> trials;
  run_trials_parallel(ctx, workers, trials);
  const double wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return summarize(ctx, std::move(trials), workers, wall_ms);
}

SweepResult run_sweep(const ExperimentConfig& config,
                      const std::vector<double>& gammas, int workers) {
  const auto t0 = std::chrono::steady_clock::now();
  if (workers <= 0) workers = resolve_workers();
  if (config.stepsize.kind != StepsizeKind::kConstant &&
      config.stepsize.kind != StepsizeKind::kDiminishing)
    throw ConfigError(
        "run_sweep: stepsize.kind must be constant or diminishing");
  if (gammas.empty()) throw BadRangeError("run_sweep: empty gamma set");
  for (const double g : gammas)
    if (!(g > 0.0)) throw BadRangeError("run_sweep: gammas must be > 0");
  std::vector<double> sorted = gammas;
  std::sort(sorted.begin(), sorted.end());

  SweepResult sweep;
  for (const double gamma : sorted) {
    ExperimentConfig cfg = config;
    if (cfg.stepsize.kind == StepsizeKind::kConstant)
      cfg.stepsize.alpha = gamma;
    else
      cfg.stepsize.gamma = gamma;
    const Context ctx = build_context(cfg);
    std::vector<TrialResult> trials;
    run_trials_parallel(ctx, workers, trials);
    SweepPoint point;
    point.gamma = gamma;
    double sum = 0.0;
    Index successes = 0;
    for (const TrialResult& t : trials) {
      if (t.failed) {
        point.failed_trials += 1;
      } else {
        sum += t.final_error;
        successes += 1;
      }
    }
    if (successes > 0) {
      point.mean_final_error = sum / static_cast<double>(successes);
      double ss = 0.0;
      for (const TrialResult& t : trials)
        if (!t.failed) {
          const double d = t.final_error - point.mean_final_error;
          ss += d * d;
        }
      point.var_final_error = ss / static_cast<double>(successes);
    }
    sweep.points.push_back(point);
  }
  sweep.best_mean_final_error = -1.0;
  for (const SweepPoint& point : sweep.points)
    if (point.mean_final_error >= 0.0 &&
        (sweep.best_mean_final_error < 0.0 ||
         point.mean_final_error < sweep.best_mean_final_error)) {
      sweep.best_mean_final_error = point.mean_final_error;
      sweep.best_gamma = point.gamma;
    }
  sweep.wall_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                t0)
          .count();
  return sweep;
}

std::vector<AggregateRow> aggregate_trials(
    const std::vector<TrialResult>& trials) {
  std::vector<const TrialResult*> ok;
  for (const TrialResult& t : trials)
    if (!t.failed) ok.push_back(&t);
  std::vector<AggregateRow> rows;
  if (ok.empty()) return rows;
  const std::size_t grid = ok.front()->records.size();
  for (const TrialResult* t : ok)
    if (t->records.size() != grid)
      throw GridMismatchError("aggregate: trials recorded different grids");
  rows.resize(grid);
  for (std::size_t i = 0; i < grid; ++i) {
    const TraceRecord& ref = ok.front()->records[i];
    AggregateRow& row = rows[i];
    row.k = ref.k;
    row.samples_seen = ref.samples_seen;
    double sum = 0.0;
    for (const TrialResult* t : ok) {
      const TraceRecord& rec = t->records[i];
      if (rec.k != ref.k)
        throw GridMismatchError("aggregate: trials recorded different grids");
      sum += rec.error;
    }
    row.mean_error = sum / static_cast<double>(ok.size());
    double ss = 0.0;
    for (const TrialResult* t : ok) {
      const double d = t->records[i].error - row.mean_error;
      ss += d * d;
    }
    row.var_error = ss / static_cast<double>(ok.size());
  }
  return rows;
}

std::vector<OdeCurve> run_ode(const ExperimentConfig& config) {
  if (config.data.kind == DataKind::kFile)
    throw ConfigError("ode: requires a synthetic covariance model");
  if (!config.ode.present)
    throw ConfigError("ode: missing [ode] section");
  const OdeConfig& ode = config.ode;
  const Index p = config.data.p;
  if (ode.oja_limit && p != 1)
    throw ConfigError("ode: the oja-limit flow needs p = 1");

  const CovarianceModel model = build_model(config.data);
  NormalStream normals(
      mix_key(config.run.base_seed, 0, purpose::kOde));
  Matrix x0;
  if (ode.initial_error >= 0.0) {
    if (p != 1)
      throw ConfigError("ode: initial_error start is defined for p = 1");
    const Vector u1 = model.spike_basis.col(0);
    Vector w(model.n);
    normals.fill(0, w);
    w -= u1.dot(w) * u1;
    const double norm = w.norm();
    if (norm <= 0.0) throw BadRangeError("ode: degenerate start direction");
    w /= norm;
    const double eps =
        std::sqrt(ode.initial_error / (1.0 - ode.initial_error));
    x0 = u1 + eps * w;
    x0 /= x0.norm();
  } else {
    x0 = orthonormalize(normals.gaussian_matrix(model.n, p));
  }

  std::vector<OdeCurve> curves;
  for (const double dt : ode.dts) {
    const Index steps = static_cast<Index>(std::ceil(ode.t_end / dt));
    if (ode.sgn_limit) {
      OdeRun run{model, x0, dt, steps, OdeKind::kSgnLimit};
      curves.push_back({"sgn-limit", dt, euler_integrate(run)});
    }
    if (ode.oja_limit) {
      OdeRun run{model, x0, dt, steps, OdeKind::kOjaLimit};
      curves.push_back({"oja-limit", dt, euler_integrate(run)});
    }
  }
  return curves;
}

std::vector<double> parse_gamma_set(const std::string& text) {
  auto parse_one = [](const std::string& tok) -> double {
    const auto caret = tok.find('^');
    char* end = nullptr;
    if (caret != std::string::npos) {
      const std::string base_s = tok.substr(0, caret);
      const std::string exp_s = tok.substr(caret + 1);
      const double base = std::strtod(base_s.c_str(), &end);
      if (end == base_s.c_str() || *end != '\0')
        throw BadRangeError("gamma set: bad base in '" + tok + "'");
      char* end2 = nullptr;
      const double expo = std::strtod(exp_s.c_str(), &end2);
      if (end2 == exp_s.c_str() || *end2 != '\0')
        throw BadRangeError("gamma set: bad exponent in '" + tok + "'");
      return std::pow(base, expo);
    }
    const double v = std::strtod(tok.c_str(), &end);
    if (end == tok.c_str() || *end != '\0')
      throw BadRangeError("gamma set: bad value '" + tok + "'");
    return v;
  };

  const auto dots = text.find("..");
  if (dots != std::string::npos) {
    const std::string lo = text.substr(0, dots);
    const std::string hi = text.substr(dots + 2);
    const auto c1 = lo.find('^');
    const auto c2 = hi.find('^');
    if (c1 == std::string::npos || c2 == std::string::npos ||
        lo.substr(0, c1) != hi.substr(0, c2))
      throw BadRangeError(
          "gamma set: range endpoints need a common base, e.g. 2^-5..2^5");
    char* end = nullptr;
    const std::string base_s = lo.substr(0, c1);
    const double base = std::strtod(base_s.c_str(), &end);
    if (end == base_s.c_str() || *end != '\0' || !(base > 0.0))
      throw BadRangeError("gamma set: bad base '" + base_s + "'");
    const long e_lo = std::strtol(lo.c_str() + c1 + 1, &end, 10);
    if (*end != '\0') throw BadRangeError("gamma set: bad exponent in '" + lo + "'");
    const long e_hi = std::strtol(hi.c_str() + c2 + 1, &end, 10);
    if (*end != '\0') throw BadRangeError("gamma set: bad exponent in '" + hi + "'");
    if (e_hi < e_lo) throw BadRangeError("gamma set: descending range");
    std::vector<double> out;
    for (long e = e_lo; e <= e_hi; ++e)
      out.push_back(std::pow(base, static_cast<double>(e)));
    return out;
  }

  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string::npos) comma = text.size();
    const std::string tok = text.substr(start, comma - start);
    if (!tok.empty()) out.push_back(parse_one(tok));
    if (comma == text.size()) break;
    start = comma + 1;
  }
  if (out.empty()) throw BadRangeError("gamma set: empty");
  return out;
}

namespace {

void append_double(std::string& out, double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out += buf;
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

nlohmann::json config_json(const ExperimentConfig& config) {
  nlohmann::json j;
  j["data"]["kind"] = to_string(config.data.kind);
  j["data"]["p"] = config.data.p;
  if (config.data.kind == DataKind::kFile) {
    j["data"]["path"] = config.data.path;
    j["data"]["center"] = config.data.center;
  } else {
    j["data"]["n"] = config.data.n;
    j["data"]["rho"] = config.data.rho;
    j["data"]["mu_min"] = config.data.mu_min;
    j["data"]["mu_max"] = config.data.mu_max;
    j["data"]["seed"] = config.data.seed;
    if (config.data.kind == DataKind::kGauGap2)
      j["data"]["p1"] = config.data.p1;
    if (config.data.kind == DataKind::kGauNgap)
      j["data"]["p_prime"] = config.data.p_prime;
  }
  j["algo"] = to_string(config.algo);
  j["stepsize"]["kind"] = to_string(config.stepsize.kind);
  switch (config.stepsize.kind) {
    case StepsizeKind::kConstant:
      j["stepsize"]["alpha"] = config.stepsize.alpha;
      break;
    case StepsizeKind::kDiminishing:
      j["stepsize"]["gamma"] = config.stepsize.gamma;
      j["stepsize"]["beta"] = config.stepsize.beta;
      j["stepsize"]["c1"] = config.stepsize.c1;
      j["stepsize"]["c2"] = config.stepsize.c2;
      break;
    case StepsizeKind::kAdaOja:
      j["stepsize"]["b0"] = config.stepsize.b0;
      break;
    default:
      break;
  }
  // Horizon-and-spectrum-derived schedules peek at ground truth.
  j["stepsize"]["oracle"] =
      config.stepsize.kind == StepsizeKind::kPaperConstant ||
      config.stepsize.kind == StepsizeKind::kPaperDiminishing;
  j["run"]["h"] = config.run.h;
  j["run"]["m"] = config.run.m;
  j["run"]["trials"] = config.run.trials;
  j["run"]["record_every"] = config.effective_record_every();
  j["run"]["base_seed"] = config.run.base_seed;
  j["run"]["init"] =
      config.run.init == InitKind::kSaddle ? "saddle" : "random";
  return j;
}

}  // namespace

void write_trace_csv(const std::filesystem::path& path,
                     const ExperimentResult& result) {
  std::string out = "trial,k,samples_seen,error,stepsize,fhat,corrected\n";
  for (const TrialResult& t : result.trials)
    for (const TraceRecord& rec : t.records) {
      out += std::to_string(rec.trial);
      out += ',';
      out += std::to_string(rec.k);
      out += ',';
      out += std::to_string(rec.samples_seen);
      out += ',';
      append_double(out, rec.error);
      out += ',';
      append_double(out, rec.stepsize);
      out += ',';
      append_double(out, rec.fhat);
      out += ',';
      out += rec.corrected ? '1' : '0';
      out += '\n';
    }
  write_text_file(path, out);
}

void write_aggregate_csv(const std::filesystem::path& path,
                         const ExperimentResult& result) {
  std::string out = "k,samples_seen,mean_error,var_error\n";
  for (const AggregateRow& row : result.aggregate) {
    out += std::to_string(row.k);
    out += ',';
    out += std::to_string(row.samples_seen);
    out += ',';
    append_double(out, row.mean_error);
    out += ',';
    append_double(out, row.var_error);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_summary_json(const std::filesystem::path& path,
                        const ExperimentConfig& config,
                        const ExperimentResult& result) {
  nlohmann::json j;
  j["config"] = config_json(config);
  j["trials"] = config.run.trials;
  j["failed_trials"] = result.failed_trials;
  j["corrections_total"] = result.corrections_total;
  j["mean_final_error"] = result.mean_final_error;
  j["var_final_error"] = result.var_final_error;
  nlohmann::json finals = nlohmann::json::array();
  for (const TrialResult& t : result.trials)
    finals.push_back(t.failed ? nlohmann::json(nullptr)
                              : nlohmann::json(t.final_error));
  j["per_trial_final_error"] = finals;
  j["workers"] = result.workers;
  j["wall_ms"] = result.wall_ms;
  write_text_file(path, j.dump(2) + "\n");
}

void write_sweep_csv(const std::filesystem::path& path,
                     const SweepResult& result) {
  std::string out = "gamma,mean_final_error,var_final_error,failed_trials\n";
  for (const SweepPoint& point : result.points) {
    append_double(out, point.gamma);
    out += ',';
    append_double(out, point.mean_final_error);
    out += ',';
    append_double(out, point.var_final_error);
    out += ',';
    out += std::to_string(point.failed_trials);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_sweep_summary_json(const std::filesystem::path& path,
                              const ExperimentConfig& config,
                              const SweepResult& result) {
  nlohmann::json j;
  j["config"] = config_json(config);
  nlohmann::json points = nlohmann::json::array();
  for (const SweepPoint& point : result.points)
    points.push_back({{"gamma", point.gamma},
                      {"mean_final_error", point.mean_final_error},
                      {"var_final_error", point.var_final_error},
                      {"failed_trials", point.failed_trials}});
  j["points"] = points;
  j["best_gamma"] = result.best_gamma;
  j["best_mean_final_error"] = result.best_mean_final_error;
  j["wall_ms"] = result.wall_ms;
  write_text_file(path, j.dump(2) + "\n");
}

void write_ode_csv(const std::filesystem::path& path, const OdeCurve& curve) {
  std::string out = "t,error\n";
  for (std::size_t i = 0; i < curve.trace.t.size(); ++i) {
    append_double(out, curve.trace.t[i]);
    out += ',';
    append_double(out, curve.trace.error[i]);
    out += '\n';
  }
  write_text_file(path, out);
}

void write_ode_summary_json(const std::filesystem::path& path,
                            const std::vector<OdeCurve>& curves) {
  nlohmann::json j = nlohmann::json::array();
  for (const OdeCurve& curve : curves) {
    nlohmann::json c;
    c["flow"] = curve.label;
    c["dt"] = curve.dt;
    c["steps"] = curve.trace.t.size() - 1;
    c["diverged"] = curve.trace.diverged;
    c["diverged_at"] = curve.trace.diverged_at;
    c["final_error"] = curve.trace.error.back();
    j.push_back(c);
  }
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace opca
