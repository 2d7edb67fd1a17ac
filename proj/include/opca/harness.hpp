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
//
// Reproducible experiment driver.  Every trial is a pure function of
// (config, trial index); workers only decide who computes what, so traces
// are byte-identical for any worker count.

#ifndef OPCA_HARNESS_HPP
#define OPCA_HARNESS_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "opca/config.hpp"
#include "opca/diffusion.hpp"
#include "opca/types.hpp"

namespace opca {

// One row of a trial trace, taken every record_every steps and always at the
// final step.  `k` counts completed steps (1-based), so samples_seen is
// min(k*h, m).  A failed trial contributes one sentinel row with
// error = fhat = -1.
struct TraceRecord {
  Index trial = 0;
  Index k = 0;
  Index samples_seen = 0;
  double error = 0.0;     // normalized subspace error in [0, 1]
  double stepsize = 0.0;  // alpha used at this step (mean 1/b_i for adaoja)
  double fhat = 0.0;      // streaming objective of the batch just consumed
  bool corrected = false;
};

struct TrialResult {
  Index trial = 0;
  bool failed = false;
  std::string failure;  // empty when successful
  long corrections = 0;
  double final_error = -1.0;
  std::vector<TraceRecord> records;
};

struct AggregateRow {
  Index k = 0;
  Index samples_seen = 0;
  double mean_error = 0.0;
  double var_error = 0.0;  // population variance across trials
};

struct ExperimentResult {
  std::vector<TrialResult> trials;
  std::vector<AggregateRow> aggregate;
  Index failed_trials = 0;
  long corrections_total = 0;
  double mean_final_error = -1.0;
  double var_final_error = -1.0;
  double wall_ms = 0.0;
  int workers = 1;
};

struct SweepPoint {
  double gamma = 0.0;
  double mean_final_error = -1.0;
  double var_final_error = -1.0;
  Index failed_trials = 0;
};

struct SweepResult {
  std::vector<SweepPoint> points;  // ascending gamma
  double best_gamma = 0.0;         // argmin of mean error, ties -> smaller
  double best_mean_final_error = -1.0;
  double wall_ms = 0.0;
};

struct OdeCurve {
  std::string label;  // "sgn-limit" / "oja-limit"
  double dt = 0.0;
  OdeTrace trace;
};

// Worker count: OPCA_WORKERS when set to a positive integer (an unparsable
// value falls back with a stderr warning), else hardware concurrency.
int resolve_workers();

// Runs one trial deterministically.  Recoverable numerical failures
// (rank collapse the correction cannot fix, non-finite iterates) yield
// failed = true rather than an exception.
TrialResult run_trial(const ExperimentConfig& config, Index trial_index);

// All trials, optionally in parallel (workers == 0 -> resolve_workers()).
ExperimentResult run_experiment(const ExperimentConfig& config,
                                int workers = 0);

// Re-runs the experiment per gamma (stepsize.kind must be constant or
// diminishing; the swept value replaces alpha or gamma respectively).
SweepResult run_sweep(const ExperimentConfig& config,
                      const std::vector<double>& gammas, int workers = 0);

// Pointwise mean/variance across successful trials; throws GridMismatch if
// their recording grids differ.
std::vector<AggregateRow> aggregate_trials(
    const std::vector<TrialResult>& trials);

// Euler traces of the limiting flows named by config.ode, one per
// (flow, dt) pair.
std::vector<OdeCurve> run_ode(const ExperimentConfig& config);

// "2^-5..2^5" (dyadic range), "2^3" or comma-separated floats -> ascending
// list of stepsize scales.
std::vector<double> parse_gamma_set(const std::string& text);

// Plain-text artifacts.  All floating-point fields are printed with %.17g,
// so outputs are byte-stable across reruns and worker counts.
void write_trace_csv(const std::filesystem::path& path,
                     const ExperimentResult& result);
void write_aggregate_csv(const std::filesystem::path& path,
                         const ExperimentResult& result);
void write_summary_json(const std::filesystem::path& path,
                        const ExperimentConfig& config,
                        const ExperimentResult& result);
void write_sweep_csv(const std::filesystem::path& path,
                     const SweepResult& result);
void write_sweep_summary_json(const std::filesystem::path& path,
                              const ExperimentConfig& config,
                              const SweepResult& result);
void write_ode_csv(const std::filesystem::path& path, const OdeCurve& curve);
void write_ode_summary_json(const std::filesystem::path& path,
                            const std::vector<OdeCurve>& curves);

}  // namespace opca

#endif  // OPCA_HARNESS_HPP
