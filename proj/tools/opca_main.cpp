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

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "opca/config.hpp"
#include "opca/data.hpp"
#include "opca/harness.hpp"
#include "opca/matops.hpp"

namespace {

namespace fs = std::filesystem;
using opca::ExperimentConfig;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 1;
constexpr int kExitIo = 2;
constexpr int kExitAllFailed = 3;

std::string format_dt(double dt) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", dt);
  return buf;
}

int cmd_run(const std::string& config_path, const std::string& out_dir,
            int workers) {
  const ExperimentConfig config = opca::parse_config_file(config_path);
  const opca::ExperimentResult result = opca::run_experiment(config, workers);
  fs::create_directories(out_dir);
  opca::write_trace_csv(fs::path(out_dir) / "trace.csv", result);
  opca::write_aggregate_csv(fs::path(out_dir) / "aggregate.csv", result);
  opca::write_summary_json(fs::path(out_dir) / "summary.json", config, result);
  std::printf(
      "algo=%s trials=%lld failed=%lld corrections=%ld "
      "mean_final_error=%.8g workers=%d wall_ms=%.1f\n",
      opca::to_string(config.algo),
      static_cast<long long>(config.run.trials),
      static_cast<long long>(result.failed_trials), result.corrections_total,
      result.mean_final_error, result.workers, result.wall_ms);
  return result.failed_trials == config.run.trials ? kExitAllFailed : kExitOk;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir,
              const std::string& gammas_text, int workers) {
  const ExperimentConfig config = opca::parse_config_file(config_path);
  const std::vector<double> gammas = opca::parse_gamma_set(gammas_text);
  const opca::SweepResult result = opca::run_sweep(config, gammas, workers);
  fs::create_directories(out_dir);
  opca::write_sweep_csv(fs::path(out_dir) / "sweep.csv", result);
  opca::write_sweep_summary_json(fs::path(out_dir) / "sweep_summary.json",
                                 config, result);
  if (result.best_mean_final_error < 0.0) {
    std::printf("sweep: every gamma failed on every trial\n");
    return kExitAllFailed;
  }
  std::printf("points=%zu best_gamma=%.8g best_mean_final_error=%.8g wall_ms=%.1f\n",
              result.points.size(), result.best_gamma,
              result.best_mean_final_error, result.wall_ms);
  return kExitOk;
}

int cmd_ode(const std::string& config_path, const std::string& out_dir) {
  const ExperimentConfig config = opca::parse_config_file(config_path);
  const std::vector<opca::OdeCurve> curves = opca::run_ode(config);
  fs::create_directories(out_dir);
  for (const opca::OdeCurve& curve : curves) {
    const std::string name =
        "ode_" + curve.label + "_dt" + format_dt(curve.dt) + ".csv";
    opca::write_ode_csv(fs::path(out_dir) / name, curve);
  }
  opca::write_ode_summary_json(fs::path(out_dir) / "ode_summary.json", curves);
  for (const opca::OdeCurve& curve : curves)
    std::printf("flow=%s dt=%g final_error=%.8g diverged=%d\n",
                curve.label.c_str(), curve.dt, curve.trace.error.back(),
                curve.trace.diverged ? 1 : 0);
  return kExitOk;
}

int cmd_eig(const std::string& input, const std::string& format_name,
            long long top, const std::string& out_path, bool no_center) {
  const opca::FileFormat format = opca::parse_file_format(format_name);
  opca::Matrix a = opca::load_matrix_file(input, format);
  if (!no_center) opca::center_columns(a);
  const auto n = a.rows();
  const auto m = a.cols();
  if (m < 1) throw opca::BadRangeError("eig: no samples");
  const opca::Matrix cov = a * a.transpose() / static_cast<double>(m);
  const opca::SymmetricEig eig = opca::symmetric_eig(cov);
  const auto p = std::min<long long>(top, n);
  if (p < 1) throw opca::BadRangeError("eig: --top must be >= 1");

  const double total = eig.eigenvalues.sum();
  nlohmann::json j;
  j["n"] = n;
  j["m"] = m;
  j["top"] = p;
  nlohmann::json values = nlohmann::json::array();
  nlohmann::json explained = nlohmann::json::array();
  for (long long i = 0; i < p; ++i) {
    values.push_back(eig.eigenvalues[i]);
    explained.push_back(total > 0.0 ? eig.eigenvalues[i] / total : 0.0);
  }
  j["eigenvalues"] = values;
  j["explained"] = explained;
  std::cout << j.dump(2) << "\n";

  if (!out_path.empty())
    opca::save_matrix_f64le(out_path, eig.eigenvectors.leftCols(p));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"opca: streaming principal component estimation toolkit"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir = "out";
  std::string gammas_text;
  int workers = 0;

  CLI::App* run = app.add_subcommand("run", "run one experiment config");
  run->add_option("--config", config_path, "experiment config file")
      ->required();
  run->add_option("--out", out_dir, "output directory (default: out)");
  run->add_option("--workers", workers, "worker threads (0 = auto)");

  CLI::App* sweep =
      app.add_subcommand("sweep", "repeat an experiment over a stepsize grid");
  sweep->add_option("--config", config_path, "experiment config file")
      ->required();
  sweep
      ->add_option("--gammas", gammas_text,
                   "grid: '2^-5..2^5', '0.1,0.2,0.4', or a single value")
      ->required();
  sweep->add_option("--out", out_dir, "output directory (default: out)");
  sweep->add_option("--workers", workers, "worker threads (0 = auto)");

  CLI::App* ode =
      app.add_subcommand("ode", "integrate the large-sample limiting flows");
  ode->add_option("--config", config_path, "experiment config file")
      ->required();
  ode->add_option("--out", out_dir, "output directory (default: out)");

  std::string eig_input;
  std::string eig_format = "csv";
  long long eig_top = 10;
  std::string eig_out;
  bool eig_no_center = false;
  CLI::App* eig = app.add_subcommand(
      "eig", "exact top eigenpairs of a dataset's sample covariance");
  eig->add_option("--input", eig_input, "matrix file, one sample per column")
      ->required();
  eig->add_option("--format", eig_format, "csv | f64le | idx (default: csv)");
  eig->add_option("--top", eig_top, "number of leading eigenpairs (default 10)");
  eig->add_option("--out", eig_out, "write leading eigenvectors here (f64le)");
  eig->add_flag("--no-center", eig_no_center, "skip column-mean centering");

  try {
    app.parse(argc, argv);
    if (run->parsed()) return cmd_run(config_path, out_dir, workers);
    if (sweep->parsed())
      return cmd_sweep(config_path, out_dir, gammas_text, workers);
    if (ode->parsed()) return cmd_ode(config_path, out_dir);
    if (eig->parsed())
      return cmd_eig(eig_input, eig_format, eig_top, eig_out, eig_no_center);
    return kExitConfig;
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  } catch (const opca::IoError& e) {
    std::cerr << "opca: " << e.what() << "\n";
    return kExitIo;
  } catch (const opca::ParseError& e) {
    std::cerr << "opca: " << e.what() << "\n";
    return kExitIo;
  } catch (const opca::Error& e) {
    std::cerr << "opca: " << e.what() << "\n";
    return kExitConfig;
  }
}
