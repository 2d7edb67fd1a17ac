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
// Experiment description: a flat sectioned key = value file ([data], [algo],
// [stepsize], [run], optionally [ode]).  Unknown sections or keys are
// rejected so typos fail loudly instead of silently running defaults.

#ifndef OPCA_CONFIG_HPP
#define OPCA_CONFIG_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "opca/data.hpp"
#include "opca/types.hpp"

namespace opca {

enum class DataKind { kGauGap1, kGauGap2, kGauNgap, kFile };
enum class AlgoKind { kOja, kSgn, kAdaOja, kAdaSgn };
enum class StepsizeKind {
  kConstant,
  kDiminishing,
  kPaperConstant,
  kPaperDiminishing,
  kAdaOja,
  kAdaSgn,
};
enum class InitKind { kRandom, kSaddle };

struct DataConfig {
  DataKind kind = DataKind::kGauGap1;
  Index n = 0;
  Index p = 0;
  Index p1 = 0;        // gau-gap-2 only
  Index p_prime = 0;   // gau-ngap only
  double mu_min = 0.0;
  double mu_max = 0.0;
  double rho = 0.1;
  std::uint64_t seed = 0;  // model seed; defaults to run.base_seed
  bool seed_given = false;
  std::string path;  // file kind only
  FileFormat format = FileFormat::kCsv;
  bool center = true;
};

struct StepsizeConfig {
  StepsizeKind kind = StepsizeKind::kConstant;
  double alpha = 0.0;  // constant
  double gamma = 0.0;  // diminishing
  double beta = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double b0 = 1e-5;  // adaoja
};

struct RunConfig {
  Index h = 1;
  Index m = 0;
  Index trials = 10;
  Index record_every = 0;  // 0: auto (100 when K >= 1e4, else 1)
  std::uint64_t base_seed = 1;
  InitKind init = InitKind::kRandom;
};

struct OdeConfig {
  bool present = false;
  bool sgn_limit = true;
  bool oja_limit = true;
  double t_end = 200.0;
  std::vector<double> dts = {0.01, 0.05, 0.1, 0.5};
  // Target initial normalized error for a p = 1 aligned start; < 0 means a
  // fully random orthonormal start.
  double initial_error = -1.0;
};

struct ExperimentConfig {
  DataConfig data;
  AlgoKind algo = AlgoKind::kSgn;
  StepsizeConfig stepsize;
  RunConfig run;
  OdeConfig ode;

  Index num_batches() const { return (run.m + run.h - 1) / run.h; }
  Index effective_record_every() const {
    if (run.record_every > 0) return run.record_every;
    return num_batches() >= 10000 ? 100 : 1;
  }
};

// Throws ConfigError on malformed syntax, unknown keys, or invalid values.
ExperimentConfig parse_config_string(const std::string& text);
ExperimentConfig parse_config_file(const std::filesystem::path& path);

const char* to_string(AlgoKind k);
const char* to_string(StepsizeKind k);
const char* to_string(DataKind k);

}  // namespace opca

#endif  // OPCA_CONFIG_HPP
