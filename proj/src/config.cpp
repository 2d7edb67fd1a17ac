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

#include "opca/config.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace opca {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

// One parsed section: raw values plus consumption tracking so unknown keys
// can be reported after the typed reads.
class Section {
 public:
  void set(const std::string& key, const std::string& value, int line) {
    if (values_.count(key))
      throw ConfigError("duplicate key '" + key + "' (line " +
                        std::to_string(line) + ")");
    values_[key] = value;
  }

  bool has(const std::string& key) const { return values_.count(key) > 0; }

  std::string raw(const std::string& key) {
    consumed_.insert(key);
    return values_.at(key);
  }

  std::string str(const std::string& key) {
    std::string v = raw(key);
    if (v.size() >= 2 && v.front() == '"' && v.back() == '"')
      v = v.substr(1, v.size() - 2);
    return v;
  }

  double f64(const std::string& key) {
    const std::string v = raw(key);
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (end == v.c_str() || *end != '\0' || !std::isfinite(x))
      throw ConfigError("key '" + key + "': expected a number, got '" + v +
                        "'");
    return x;
  }

  long long i64(const std::string& key) {
    const std::string v = raw(key);
    char* end = nullptr;
    const long long x = std::strtoll(v.c_str(), &end, 10);
    if (end == v.c_str() || *end != '\0')
      throw ConfigError("key '" + key + "': expected an integer, got '" + v +
                        "'");
    return x;
  }

  bool boolean(const std::string& key) {
    const std::string v = raw(key);
    if (v == "true") return true;
    if (v == "false") return false;
    throw ConfigError("key '" + key + "': expected true/false, got '" + v +
                      "'");
  }

  std::vector<double> f64_list(const std::string& key) {
    const std::string v = str(key);
    std::vector<double> out;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      char* end = nullptr;
      const double x = std::strtod(item.c_str(), &end);
      if (item.empty() || end == item.c_str() || *end != '\0')
        throw ConfigError("key '" + key + "': bad list element '" + item +
                          "'");
      out.push_back(x);
    }
    if (out.empty())
      throw ConfigError("key '" + key + "': empty list");
    return out;
  }

  void reject_unconsumed(const std::string& section) const {
    for (const auto& [key, value] : values_)
      if (!consumed_.count(key))
        throw ConfigError("unknown key '" + key + "' in [" + section + "]");
  }

 private:
  std::map<std::string, std::string> values_;
  std::set<std::string> consumed_;
};

std::map<std::string, Section> tokenize(const std::string& text) {
  std::map<std::string, Section> sections;
  std::string current;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError("malformed section header (line " +
                          std::to_string(lineno) + ")");
      current = trim(line.substr(1, line.size() - 2));
      if (current.empty())
        throw ConfigError("empty section name (line " +
                          std::to_string(lineno) + ")");
      sections[current];  // materialize even if empty
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected key = value (line " + std::to_string(lineno) +
                        ")");
    if (current.empty())
      throw ConfigError("key outside any [section] (line " +
                        std::to_string(lineno) + ")");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("empty key or value (line " + std::to_string(lineno) +
                        ")");
    sections[current].set(key, value, lineno);
  }
  return sections;
}

DataKind parse_data_kind(const std::string& s) {
  if (s == "gau-gap-1") return DataKind::kGauGap1;
  if (s == "gau-gap-2") return DataKind::kGauGap2;
  if (s == "gau-ngap") return DataKind::kGauNgap;
  if (s == "file") return DataKind::kFile;
  throw ConfigError("data.kind: unknown kind '" + s + "'");
}

AlgoKind parse_algo_kind(const std::string& s) {
  if (s == "oja") return AlgoKind::kOja;
  if (s == "sgn") return AlgoKind::kSgn;
  if (s == "adaoja") return AlgoKind::kAdaOja;
  if (s == "adasgn") return AlgoKind::kAdaSgn;
  throw ConfigError("algo.name: unknown algorithm '" + s + "'");
}

StepsizeKind parse_stepsize_kind(const std::string& s) {
  if (s == "constant") return StepsizeKind::kConstant;
  if (s == "diminishing") return StepsizeKind::kDiminishing;
  if (s == "paper-constant") return StepsizeKind::kPaperConstant;
  if (s == "paper-diminishing") return StepsizeKind::kPaperDiminishing;
  if (s == "adaoja") return StepsizeKind::kAdaOja;
  if (s == "adasgn") return StepsizeKind::kAdaSgn;
  throw ConfigError("stepsize.kind: unknown kind '" + s + "'");
}

DataConfig parse_data(Section& s) {
  DataConfig d;
  if (!s.has("kind")) throw ConfigError("data.kind is required");
  d.kind = parse_data_kind(s.str("kind"));
  if (!s.has("p")) throw ConfigError("data.p is required");
  d.p = s.i64("p");
  if (d.p < 1) throw ConfigError("data.p must be >= 1");
  if (s.has("seed")) {
    d.seed = static_cast<std::uint64_t>(s.i64("seed"));
    d.seed_given = true;
  }
  if (d.kind == DataKind::kFile) {
    if (!s.has("path")) throw ConfigError("data.path is required for files");
    d.path = s.str("path");
    if (!s.has("format"))
      throw ConfigError("data.format is required for files");
    try {
      d.format = parse_file_format(s.str("format"));
    } catch (const BadRangeError& e) {
      throw ConfigError(e.what());
    }
    if (s.has("center")) d.center = s.boolean("center");
    return d;
  }
  if (!s.has("n")) throw ConfigError("data.n is required");
  d.n = s.i64("n");
  if (!s.has("mu_min") || !s.has("mu_max"))
    throw ConfigError("data.mu_min and data.mu_max are required");
  d.mu_min = s.f64("mu_min");
  d.mu_max = s.f64("mu_max");
  if (s.has("rho")) d.rho = s.f64("rho");
  if (d.kind == DataKind::kGauGap2) {
    if (!s.has("p1")) throw ConfigError("data.p1 is required for gau-gap-2");
    d.p1 = s.i64("p1");
  }
  if (d.kind == DataKind::kGauNgap) {
    if (!s.has("p_prime"))
      throw ConfigError("data.p_prime is required for gau-ngap");
    d.p_prime = s.i64("p_prime");
  }
  return d;
}

StepsizeConfig parse_stepsize(Section& s, AlgoKind algo) {
  StepsizeConfig sz;
  if (s.has("kind")) {
    sz.kind = parse_stepsize_kind(s.str("kind"));
  } else if (algo == AlgoKind::kAdaOja) {
    sz.kind = StepsizeKind::kAdaOja;
  } else if (algo == AlgoKind::kAdaSgn) {
    sz.kind = StepsizeKind::kAdaSgn;
  } else {
    throw ConfigError("stepsize.kind is required for algo '" +
                      std::string(to_string(algo)) + "'");
  }
  // Adaptive schedules are welded to their algorithm family.
  if ((sz.kind == StepsizeKind::kAdaOja) != (algo == AlgoKind::kAdaOja) ||
      (sz.kind == StepsizeKind::kAdaSgn) != (algo == AlgoKind::kAdaSgn))
    throw ConfigError(std::string("stepsize.kind '") + to_string(sz.kind) +
                      "' cannot drive algo '" + to_string(algo) + "'");
  switch (sz.kind) {
    case StepsizeKind::kConstant:
      if (!s.has("alpha"))
        throw ConfigError("stepsize.alpha is required for kind constant");
      sz.alpha = s.f64("alpha");
      if (!(sz.alpha >= 0.0)) throw ConfigError("stepsize.alpha must be >= 0");
      break;
    case StepsizeKind::kDiminishing:
      if (!s.has("gamma"))
        throw ConfigError("stepsize.gamma is required for kind diminishing");
      sz.gamma = s.f64("gamma");
      if (s.has("beta")) sz.beta = s.f64("beta");
      if (s.has("c1")) sz.c1 = s.f64("c1");
      if (s.has("c2")) sz.c2 = s.f64("c2");
      if (!(sz.gamma > 0.0) || !(sz.c1 > 0.0) || !(sz.c2 > 0.0) ||
          !(sz.beta > 0.0) || !(sz.beta <= 1.0))
        throw ConfigError(
            "stepsize: need gamma, c1, c2 > 0 and 0 < beta <= 1");
      break;
    case StepsizeKind::kAdaOja:
      if (s.has("b0")) sz.b0 = s.f64("b0");
      if (!(sz.b0 > 0.0)) throw ConfigError("stepsize.b0 must be > 0");
      break;
    case StepsizeKind::kPaperConstant:
    case StepsizeKind::kPaperDiminishing:
    case StepsizeKind::kAdaSgn:
      break;  // derived from the horizon and spectrum, or self-tuning
  }
  return sz;
}

RunConfig parse_run(Section& s) {
  RunConfig r;
  if (!s.has("m")) throw ConfigError("run.m is required");
  r.m = s.i64("m");
  if (r.m < 1) throw ConfigError("run.m must be >= 1");
  if (s.has("h")) r.h = s.i64("h");
  if (r.h < 1) throw ConfigError("run.h must be >= 1");
  if (s.has("trials")) r.trials = s.i64("trials");
  if (r.trials < 1) throw ConfigError("run.trials must be >= 1");
  if (s.has("record_every")) r.record_every = s.i64("record_every");
  if (r.record_every < 0) throw ConfigError("run.record_every must be >= 0");
  if (s.has("base_seed"))
    r.base_seed = static_cast<std::uint64_t>(s.i64("base_seed"));
  if (s.has("init")) {
    const std::string init = s.str("init");
    if (init == "random")
      r.init = InitKind::kRandom;
    else if (init == "saddle")
      r.init = InitKind::kSaddle;
    else
      throw ConfigError("run.init: expected random or saddle, got '" + init +
                        "'");
  }
  return r;
}

OdeConfig parse_ode(Section& s) {
  OdeConfig o;
  o.present = true;
  if (s.has("which")) {
    const std::string which = s.str("which");
    if (which == "sgn-limit") {
      o.oja_limit = false;
    } else if (which == "oja-limit") {
      o.sgn_limit = false;
    } else if (which != "both") {
      throw ConfigError(
          "ode.which: expected sgn-limit, oja-limit or both, got '" + which +
          "'");
    }
  }
  if (s.has("t_end")) o.t_end = s.f64("t_end");
  if (!(o.t_end > 0.0)) throw ConfigError("ode.t_end must be > 0");
  if (s.has("dt")) o.dts = s.f64_list("dt");
  for (const double dt : o.dts)
    if (!(dt > 0.0)) throw ConfigError("ode.dt entries must be > 0");
  if (s.has("initial_error")) o.initial_error = s.f64("initial_error");
  if (o.initial_error >= 1.0)
    throw ConfigError("ode.initial_error must be < 1");
  return o;
}

void cross_validate(const ExperimentConfig& c) {
  if (c.run.init == InitKind::kSaddle && c.data.p != 1)
    throw ConfigError("run.init = saddle is defined only for p = 1");
  if (c.data.kind != DataKind::kFile) {
    if (c.data.p >= c.data.n)
      throw ConfigError("data: need p < n");
    if (!(c.data.mu_min > 0.0) || !(c.data.mu_max >= c.data.mu_min))
      throw ConfigError("data: need 0 < mu_min <= mu_max");
    if (!(c.data.rho >= 0.0)) throw ConfigError("data: need rho >= 0");
    if (c.data.kind == DataKind::kGauGap2 &&
        (c.data.p1 < 0 || c.data.p1 > c.data.p))
      throw ConfigError("data: need 0 <= p1 <= p");
    if (c.data.kind == DataKind::kGauNgap &&
        (c.data.p_prime <= c.data.p || c.data.p_prime >= c.data.n))
      throw ConfigError("data: need p < p_prime < n");
  }
}

}  // namespace

ExperimentConfig parse_config_string(const std::string& text) {
  auto sections = tokenize(text);
  for (const auto& [name, unused] : sections)
    if (name != "data" && name != "algo" && name != "stepsize" &&
        name != "run" && name != "ode")
      throw ConfigError("unknown section [" + name + "]");

  ExperimentConfig c;
  if (!sections.count("data")) throw ConfigError("missing [data] section");
  c.data = parse_data(sections.at("data"));

  if (!sections.count("algo")) throw ConfigError("missing [algo] section");
  Section& algo = sections.at("algo");
  if (!algo.has("name")) throw ConfigError("algo.name is required");
  c.algo = parse_algo_kind(algo.str("name"));

  Section empty;
  c.stepsize = parse_stepsize(
      sections.count("stepsize") ? sections.at("stepsize") : empty, c.algo);

  if (!sections.count("run")) throw ConfigError("missing [run] section");
  c.run = parse_run(sections.at("run"));

  if (sections.count("ode")) c.ode = parse_ode(sections.at("ode"));

  if (!c.data.seed_given) c.data.seed = c.run.base_seed;
  cross_validate(c);
  for (auto& [name, section] : sections) section.reject_unconsumed(name);
  return c;
}

ExperimentConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config '" + path.string() + "'");
  std::string text((std::istreambuf_iterator<char>(in)),
                   std::istreambuf_iterator<char>());
  return parse_config_string(text);
}

const char* to_string(AlgoKind k) {
  switch (k) {
    case AlgoKind::kOja: return "oja";
    case AlgoKind::kSgn: return "sgn";
    case AlgoKind::kAdaOja: return "adaoja";
    case AlgoKind::kAdaSgn: return "adasgn";
  }
  return "?";
}

const char* to_string(StepsizeKind k) {
  switch (k) {
    case StepsizeKind::kConstant: return "constant";
    case StepsizeKind::kDiminishing: return "diminishing";
    case StepsizeKind::kPaperConstant: return "paper-constant";
    case StepsizeKind::kPaperDiminishing: return "paper-diminishing";
    case StepsizeKind::kAdaOja: return "adaoja";
    case StepsizeKind::kAdaSgn: return "adasgn";
  }
  return "?";
}

const char* to_string(DataKind k) {
  switch (k) {
    case DataKind::kGauGap1: return "gau-gap-1";
    case DataKind::kGauGap2: return "gau-gap-2";
    case DataKind::kGauNgap: return "gau-ngap";
    case DataKind::kFile: return "file";
  }
  return "?";
}

}  // namespace opca
