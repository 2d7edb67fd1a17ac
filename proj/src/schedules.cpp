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

#include "opca/schedules.hpp"

#include <cmath>
#include <limits>

namespace opca {

double diminishing_alpha(Index k, double gamma, double c1, double c2,
                         double beta) {
  if (k < 0) throw BadRangeError("diminishing_alpha: need k >= 0");
  if (!(gamma > 0.0) || !(c1 > 0.0) || !(c2 > 0.0))
    throw BadRangeError("diminishing_alpha: need gamma, c1, c2 > 0");
  if (!(beta > 0.0) || !(beta <= 1.0))
    throw BadRangeError("diminishing_alpha: need 0 < beta <= 1");
  return gamma / (c1 * std::pow(static_cast<double>(k) + c2, beta));
}

namespace {

void check_gap(double lambda_p, double nu) {
  if (!(nu > 0.0) || !(lambda_p >= nu))
    throw BadRangeError("stepsize: need lambda_p >= nu > 0");
}

}  // namespace

double paper_constant_alpha(Index big_k, double lambda_p, double nu) {
  if (big_k < 2) throw BadRangeError("paper_constant_alpha: need K >= 2");
  check_gap(lambda_p, nu);
  const double k = static_cast<double>(big_k);
  return (lambda_p / nu) * std::log(k) / k;
}

DiminishingParams paper_diminishing_params(Index big_k, double lambda_p,
                                           double nu) {
  if (big_k < 3)
    throw BadRangeError("paper_diminishing_params: need K >= 3");
  check_gap(lambda_p, nu);
  const double k = static_cast<double>(big_k);
  DiminishingParams p;
  p.beta = 1.0 - 1.0 / std::log(k);
  p.gamma = (1.0 - p.beta) * std::log(k) / std::pow(k, 1.0 - p.beta);
  p.c1 = nu / lambda_p;
  p.c2 = std::pow(p.gamma, 1.0 / (p.beta - 1.0));
  return p;
}

AdaOjaState::AdaOjaState(Index p, double b0) {
  if (p < 1) throw BadRangeError("AdaOjaState: need p >= 1");
  if (!(b0 > 0.0)) throw BadRangeError("AdaOjaState: need b0 > 0");
  b_ = Vector::Constant(p, b0);
}

Vector AdaOjaState::update(const Matrix& g) {
  if (g.cols() != b_.size())
    throw DimensionMismatchError("AdaOjaState::update: column mismatch");
  b_ = (b_.array().square() + g.colwise().squaredNorm().transpose().array())
           .sqrt();
  return b_.cwiseInverse();
}

double AdaSgnState::next_alpha(double fhat_prev_iterate,
                               double fhat_curr_iterate) {
  if (fhat_curr_iterate > fhat_prev_iterate) {
    // Inconsistent: the new iterate fits the incoming batch worse, so damp
    // the step by how far off it is.
    if (!(fhat_curr_iterate > 0.0)) {
      // Unreachable for genuine objectives (curr > prev >= 0); kept as a
      // logged fallback rather than a crash.
      zero_objective_count_ += 1;
      return std::numeric_limits<double>::min();
    }
    const double r = fhat_prev_iterate / fhat_curr_iterate;
    r_sum_ += r;
    return r / r_sum_;
  }
  return 1.0 / r_sum_;  // consistent: ratio 0 joins the sum, full trust step
}

}  // namespace opca
