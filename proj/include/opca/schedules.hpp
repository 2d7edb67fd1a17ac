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

#ifndef OPCA_SCHEDULES_HPP
#define OPCA_SCHEDULES_HPP

#include "opca/types.hpp"

namespace opca {

// gamma / (c1 * (k + c2)^beta) at step k >= 0.
double diminishing_alpha(Index k, double gamma, double c1, double c2,
                         double beta);

// Horizon-aware constant stepsize (lambda_p / nu) * log(K) / K (natural
// log), the choice whose final-error bound scales as log(K)/K.
double paper_constant_alpha(Index big_k, double lambda_p, double nu);

struct DiminishingParams {
  double gamma = 0.0;
  double c1 = 0.0;
  double c2 = 0.0;
  double beta = 0.0;
};

// Horizon-aware diminishing schedule: beta = 1 - 1/log(K),
// gamma = (1-beta) log(K) / K^{ 1-beta }, c1 = nu / lambda_p,
// c2 = gamma^{1/(beta-1)}.  Algebraically gamma == 1/e and c2 == K, and the
// first stepsize equals (lambda_p / nu) / K.  Requires K >= 3 so beta > 0.
DiminishingParams paper_diminishing_params(Index big_k, double lambda_p,
                                           double nu);

// Coordinate-wise adaptive stepsizes for the power-method family: running
// root-sum-of-squares of per-column gradient norms.
class AdaOjaState {
 public:
  explicit AdaOjaState(Index p, double b0 = 1e-5);

  // Folds one gradient in and returns the per-column stepsizes 1 / b_i.
  Vector update(const Matrix& g);

  const Vector& b() const { return b_; }

 private:
  Vector b_;
};

// Consistency-ratio stepsizes for the Gauss-Newton family.  Step 0 always
// uses alpha = 1 (the state is born with its ratio-sum at r_0 = 1); each
// later step compares the objective of the previous and current iterates on
// the incoming batch.
class AdaSgnState {
 public:
  AdaSgnState() = default;

  // Stepsize for step k >= 1 given fhat_k(x_{k-1}) and fhat_k(x_k).
  double next_alpha(double fhat_prev_iterate, double fhat_curr_iterate);

  double ratio_sum() const { return r_sum_; }
  int zero_objective_count() const { return zero_objective_count_; }

 private:
  double r_sum_ = 1.0;
  int zero_objective_count_ = 0;
};

}  // namespace opca

#endif  // OPCA_SCHEDULES_HPP
