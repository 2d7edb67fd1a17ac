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
// Forward-Euler integration of the small-stepsize limiting flows of the two
// streaming estimators.  The Gauss-Newton flow is benign for any top
// eigenvalue; the power-method flow stiffens with lambda_1, which is what
// the integrator is meant to expose.

#ifndef OPCA_DIFFUSION_HPP
#define OPCA_DIFFUSION_HPP

#include <vector>

#include "opca/data.hpp"
#include "opca/types.hpp"

namespace opca {

// dX/dt = Sigma X (X^T X)^{-1} - X/2 - X (X^T X)^{-1} X^T Sigma X (X^T X)^{-1} / 2,
// the deterministic limit of the Gauss-Newton recursion; identical algebra to
// the stochastic direction with the exact Sigma in place of the batch
// second-moment.
Matrix sgn_ode_drift(const Matrix& x, const CovarianceModel& model);

// dx/dt = Sigma x - (x^T Sigma x) x, the classical p = 1 power-method flow.
Vector oja_ode_drift(const Vector& x, const CovarianceModel& model);

enum class OdeKind { kSgnLimit, kOjaLimit };

struct OdeRun {
  CovarianceModel model;
  Matrix x0;
  double dt = 0.1;
  Index steps = 0;
  OdeKind kind = OdeKind::kSgnLimit;
};

struct OdeTrace {
  std::vector<double> t;      // includes t = 0
  std::vector<double> error;  // normalized subspace error at each time
  bool diverged = false;
  Index diverged_at = -1;  // step index at detection, -1 if never
  Matrix final_x;
};

// Integrates x' = drift(x) with X_{j+1} = X_j + dt * drift(X_j), recording
// the normalized subspace error at every step.  The power-method flow is
// renormalized to unit length after each step (Euler leaves the sphere;
// this mirrors the orthonormalization in the discrete recursion).
// Divergence -- error exceeding 10x its initial value or a non-finite
// iterate -- stops the run and flags the trace.
OdeTrace euler_integrate(const OdeRun& run);

}  // namespace opca

#endif  // OPCA_DIFFUSION_HPP
