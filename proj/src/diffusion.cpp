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

#include "opca/diffusion.hpp"

#include <algorithm>

#include "opca/matops.hpp"
#include "opca/metrics.hpp"

namespace opca {

Matrix sgn_ode_drift(const Matrix& x, const CovarianceModel& model) {
  if (x.rows() != model.n)
    throw DimensionMismatchError("sgn_ode_drift: row mismatch");
  const Matrix p = gram_solve(x, x);  // x (x^T x)^{-1}
  const Matrix w = model.apply(p);    // Sigma x (x^T x)^{-1}
  Matrix s = w - 0.5 * x;
  s.noalias() -= 0.5 * (p * (x.transpose() * w));
  return s;
}

Vector oja_ode_drift(const Vector& x, const CovarianceModel& model) {
  if (x.size() != model.n)
    throw DimensionMismatchError("oja_ode_drift: size mismatch");
  const Vector sx = model.apply(x);
  return sx - x.dot(sx) * x;
}

OdeTrace euler_integrate(const OdeRun& run) {
  const Index p = run.x0.cols();
  if (run.kind == OdeKind::kOjaLimit && p != 1)
    throw BadRangeError("euler_integrate: power-method flow needs p = 1");
  if (!(run.dt > 0.0)) throw BadRangeError("euler_integrate: need dt > 0");
  if (run.steps < 0) throw BadRangeError("euler_integrate: need steps >= 0");

  const GroundTruth gt = make_ground_truth(run.model, p);
  const double denom = static_cast<double>(p);

  OdeTrace trace;
  trace.t.reserve(static_cast<std::size_t>(run.steps) + 1);
  trace.error.reserve(static_cast<std::size_t>(run.steps) + 1);
  Matrix x = run.x0;
  const double initial = sin_theta_error(x, gt) / denom;
  trace.t.push_back(0.0);
  trace.error.push_back(initial);
  const double blowup = std::max(10.0 * initial, 1e-9);

  for (Index j = 1; j <= run.steps; ++j) {
    if (run.kind == OdeKind::kSgnLimit) {
      x += run.dt * sgn_ode_drift(x, run.model);
    } else {
      Vector v = x.col(0);
      v += run.dt * oja_ode_drift(v, run.model);
      const double norm = v.norm();
      if (norm > 0.0 && std::isfinite(norm)) v /= norm;
      x.col(0) = v;
    }
    if (!x.allFinite()) {
      trace.diverged = true;
      trace.diverged_at = j;
      break;
    }
    const double err = sin_theta_error(x, gt) / denom;
    trace.t.push_back(run.dt * static_cast<double>(j));
    trace.error.push_back(err);
    if (err > blowup) {
      trace.diverged = true;
      trace.diverged_at = j;
      break;
    }
  }
  trace.final_x = std::move(x);
  return trace;
}

}  // namespace opca
