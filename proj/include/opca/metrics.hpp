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

#ifndef OPCA_METRICS_HPP
#define OPCA_METRICS_HPP

#include "opca/data.hpp"
#include "opca/types.hpp"

namespace opca {

// Reference spectrum for error measurement.  When the p-th eigenvalue sits in
// a tie block, accuracy is judged against the enlarged invariant subspace of
// dimension p_prime >= p, the smallest index at which a gap reopens.
struct GroundTruth {
  Index p = 0;        // components the estimator tracks
  Index p_prime = 0;  // effective subspace dimension (gap-adjusted)
  Matrix u_pprime;    // n x p_prime leading eigenvectors
  Vector lambda;      // full spectrum, descending
  double nu = 0.0;    // lambda_p - lambda_{p_prime+1}, the usable gap
};

// Smallest i in [p, n-1] such that lambda_{i+1} < lambda_p - tol (1-based
// count).  `lambda` must be sorted descending.  Throws AssumptionViolated
// when lambda_p <= lambda_n + tol, i.e. no usable gap exists at all.
Index effective_index(const Vector& lambda, Index p, double tol);

// Default tie tolerance, relative to the top eigenvalue.
inline double default_gap_tol(const Vector& lambda) {
  return 1e-9 * lambda[0];
}

GroundTruth make_ground_truth(const CovarianceModel& model, Index p,
                              double tol = -1.0);

// Ground truth from the full-sample empirical covariance A A^T / m of
// centered data.
GroundTruth make_ground_truth_from_samples(const Matrix& a, Index p,
                                           double tol = -1.0);

// Squared sin-Theta distance between span(x) and the reference subspace:
// p - ||U_{p'}^T orth(x)||_F^2, clamped to [0, p].  Divide by p for the
// normalized error in [0, 1].
double sin_theta_error(const Matrix& x, const GroundTruth& gt);

// Streaming objective 0.5 * ||x x^T - A A^T / h||_F^2 evaluated through Gram
// matrices, so nothing larger than max(h, p)-square is formed.
double batch_objective(const Matrix& x, const SampleBatch& batch);

// Population objective 0.5 * ||x x^T - Sigma||_F^2 through the factored
// model.
double population_objective(const Matrix& x, const CovarianceModel& model);

}  // namespace opca

#endif  // OPCA_METRICS_HPP
