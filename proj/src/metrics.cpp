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

#include "opca/metrics.hpp"

#include <algorithm>

#include "opca/matops.hpp"

namespace opca {

Index effective_index(const Vector& lambda, Index p, double tol) {
  const Index n = lambda.size();
  if (n < 2 || p < 1 || p >= n)
    throw BadRangeError("effective_index: need 1 <= p < n");
  if (!(tol >= 0.0)) throw BadRangeError("effective_index: need tol >= 0");
  for (Index i = 0; i + 1 < n; ++i)
    if (lambda[i] < lambda[i + 1])
      throw BadRangeError("effective_index: spectrum not sorted descending");
  const double cutoff = lambda[p - 1] - tol;
  if (!(lambda[n - 1] < cutoff))
    throw AssumptionViolatedError(
        "effective_index: lambda_p <= lambda_n + tol, no usable eigengap");
  for (Index i = p; i <= n - 1; ++i)
    if (lambda[i] < cutoff) return i;  // 1-based count of leading directions
  throw AssumptionViolatedError("effective_index: unreachable");
}

GroundTruth make_ground_truth(const CovarianceModel& model, Index p,
                              double tol) {
  GroundTruth gt;
  gt.lambda = model.spectrum();
  if (tol < 0.0) tol = default_gap_tol(gt.lambda);
  gt.p = p;
  gt.p_prime = effective_index(gt.lambda, p, tol);
  // The gap test guarantees p_prime never reaches into the rho^2 noise
  // block, so the spike basis covers the needed eigenvectors.
  gt.u_pprime = model.spike_basis.leftCols(gt.p_prime);
  gt.nu = gt.lambda[p - 1] - gt.lambda[gt.p_prime];
  return gt;
}

GroundTruth make_ground_truth_from_samples(const Matrix& a, Index p,
                                           double tol) {
  const double m = static_cast<double>(a.cols());
  const SymmetricEig eig = symmetric_eig((a * a.transpose()) / m);
  GroundTruth gt;
  gt.lambda = eig.eigenvalues;
  if (tol < 0.0) tol = default_gap_tol(gt.lambda);
  gt.p = p;
  gt.p_prime = effective_index(gt.lambda, p, tol);
  gt.u_pprime = eig.eigenvectors.leftCols(gt.p_prime);
  gt.nu = gt.lambda[p - 1] - gt.lambda[gt.p_prime];
  return gt;
}

double sin_theta_error(const Matrix& x, const GroundTruth& gt) {
  if (x.rows() != gt.u_pprime.rows())
    throw DimensionMismatchError("sin_theta_error: row mismatch");
  if (x.cols() != gt.p)
    throw DimensionMismatchError("sin_theta_error: x has " +
                                 std::to_string(x.cols()) +
                                 " cols, ground truth expects " +
                                 std::to_string(gt.p));
  const Matrix q = orthonormalize(x);
  const double overlap = (gt.u_pprime.transpose() * q).squaredNorm();
  return std::clamp(static_cast<double>(gt.p) - overlap, 0.0,
                    static_cast<double>(gt.p));
}

double batch_objective(const Matrix& x, const SampleBatch& batch) {
  const Matrix& a = batch.data;
  if (x.rows() != a.rows())
    throw DimensionMismatchError("batch_objective: row mismatch");
  const double h = static_cast<double>(a.cols());
  const double xtx = (x.transpose() * x).squaredNorm();
  const double cross = (a.transpose() * x).squaredNorm();
  // ||A^T A||_F == ||A A^T||_F; use whichever Gram is smaller.
  const double gram = (a.cols() <= a.rows())
                          ? (a.transpose() * a).squaredNorm()
                          : (a * a.transpose()).squaredNorm();
  return 0.5 * (xtx - 2.0 * cross / h + gram / (h * h));
}

double population_objective(const Matrix& x, const CovarianceModel& model) {
  if (x.rows() != model.n)
    throw DimensionMismatchError("population_objective: row mismatch");
  const double xtx = (x.transpose() * x).squaredNorm();
  const double rho2 = model.rho * model.rho;
  const Matrix qtx = model.spike_basis.transpose() * x;
  const double cross =
      rho2 * x.squaredNorm() +
      (model.mu.array() * qtx.rowwise().squaredNorm().array()).sum();
  const double sigma_norm2 =
      (model.mu.array() + rho2).square().sum() +
      static_cast<double>(model.n - model.spike_rank()) * rho2 * rho2;
  return 0.5 * (xtx - 2.0 * cross + sigma_norm2);
}

}  // namespace opca
