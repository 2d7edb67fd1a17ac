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
// Streaming PCA update rules.  The Gauss-Newton update keeps an unnormalized
// factor whose columns need orthonormalization only when the subspace is
// read out; the power-method baseline re-orthonormalizes every step.

#ifndef OPCA_ALGORITHMS_HPP
#define OPCA_ALGORITHMS_HPP

#include "opca/data.hpp"
#include "opca/types.hpp"

namespace opca {

// State threaded through a streaming run.
struct Iterate {
  Matrix x;              // n x p factor
  Index k = 0;           // steps taken
  double sigma_min = -1.0;  // smallest singular value of x; < 0 means stale
};

// sqrt(max(lambda_min(x^T x), 0)): the smallest singular value computed from
// the p x p Gram matrix, exact to roundoff at ||x|| = O(1) scales.
double sigma_min_gram(const Matrix& x);

// Gauss-Newton direction for 0.5 * ||x x^T - A A^T / h||_F^2, the
// minimum-norm solution of the Gauss-Newton normal equation.  Evaluated as
//   P = x (x^T x)^{-1},  Q = A^T P / sqrt(h),
//   S = A Q / sqrt(h) - x (I + Q^T Q) / 2,
// which costs O(n h p + n p^2) and never forms an n x n matrix.
Matrix sgn_direction(const Matrix& x, const SampleBatch& batch);

// Residual ||J^T J(s) + J^T r||_F of the Gauss-Newton normal equation at
// direction s, with J the differential of x x^T and r = x x^T - A A^T / h.
// Materializes n x n matrices; intended for verification at small n.
double gn_normal_residual(const Matrix& x, const SampleBatch& batch,
                          const Matrix& s);

// x += alpha * s without orthonormalization, then refreshes sigma_min.
// alpha in [0, 1] is the analyzed regime (the full-rank guarantee
// sigma_min(x+) >= (1 - alpha/2) sigma_min(x) needs alpha <= 1); larger
// values are accepted because stepsize sweeps legitimately visit them.
void sgn_step(Iterate& it, const SampleBatch& batch, double alpha);

// Stochastic power-method gradient A (A^T x) / h.
Matrix oja_gradient(const Matrix& x, const SampleBatch& batch);

// x <- orth(x + alpha * G); expects x orthonormal (the invariant this step
// itself maintains).
void oja_step(Iterate& it, const SampleBatch& batch, double alpha);

// Rank-restoring correction.  When sigma_min(x) falls to or below
// `threshold`, adds S_c = theta * Q V_tail^T where V_tail spans the right
// singular directions whose singular values are at or below the threshold.
struct CorrectionPolicy {
  enum class QChoice {
    kTailLeftSingular,  // Q = matching left singular vectors: the tail
                        // singular values become sigma_i + theta, the span is
                        // unchanged, so the subspace error is untouched
    kComplement,        // Q orthogonal to span(x): tail singular values
                        // become sqrt(sigma_i^2 + theta^2); the span moves
  };
  double threshold = 0.0;  // sigma underline; <= 0 disables the correction
  double theta = 0.0;      // injected scale, sqrt(lambda_n) in the analysis
  QChoice q_choice = QChoice::kTailLeftSingular;
};

// Policy from a known (or estimated) spectrum: theta = sqrt(lambda_n) and
// threshold = min(1e-6, (4/35) (lambda_n / lambda_1) sqrt(lambda_n)), the
// largest value for which the correction provably never increases the
// population objective.
CorrectionPolicy make_correction_policy(const Vector& lambda);

// Applies the correction if sigma_min(it.x) <= policy.threshold; returns
// whether anything was done.  sigma_min is recomputed by SVD here.
bool correct_iterate(Iterate& it, const CorrectionPolicy& policy);

}  // namespace opca

#endif  // OPCA_ALGORITHMS_HPP
