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

#include "opca/algorithms.hpp"

#include <cmath>

#include "opca/matops.hpp"

namespace opca {

double sigma_min_gram(const Matrix& x) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(x.transpose() * x,
                                           Eigen::EigenvaluesOnly);
  return std::sqrt(std::max(es.eigenvalues().minCoeff(), 0.0));
}

Matrix sgn_direction(const Matrix& x, const SampleBatch& batch) {
  const Matrix& a = batch.data;
  if (a.rows() != x.rows())
    throw DimensionMismatchError("sgn_direction: batch row mismatch");
  const double sqrt_h = std::sqrt(static_cast<double>(a.cols()));
  const Matrix p = gram_solve(x, x);            // x (x^T x)^{-1}
  const Matrix q = (a.transpose() * p) / sqrt_h;
  Matrix s = a * (q / sqrt_h);
  s.noalias() -= 0.5 * x;
  s.noalias() -= 0.5 * (x * (q.transpose() * q));
  return s;
}

double gn_normal_residual(const Matrix& x, const SampleBatch& batch,
                          const Matrix& s) {
  const Matrix& a = batch.data;
  const double h = static_cast<double>(a.cols());
  const Matrix sigma_h = (a * a.transpose()) / h;
  const Matrix r = x * x.transpose() - sigma_h;
  const Matrix js = x * s.transpose() + s * x.transpose();
  const Matrix jt_js = (js + js.transpose()) * x;
  const Matrix jt_r = (r + r.transpose()) * x;
  return (jt_js + jt_r).norm();
}

void sgn_step(Iterate& it, const SampleBatch& batch, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw BadRangeError("sgn_step: need alpha >= 0");
  it.x += alpha * sgn_direction(it.x, batch);
  it.k += 1;
  it.sigma_min = sigma_min_gram(it.x);
}

Matrix oja_gradient(const Matrix& x, const SampleBatch& batch) {
  const Matrix& a = batch.data;
  if (a.rows() != x.rows())
    throw DimensionMismatchError("oja_gradient: batch row mismatch");
  return a * (a.transpose() * x) / static_cast<double>(a.cols());
}

void oja_step(Iterate& it, const SampleBatch& batch, double alpha) {
  if (!(alpha >= 0.0) || !std::isfinite(alpha))
    throw BadRangeError("oja_step: need alpha >= 0");
  it.x = orthonormalize(it.x + alpha * oja_gradient(it.x, batch));
  it.k += 1;
  it.sigma_min = 1.0;
}

CorrectionPolicy make_correction_policy(const Vector& lambda) {
  if (lambda.size() < 1 || !(lambda.minCoeff() >= 0.0))
    throw BadRangeError("make_correction_policy: need lambda >= 0");
  const double l1 = lambda[0];
  const double ln = lambda[lambda.size() - 1];
  CorrectionPolicy policy;
  policy.theta = std::sqrt(ln);
  policy.threshold =
      (l1 > 0.0) ? std::min(1e-6, (4.0 / 35.0) * (ln / l1) * std::sqrt(ln))
                 : 0.0;
  return policy;
}

bool correct_iterate(Iterate& it, const CorrectionPolicy& policy) {
  if (policy.threshold <= 0.0) return false;
  if (!(policy.theta > 0.0))
    throw BadRangeError("correct_iterate: need theta > 0");
  if (!it.x.allFinite())
    throw NonFiniteError("correct_iterate: iterate has non-finite entries");
  const Index p = it.x.cols();
  const bool complement =
      policy.q_choice == CorrectionPolicy::QChoice::kComplement;
  const unsigned options =
      (complement ? Eigen::ComputeFullU : Eigen::ComputeThinU) |
      Eigen::ComputeFullV;
  Eigen::JacobiSVD<Matrix> svd(it.x, options);
  const Vector& sv = svd.singularValues();
  it.sigma_min = sv(p - 1);
  if (it.sigma_min > policy.threshold) return false;

  Index num_small = 0;
  for (Index i = 0; i < p; ++i)
    if (sv(i) <= policy.threshold) ++num_small;
  if (complement && it.x.rows() < p + num_small)
    throw BadRangeError(
        "correct_iterate: not enough complement directions (n < p + count)");
  const Matrix q = complement
                       ? Matrix(svd.matrixU().middleCols(p, num_small))
                       : Matrix(svd.matrixU().middleCols(p - num_small,
                                                         num_small));
  const Matrix v_tail = svd.matrixV().rightCols(num_small);
  it.x.noalias() += policy.theta * q * v_tail.transpose();
  it.sigma_min = sigma_min_gram(it.x);
  return true;
}

}  // namespace opca
