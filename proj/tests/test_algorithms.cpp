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

#include <cmath>
#include <limits>

#include "doctest.h"
#include "opca/algorithms.hpp"
#include "opca/data.hpp"
#include "opca/matops.hpp"
#include "opca/metrics.hpp"
#include "test_support.hpp"

using opca::Index;
using opca::Iterate;
using opca::Matrix;
using opca::Vector;
using opca_test::make_batch;
using opca_test::random_matrix;

namespace {

Matrix basis_column(Index n, Index i) {
  Matrix e = Matrix::Zero(n, 1);
  e(i, 0) = 1.0;
  return e;
}

}  // namespace

TEST_SUITE("algorithms") {

TEST_CASE("update direction vanishes at a stationary factor") {
  const Matrix x = basis_column(2, 0);
  const Matrix s = opca::sgn_direction(x, make_batch(x));
  CHECK(s.cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("update direction on an orthogonal sample is minus half the factor") {
  const Matrix x = basis_column(2, 0);
  const opca::SampleBatch batch = make_batch(basis_column(2, 1));
  const Matrix s = opca::sgn_direction(x, batch);
  CHECK(s(0, 0) == doctest::Approx(-0.5).epsilon(1e-14));
  CHECK(s(1, 0) == doctest::Approx(0.0).epsilon(1e-14));
}

TEST_CASE("update direction matches the dense three-term formula") {
  for (std::uint64_t key = 0; key < 20; ++key) {
    const Matrix x = opca_test::well_conditioned_factor(6, 2, 2000 + key);
    const opca::SampleBatch batch = make_batch(random_matrix(6, 3, 3000 + key));
    const Matrix fast = opca::sgn_direction(x, batch);
    const Matrix naive = opca_test::naive_update_direction(x, batch);
    CHECK((fast - naive).cwiseAbs().maxCoeff() <=
          1e-12 * (1.0 + naive.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("update direction satisfies the least-squares normal equation") {
  for (std::uint64_t key = 0; key < 30; ++key) {
    const Matrix x = opca_test::well_conditioned_factor(6, 2, 4000 + key);
    const opca::SampleBatch batch = make_batch(random_matrix(6, 3, 5000 + key));
    const Matrix s = opca::sgn_direction(x, batch);
    const Matrix r =
        x * x.transpose() - opca_test::batch_second_moment(batch);
    const double budget = 1e-10 * (1.0 + r.norm() * x.norm());
    CHECK(opca::gn_normal_residual(x, batch, s) <= budget);
  }
}

TEST_CASE("normal-equation residual detects a non-solution") {
  const Matrix x = opca_test::well_conditioned_factor(5, 2, 6000);
  const opca::SampleBatch batch = make_batch(random_matrix(5, 4, 6001));
  const Matrix r = x * x.transpose() - opca_test::batch_second_moment(batch);
  // At S = 0 the residual is exactly the gradient-side term (R + R^T) X.
  const double at_zero =
      opca::gn_normal_residual(x, batch, Matrix::Zero(5, 2));
  CHECK(at_zero == doctest::Approx(((r + r.transpose()) * x).norm())
                       .epsilon(1e-12));
  CHECK(at_zero > 0.0);
  // At a stationary factor, S = 0 is the exact solution.
  const Matrix e1 = basis_column(2, 0);
  CHECK(opca::gn_normal_residual(e1, make_batch(e1), Matrix::Zero(2, 1)) <=
        1e-14);
}

TEST_CASE("step with zero stepsize leaves the iterate untouched") {
  Iterate it;
  it.x = opca_test::well_conditioned_factor(5, 2, 7000);
  const Matrix before = it.x;
  opca::sgn_step(it, make_batch(random_matrix(5, 3, 7001)), 0.0);
  CHECK((it.x - before).cwiseAbs().maxCoeff() == 0.0);
  CHECK(it.k == 1);
}

TEST_CASE("step at a stationary factor is a fixed point for any stepsize") {
  Iterate it;
  it.x = basis_column(2, 0);
  opca::sgn_step(it, make_batch(basis_column(2, 0)), 0.7);
  CHECK((it.x - basis_column(2, 0)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("step rejects negative or non-finite stepsizes") {
  Iterate it;
  it.x = basis_column(3, 0);
  const opca::SampleBatch batch = make_batch(basis_column(3, 1));
  CHECK_THROWS_AS(opca::sgn_step(it, batch, -0.1), opca::BadRangeError);
  CHECK_THROWS_AS(
      opca::sgn_step(it, batch, std::numeric_limits<double>::quiet_NaN()),
      opca::BadRangeError);
}

TEST_CASE("step can only shrink the smallest singular value geometrically") {
  // sigma_min(X + alpha S) >= (1 - alpha/2) sigma_min(X) for alpha <= 1.
  for (std::uint64_t key = 0; key < 50; ++key) {
    Iterate it;
    it.x = opca_test::well_conditioned_factor(7, 3, 8000 + key);
    const double before = opca_test::sigma_min_svd(it.x);
    const double alpha = 0.1 + 0.9 * static_cast<double>(key % 10) / 9.0;
    opca::sgn_step(it, make_batch(random_matrix(7, 4, 9000 + key)), alpha);
    CHECK(opca_test::sigma_min_svd(it.x) >=
          (1.0 - alpha / 2.0) * before - 1e-12);
    // The cached value tracks the true smallest singular value.
    CHECK(it.sigma_min ==
          doctest::Approx(opca_test::sigma_min_svd(it.x)).epsilon(1e-8));
  }
}

TEST_CASE("gradient ascent step keeps the iterate orthonormal") {
  Iterate it;
  it.x = opca::orthonormalize(random_matrix(6, 2, 10000));
  const Matrix before = it.x;
  opca::oja_step(it, make_batch(random_matrix(6, 3, 10001)), 0.0);
  CHECK((it.x - before).cwiseAbs().maxCoeff() <= 1e-14);

  opca::oja_step(it, make_batch(random_matrix(6, 3, 10002)), 0.5);
  CHECK((it.x.transpose() * it.x - Matrix::Identity(2, 2)).norm() <= 1e-12);
  CHECK(it.sigma_min == 1.0);
  CHECK(it.k == 2);
}

TEST_CASE("gradient ascent fixed point on an axis-aligned spike") {
  Iterate it;
  it.x = basis_column(2, 0);
  opca::oja_step(it, make_batch(basis_column(2, 0)), 1.0);
  CHECK((it.x - basis_column(2, 0)).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("scaled gradient examples") {
  CHECK(opca::oja_gradient(basis_column(2, 0), make_batch(basis_column(2, 1)))
            .cwiseAbs()
            .maxCoeff() == 0.0);
  const Matrix g =
      opca::oja_gradient(basis_column(2, 0), make_batch(basis_column(2, 0)));
  CHECK(g(0, 0) == doctest::Approx(1.0).epsilon(1e-14));

  const Matrix x = random_matrix(8, 2, 11000);
  const Matrix a = random_matrix(8, 5, 11001);
  const Matrix naive = (a * a.transpose() / 5.0) * x;
  CHECK((opca::oja_gradient(x, make_batch(a)) - naive).cwiseAbs().maxCoeff() <=
        1e-12 * (1.0 + naive.cwiseAbs().maxCoeff()));
}

TEST_CASE("rank-restore policy derives its constants from the spectrum") {
  Vector lambda(3);
  lambda << 4.0, 2.0, 1.0;
  const opca::CorrectionPolicy policy = opca::make_correction_policy(lambda);
  CHECK(policy.theta == doctest::Approx(1.0).epsilon(1e-14));  // sqrt(min)
  // min(1e-6, (4/35) * (1/4) * 1) = 1e-6
  CHECK(policy.threshold == doctest::Approx(1e-6).epsilon(1e-12));

  Vector tiny(2);
  tiny << 4.0, 1e-16;
  const opca::CorrectionPolicy small = opca::make_correction_policy(tiny);
  CHECK(small.threshold < 1e-6);

  const opca::CorrectionPolicy off =
      opca::make_correction_policy(Vector::Zero(2));
  CHECK(off.threshold == 0.0);  // disabled
}

TEST_CASE("rank restore leaves well-conditioned factors alone") {
  opca::CorrectionPolicy policy;
  policy.threshold = 1e-6;
  policy.theta = 0.3;
  Iterate it;
  it.x = opca::orthonormalize(random_matrix(5, 2, 12000));
  const Matrix before = it.x;
  CHECK_FALSE(opca::correct_iterate(it, policy));
  CHECK((it.x - before).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("rank restore shifts small singular values additively") {
  // Tail choice: the perturbation reuses the deficient left singular
  // directions, so each small value moves from sigma to sigma + theta.
  const double floor = 1e-6;
  opca::CorrectionPolicy policy;
  policy.threshold = floor;
  policy.theta = 0.3;
  policy.q_choice = opca::CorrectionPolicy::QChoice::kTailLeftSingular;
  Iterate it;
  it.x = Matrix::Zero(4, 2);
  it.x(0, 0) = 1.0;
  it.x(1, 1) = floor / 2.0;
  it.sigma_min = floor / 2.0;
  CHECK(opca::correct_iterate(it, policy));
  const Vector s = opca::singular_values(it.x);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(floor / 2.0 + 0.3).epsilon(1e-12));
}

TEST_CASE("rank restore with complement directions adds in quadrature") {
  const double floor = 1e-6;
  opca::CorrectionPolicy policy;
  policy.threshold = floor;
  policy.theta = 0.3;
  policy.q_choice = opca::CorrectionPolicy::QChoice::kComplement;
  Iterate it;
  it.x = Matrix::Zero(4, 2);
  it.x(0, 0) = 1.0;
  it.x(1, 1) = floor / 2.0;
  it.sigma_min = floor / 2.0;
  CHECK(opca::correct_iterate(it, policy));
  const Vector s = opca::singular_values(it.x);
  CHECK(s[0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(s[1] == doctest::Approx(std::sqrt(floor * floor / 4.0 + 0.09))
                    .epsilon(1e-12));
}

TEST_CASE("rank restore improves conditioning without hurting the metrics") {
  const opca::CovarianceModel model =
      opca::make_gau_gap_1(8, 2, 1.0, 2.0, 0.1, 13);
  const opca::GroundTruth gt = opca::make_ground_truth(model, 2);
  const opca::CorrectionPolicy policy =
      opca::make_correction_policy(model.spectrum());
  REQUIRE(policy.threshold > 0.0);
  for (std::uint64_t key = 0; key < 25; ++key) {
    // Factor with one healthy and one collapsed direction.
    const Matrix q = opca::orthonormalize(random_matrix(8, 2, 13000 + key));
    Matrix x = q;
    x.col(1) *= policy.threshold / 2.0;
    Iterate it;
    it.x = x;
    it.sigma_min = opca_test::sigma_min_svd(x);
    const double err_before = opca::sin_theta_error(x, gt);
    const double obj_before = opca::population_objective(x, model);
    REQUIRE(opca::correct_iterate(it, policy));
    CHECK(opca_test::sigma_min_svd(it.x) > policy.threshold);
    CHECK(it.sigma_min ==
          doctest::Approx(opca_test::sigma_min_svd(it.x)).epsilon(1e-8));
    CHECK(opca::population_objective(it.x, model) <= obj_before + 1e-10);
    CHECK(opca::sin_theta_error(it.x, gt) <= err_before + 1e-10);
  }
}

TEST_CASE("cached smallest singular value helper matches the svd") {
  const Matrix x = random_matrix(6, 3, 14000);
  CHECK(opca::sigma_min_gram(x) ==
        doctest::Approx(opca_test::sigma_min_svd(x)).epsilon(1e-9));
}

}  // TEST_SUITE("algorithms")
