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

#include "doctest.h"
#include "opca/algorithms.hpp"
#include "opca/data.hpp"
#include "opca/diffusion.hpp"
#include "opca/matops.hpp"
#include "opca/metrics.hpp"
#include "test_support.hpp"

using opca::CovarianceModel;
using opca::Index;
using opca::Matrix;
using opca::Vector;
using opca_test::random_matrix;

namespace {

// Model with spikes planted on the first coordinate axes, so the dense
// covariance is diagonal and hand evaluation is easy.
CovarianceModel axis_model(Index n, const Vector& mu, double rho) {
  CovarianceModel m;
  m.n = n;
  m.rho = rho;
  m.mu = mu;
  m.spike_basis = Matrix::Identity(n, mu.size());
  return m;
}

// Aligned unit start whose squared-sine error to the top eigvector is e0.
Vector aligned_start(const CovarianceModel& m, double e0, std::uint64_t key) {
  const Vector u1 = m.spike_basis.col(0);
  Vector w = random_matrix(m.n, 1, key).col(0);
  w -= u1.dot(w) * u1;
  w.normalize();
  Vector x = u1 + std::sqrt(e0 / (1.0 - e0)) * w;
  x.normalize();
  return x;
}

}  // namespace

TEST_SUITE("diffusion") {

TEST_CASE("population drift vanishes at a stationary factor") {
  const CovarianceModel m = opca::make_gau_gap_1(7, 2, 1.0, 2.0, 0.3, 3);
  const opca::GroundTruth gt = opca::make_ground_truth(m, 2);
  const Matrix x_star =
      gt.u_pprime * m.spectrum().head(2).cwiseSqrt().asDiagonal();
  CHECK(opca::sgn_ode_drift(x_star, m).cwiseAbs().maxCoeff() <= 1e-12);
}

TEST_CASE("population drift equals the batch direction under exact moments") {
  for (std::uint64_t key = 0; key < 10; ++key) {
    const CovarianceModel m =
        opca::make_gau_gap_1(8, 2, 1.0, 2.0, 0.2, 100 + key);
    const Matrix x = opca_test::well_conditioned_factor(8, 2, 200 + key);
    const Matrix drift = opca::sgn_ode_drift(x, m);
    const Matrix s = opca::sgn_direction(x, opca_test::exact_moment_batch(m));
    CHECK((drift - s).cwiseAbs().maxCoeff() <=
          1e-12 * (1.0 + drift.cwiseAbs().maxCoeff()));
  }
}

TEST_CASE("population drift hand evaluation on the trailing axis") {
  Vector mu(2);
  mu << 2.0, 1.0;
  // Sigma = diag(3, 2, 2, 1) with rho = 1; the last axis has eigenvalue 1.
  CovarianceModel m = axis_model(4, mu, 1.0);
  Matrix e_last = Matrix::Zero(4, 1);
  e_last(3, 0) = 1.0;
  // drift = Sigma x - x/2 - x (x' Sigma x)/2 = (lambda_n/2 - 1/2) x here.
  CHECK(opca::sgn_ode_drift(e_last, m).cwiseAbs().maxCoeff() <= 1e-14);

  CovarianceModel m2 = axis_model(4, mu, std::sqrt(2.0));  // trailing 2
  const Matrix drift = opca::sgn_ode_drift(e_last, m2);
  CHECK(drift(3, 0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(drift.topRows(3).cwiseAbs().maxCoeff() <= 1e-14);
}

TEST_CASE("normalized drift is tangent to the sphere and zero at eigenvectors") {
  Vector mu(1);
  mu << 5.0;
  const CovarianceModel m = axis_model(6, mu, 0.5);
  Vector u1 = Vector::Zero(6);
  u1[0] = 1.0;
  CHECK(opca::oja_ode_drift(u1, m).cwiseAbs().maxCoeff() <= 1e-14);
  Vector u_last = Vector::Zero(6);
  u_last[5] = 1.0;
  CHECK(opca::oja_ode_drift(u_last, m).cwiseAbs().maxCoeff() <= 1e-14);

  for (std::uint64_t key = 0; key < 10; ++key) {
    Vector x = random_matrix(6, 1, 300 + key).col(0);
    x.normalize();
    CHECK(std::abs(x.dot(opca::oja_ode_drift(x, m))) <= 1e-12);
  }
}

TEST_CASE("whitened flow converges monotonically on a narrow gap") {
  // Spectrum (1.1, 1, ..., 1): the classic slow-gap configuration.
  const CovarianceModel m = opca::make_gau_gap_1(500, 1, 0.1, 0.1, 1.0, 17);
  opca::OdeRun run;
  run.model = m;
  run.x0 = opca::orthonormalize(random_matrix(500, 1, 18));
  run.dt = 0.1;
  run.steps = 2000;  // t_end = 200
  run.kind = opca::OdeKind::kSgnLimit;
  const opca::OdeTrace trace = opca::euler_integrate(run);
  CHECK_FALSE(trace.diverged);
  CHECK(trace.error.back() < 1e-6);
  for (std::size_t i = 1; i < trace.error.size(); ++i)
    CHECK(trace.error[i] <= trace.error[i - 1] + 1e-12);
}

TEST_CASE("normalized flow diverges at large top eigenvalue, whitened does not") {
  // Spectrum (1001, 1, ..., 1): forward-Euler stability needs dt < 2/1001.
  const CovarianceModel m = opca::make_gau_gap_1(200, 1, 1000.0, 1000.0, 1.0, 19);
  opca::OdeRun run;
  run.model = m;
  run.x0 = aligned_start(m, 0.05, 20);
  run.dt = 0.1;
  run.steps = 500;
  run.kind = opca::OdeKind::kOjaLimit;
  const opca::OdeTrace oja = opca::euler_integrate(run);
  CHECK(oja.diverged);
  CHECK(oja.diverged_at >= 0);

  run.kind = opca::OdeKind::kSgnLimit;
  const opca::OdeTrace sgn = opca::euler_integrate(run);
  CHECK_FALSE(sgn.diverged);
  CHECK(sgn.error.back() < 1e-6);
}

TEST_CASE("halving the timestep halves the integration error") {
  const CovarianceModel m = opca::make_gau_gap_1(20, 1, 0.1, 0.1, 1.0, 21);
  const Matrix x0 = opca::orthonormalize(random_matrix(20, 1, 22));
  auto final_state = [&](double dt) {
    opca::OdeRun run;
    run.model = m;
    run.x0 = x0;
    run.dt = dt;
    run.steps = static_cast<Index>(std::llround(10.0 / dt));
    run.kind = opca::OdeKind::kSgnLimit;
    return opca::euler_integrate(run).final_x;
  };
  const Matrix xa = final_state(0.1);
  const Matrix xb = final_state(0.05);
  const Matrix xc = final_state(0.025);
  const double d1 = (xa - xb).norm();
  const double d2 = (xb - xc).norm();
  REQUIRE(d2 > 0.0);
  CHECK(d1 / d2 == doctest::Approx(2.0).epsilon(0.2));
}

TEST_CASE("trace bookkeeping starts at t = 0 with the initial error") {
  const CovarianceModel m = opca::make_gau_gap_1(10, 1, 1.0, 1.0, 0.1, 23);
  const opca::GroundTruth gt = opca::make_ground_truth(m, 1);
  opca::OdeRun run;
  run.model = m;
  run.x0 = opca::orthonormalize(random_matrix(10, 1, 24));
  run.dt = 0.5;
  run.steps = 4;
  run.kind = opca::OdeKind::kSgnLimit;
  const opca::OdeTrace trace = opca::euler_integrate(run);
  REQUIRE(trace.t.size() == 5);
  CHECK(trace.t[0] == 0.0);
  CHECK(trace.t[4] == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(trace.error[0] ==
        doctest::Approx(opca::sin_theta_error(run.x0, gt)).epsilon(1e-12));
}

TEST_CASE("normalized flow requires a single column") {
  const CovarianceModel m = opca::make_gau_gap_1(6, 2, 1.0, 2.0, 0.1, 25);
  opca::OdeRun run;
  run.model = m;
  run.x0 = opca::orthonormalize(random_matrix(6, 2, 26));
  run.dt = 0.1;
  run.steps = 10;
  run.kind = opca::OdeKind::kOjaLimit;
  CHECK_THROWS_AS(opca::euler_integrate(run), opca::BadRangeError);
}

}  // TEST_SUITE("diffusion")
