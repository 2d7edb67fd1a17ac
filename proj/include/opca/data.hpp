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

#ifndef OPCA_DATA_HPP
#define OPCA_DATA_HPP

#include <cstdint>
#include <filesystem>
#include <string>

#include "opca/types.hpp"

namespace opca {

// Spiked covariance Sigma = Q diag(mu) Q^T + rho^2 I with Q orthonormal
// (n x spike_rank) and mu sorted descending.  The full spectrum is
// lambda_i = mu_i + rho^2 for i < spike_rank and rho^2 beyond; samples are
// drawn through the symmetric square root
//   Sigma^{1/2} = rho I + Q diag(sqrt(mu + rho^2) - rho) Q^T,
// so Sigma itself is never formed during streaming.
struct CovarianceModel {
  Index n = 0;
  double rho = 0.0;
  Vector mu;           // spike strengths, descending, all > 0
  Matrix spike_basis;  // n x spike_rank, orthonormal columns

  Index spike_rank() const { return mu.size(); }

  // Full eigenvalue vector, descending (length n).
  Vector spectrum() const;

  // Sigma as a dense matrix; only sensible at test scale (n <= 4096).
  Matrix materialize() const;

  // Sigma * m without forming Sigma: rho^2 m + Q diag(mu) Q^T m.
  Matrix apply(const Matrix& m) const;

  // Sigma^{1/2} * z in the same factored fashion.
  Matrix apply_sqrt(const Matrix& z) const;
};

// Uniform spike strengths on [mu_min, mu_max] (sorted descending).  The
// degenerate case mu_min == mu_max is allowed.
CovarianceModel make_gau_gap_1(Index n, Index p, double mu_min, double mu_max,
                               double rho, std::uint64_t seed);

// Two-block spikes: p1 strengths at mu_high, p - p1 at mu_low.
CovarianceModel make_gau_gap_2(Index n, Index p, Index p1, double mu_low,
                               double mu_high, double rho, std::uint64_t seed);

// No eigengap at p: strengths p+1..p_prime replicate the p-th bitwise, so
// the target eigenvalue is interior to a tie block of width p_prime - p + 1.
CovarianceModel make_gau_ngap(Index n, Index p, Index p_prime, double mu_min,
                              double mu_max, double rho, std::uint64_t seed);

// How a trial consumes samples: ceil(m / h) batches of width h (the last one
// possibly narrower), regenerated on demand from (seed, batch index).
struct StreamSpec {
  Index h = 1;
  Index m = 0;
  std::uint64_t seed = 0;
};

struct SampleBatch {
  Index index = 0;
  Matrix data;  // n x h_k

  Index width() const { return data.cols(); }
};

// Gaussian stream over a covariance model.  Sample i is a pure function of
// (seed, i): batch k always holds samples k*h .. min((k+1)*h, m)-1 with
// bitwise-identical entries however batches are fetched.
class GaussianStream {
 public:
  GaussianStream(CovarianceModel model, StreamSpec spec);

  Index num_batches() const;
  Index dim() const { return model_.n; }
  const StreamSpec& spec() const { return spec_; }

  SampleBatch batch(Index k) const;

 private:
  CovarianceModel model_;
  StreamSpec spec_;
  std::uint64_t key_;
  Vector sqrt_shift_;  // sqrt(mu + rho^2) - rho, precomputed
};

inline GaussianStream sample_stream(CovarianceModel model, StreamSpec spec) {
  return GaussianStream(std::move(model), spec);
}

enum class FileFormat { kCsv, kF64le, kIdx };

FileFormat parse_file_format(const std::string& name);

// Loads a feature-by-sample matrix.
//  - csv:   UTF-8, one feature row per line, comma separated, no header.
//  - f64le: 16-byte header (rows, cols as little-endian u64) followed by
//           column-major little-endian doubles.
//  - idx:   big-endian idx3 image file (magic 0x00000803); images are
//           flattened row-major into columns and scaled by 1/255.
Matrix load_matrix_file(const std::filesystem::path& path, FileFormat format);

// Writes the exact f64le counterpart of load_matrix_file(..., kF64le).
void save_matrix_f64le(const std::filesystem::path& path, const Matrix& m);

// Subtracts the mean sample (row means) in place and returns the means.
Vector center_columns(Matrix& a);

}  // namespace opca

#endif  // OPCA_DATA_HPP
