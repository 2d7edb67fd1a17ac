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

#include "opca/data.hpp"

#include <algorithm>
#include <bit>
#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <functional>
#include <vector>

#include "opca/matops.hpp"
#include "opca/prng.hpp"

namespace opca {

namespace {

void check_model_args(Index n, Index p, double mu_min, double mu_max,
                      double rho) {
  if (n < 2 || p < 1 || p >= n)
    throw BadRangeError("covariance model: need 1 <= p < n");
  if (!(mu_min > 0.0) || !(mu_max >= mu_min))
    throw BadRangeError("covariance model: need 0 < mu_min <= mu_max");
  if (!(rho >= 0.0)) throw BadRangeError("covariance model: need rho >= 0");
}

Matrix random_orthonormal(Index n, Index p, std::uint64_t seed) {
  NormalStream normals(mix_key(seed, 0, purpose::kModelBasis));
  return orthonormalize(normals.gaussian_matrix(n, p));
}

Vector sorted_uniform_spikes(Index p, double mu_min, double mu_max,
                             std::uint64_t seed) {
  UniformStream uniforms(mix_key(seed, 0, purpose::kModelSpikes));
  Vector mu(p);
  for (Index i = 0; i < p; ++i)
    mu[i] = uniforms.at(static_cast<std::uint64_t>(i), mu_min, mu_max);
  std::sort(mu.data(), mu.data() + p, std::greater<double>());
  return mu;
}

}  // namespace

Vector CovarianceModel::spectrum() const {
  Vector lambda = Vector::Constant(n, rho * rho);
  lambda.head(spike_rank()) = mu.array() + rho * rho;
  return lambda;
}

Matrix CovarianceModel::materialize() const {
  if (n > 4096)
    throw BadRangeError("CovarianceModel::materialize: n > 4096");
  Matrix sigma = (rho * rho) * Matrix::Identity(n, n);
  sigma.noalias() += spike_basis * mu.asDiagonal() * spike_basis.transpose();
  return sigma;
}

Matrix CovarianceModel::apply(const Matrix& m) const {
  Matrix out = (rho * rho) * m;
  out.noalias() += spike_basis * (mu.asDiagonal() * (spike_basis.transpose() * m));
  return out;
}

Matrix CovarianceModel::apply_sqrt(const Matrix& z) const {
  const Vector shift = (mu.array() + rho * rho).sqrt() - rho;
  Matrix out = rho * z;
  out.noalias() +=
      spike_basis * (shift.asDiagonal() * (spike_basis.transpose() * z));
  return out;
}

CovarianceModel make_gau_gap_1(Index n, Index p, double mu_min, double mu_max,
                               double rho, std::uint64_t seed) {
  check_model_args(n, p, mu_min, mu_max, rho);
  CovarianceModel model;
  model.n = n;
  model.rho = rho;
  model.mu = sorted_uniform_spikes(p, mu_min, mu_max, seed);
  model.spike_basis = random_orthonormal(n, p, seed);
  return model;
}

CovarianceModel make_gau_gap_2(Index n, Index p, Index p1, double mu_low,
                               double mu_high, double rho, std::uint64_t seed) {
  check_model_args(n, p, mu_low, mu_high, rho);
  if (p1 < 0 || p1 > p)
    throw BadRangeError("make_gau_gap_2: need 0 <= p1 <= p");
  CovarianceModel model;
  model.n = n;
  model.rho = rho;
  model.mu = Vector::Constant(p, mu_low);
  model.mu.head(p1).setConstant(mu_high);
  model.spike_basis = random_orthonormal(n, p, seed);
  return model;
}

CovarianceModel make_gau_ngap(Index n, Index p, Index p_prime, double mu_min,
                              double mu_max, double rho, std::uint64_t seed) {
  check_model_args(n, p, mu_min, mu_max, rho);
  if (p_prime <= p || p_prime >= n)
    throw BadRangeError("make_gau_ngap: need p < p_prime < n");
  CovarianceModel model;
  model.n = n;
  model.rho = rho;
  model.mu = Vector(p_prime);
  model.mu.head(p) = sorted_uniform_spikes(p, mu_min, mu_max, seed);
  // Replicate the p-th strength bitwise so lambda_p sits inside a tie block.
  model.mu.tail(p_prime - p).setConstant(model.mu[p - 1]);
  model.spike_basis = random_orthonormal(n, p_prime, seed);
  return model;
}

GaussianStream::GaussianStream(CovarianceModel model, StreamSpec spec)
    : model_(std::move(model)),
      spec_(spec),
      key_(mix_key(spec.seed, 0, purpose::kData)) {
  if (spec_.h < 1) throw BadRangeError("sample_stream: need h >= 1");
  if (spec_.m < 1) throw BadRangeError("sample_stream: need m >= 1");
  sqrt_shift_ = (model_.mu.array() + model_.rho * model_.rho).sqrt() - model_.rho;
}

Index GaussianStream::num_batches() const {
  return (spec_.m + spec_.h - 1) / spec_.h;
}

SampleBatch GaussianStream::batch(Index k) const {
  if (k < 0 || k >= num_batches())
    throw BadRangeError("GaussianStream::batch: index out of range");
  const Index start = k * spec_.h;
  const Index width = std::min(spec_.h, spec_.m - start);
  NormalStream normals(key_);
  Matrix z(model_.n, width);
  for (Index c = 0; c < width; ++c)
    normals.fill(static_cast<std::uint64_t>(start + c), z.col(c));
  SampleBatch out;
  out.index = k;
  out.data = model_.rho * z;
  out.data.noalias() += model_.spike_basis *
                        (sqrt_shift_.asDiagonal() *
                         (model_.spike_basis.transpose() * z));
  return out;
}

FileFormat parse_file_format(const std::string& name) {
  if (name == "csv") return FileFormat::kCsv;
  if (name == "f64le") return FileFormat::kF64le;
  if (name == "idx") return FileFormat::kIdx;
  throw BadRangeError("unknown file format '" + name + "'");
}

namespace {

std::string read_file_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on '" + path.string() + "'");
  return bytes;
}

std::uint32_t read_u32_be(const unsigned char* b) {
  return (std::uint32_t{b[0]} << 24) | (std::uint32_t{b[1]} << 16) |
         (std::uint32_t{b[2]} << 8) | std::uint32_t{b[3]};
}

std::uint64_t read_u64_le(const unsigned char* b) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | b[i];
  return v;
}

Matrix load_csv(const std::string& bytes) {
  std::vector<std::vector<double>> rows;
  std::size_t line_start = 0;
  const std::size_t size = bytes.size();
  while (line_start < size) {
    std::size_t line_end = bytes.find('\n', line_start);
    if (line_end == std::string::npos) line_end = size;
    std::size_t effective_end = line_end;
    if (effective_end > line_start && bytes[effective_end - 1] == '\r')
      --effective_end;
    if (effective_end > line_start) {
      std::vector<double> row;
      std::size_t cell_start = line_start;
      while (cell_start <= effective_end) {
        std::size_t cell_end = bytes.find(',', cell_start);
        if (cell_end == std::string::npos || cell_end > effective_end)
          cell_end = effective_end;
        const std::string cell =
            bytes.substr(cell_start, cell_end - cell_start);
        char* parsed_end = nullptr;
        errno = 0;
        const double value = std::strtod(cell.c_str(), &parsed_end);
        if (parsed_end == cell.c_str() || *parsed_end != '\0')
          throw ParseError("csv: malformed number '" + cell + "'",
                           static_cast<long long>(cell_start));
        if (!std::isfinite(value))
          throw ParseError("csv: non-finite value",
                           static_cast<long long>(cell_start));
        row.push_back(value);
        if (cell_end == effective_end) break;
        cell_start = cell_end + 1;
      }
      if (!rows.empty() && row.size() != rows.front().size())
        throw ParseError("csv: ragged row (" + std::to_string(row.size()) +
                             " cells, expected " +
                             std::to_string(rows.front().size()) + ")",
                         static_cast<long long>(line_start));
      rows.push_back(std::move(row));
    }
    line_start = line_end + 1;
  }
  if (rows.empty()) throw ParseError("csv: no data rows", 0);
  Matrix m(static_cast<Index>(rows.size()),
           static_cast<Index>(rows.front().size()));
  for (Index i = 0; i < m.rows(); ++i)
    for (Index j = 0; j < m.cols(); ++j)
      m(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
  return m;
}

Matrix load_f64le(const std::string& bytes) {
  if (bytes.size() < 16)
    throw ParseError("f64le: file shorter than 16-byte header",
                     static_cast<long long>(bytes.size()));
  const auto* b = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint64_t rows = read_u64_le(b);
  const std::uint64_t cols = read_u64_le(b + 8);
  if (rows == 0 || cols == 0)
    throw ParseError("f64le: zero dimension in header", 0);
  if (rows > (1u << 24) || cols > (1u << 24))
    throw ParseError("f64le: implausible dimensions in header", 0);
  const std::uint64_t expected = 16 + rows * cols * 8;
  if (bytes.size() != expected)
    throw ParseError("f64le: size is " + std::to_string(bytes.size()) +
                         " bytes, header implies " + std::to_string(expected),
                     16);
  Matrix m(static_cast<Index>(rows), static_cast<Index>(cols));
  std::size_t off = 16;
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i, off += 8) {
      const double v = std::bit_cast<double>(read_u64_le(b + off));
      if (!std::isfinite(v))
        throw ParseError("f64le: non-finite value",
                         static_cast<long long>(off));
      m(i, j) = v;
    }
  return m;
}

Matrix load_idx(const std::string& bytes) {
  if (bytes.size() < 4)
    throw ParseError("idx: file shorter than magic", 0);
  const auto* b = reinterpret_cast<const unsigned char*>(bytes.data());
  const std::uint32_t magic = read_u32_be(b);
  if (magic == 0x00000801u)
    throw ParseError("idx: label file (magic 0x00000801); expected images", 0);
  if (magic != 0x00000803u)
    throw ParseError("idx: bad magic 0x" + std::to_string(magic), 0);
  if (bytes.size() < 16)
    throw ParseError("idx: truncated dimension header",
                     static_cast<long long>(bytes.size()));
  const std::uint64_t count = read_u32_be(b + 4);
  const std::uint64_t rows = read_u32_be(b + 8);
  const std::uint64_t cols = read_u32_be(b + 12);
  if (count == 0 || rows == 0 || cols == 0)
    throw ParseError("idx: zero dimension", 4);
  const std::uint64_t expected = 16 + count * rows * cols;
  if (bytes.size() != expected)
    throw ParseError("idx: size is " + std::to_string(bytes.size()) +
                         " bytes, header implies " + std::to_string(expected),
                     16);
  const Index features = static_cast<Index>(rows * cols);
  Matrix m(features, static_cast<Index>(count));
  std::size_t off = 16;
  for (Index img = 0; img < m.cols(); ++img)
    for (Index f = 0; f < features; ++f, ++off)
      m(f, img) = static_cast<double>(b[off]) / 255.0;
  return m;
}

}  // namespace

Matrix load_matrix_file(const std::filesystem::path& path, FileFormat format) {
  const std::string bytes = read_file_bytes(path);
  switch (format) {
    case FileFormat::kCsv:
      return load_csv(bytes);
    case FileFormat::kF64le:
      return load_f64le(bytes);
    case FileFormat::kIdx:
      return load_idx(bytes);
  }
  throw BadRangeError("load_matrix_file: unreachable format");
}

void save_matrix_f64le(const std::filesystem::path& path, const Matrix& m) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  auto put_u64_le = [&out](std::uint64_t v) {
    unsigned char b[8];
    for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>(v >> (8 * i));
    out.write(reinterpret_cast<const char*>(b), 8);
  };
  put_u64_le(static_cast<std::uint64_t>(m.rows()));
  put_u64_le(static_cast<std::uint64_t>(m.cols()));
  for (Index j = 0; j < m.cols(); ++j)
    for (Index i = 0; i < m.rows(); ++i)
      put_u64_le(std::bit_cast<std::uint64_t>(m(i, j)));
  if (!out) throw IoError("write failed on '" + path.string() + "'");
}

Vector center_columns(Matrix& a) {
  const Vector means = a.rowwise().mean();
  a.colwise() -= means;
  return means;
}

}  // namespace opca
