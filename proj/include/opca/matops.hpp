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
// Dense kernels shared by every estimator in this library.  All matrices are
// column-major doubles (Eigen's default); functions accept arbitrary Eigen
// expressions and return concrete matrices.

#ifndef OPCA_MATOPS_HPP
#define OPCA_MATOPS_HPP

#include <Eigen/Dense>

#include "opca/types.hpp"

namespace opca {

// Eigen-decomposition of a symmetric matrix, eigenvalues descending and
// eigenvectors in matching column order.
struct SymmetricEig {
  Vector eigenvalues;
  Matrix eigenvectors;
};

// Singular values of a dense matrix, descending.  Exact (Jacobi) at the
// p <= ~40 column counts used here.
template <typename Derived>
Vector singular_values(const Eigen::MatrixBase<Derived>& x) {
  Eigen::JacobiSVD<Matrix> svd(x);
  return svd.singularValues();
}

// Orthonormal basis of span(x) via Householder QR.  Column signs are fixed
// deterministically: the entry of largest magnitude in each column is made
// positive, ties broken toward the lowest row index.  Throws RankDeficient
// when the numerical rank of x is below its column count (smallest singular
// value <= 1e-12 times the largest).
template <typename Derived>
Matrix orthonormalize(const Eigen::MatrixBase<Derived>& x) {
  const Index n = x.rows();
  const Index p = x.cols();
  if (p < 1 || n < p)
    throw RankDeficientError("orthonormalize: need n >= p >= 1, got " +
                             std::to_string(n) + "x" + std::to_string(p));
  Matrix xd = x;
  if (!xd.allFinite())
    throw NonFiniteError("orthonormalize: input has non-finite entries");

  Eigen::HouseholderQR<Matrix> qr(xd);
  // Rank test on the p x p triangular factor; its singular values are those
  // of x, and the Jacobi SVD of a p x p block is cheap.
  Matrix r = qr.matrixQR().topRows(p).template triangularView<Eigen::Upper>();
  Eigen::JacobiSVD<Matrix> svd(r);
  const Vector& sv = svd.singularValues();
  if (sv(p - 1) <= 1e-12 * sv(0))
    throw RankDeficientError("orthonormalize: numerical rank below " +
                             std::to_string(p));

  Matrix q = qr.householderQ() * Matrix::Identity(n, p);
  for (Index j = 0; j < p; ++j) {
    Index imax = 0;
    double amax = -1.0;
    for (Index i = 0; i < n; ++i) {
      const double a = std::abs(q(i, j));
      if (a > amax) {
        amax = a;
        imax = i;
      }
    }
    if (q(imax, j) < 0.0) q.col(j) = -q.col(j);
  }
  return q;
}

// Symmetric eigen-decomposition with descending eigenvalues.  The input is
// symmetrized as (s + s^T)/2 to absorb roundoff asymmetry; a relative
// asymmetry beyond 1e-8 is rejected.
template <typename Derived>
SymmetricEig symmetric_eig(const Eigen::MatrixBase<Derived>& s) {
  if (s.rows() != s.cols())
    throw NotSquareError("symmetric_eig: matrix is " + std::to_string(s.rows()) +
                         "x" + std::to_string(s.cols()));
  Matrix sd = s;
  if (!sd.allFinite())
    throw NonFiniteError("symmetric_eig: input has non-finite entries");
  const double scale = sd.cwiseAbs().maxCoeff();
  if ((sd - sd.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (scale + 1.0))
    throw BadRangeError("symmetric_eig: input is not symmetric");
  sd = 0.5 * (sd + sd.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix> es(sd);
  if (es.info() != Eigen::Success)
    throw NonFiniteError("symmetric_eig: eigensolver failed to converge");
  SymmetricEig out;
  out.eigenvalues = es.eigenvalues().reverse();
  out.eigenvectors = es.eigenvectors().rowwise().reverse();
  return out;
}

// Solves M (x^T x) = b for M, i.e. returns b (x^T x)^{-1}, via a Cholesky
// factorization of the p x p Gram matrix.  The inverse is never formed.
// Throws GramSingular when a Cholesky pivot falls to or below
// 1e-14 * trace(x^T x) / p, the signal the driver uses to trigger the
// rank-restoring correction.
template <typename DX, typename DB>
Matrix gram_solve(const Eigen::MatrixBase<DX>& x,
                  const Eigen::MatrixBase<DB>& b) {
  const Index p = x.cols();
  if (b.cols() != p)
    throw DimensionMismatchError("gram_solve: b has " + std::to_string(b.cols()) +
                                 " cols, expected " + std::to_string(p));
  Matrix gram = x.transpose() * x;
  Eigen::LLT<Matrix> llt(gram);
  const double pivot_floor = 1e-14 * gram.trace() / static_cast<double>(p);
  if (llt.info() != Eigen::Success ||
      llt.matrixLLT().diagonal().minCoeff() <= 0.0 ||
      llt.matrixLLT().diagonal().array().square().minCoeff() <= pivot_floor)
    throw GramSingularError("gram_solve: Gram matrix numerically singular");
  return llt.solve(b.transpose()).transpose();
}

}  // namespace opca

#endif  // OPCA_MATOPS_HPP
