// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "relaydof/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "relaydof/error.hpp"

namespace relaydof {

namespace {

void require_finite(const ComplexMatrix& a, const char* what) {
  if (!all_finite(a)) {
    throw Error(ErrorCode::invalid_input,
                std::string(what) + ": matrix has non-finite entries");
  }
}

Index rank_from_singular_values(const Eigen::VectorXd& sv, Index rows,
                                Index cols, RankTolerance tol) {
  if (sv.size() == 0) return 0;
  const double sigma_max = sv(0);
  if (sigma_max == 0.0) return 0;
  const double cutoff = tol.relative_epsilon() * sigma_max *
                        static_cast<double>(std::max(rows, cols));
  Index r = 0;
  // Eigen returns singular values in decreasing order.
  while (r < sv.size() && sv(r) > cutoff) ++r;
  return r;
}

}  // namespace

RankTolerance::RankTolerance(double relative_epsilon) : eps_(relative_epsilon) {
  if (!(relative_epsilon > 0.0 && relative_epsilon < 1.0)) {
    throw Error(ErrorCode::invalid_parameter,
                "rank tolerance must lie in (0, 1)");
  }
}

bool all_finite(const ComplexMatrix& a) noexcept {
  for (Index c = 0; c < a.cols(); ++c) {
    for (Index r = 0; r < a.rows(); ++r) {
      const Complex z = a(r, c);
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    }
  }
  return true;
}

std::size_t numerical_rank(const ComplexMatrix& a, RankTolerance tol) {
  require_finite(a, "numerical_rank");
  if (a.size() == 0) return 0;
  Eigen::BDCSVD<ComplexMatrix> svd(a);
  return static_cast<std::size_t>(
      rank_from_singular_values(svd.singularValues(), a.rows(), a.cols(), tol));
}

ComplexMatrix null_space_basis(const ComplexMatrix& a, RankTolerance tol) {
  require_finite(a, "null_space_basis");
  const Index n = a.cols();
  if (a.rows() == 0 || n == 0) return ComplexMatrix::Identity(n, n);
  Eigen::BDCSVD<ComplexMatrix> svd(a, Eigen::ComputeFullV);
  const Index r =
      rank_from_singular_values(svd.singularValues(), a.rows(), n, tol);
  return svd.matrixV().rightCols(n - r);
}

ComplexMatrix left_null_space_basis(const ComplexMatrix& a, RankTolerance tol) {
  require_finite(a, "left_null_space_basis");
  return null_space_basis(a.adjoint(), tol).adjoint();
}

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b) {
  const Index br = b.rows();
  const Index bc = b.cols();
  ComplexMatrix out(a.rows() * br, a.cols() * bc);
  for (Index j = 0; j < a.cols(); ++j) {
    for (Index i = 0; i < a.rows(); ++i) {
      out.block(i * br, j * bc, br, bc) = a(i, j) * b;
    }
  }
  return out;
}

ComplexMatrix vectorize(const ComplexMatrix& a) {
  // Storage is column-major, so the raw buffer already is vec(A).
  return Eigen::Map<const ComplexMatrix>(a.data(), a.size(), 1);
}

ComplexMatrix unvectorize(const ComplexMatrix& v, Index rows, Index cols) {
  if (v.cols() != 1 || v.rows() != rows * cols) {
    throw Error(ErrorCode::invalid_input,
                "unvectorize: length does not match requested shape");
  }
  return Eigen::Map<const ComplexMatrix>(v.data(), rows, cols);
}

}  // namespace relaydof
