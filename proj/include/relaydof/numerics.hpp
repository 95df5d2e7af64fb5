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

#pragma once

#include <complex>
#include <cstddef>

#include <Eigen/Dense>

namespace relaydof {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Index = Eigen::Index;

/// Relative singular-value cutoff used by every rank and null-space query.
/// A singular value counts when it exceeds eps * sigma_max * max(rows, cols).
class RankTolerance {
 public:
  constexpr RankTolerance() = default;
  explicit RankTolerance(double relative_epsilon);

  double relative_epsilon() const noexcept { return eps_; }

 private:
  double eps_ = 1e-9;
};

bool all_finite(const ComplexMatrix& a) noexcept;

// Each of the following throws Error(invalid_input) on NaN/Inf entries.
// Empty operands follow the usual conventions (rank 0, full null space).

std::size_t numerical_rank(const ComplexMatrix& a, RankTolerance tol = {});

/// Orthonormal columns spanning {x : a x = 0}.
ComplexMatrix null_space_basis(const ComplexMatrix& a, RankTolerance tol = {});

/// Orthonormal rows spanning {y : y a = 0}.
ComplexMatrix left_null_space_basis(const ComplexMatrix& a,
                                    RankTolerance tol = {});

ComplexMatrix kronecker(const ComplexMatrix& a, const ComplexMatrix& b);

/// Column-stacking vec(A), returned as a single column.
ComplexMatrix vectorize(const ComplexMatrix& a);

/// Inverse of vectorize.
ComplexMatrix unvectorize(const ComplexMatrix& v, Index rows, Index cols);

}  // namespace relaydof
