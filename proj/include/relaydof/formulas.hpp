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

#include <string_view>
#include <vector>

namespace relaydof {

struct DofPoint {
  double ratio = 0.0;
  double d_sum = 0.0;
};

struct CurveSample {
  double ratio = 0.0;
  double achievable = 0.0;
  double symmetric = 0.0;
  double upper = 0.0;
};

enum class Region { R1_full_user, R2_max_branch, R3_alignment_I, R4_full_relay };

std::string_view to_string(Region r) noexcept;

/// Region of M/N together with its interval [lower, upper).
struct RegionLabel {
  Region region = Region::R1_full_user;
  double lower = 0.0;
  double upper = 0.0;
};

/// min{3M/2, KN}. M may be real (ratio sweeps).
double upper_bound_dof(double M, double N, double K);

/// Achievable total DoF: min{3M/2, max{M + 5MN/(9M+N), sqrt(3K)N/2},
/// M + KN^2/(3M), KN}; 0 when M = 0.
double theorem1_dof(double M, double N, double K);

/// Region boundaries in terms of x = M/N, for K >= 2.
double region_boundary_full_user(int K);     // max{sqrt(3K)/3, 1}
double region_boundary_alignment_I(int K);   // (9K + sqrt(81K^2 + 60K))/30
double region_boundary_full_relay(int K);    // (3K + sqrt(9K^2 - 12K))/6

/// Classifies M/N. Integer inputs are compared in exact squared form.
RegionLabel corollary2_region(int M, int N, int K);
RegionLabel corollary2_region(double ratio, int K);

/// N * max over S_K of the piecewise-linear g function.
double symmetric_design_bound(double M, double N, int K);

/// theorem1_dof / (KN).
double normalized_asymptotic_dof(double M, double N, double K);

/// Smallest K >= 1 with theorem1_dof(M, N, K) >= target.
int min_relays(double M, double N, double target);

std::vector<CurveSample> sweep_curves(int K, double N,
                                      const std::vector<double>& ratio_grid);

}  // namespace relaydof
