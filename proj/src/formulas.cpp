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

#include "relaydof/formulas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relaydof/error.hpp"
#include "relaydof/parallel.hpp"

namespace relaydof {

namespace {

constexpr int kMaxRelays = 1'000'000;
constexpr double kTargetSlack = 1e-12;

void require_nonnegative(double M, double N, double K) {
  if (!(M >= 0.0) || !(N >= 0.0) || !(K >= 0.0) || !std::isfinite(M) ||
      !std::isfinite(N) || !std::isfinite(K)) {
    throw Error(ErrorCode::invalid_parameter, "M, N, K must be finite and nonnegative");
  }
}

void require_multi_relay(int K) {
  if (K < 2) {
    throw Error(ErrorCode::unsupported_region,
                "region classification needs K >= 2 (K=1 is min{3M/2, N})");
  }
}

// x >= b1, b2, b3 tested in squared form; valid for real x = M/N.
bool at_or_above_full_user(double x, double K) { return x >= 1.0 && 3.0 * x * x >= K; }
bool at_or_above_alignment_I(double x, double K) {
  return 15.0 * x * x - 9.0 * K * x - K >= 0.0;
}
bool at_or_above_full_relay(double x, double K) {
  return 2.0 * x >= K && 3.0 * x * x - 3.0 * K * x + K >= 0.0;
}

RegionLabel label(Region r, int K) {
  switch (r) {
    case Region::R1_full_user:
      return {r, 0.0, region_boundary_full_user(K)};
    case Region::R2_max_branch:
      return {r, region_boundary_full_user(K), region_boundary_alignment_I(K)};
    case Region::R3_alignment_I:
      return {r, region_boundary_alignment_I(K), region_boundary_full_relay(K)};
    case Region::R4_full_relay:
      break;
  }
  return {Region::R4_full_relay, region_boundary_full_relay(K), INFINITY};
}

}  // namespace

std::string_view to_string(Region r) noexcept {
  switch (r) {
    case Region::R1_full_user: return "R1_full_user";
    case Region::R2_max_branch: return "R2_max_branch";
    case Region::R3_alignment_I: return "R3_alignment_I";
    case Region::R4_full_relay: return "R4_full_relay";
  }
  return "unknown";
}

double upper_bound_dof(double M, double N, double K) {
  require_nonnegative(M, N, K);
  return std::min(1.5 * M, K * N);
}

double theorem1_dof(double M, double N, double K) {
  require_nonnegative(M, N, K);
  if (M == 0.0) return 0.0;
  const double branch = std::max(M + 5.0 * M * N / (9.0 * M + N),
                                 std::sqrt(3.0 * K) * N / 2.0);
  const double aligned = M + K * N * N / (3.0 * M);
  return std::min({1.5 * M, branch, aligned, K * N});
}

double region_boundary_full_user(int K) {
  return std::max(std::sqrt(3.0 * K) / 3.0, 1.0);
}

double region_boundary_alignment_I(int K) {
  const double k = K;
  return (9.0 * k + std::sqrt(81.0 * k * k + 60.0 * k)) / 30.0;
}

double region_boundary_full_relay(int K) {
  const double k = K;
  return (3.0 * k + std::sqrt(9.0 * k * k - 12.0 * k)) / 6.0;
}

RegionLabel corollary2_region(int M, int N, int K) {
  require_multi_relay(K);
  if (M < 0 || N < 1) {
    throw Error(ErrorCode::invalid_parameter, "need M >= 0 and N >= 1");
  }
  const long long m = M, n = N, k = K;
  if (2 * m >= k * n && 3 * m * m - 3 * k * m * n + k * n * n >= 0) {
    return label(Region::R4_full_relay, K);
  }
  if (15 * m * m - 9 * k * m * n - k * n * n >= 0) return label(Region::R3_alignment_I, K);
  if (m >= n && 3 * m * m >= k * n * n) return label(Region::R2_max_branch, K);
  return label(Region::R1_full_user, K);
}

RegionLabel corollary2_region(double ratio, int K) {
  require_multi_relay(K);
  if (!(ratio >= 0.0) || !std::isfinite(ratio)) {
    throw Error(ErrorCode::invalid_parameter, "ratio must be finite and nonnegative");
  }
  const double k = K;
  if (at_or_above_full_relay(ratio, k)) return label(Region::R4_full_relay, K);
  if (at_or_above_alignment_I(ratio, k)) return label(Region::R3_alignment_I, K);
  if (at_or_above_full_user(ratio, k)) return label(Region::R2_max_branch, K);
  return label(Region::R1_full_user, K);
}

double symmetric_design_bound(double M, double N, int K) {
  require_nonnegative(M, N, K);
  if (K < 1) throw Error(ErrorCode::invalid_parameter, "K must be positive");
  if (N == 0.0) return 0.0;
  const double x = M / N;
  auto g = [x](double a, double b) { return x < a ? b * x / a : b; };
  double best = g(2.0 / 3.0, 1.0);
  for (int k = 2; k <= K; ++k) {
    const double r = std::sqrt(6.0 * k);
    best = std::max(best, g((6.0 * k + r) / 12.0, r / 2.0));
  }
  return N * best;
}

double normalized_asymptotic_dof(double M, double N, double K) {
  require_nonnegative(M, N, K);
  if (K * N == 0.0) return 0.0;
  return theorem1_dof(M, N, K) / (K * N);
}

int min_relays(double M, double N, double target) {
  require_nonnegative(M, N, 0.0);
  if (!std::isfinite(target)) {
    throw Error(ErrorCode::invalid_parameter, "target must be finite");
  }
  if (target > 1.5 * M * (1.0 + kTargetSlack)) {
    throw Error(ErrorCode::unreachable_target,
                "target " + std::to_string(target) + " exceeds 3M/2 = " +
                    std::to_string(1.5 * M));
  }
  if (target <= 0.0) return 1;
  const double need = target * (1.0 - kTargetSlack);
  for (int K = 1; K <= kMaxRelays; ++K) {
    if (theorem1_dof(M, N, K) >= need) return K;
  }
  throw Error(ErrorCode::unreachable_target,
              "target not reached within " + std::to_string(kMaxRelays) + " relays");
}

std::vector<CurveSample> sweep_curves(int K, double N,
                                      const std::vector<double>& ratio_grid) {
  for (const double r : ratio_grid) {
    if (!(r >= 0.0) || !std::isfinite(r)) {
      throw Error(ErrorCode::invalid_parameter, "grid ratios must be finite and nonnegative");
    }
  }
  std::vector<CurveSample> out(ratio_grid.size());
  parallel_for(ratio_grid.size(), [&](std::size_t i) {
    const double M = ratio_grid[i] * N;
    out[i] = CurveSample{ratio_grid[i], theorem1_dof(M, N, K),
                         symmetric_design_bound(M, N, K), upper_bound_dof(M, N, K)};
  });
  return out;
}

}  // namespace relaydof
