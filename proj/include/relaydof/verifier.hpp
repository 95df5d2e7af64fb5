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

#include <array>
#include <cstddef>
#include <vector>

#include "relaydof/channel.hpp"
#include "relaydof/designer.hpp"

namespace relaydof {

/// Relative residual above which a neutralization equation counts as broken.
inline constexpr double kResidualThreshold = 1e-8;

struct VerificationReport {
  /// Order: receiver 0 (pair 1->2 via H_{k,1}, pair 2->1 via H_{k,2}),
  /// receiver 1 (2->0, 0->2), receiver 2 (0->1, 1->0).
  std::array<double, 6> residuals{};
  std::array<std::size_t, 3> ranks{};
  /// Self-interference is assumed cancelled at the receiver, never checked.
  bool self_interference_precancelled = true;
  bool passed = false;
  int retries_used = 0;
};

struct RateTrace {
  std::vector<double> snr_db;
  std::vector<double> sum_rate_bits;
  double slope_estimate = 0.0;
};

/// Each entry is ||sum_k V G F H U|| / sum_k ||V G F H U|| (0/0 -> 0).
/// `ch` is the channel the design's processors act on (design_frame_channel).
std::array<double, 6> neutralization_residuals(const ChannelRealization& ch,
                                               const TransceiverDesign& design);

/// numerical_rank(sum_k V_j G_{j,k} F_k W_{k,j}) for each user.
std::array<std::size_t, 3> decodability_ranks(const ChannelRealization& ch,
                                              const TransceiverDesign& design);

VerificationReport verify(const ChannelRealization& ch, const TransceiverDesign& design);

/// Sum rate of the six messages at each SNR and the high-SNR slope between
/// the first and last point. Throws Error(precondition) unless the design
/// verifies on `ch`.
RateTrace estimate_rate_slope(const ChannelRealization& ch,
                              const TransceiverDesign& design,
                              const std::vector<double>& snr_db,
                              double noise_power = 1.0);

}  // namespace relaydof
