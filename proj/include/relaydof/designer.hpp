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
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <vector>

#include "relaydof/channel.hpp"
#include "relaydof/numerics.hpp"
#include "relaydof/random.hpp"

namespace relaydof {

enum class StrategyKind { alignment_i, alignment_ii, no_alignment };

std::string_view to_string(StrategyKind k) noexcept;
StrategyKind strategy_kind_from_string(std::string_view s);

struct Disablement {
  int m_star = 0;  ///< retained user antennas (ceil(M*) when extending)
  int n_star = 0;  ///< retained relay antennas

  friend bool operator==(const Disablement&, const Disablement&) = default;
};

/// How a design is built. d, d_prime and n_prime are counted in the design
/// frame: the extended channel when an extension is attached, otherwise the
/// (possibly disabled) native channel.
struct Strategy {
  StrategyKind kind = StrategyKind::alignment_i;
  int d = 0;
  int d_prime = 0;
  int n_prime = 0;  ///< active receive antennas per relay in the design frame
  std::optional<Disablement> disablement;
  std::optional<ExtensionPlan> extension;

  /// Streams per message per channel use (d / L).
  double streams_per_use() const noexcept;
};

struct StrategyOptions {
  bool allow_extension = false;
  int max_extension = 12;
};

/// Largest d for which `kind` is structurally feasible at (M, N, K); 0 when
/// none is. n_prime receives N' for alignment_ii.
int max_feasible_streams(StrategyKind kind, int M, int N, int K,
                         int* n_prime = nullptr);

/// Whether `kind` with d streams satisfies every dimension condition.
bool is_feasible(StrategyKind kind, int M, int N, int K, int d);

/// Picks the strategy with the most streams per message, preferring native
/// antenna counts, then the fewest disabled antennas. K = 1 only considers
/// alignment_i. Returns d = 0 when no strategy supports a stream.
Strategy select_strategy(int M, int N, int K, StrategyOptions options = {});

/// Throws Error(infeasible_alignment / infeasible_dimension) unless the
/// strategy's design-frame dimensions satisfy its kind's conditions.
void check_strategy(const SystemConfig& native, const Strategy& s);

/// Channel the design operates on and is verified against: the native
/// channel, or the extension of its disabled restriction.
ChannelRealization design_frame_channel(const ChannelRealization& ch,
                                        const Strategy& s);

/// U_{j,j'} for j' = j+1 (slot 2j) and j' = j-1 (slot 2j+1).
struct UserPrecoders {
  std::array<ComplexMatrix, 6> blocks;

  static constexpr int slot(int j, int jp) noexcept {
    return 2 * user(j) + (user(jp) == user(j + 1) ? 0 : 1);
  }
  ComplexMatrix& at(int j, int jp) { return blocks[slot(j, jp)]; }
  const ComplexMatrix& at(int j, int jp) const { return blocks[slot(j, jp)]; }
};

/// Supplies the free coefficients of the null-space combinations. The default
/// draws complex Gaussians; tests substitute degenerate sources.
using CoefficientSource =
    std::function<ComplexMatrix(Index rows, Index cols, int attempt, Rng& rng)>;

struct DesignOptions {
  int max_attempts = 20;
  RankTolerance tolerance{};
  CoefficientSource coefficients;  ///< empty means complex Gaussian
};

struct AlignmentResult {
  UserPrecoders U;
  std::array<Index, 3> null_dims{};  ///< null dimension of each stacked K_j
  int retries = 0;
};

/// Null space of [H_{k,j}, -H_{k,j+1}] stacked over k, split into the aligned
/// pair U_{j,j+1}, U_{j+1,j}. Works on whatever uplink rows are active.
AlignmentResult align_uplink_I(const ChannelRealization& ch, int d,
                               std::uint64_t seed, const DesignOptions& opts = {});

struct ReducedAlignment {
  int n_prime = 0;
  ChannelRealization reduced;
  AlignmentResult alignment;
};

/// Deactivates down to N' = (2M - d)/K receive antennas, then aligns.
ReducedAlignment align_uplink_II(const ChannelRealization& ch, int d,
                                 std::uint64_t seed, const DesignOptions& opts = {});

struct PrecoderSplit {
  ComplexMatrix left;   ///< first d' columns
  ComplexMatrix right;  ///< remaining d - d' columns
};

PrecoderSplit split_precoders(const ComplexMatrix& U, int d_prime);

enum class RelayMode { I, II };

struct RelaySolution {
  std::vector<ComplexMatrix> F;  ///< N x N, trailing inactive columns zero
  Index system_rows = 0;
  Index system_cols = 0;
  Index null_dim = 0;
  int retries = 0;
};

/// Solves for relay precoders that neutralize the U^L part of every
/// interfering pair, certifying the full-rank condition at each user. `ch`
/// carries the active uplink rows (N' rows in mode II).
RelaySolution solve_relay_precoders(const ChannelRealization& ch,
                                    const UserPrecoders& U, int d_prime,
                                    RelayMode mode, std::uint64_t seed,
                                    const DesignOptions& opts = {});

/// V_j: 2d orthonormal rows nulling the residual U^R interference.
std::array<ComplexMatrix, 3> build_postprocessors(const ChannelRealization& ch,
                                                  const std::vector<ComplexMatrix>& F,
                                                  const UserPrecoders& U, int d_prime,
                                                  std::uint64_t seed,
                                                  const DesignOptions& opts = {});

struct TransceiverDesign {
  Strategy strategy;
  SystemConfig frame;  ///< dimensions the processors act on (d = streams)
  UserPrecoders U;
  std::vector<ComplexMatrix> F;
  std::array<ComplexMatrix, 3> V;
  int precoder_split = 0;
  int retries = 0;
};

/// V = I, U_{j,j+1} = [I; 0], U_{j,j-1} = [0; I] with d = M/2, relays solve
/// the six-block neutralization system.
TransceiverDesign design_no_alignment(const ChannelRealization& ch,
                                      std::uint64_t seed,
                                      const DesignOptions& opts = {});

/// Full pipeline. With a disablement only, processors are embedded back into
/// the native dimensions; with an extension they stay in the extended frame
/// (see design_frame_channel).
TransceiverDesign design(const ChannelRealization& ch, const Strategy& s,
                         std::uint64_t seed, const DesignOptions& opts = {});

/// W_{k,j} = [H_{k,j+1} U_{j+1,j}, H_{k,j-1} U_{j-1,j}].
ComplexMatrix effective_signal(const ChannelRealization& ch, const UserPrecoders& U,
                               int k, int j);

}  // namespace relaydof
