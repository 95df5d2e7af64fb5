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

#include <cstdint>
#include <vector>

#include "relaydof/numerics.hpp"

namespace relaydof {

/// Antenna configuration of the three-user, K-relay Y channel plus the
/// per-message stream target d.
struct SystemConfig {
  int M = 0;  ///< antennas per user
  int N = 0;  ///< antennas per relay
  int K = 0;  ///< number of relays
  int d = 0;  ///< streams per message

  /// Throws Error(invalid_parameter) unless M, N, K >= 1 and 0 <= d <= M.
  void validate() const;

  friend bool operator==(const SystemConfig&, const SystemConfig&) = default;
};

/// Users are indexed modulo 3 throughout.
constexpr int user(int j) noexcept { return ((j % 3) + 3) % 3; }

/// Uplink blocks H(k, j) (relay k <- user j) and downlink blocks G(j, k)
/// (user j <- relay k). Immutable once built.
///
/// The uplink row count is the number of active receive antennas, which is N
/// unless receive antennas were deactivated.
class ChannelRealization {
 public:
  ChannelRealization(SystemConfig config, std::uint64_t seed,
                     std::vector<ComplexMatrix> uplink,
                     std::vector<ComplexMatrix> downlink);

  const SystemConfig& config() const noexcept { return config_; }
  std::uint64_t seed() const noexcept { return seed_; }
  int active_rx() const noexcept { return active_rx_; }

  const ComplexMatrix& H(int k, int j) const { return uplink_.at(k * 3 + user(j)); }
  const ComplexMatrix& G(int j, int k) const {
    return downlink_.at(user(j) * config_.K + k);
  }

  /// Blocks in storage order: uplink (k, j) k-major, downlink (j, k) j-major.
  const std::vector<ComplexMatrix>& uplink() const noexcept { return uplink_; }
  const std::vector<ComplexMatrix>& downlink() const noexcept { return downlink_; }

  /// Same matrices, different stream target recorded in the config.
  ChannelRealization with_streams(int d) const;

 private:
  SystemConfig config_;
  std::uint64_t seed_;
  int active_rx_;
  std::vector<ComplexMatrix> uplink_;
  std::vector<ComplexMatrix> downlink_;
};

/// Exact positive rational, kept in lowest terms.
struct Rational {
  long num = 0;
  long den = 1;

  static Rational make(long num, long den);
  double value() const noexcept { return static_cast<double>(num) / den; }
  long floor() const noexcept;
  long ceil() const noexcept;

  friend bool operator==(const Rational&, const Rational&) = default;
};

/// L channel uses stacked block-diagonally; use l keeps block_col_sizes[l]
/// user antennas. The first L*(M* - floor(M*)) uses get ceil(M*) columns.
struct ExtensionPlan {
  int L = 1;
  Rational m_star{1, 1};
  std::vector<int> block_col_sizes;

  /// Builds the column-size pattern. Throws unless L >= 1, M* > 0 and L*M* is
  /// an integer.
  static ExtensionPlan make(int L, Rational m_star);

  /// Checks the invariants of a plan that may have been built by hand.
  void validate() const;

  int total_columns() const noexcept;
};

/// E = [I_{N'}, 0] selecting the first N' of N receive antennas.
struct SelectionMatrix {
  int n_prime = 0;
  int n = 0;

  ComplexMatrix matrix() const;
};

ChannelRealization sample_channel(const SystemConfig& config, std::uint64_t seed);

/// Keeps the first N' rows of every uplink block; downlink is untouched.
ChannelRealization deactivate_rx_antennas(const ChannelRealization& ch,
                                          int n_prime);

SystemConfig disable_antennas(const SystemConfig& config, int m_star, int n_star);

/// Leading M* user antennas and N* relay antennas of every block.
ChannelRealization restrict_channel(const ChannelRealization& ch, int m_star,
                                    int n_star);

/// Block-diagonal L-use channel. Use 0 reuses the leading columns of the given
/// realization; later uses are fresh draws derived from its seed.
ChannelRealization extend_channel(const ChannelRealization& ch,
                                  const ExtensionPlan& plan);

}  // namespace relaydof
