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

#include "relaydof/channel.hpp"

#include <algorithm>
#include <numeric>
#include <string>
#include <utility>

#include "relaydof/error.hpp"
#include "relaydof/random.hpp"

namespace relaydof {

namespace {

// Stream tags for derive_seed.
constexpr std::uint64_t kUplinkTag = 1;
constexpr std::uint64_t kDownlinkTag = 2;
constexpr std::uint64_t kExtendedUplinkTag = 3;
constexpr std::uint64_t kExtendedDownlinkTag = 4;

std::string dims(Index r, Index c) {
  return std::to_string(r) + "x" + std::to_string(c);
}

}  // namespace

void SystemConfig::validate() const {
  if (M < 1 || N < 1 || K < 1) {
    throw Error(ErrorCode::invalid_parameter,
                "M, N, K must be positive (got M=" + std::to_string(M) +
                    ", N=" + std::to_string(N) + ", K=" + std::to_string(K) + ")");
  }
  if (d < 0 || d > M) {
    throw Error(ErrorCode::invalid_parameter,
                "d must lie in [0, M] (got d=" + std::to_string(d) + ")");
  }
}

ChannelRealization::ChannelRealization(SystemConfig config, std::uint64_t seed,
                                       std::vector<ComplexMatrix> uplink,
                                       std::vector<ComplexMatrix> downlink)
    : config_(config),
      seed_(seed),
      active_rx_(config.N),
      uplink_(std::move(uplink)),
      downlink_(std::move(downlink)) {
  config_.validate();
  const auto blocks = static_cast<std::size_t>(3 * config_.K);
  if (uplink_.size() != blocks || downlink_.size() != blocks) {
    throw Error(ErrorCode::invalid_input,
                "expected " + std::to_string(blocks) + " uplink and downlink blocks");
  }
  active_rx_ = static_cast<int>(uplink_.front().rows());
  if (active_rx_ < 1 || active_rx_ > config_.N) {
    throw Error(ErrorCode::invalid_input, "uplink row count out of range");
  }
  for (const auto& h : uplink_) {
    if (h.rows() != active_rx_ || h.cols() != config_.M) {
      throw Error(ErrorCode::invalid_input,
                  "uplink block is " + dims(h.rows(), h.cols()) + ", expected " +
                      dims(active_rx_, config_.M));
    }
    if (!all_finite(h)) throw Error(ErrorCode::invalid_input, "non-finite uplink entry");
  }
  for (const auto& g : downlink_) {
    if (g.rows() != config_.M || g.cols() != config_.N) {
      throw Error(ErrorCode::invalid_input,
                  "downlink block is " + dims(g.rows(), g.cols()) + ", expected " +
                      dims(config_.M, config_.N));
    }
    if (!all_finite(g)) throw Error(ErrorCode::invalid_input, "non-finite downlink entry");
  }
}

ChannelRealization ChannelRealization::with_streams(int d) const {
  SystemConfig c = config_;
  c.d = d;
  return ChannelRealization(c, seed_, uplink_, downlink_);
}

Rational Rational::make(long num, long den) {
  if (den <= 0 || num < 0) {
    throw Error(ErrorCode::invalid_parameter,
                "rational must have positive denominator and nonnegative numerator");
  }
  const long g = std::gcd(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  return Rational{num, den};
}

long Rational::floor() const noexcept { return num / den; }

long Rational::ceil() const noexcept { return (num + den - 1) / den; }

ExtensionPlan ExtensionPlan::make(int L, Rational m_star) {
  if (L < 1 || m_star.den < 1 || m_star.num < 1) {
    throw Error(ErrorCode::invalid_parameter, "extension needs L >= 1 and M* > 0");
  }
  m_star = Rational::make(m_star.num, m_star.den);
  if (static_cast<long>(L) * m_star.num % m_star.den != 0) {
    throw Error(ErrorCode::invalid_parameter, "extension needs integral L*M*");
  }
  ExtensionPlan plan;
  plan.L = L;
  plan.m_star = m_star;
  const long lo = m_star.floor();
  const long total = static_cast<long>(L) * m_star.num / m_star.den;
  const long big = total - static_cast<long>(L) * lo;  // uses carrying ceil(M*)
  for (int l = 0; l < L; ++l) {
    plan.block_col_sizes.push_back(static_cast<int>(l < big ? lo + 1 : lo));
  }
  plan.validate();
  return plan;
}

void ExtensionPlan::validate() const {
  if (L < 1 || m_star.den < 1 || m_star.num < 1) {
    throw Error(ErrorCode::invalid_parameter, "extension plan: bad L or M*");
  }
  if (static_cast<long>(L) * m_star.num % m_star.den != 0) {
    throw Error(ErrorCode::invalid_parameter, "extension plan: L*M* not integral");
  }
  if (block_col_sizes.size() != static_cast<std::size_t>(L)) {
    throw Error(ErrorCode::invalid_parameter, "extension plan: need L block sizes");
  }
  const long lo = m_star.floor();
  const long total = static_cast<long>(L) * m_star.num / m_star.den;
  const long big = total - static_cast<long>(L) * lo;
  if (lo < 1) {
    throw Error(ErrorCode::invalid_parameter,
                "extension plan: M* below 1 leaves empty channel uses");
  }
  for (int l = 0; l < L; ++l) {
    const long want = l < big ? lo + 1 : lo;
    if (block_col_sizes[l] != want) {
      throw Error(ErrorCode::invalid_parameter,
                  "extension plan: block " + std::to_string(l) + " has " +
                      std::to_string(block_col_sizes[l]) + " columns, expected " +
                      std::to_string(want));
    }
  }
}

int ExtensionPlan::total_columns() const noexcept {
  return std::accumulate(block_col_sizes.begin(), block_col_sizes.end(), 0);
}

ComplexMatrix SelectionMatrix::matrix() const {
  if (n_prime < 1 || n_prime > n) {
    throw Error(ErrorCode::invalid_parameter, "selection needs 0 < N' <= N");
  }
  return ComplexMatrix::Identity(n_prime, n);
}

ChannelRealization sample_channel(const SystemConfig& config, std::uint64_t seed) {
  config.validate();
  const int K = config.K;
  std::vector<ComplexMatrix> up(3 * K), down(3 * K);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < 3; ++j) {
      Rng rng_h(derive_seed(seed, {kUplinkTag, static_cast<std::uint64_t>(k),
                                   static_cast<std::uint64_t>(j)}));
      up[k * 3 + j] = complex_gaussian(config.N, config.M, rng_h);
      Rng rng_g(derive_seed(seed, {kDownlinkTag, static_cast<std::uint64_t>(j),
                                   static_cast<std::uint64_t>(k)}));
      down[j * K + k] = complex_gaussian(config.M, config.N, rng_g);
    }
  }
  return ChannelRealization(config, seed, std::move(up), std::move(down));
}

ChannelRealization deactivate_rx_antennas(const ChannelRealization& ch,
                                          int n_prime) {
  if (n_prime < 1 || n_prime > ch.active_rx()) {
    throw Error(ErrorCode::invalid_parameter,
                "N' must lie in [1, " + std::to_string(ch.active_rx()) + "] (got " +
                    std::to_string(n_prime) + ")");
  }
  std::vector<ComplexMatrix> up;
  up.reserve(ch.uplink().size());
  for (const auto& h : ch.uplink()) up.emplace_back(h.topRows(n_prime));
  return ChannelRealization(ch.config(), ch.seed(), std::move(up), ch.downlink());
}

SystemConfig disable_antennas(const SystemConfig& config, int m_star, int n_star) {
  config.validate();
  if (m_star < 1 || m_star > config.M || n_star < 1 || n_star > config.N) {
    throw Error(ErrorCode::invalid_parameter,
                "disablement target (" + std::to_string(m_star) + ", " +
                    std::to_string(n_star) + ") outside (" + std::to_string(config.M) +
                    ", " + std::to_string(config.N) + ")");
  }
  if (config.d > m_star) {
    throw Error(ErrorCode::invalid_parameter, "d exceeds remaining user antennas");
  }
  SystemConfig out = config;
  out.M = m_star;
  out.N = n_star;
  return out;
}

ChannelRealization restrict_channel(const ChannelRealization& ch, int m_star,
                                    int n_star) {
  if (ch.active_rx() != ch.config().N) {
    throw Error(ErrorCode::invalid_input,
                "restrict the channel before deactivating receive antennas");
  }
  SystemConfig c = ch.config();
  c.d = std::min(c.d, m_star);
  c = disable_antennas(c, m_star, n_star);
  std::vector<ComplexMatrix> up, down;
  for (const auto& h : ch.uplink()) up.emplace_back(h.topLeftCorner(n_star, m_star));
  for (const auto& g : ch.downlink()) down.emplace_back(g.topLeftCorner(m_star, n_star));
  return ChannelRealization(c, ch.seed(), std::move(up), std::move(down));
}

ChannelRealization extend_channel(const ChannelRealization& ch,
                                  const ExtensionPlan& plan) {
  plan.validate();
  const SystemConfig& c = ch.config();
  if (ch.active_rx() != c.N) {
    throw Error(ErrorCode::invalid_input,
                "extend the channel before deactivating receive antennas");
  }
  if (plan.block_col_sizes.front() > c.M) {
    throw Error(ErrorCode::invalid_parameter,
                "extension needs ceil(M*) <= M");
  }
  const int L = plan.L;
  const int K = c.K;
  const int me = plan.total_columns();
  const int ne = L * c.N;

  std::vector<ComplexMatrix> up(3 * K), down(3 * K);
  for (int k = 0; k < K; ++k) {
    for (int j = 0; j < 3; ++j) {
      ComplexMatrix h = ComplexMatrix::Zero(ne, me);
      ComplexMatrix g = ComplexMatrix::Zero(me, ne);
      int col = 0;
      for (int l = 0; l < L; ++l) {
        const int m = plan.block_col_sizes[l];
        if (l == 0) {
          h.block(0, 0, c.N, m) = ch.H(k, j).leftCols(m);
          g.block(0, 0, m, c.N) = ch.G(j, k).topRows(m);
        } else {
          const auto ul = static_cast<std::uint64_t>(l);
          const auto uk = static_cast<std::uint64_t>(k);
          const auto uj = static_cast<std::uint64_t>(j);
          Rng rng_h(derive_seed(ch.seed(), {kExtendedUplinkTag, uk, uj, ul}));
          h.block(l * c.N, col, c.N, m) = complex_gaussian(c.N, m, rng_h);
          Rng rng_g(derive_seed(ch.seed(), {kExtendedDownlinkTag, uj, uk, ul}));
          g.block(col, l * c.N, m, c.N) = complex_gaussian(m, c.N, rng_g);
        }
        col += m;
      }
      up[k * 3 + j] = std::move(h);
      down[j * K + k] = std::move(g);
    }
  }
  SystemConfig ce{me, ne, K, 0};
  return ChannelRealization(ce, ch.seed(), std::move(up), std::move(down));
}

}  // namespace relaydof
