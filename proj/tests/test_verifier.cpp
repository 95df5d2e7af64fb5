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

#include <algorithm>
#include <cmath>

#include <doctest.h>

#include "relaydof/designer.hpp"
#include "relaydof/error.hpp"
#include "relaydof/verifier.hpp"

using namespace relaydof;

namespace {

struct Built {
  ChannelRealization ch;
  TransceiverDesign ds;
};

Built build(int M, int N, int K, std::uint64_t seed) {
  const Strategy s = select_strategy(M, N, K);
  ChannelRealization ch = sample_channel({M, N, K, 0}, seed);
  TransceiverDesign ds = design(ch, s, seed);
  return {std::move(ch), std::move(ds)};
}

double worst(const std::array<double, 6>& r) { return *std::max_element(r.begin(), r.end()); }

}  // namespace

TEST_CASE("designer output verifies on the reference configurations") {
  const Built a = build(14, 10, 2, 1);
  const VerificationReport ra = verify(a.ch, a.ds);
  CHECK(ra.passed);
  CHECK(worst(ra.residuals) <= kResidualThreshold);
  CHECK(ra.ranks == std::array<std::size_t, 3>{12, 12, 12});
  CHECK(ra.self_interference_precancelled);

  const Built b = build(10, 10, 2, 1);
  const VerificationReport rb = verify(b.ch, b.ds);
  CHECK(rb.passed);
  CHECK(rb.ranks == std::array<std::size_t, 3>{8, 8, 8});

  const Built c = build(2, 3, 2, 1);
  CHECK(decodability_ranks(c.ch, c.ds) == std::array<std::size_t, 3>{2, 2, 2});
  CHECK(verify(c.ch, c.ds).passed);
}

TEST_CASE("zero relay precoders neutralize trivially but carry nothing") {
  Built b = build(14, 10, 2, 2);
  for (auto& F : b.ds.F) F.setZero();
  const auto r = neutralization_residuals(b.ch, b.ds);
  for (const double x : r) CHECK(x == 0.0);
  CHECK(decodability_ranks(b.ch, b.ds) == std::array<std::size_t, 3>{0, 0, 0});
  CHECK_FALSE(verify(b.ch, b.ds).passed);
}

TEST_CASE("random relay precoders leave interference") {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    Built b = build(2, 3, 2, seed);
    Rng rng(derive_seed(seed, {99}));
    for (auto& F : b.ds.F) F = complex_gaussian(3, 3, rng);
    CHECK(worst(neutralization_residuals(b.ch, b.ds)) > 0.1);
  }
}

TEST_CASE("single relay designs are measured against path gains") {
  Built b = build(2, 3, 1, 3);
  const VerificationReport r = verify(b.ch, b.ds);
  CHECK(r.passed);
  CHECK(worst(r.residuals) <= kResidualThreshold);
  Rng rng(4);
  b.ds.F[0] = complex_gaussian(3, 3, rng);
  CHECK(worst(neutralization_residuals(b.ch, b.ds)) > 0.1);
}

TEST_CASE("a zeroed precoder column fails verification") {
  Built b = build(14, 10, 2, 3);
  b.ds.U.at(1, 2).col(0).setZero();
  const VerificationReport r = verify(b.ch, b.ds);
  CHECK_FALSE(r.passed);
  CHECK(*std::min_element(r.ranks.begin(), r.ranks.end()) < 12);
}

TEST_CASE("common relay scaling leaves the certificate unchanged") {
  const Built b = build(14, 10, 2, 4);
  const auto base = neutralization_residuals(b.ch, b.ds);
  const auto ranks = decodability_ranks(b.ch, b.ds);
  for (const double gamma : {1e-3, 7.5, 1e4}) {
    TransceiverDesign scaled = b.ds;
    for (auto& F : scaled.F) F *= gamma;
    const auto r = neutralization_residuals(b.ch, scaled);
    for (int i = 0; i < 6; ++i) {
      CHECK(r[i] <= kResidualThreshold);
      CHECK(std::abs(r[i] - base[i]) <= 1e-12);
    }
    CHECK(decodability_ranks(b.ch, scaled) == ranks);
  }
}

TEST_CASE("mode II on the full channel equals the reduced channel through E") {
  const Built b = build(10, 10, 2, 5);
  const ChannelRealization reduced = deactivate_rx_antennas(b.ch, 8);
  for (int j = 0; j < 3; ++j) {
    for (int k = 0; k < 2; ++k) {
      const ComplexMatrix full = b.ch.G(j, k) * b.ds.F[k] * b.ch.H(k, j + 1);
      const ComplexMatrix red = b.ch.G(j, k) * b.ds.F[k].leftCols(8) * reduced.H(k, j + 1);
      CHECK((full - red).norm() <= 1e-12 * full.norm());
    }
  }
}

TEST_CASE("dimension mismatches are rejected") {
  const Built b = build(2, 3, 2, 1);
  const ChannelRealization other = sample_channel({2, 4, 2, 0}, 1);
  try {
    verify(other, b.ds);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::invalid_input);
  }
  TransceiverDesign broken = b.ds;
  broken.F.pop_back();
  CHECK_THROWS_AS(verify(b.ch, broken), Error);
  CHECK_THROWS_AS(verify(deactivate_rx_antennas(b.ch, 2), b.ds), Error);
}

TEST_CASE("rate slope tracks 3d") {
  struct Case {
    int M, N, K;
  };
  for (const Case c : {Case{14, 10, 2}, Case{10, 10, 2}, Case{2, 3, 2}}) {
    const Built b = build(c.M, c.N, c.K, 1);
    const RateTrace t = estimate_rate_slope(b.ch, b.ds, {40.0, 50.0, 60.0});
    CAPTURE(c.M);
    REQUIRE(t.sum_rate_bits.size() == 3);
    CHECK(t.sum_rate_bits[0] < t.sum_rate_bits[1]);
    CHECK(t.sum_rate_bits[1] < t.sum_rate_bits[2]);
    const double target = 3.0 * b.ds.frame.d;
    CHECK(std::abs(t.slope_estimate - target) / target <= 0.05);
  }
}

TEST_CASE("rate slope of the empty design is zero") {
  const Built b = build(2, 2, 2, 1);
  const RateTrace t = estimate_rate_slope(b.ch, b.ds, {40.0, 60.0});
  CHECK(t.slope_estimate == 0.0);
  CHECK(t.sum_rate_bits == std::vector<double>{0.0, 0.0});
}

TEST_CASE("rate slope preconditions") {
  Built b = build(2, 3, 2, 1);
  CHECK_THROWS_AS(estimate_rate_slope(b.ch, b.ds, {40.0}), Error);
  CHECK_THROWS_AS(estimate_rate_slope(b.ch, b.ds, {40.0, 40.0}), Error);
  CHECK_THROWS_AS(estimate_rate_slope(b.ch, b.ds, {40.0, 60.0}, 0.0), Error);
  b.ds.F[0] *= 2.0;  // breaks the neutralization
  try {
    estimate_rate_slope(b.ch, b.ds, {40.0, 60.0});
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::precondition);
  }
}

TEST_CASE("rate is independent of the noise scale up to an SNR shift") {
  // Scaling every noise power by s is the same as lowering P by s.
  const Built b = build(2, 3, 2, 2);
  const RateTrace a = estimate_rate_slope(b.ch, b.ds, {40.0, 50.0}, 10.0);
  const RateTrace c = estimate_rate_slope(b.ch, b.ds, {30.0, 40.0}, 1.0);
  CHECK(a.sum_rate_bits[0] == doctest::Approx(c.sum_rate_bits[0]).epsilon(1e-9));
  CHECK(a.sum_rate_bits[1] == doctest::Approx(c.sum_rate_bits[1]).epsilon(1e-9));
}
