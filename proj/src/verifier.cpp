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

#include "relaydof/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "relaydof/error.hpp"

namespace relaydof {

namespace {

std::string shape(const ComplexMatrix& a) {
  return std::to_string(a.rows()) + "x" + std::to_string(a.cols());
}

void check_dimensions(const ChannelRealization& ch, const TransceiverDesign& design) {
  const SystemConfig& c = ch.config();
  const SystemConfig& f = design.frame;
  if (c.M != f.M || c.N != f.N || c.K != f.K) {
    throw Error(ErrorCode::invalid_input, "design frame does not match the channel");
  }
  if (ch.active_rx() != c.N) {
    throw Error(ErrorCode::invalid_input, "verification needs the full uplink channel");
  }
  const Index d = f.d;
  for (const auto& u : design.U.blocks) {
    if (u.rows() != c.M || u.cols() != d) {
      throw Error(ErrorCode::invalid_input, "user precoder is " + shape(u));
    }
  }
  if (design.F.size() != static_cast<std::size_t>(c.K)) {
    throw Error(ErrorCode::invalid_input, "need one relay precoder per relay");
  }
  for (const auto& F : design.F) {
    if (F.rows() != c.N || F.cols() != c.N) {
      throw Error(ErrorCode::invalid_input, "relay precoder is " + shape(F));
    }
  }
  for (const auto& V : design.V) {
    if (V.rows() != 2 * d || V.cols() != c.M) {
      throw Error(ErrorCode::invalid_input, "post-processor is " + shape(V));
    }
  }
}

// Signals intended for user j as seen at relay k.
ComplexMatrix desired_at_relay(const ChannelRealization& ch, const TransceiverDesign& ds,
                               int k, int j) {
  const ComplexMatrix& from_next = ds.U.at(j + 1, j);
  const ComplexMatrix& from_prev = ds.U.at(j + 2, j);
  ComplexMatrix w(ch.config().N, from_next.cols() + from_prev.cols());
  w << ch.H(k, j + 1) * from_next, ch.H(k, j + 2) * from_prev;
  return w;
}

}  // namespace

std::array<double, 6> neutralization_residuals(const ChannelRealization& ch,
                                               const TransceiverDesign& design) {
  check_dimensions(ch, design);
  std::array<double, 6> out{};
  for (int j = 0; j < 3; ++j) {
    // The two messages exchanged between the other users.
    const int a = j + 1;
    const int b = j + 2;
    const std::array<std::pair<int, int>, 2> sources{{{a, b}, {b, a}}};
    for (int e = 0; e < 2; ++e) {
      const auto [src, dst] = sources[e];
      const ComplexMatrix& U = design.U.at(src, dst);
      ComplexMatrix total = ComplexMatrix::Zero(design.V[j].rows(), U.cols());
      double scale = 0.0;
      double path = 0.0;
      for (int k = 0; k < ch.config().K; ++k) {
        const ComplexMatrix vgf = design.V[j] * ch.G(j, k) * design.F[k];
        const ComplexMatrix hu = ch.H(k, src) * U;
        const ComplexMatrix term = vgf * hu;
        total += term;
        scale += term.norm();
        path += vgf.norm() * hu.norm();
      }
      // When every relay term is nulled on its own (always so for K = 1), the
      // term-sum ratio is round-off over round-off; measure against the path
      // gains instead.
      const double denom = scale <= kResidualThreshold * path ? path : scale;
      out[2 * j + e] = denom == 0.0 ? 0.0 : total.norm() / denom;
    }
  }
  return out;
}

std::array<std::size_t, 3> decodability_ranks(const ChannelRealization& ch,
                                              const TransceiverDesign& design) {
  check_dimensions(ch, design);
  std::array<std::size_t, 3> out{};
  for (int j = 0; j < 3; ++j) {
    ComplexMatrix total = ComplexMatrix::Zero(design.V[j].rows(), 2 * design.frame.d);
    for (int k = 0; k < ch.config().K; ++k) {
      total += design.V[j] * ch.G(j, k) * design.F[k] * desired_at_relay(ch, design, k, j);
    }
    out[j] = total.size() == 0 ? 0 : numerical_rank(total);
  }
  return out;
}

VerificationReport verify(const ChannelRealization& ch, const TransceiverDesign& design) {
  VerificationReport r;
  r.residuals = neutralization_residuals(ch, design);
  r.ranks = decodability_ranks(ch, design);
  r.retries_used = design.retries;
  const auto want = static_cast<std::size_t>(2 * design.frame.d);
  r.passed = std::all_of(r.residuals.begin(), r.residuals.end(),
                         [](double x) { return x <= kResidualThreshold; }) &&
             std::all_of(r.ranks.begin(), r.ranks.end(),
                         [want](std::size_t x) { return x == want; });
  return r;
}

RateTrace estimate_rate_slope(const ChannelRealization& ch,
                              const TransceiverDesign& design,
                              const std::vector<double>& snr_db, double noise_power) {
  if (snr_db.size() < 2) {
    throw Error(ErrorCode::invalid_parameter, "need at least two SNR points");
  }
  for (const double s : snr_db) {
    if (!std::isfinite(s)) throw Error(ErrorCode::invalid_parameter, "non-finite SNR");
  }
  if (!(noise_power > 0.0) || !std::isfinite(noise_power)) {
    throw Error(ErrorCode::invalid_parameter, "noise power must be positive");
  }
  if (!verify(ch, design).passed) {
    throw Error(ErrorCode::precondition, "design does not verify on this channel");
  }

  RateTrace trace;
  trace.snr_db = snr_db;
  const SystemConfig& c = ch.config();
  const int d = design.frame.d;
  if (d == 0) {
    trace.sum_rate_bits.assign(snr_db.size(), 0.0);
    return trace;
  }

  // Transmit covariance shape of user i: sum of its two precoder Gramians.
  std::array<ComplexMatrix, 3> tx;
  for (int i = 0; i < 3; ++i) {
    const ComplexMatrix& u1 = design.U.at(i, i + 1);
    const ComplexMatrix& u2 = design.U.at(i, i + 2);
    tx[i] = u1 * u1.adjoint() + u2 * u2.adjoint();
  }

  for (const double db : snr_db) {
    const double P = std::pow(10.0, db / 10.0);
    const double p = P / (2.0 * d);

    double max_power = 0.0;
    for (int k = 0; k < c.K; ++k) {
      ComplexMatrix Rk = noise_power * ComplexMatrix::Identity(c.N, c.N);
      for (int i = 0; i < 3; ++i) Rk += p * ch.H(k, i) * tx[i] * ch.H(k, i).adjoint();
      const ComplexMatrix& F = design.F[k];
      max_power = std::max(max_power, (F * Rk * F.adjoint()).trace().real());
    }
    const double gamma = max_power > 0.0 ? std::sqrt(P / max_power) : 0.0;

    double rate = 0.0;
    for (int j = 0; j < 3; ++j) {
      const ComplexMatrix& V = design.V[j];
      ComplexMatrix A = ComplexMatrix::Zero(V.rows(), 2 * d);
      ComplexMatrix C = noise_power * V * V.adjoint();
      for (int k = 0; k < c.K; ++k) {
        const ComplexMatrix vgf = gamma * (V * ch.G(j, k) * design.F[k]);
        A += vgf * desired_at_relay(ch, design, k, j);
        C += noise_power * vgf * vgf.adjoint();
      }
      Eigen::LLT<ComplexMatrix> noise(C);
      if (noise.info() != Eigen::Success) {
        throw Error(ErrorCode::degenerate_instance, "noise covariance not positive definite");
      }
      const ComplexMatrix B = noise.matrixL().solve(A);
      const ComplexMatrix S =
          ComplexMatrix::Identity(2 * d, 2 * d) + p * B.adjoint() * B;
      Eigen::LLT<ComplexMatrix> sig(S);
      if (sig.info() != Eigen::Success) {
        throw Error(ErrorCode::degenerate_instance, "signal term not positive definite");
      }
      const auto diag = sig.matrixLLT().diagonal();
      for (Index i = 0; i < diag.size(); ++i) rate += 2.0 * std::log2(diag(i).real());
    }
    trace.sum_rate_bits.push_back(rate);
  }

  const auto [lo, hi] = std::minmax_element(snr_db.begin(), snr_db.end());
  const auto ilo = static_cast<std::size_t>(lo - snr_db.begin());
  const auto ihi = static_cast<std::size_t>(hi - snr_db.begin());
  if (*hi == *lo) throw Error(ErrorCode::invalid_parameter, "SNR points must differ");
  const double dlog = (*hi - *lo) / 10.0 * std::log2(10.0);
  trace.slope_estimate =
      0.5 * (trace.sum_rate_bits[ihi] - trace.sum_rate_bits[ilo]) / dlog;
  return trace;
}

}  // namespace relaydof
