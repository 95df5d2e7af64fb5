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

#include "relaydof/designer.hpp"

#include <algorithm>
#include <string>
#include <tuple>
#include <utility>

#include "relaydof/error.hpp"

namespace relaydof {

namespace {

constexpr std::uint64_t kAlignTag = 10;
constexpr std::uint64_t kRelayTag = 20;
constexpr std::uint64_t kPostTag = 30;

std::string str(long v) { return std::to_string(v); }

ComplexMatrix draw(const DesignOptions& opts, Index rows, Index cols, int attempt,
                   Rng& rng) {
  if (opts.coefficients) {
    ComplexMatrix c = opts.coefficients(rows, cols, attempt, rng);
    if (c.rows() != rows || c.cols() != cols) {
      throw Error(ErrorCode::internal_contract,
                  "coefficient source returned a " + str(c.rows()) + "x" +
                      str(c.cols()) + " matrix");
    }
    return c;
  }
  return complex_gaussian(rows, cols, rng);
}

void normalize_columns(ComplexMatrix& x) {
  for (Index c = 0; c < x.cols(); ++c) {
    const double n = x.col(c).norm();
    if (n > 0.0) x.col(c) /= n;
  }
}

int attempts(const DesignOptions& opts) {
  if (opts.max_attempts < 1) {
    throw Error(ErrorCode::invalid_parameter, "max_attempts must be positive");
  }
  return opts.max_attempts;
}

// F restricted to the active receive antennas times an uplink block.
ComplexMatrix relay_path(const ComplexMatrix& G, const ComplexMatrix& F,
                         const ComplexMatrix& H) {
  return G * (F.leftCols(H.rows()) * H);
}

// Requirement sum_k G_{rx,k} F_k H_{k,src} X = 0.
struct Constraint {
  int rx;
  int src;
  ComplexMatrix X;
};

using Certificate = std::function<bool(const std::vector<ComplexMatrix>&)>;

RelaySolution solve_constrained(const ChannelRealization& ch,
                                const std::vector<Constraint>& constraints,
                                const Certificate& certify, std::uint64_t seed,
                                const DesignOptions& opts) {
  const SystemConfig& c = ch.config();
  const Index N = c.N;
  const Index Nr = ch.active_rx();
  const Index block = N * Nr;

  RelaySolution sol;
  for (const auto& con : constraints) sol.system_rows += c.M * con.X.cols();
  sol.system_cols = c.K * block;
  if (sol.system_rows >= sol.system_cols) {
    throw Error(ErrorCode::infeasible_dimension,
                "relay system " + str(sol.system_rows) + "x" + str(sol.system_cols) +
                    " is not wide");
  }

  ComplexMatrix S(sol.system_rows, sol.system_cols);
  Index row = 0;
  for (const auto& con : constraints) {
    const Index h = c.M * con.X.cols();
    if (h == 0) continue;
    for (int k = 0; k < c.K; ++k) {
      const ComplexMatrix hx = ch.H(k, con.src) * con.X;
      S.block(row, k * block, h, block) = kronecker(hx.transpose(), ch.G(con.rx, k));
    }
    row += h;
  }
  const ComplexMatrix basis = null_space_basis(S, opts.tolerance);
  sol.null_dim = basis.cols();
  if (sol.null_dim == 0) {
    throw Error(ErrorCode::degenerate_instance, "relay system has trivial null space");
  }

  const int budget = attempts(opts);
  for (int attempt = 0; attempt < budget; ++attempt) {
    Rng rng(derive_seed(seed, {kRelayTag, static_cast<std::uint64_t>(attempt)}));
    ComplexMatrix f = basis * draw(opts, sol.null_dim, 1, attempt, rng);
    normalize_columns(f);
    std::vector<ComplexMatrix> F(c.K);
    for (int k = 0; k < c.K; ++k) {
      F[k] = ComplexMatrix::Zero(N, N);
      F[k].leftCols(Nr) = unvectorize(f.middleRows(k * block, block), N, Nr);
    }
    if (certify(F)) {
      sol.F = std::move(F);
      sol.retries = attempt;
      return sol;
    }
  }
  throw Error(ErrorCode::degenerate_instance,
              "relay rank certificate failed " + str(budget) + " times");
}

struct Frame {
  int M;
  int N;
};

// Design-frame antenna counts for a strategy on a native config.
Frame frame_of(const SystemConfig& native, const Strategy& s) {
  Frame f{native.M, native.N};
  if (s.disablement) {
    const Disablement& dis = *s.disablement;
    if (dis.m_star < 1 || dis.m_star > native.M || dis.n_star < 1 ||
        dis.n_star > native.N) {
      throw Error(ErrorCode::invalid_parameter, "disablement outside native antennas");
    }
    f = {dis.m_star, dis.n_star};
  }
  if (s.extension) {
    const ExtensionPlan& plan = *s.extension;
    plan.validate();
    if (plan.block_col_sizes.front() != f.M) {
      throw Error(ErrorCode::invalid_parameter,
                  "extension needs the user disablement at ceil(M*)");
    }
    f = {plan.total_columns(), plan.L * f.N};
  }
  return f;
}

ComplexMatrix pad(const ComplexMatrix& a, Index rows, Index cols) {
  ComplexMatrix out = ComplexMatrix::Zero(rows, cols);
  out.topLeftCorner(a.rows(), a.cols()) = a;
  return out;
}

TransceiverDesign empty_design(const SystemConfig& frame, const Strategy& s) {
  TransceiverDesign out;
  out.strategy = s;
  out.frame = frame;
  out.frame.d = 0;
  for (auto& u : out.U.blocks) u = ComplexMatrix::Zero(frame.M, 0);
  out.F.assign(frame.K, ComplexMatrix::Zero(frame.N, frame.N));
  for (auto& v : out.V) v = ComplexMatrix::Zero(0, frame.M);
  return out;
}

template <class F>
auto staged(const char* stage, F&& fn) {
  try {
    return fn();
  } catch (const Error& e) {
    throw Error(e.code(), std::string(stage) + ": " + e.detail());
  }
}

}  // namespace

std::string_view to_string(StrategyKind k) noexcept {
  switch (k) {
    case StrategyKind::alignment_i: return "alignment_i";
    case StrategyKind::alignment_ii: return "alignment_ii";
    case StrategyKind::no_alignment: return "no_alignment";
  }
  return "unknown";
}

StrategyKind strategy_kind_from_string(std::string_view s) {
  if (s == "alignment_i") return StrategyKind::alignment_i;
  if (s == "alignment_ii") return StrategyKind::alignment_ii;
  if (s == "no_alignment") return StrategyKind::no_alignment;
  throw Error(ErrorCode::invalid_input, "unknown strategy kind '" + std::string(s) + "'");
}

double Strategy::streams_per_use() const noexcept {
  return extension ? static_cast<double>(d) / extension->L : d;
}

bool is_feasible(StrategyKind kind, int M, int N, int K, int d) {
  if (M < 1 || N < 1 || K < 1 || d < 1 || d > M) return false;
  const long long m = M, n = N, k = K, s = d;
  const long long dp = 3 * s - m;
  switch (kind) {
    case StrategyKind::alignment_i:
      return dp >= 0 && dp <= s && 2 * m - k * n >= s && k * n * n > 3 * dp * m &&
             k * n >= m && 3 * s <= k * n;
    case StrategyKind::alignment_ii: {
      if ((2 * m - s) % k != 0) return false;
      const long long np = (2 * m - s) / k;
      return np >= 1 && np <= n && dp >= 0 && dp <= s && k * n * np > 3 * dp * m;
    }
    case StrategyKind::no_alignment:
      return m % 2 == 0 && 2 * s == m && k * n * n > 3 * m * m && 2 * m <= k * n;
  }
  return false;
}

int max_feasible_streams(StrategyKind kind, int M, int N, int K, int* n_prime) {
  for (int d = M; d >= 1; --d) {
    if (is_feasible(kind, M, N, K, d)) {
      if (n_prime) {
        *n_prime = kind == StrategyKind::alignment_ii ? (2 * M - d) / K : N;
      }
      return d;
    }
  }
  if (n_prime) *n_prime = N;
  return 0;
}

Strategy select_strategy(int M, int N, int K, StrategyOptions options) {
  SystemConfig{M, N, K, 0}.validate();
  if (options.max_extension < 1) {
    throw Error(ErrorCode::invalid_parameter, "max_extension must be positive");
  }

  // Ranking key, smaller is better: (-value, non-native, disabled, L, kind).
  // value is d/L, compared exactly through cross-multiplication.
  struct Candidate {
    Strategy s;
    long num = 0;
    long den = 1;
    int disabled = 0;
  };
  std::optional<Candidate> best;
  auto better = [](const Candidate& a, const Candidate& b) {
    const long lhs = a.num * b.den;
    const long rhs = b.num * a.den;
    if (lhs != rhs) return lhs > rhs;
    const int la = a.s.extension ? a.s.extension->L : 1;
    const int lb = b.s.extension ? b.s.extension->L : 1;
    return std::tie(a.disabled, la, a.s.kind) < std::tie(b.disabled, lb, b.s.kind);
  };
  auto offer = [&](Candidate c) {
    if (!best || better(c, *best)) best = std::move(c);
  };

  std::vector<StrategyKind> kinds{StrategyKind::alignment_i};
  if (K >= 2) {
    kinds.push_back(StrategyKind::alignment_ii);
    kinds.push_back(StrategyKind::no_alignment);
  }
  for (int ms = M; ms >= 1; --ms) {
    for (int ns = N; ns >= 1; --ns) {
      for (const StrategyKind kind : kinds) {
        int np = ns;
        const int d = max_feasible_streams(kind, ms, ns, K, &np);
        if (d == 0) continue;
        Candidate c;
        c.s.kind = kind;
        c.s.d = d;
        c.s.d_prime = kind == StrategyKind::no_alignment ? 0 : 3 * d - ms;
        c.s.n_prime = np;
        if (ms != M || ns != N) c.s.disablement = Disablement{ms, ns};
        c.num = d;
        c.disabled = (M - ms) + (N - ns);
        offer(std::move(c));
      }
    }
  }

  if (options.allow_extension) {
    const std::optional<Candidate> integer_best = best;
    for (int L = 2; L <= options.max_extension; ++L) {
      for (long q = static_cast<long>(L) * M; q >= L; --q) {
        const Rational m_star = Rational::make(q, L);
        const int floor_m = static_cast<int>(m_star.floor());
        const int ceil_m = static_cast<int>(m_star.ceil());
        for (int ns = N; ns >= 1; --ns) {
          // Every channel use must carry aligned signal of its own.
          if (2 * floor_m <= K * ns) continue;
          const int Me = static_cast<int>(q);
          const int Ne = L * ns;
          for (int de = Me; de >= 1; --de) {
            if (integer_best &&
                static_cast<long>(de) * integer_best->den <= integer_best->num * L) {
              break;
            }
            if (!is_feasible(StrategyKind::alignment_i, Me, Ne, K, de)) continue;
            Candidate c;
            c.s.kind = StrategyKind::alignment_i;
            c.s.d = de;
            c.s.d_prime = 3 * de - Me;
            c.s.n_prime = Ne;
            c.s.disablement = Disablement{ceil_m, ns};
            c.s.extension = ExtensionPlan::make(L, m_star);
            c.num = de;
            c.den = L;
            c.disabled = (M - ceil_m) + (N - ns);
            offer(std::move(c));
            break;
          }
        }
      }
      // Smallest L that improves on the integer design wins.
      if (best && best->s.extension) break;
    }
  }

  if (!best) {
    Strategy none;
    none.kind = StrategyKind::alignment_i;
    none.n_prime = N;
    return none;
  }
  return best->s;
}

void check_strategy(const SystemConfig& native, const Strategy& s) {
  native.validate();
  const Frame f = frame_of(native, s);
  if (s.d == 0) return;
  if (s.extension && s.kind != StrategyKind::alignment_i) {
    throw Error(ErrorCode::invalid_parameter,
                "symbol extension is only supported for alignment_i");
  }
  const ErrorCode code = s.kind == StrategyKind::no_alignment
                             ? ErrorCode::infeasible_dimension
                             : ErrorCode::infeasible_alignment;
  if (!is_feasible(s.kind, f.M, f.N, native.K, s.d)) {
    throw Error(code, std::string(to_string(s.kind)) + " infeasible at (M, N, K, d) = (" +
                          str(f.M) + ", " + str(f.N) + ", " + str(native.K) + ", " +
                          str(s.d) + ")");
  }
  if (s.kind != StrategyKind::no_alignment && s.d_prime != 3 * s.d - f.M) {
    throw Error(ErrorCode::invalid_parameter, "d' must equal 3d - M");
  }
  if (s.kind == StrategyKind::alignment_ii && s.n_prime * native.K != 2 * f.M - s.d) {
    throw Error(ErrorCode::invalid_parameter, "N' must equal (2M - d)/K");
  }
}

ChannelRealization design_frame_channel(const ChannelRealization& ch,
                                        const Strategy& s) {
  if (!s.extension) return ch;
  const Disablement dis = s.disablement.value_or(
      Disablement{ch.config().M, ch.config().N});
  return extend_channel(restrict_channel(ch, dis.m_star, dis.n_star), *s.extension);
}

ComplexMatrix effective_signal(const ChannelRealization& ch, const UserPrecoders& U,
                               int k, int j) {
  const ComplexMatrix a = ch.H(k, j + 1) * U.at(j + 1, j);
  const ComplexMatrix b = ch.H(k, j - 1) * U.at(j - 1, j);
  ComplexMatrix w(a.rows(), a.cols() + b.cols());
  w << a, b;
  return w;
}

AlignmentResult align_uplink_I(const ChannelRealization& ch, int d,
                               std::uint64_t seed, const DesignOptions& opts) {
  const SystemConfig& c = ch.config();
  const int M = c.M;
  const int Nr = ch.active_rx();
  if (d < 1 || d > M) {
    throw Error(ErrorCode::invalid_parameter, "d must lie in [1, M]");
  }
  if (2 * M - c.K * Nr < d) {
    throw Error(ErrorCode::infeasible_alignment,
                "2M - KN = " + str(2 * M - c.K * Nr) + " < d = " + str(d));
  }
  const int budget = attempts(opts);
  AlignmentResult out;
  for (int j = 0; j < 3; ++j) {
    ComplexMatrix Kj(static_cast<Index>(c.K) * Nr, 2 * M);
    for (int k = 0; k < c.K; ++k) {
      Kj.block(k * Nr, 0, Nr, M) = ch.H(k, j);
      Kj.block(k * Nr, M, Nr, M) = -ch.H(k, j + 1);
    }
    const ComplexMatrix Z = null_space_basis(Kj, opts.tolerance);
    out.null_dims[j] = Z.cols();
    if (Z.cols() < d) {
      throw Error(ErrorCode::infeasible_alignment,
                  "alignment null space has dimension " + str(Z.cols()) + " < d");
    }
    bool done = false;
    for (int attempt = 0; attempt < budget && !done; ++attempt) {
      Rng rng(derive_seed(seed, {kAlignTag, static_cast<std::uint64_t>(j),
                                 static_cast<std::uint64_t>(attempt)}));
      ComplexMatrix X = Z * draw(opts, Z.cols(), d, attempt, rng);
      normalize_columns(X);
      ComplexMatrix top = X.topRows(M);
      ComplexMatrix bottom = X.bottomRows(M);
      if (numerical_rank(top, opts.tolerance) == static_cast<std::size_t>(d) &&
          numerical_rank(bottom, opts.tolerance) == static_cast<std::size_t>(d)) {
        out.U.at(j, j + 1) = std::move(top);
        out.U.at(j + 1, j) = std::move(bottom);
        out.retries += attempt;
        done = true;
      }
    }
    if (!done) {
      throw Error(ErrorCode::degenerate_instance,
                  "aligned precoders rank-deficient after " + str(budget) + " draws");
    }
  }
  return out;
}

ReducedAlignment align_uplink_II(const ChannelRealization& ch, int d,
                                 std::uint64_t seed, const DesignOptions& opts) {
  const SystemConfig& c = ch.config();
  const int num = 2 * c.M - d;
  if (d < 1 || num % c.K != 0 || num / c.K < 1 || num / c.K > ch.active_rx()) {
    throw Error(ErrorCode::infeasible_alignment,
                "(2M - d)/K = " + str(num) + "/" + str(c.K) +
                    " is not an integer in [1, N]");
  }
  const int np = num / c.K;
  ChannelRealization reduced = deactivate_rx_antennas(ch, np);
  AlignmentResult a = align_uplink_I(reduced, d, seed, opts);
  return ReducedAlignment{np, std::move(reduced), std::move(a)};
}

PrecoderSplit split_precoders(const ComplexMatrix& U, int d_prime) {
  if (d_prime < 0 || d_prime > U.cols()) {
    throw Error(ErrorCode::invalid_parameter,
                "d' = " + str(d_prime) + " outside [0, " + str(U.cols()) + "]");
  }
  return PrecoderSplit{U.leftCols(d_prime), U.rightCols(U.cols() - d_prime)};
}

RelaySolution solve_relay_precoders(const ChannelRealization& ch,
                                    const UserPrecoders& U, int d_prime,
                                    RelayMode mode, std::uint64_t seed,
                                    const DesignOptions& opts) {
  const SystemConfig& c = ch.config();
  if (mode == RelayMode::I && ch.active_rx() != c.N) {
    throw Error(ErrorCode::invalid_input, "mode I expects all receive antennas active");
  }
  const Index d = U.at(0, 1).cols();
  std::vector<Constraint> constraints;
  std::array<ComplexMatrix, 3> right;
  for (int j = 0; j < 3; ++j) {
    const PrecoderSplit split = split_precoders(U.at(j + 1, j + 2), d_prime);
    constraints.push_back({j, j + 1, split.left});
    right[j] = split.right;
  }
  const Certificate certify = [&](const std::vector<ComplexMatrix>& F) {
    for (int j = 0; j < 3; ++j) {
      ComplexMatrix total = ComplexMatrix::Zero(c.M, 2 * d + right[j].cols());
      for (int k = 0; k < c.K; ++k) {
        ComplexMatrix cols(ch.active_rx(), total.cols());
        cols << effective_signal(ch, U, k, j), ch.H(k, j + 1) * right[j];
        total += relay_path(ch.G(j, k), F[k], cols);
      }
      if (numerical_rank(total, opts.tolerance) != static_cast<std::size_t>(total.cols())) {
        return false;
      }
    }
    return true;
  };
  return solve_constrained(ch, constraints, certify, seed, opts);
}

std::array<ComplexMatrix, 3> build_postprocessors(const ChannelRealization& ch,
                                                  const std::vector<ComplexMatrix>& F,
                                                  const UserPrecoders& U, int d_prime,
                                                  std::uint64_t seed,
                                                  const DesignOptions& opts) {
  const SystemConfig& c = ch.config();
  const Index d = U.at(0, 1).cols();
  std::array<ComplexMatrix, 3> V;
  for (int j = 0; j < 3; ++j) {
    const ComplexMatrix right = split_precoders(U.at(j + 1, j + 2), d_prime).right;
    if (right.cols() == 0) {
      Rng rng(derive_seed(seed, {kPostTag, static_cast<std::uint64_t>(j)}));
      V[j] = random_unitary(c.M, rng).topRows(2 * d);
      continue;
    }
    ComplexMatrix target = ComplexMatrix::Zero(c.M, right.cols());
    for (int k = 0; k < c.K; ++k) {
      target += relay_path(ch.G(j, k), F[k], ch.H(k, j + 1) * right);
    }
    const ComplexMatrix basis = left_null_space_basis(target, opts.tolerance);
    if (basis.rows() < 2 * d) {
      throw Error(ErrorCode::internal_contract,
                  "post-processor space has " + str(basis.rows()) + " rows, need " +
                      str(2 * d));
    }
    V[j] = basis.topRows(2 * d);
  }
  return V;
}

TransceiverDesign design_no_alignment(const ChannelRealization& ch,
                                      std::uint64_t seed, const DesignOptions& opts) {
  const SystemConfig& c = ch.config();
  if (ch.active_rx() != c.N) {
    throw Error(ErrorCode::invalid_input, "no-alignment design uses all receive antennas");
  }
  const long long m = c.M, n = c.N, k = c.K;
  if (m % 2 != 0) {
    throw Error(ErrorCode::infeasible_dimension, "no-alignment design needs even M");
  }
  if (k * n * n <= 3 * m * m) {
    throw Error(ErrorCode::infeasible_dimension,
                "KN^2 = " + str(k * n * n) + " <= 3M^2 = " + str(3 * m * m));
  }
  if (2 * m > k * n) {
    throw Error(ErrorCode::infeasible_dimension, "2M exceeds KN");
  }
  const int d = c.M / 2;
  TransceiverDesign out;
  out.strategy.kind = StrategyKind::no_alignment;
  out.strategy.d = d;
  out.strategy.n_prime = c.N;
  out.frame = c;
  out.frame.d = d;
  const ComplexMatrix top = ComplexMatrix::Identity(c.M, d);
  ComplexMatrix bottom = ComplexMatrix::Zero(c.M, d);
  bottom.bottomRows(d) = ComplexMatrix::Identity(d, d);
  for (int j = 0; j < 3; ++j) {
    out.U.at(j, j + 1) = top;
    out.U.at(j, j - 1) = bottom;
    out.V[j] = ComplexMatrix::Identity(c.M, c.M);
  }

  std::vector<Constraint> constraints;
  for (int j = 0; j < 3; ++j) {
    constraints.push_back({j, j + 1, out.U.at(j + 1, j + 2)});
    constraints.push_back({j, j + 2, out.U.at(j + 2, j + 1)});
  }
  const Certificate certify = [&](const std::vector<ComplexMatrix>& F) {
    for (int j = 0; j < 3; ++j) {
      ComplexMatrix total = ComplexMatrix::Zero(c.M, 2 * d);
      for (int r = 0; r < c.K; ++r) {
        total += relay_path(ch.G(j, r), F[r], effective_signal(ch, out.U, r, j));
      }
      if (numerical_rank(total, opts.tolerance) != static_cast<std::size_t>(2 * d)) {
        return false;
      }
    }
    return true;
  };
  RelaySolution sol = solve_constrained(ch, constraints, certify, seed, opts);
  out.F = std::move(sol.F);
  out.retries = sol.retries;
  return out;
}

TransceiverDesign design(const ChannelRealization& ch, const Strategy& s,
                         std::uint64_t seed, const DesignOptions& opts) {
  staged("strategy", [&] {
    check_strategy(ch.config(), s);
    return 0;
  });
  ChannelRealization work = ch;
  if (s.disablement) {
    work = restrict_channel(ch, s.disablement->m_star, s.disablement->n_star);
  }
  if (s.extension) work = extend_channel(work, *s.extension);
  const SystemConfig wc = work.config();
  if (s.d == 0) {
    return empty_design(s.extension ? wc : ch.config(), s);
  }

  TransceiverDesign out;
  switch (s.kind) {
    case StrategyKind::no_alignment:
      out = staged("no-alignment", [&] { return design_no_alignment(work, seed, opts); });
      if (out.strategy.d != s.d) {
        throw Error(ErrorCode::internal_contract, "no-alignment stream count mismatch");
      }
      out.strategy = s;
      break;
    case StrategyKind::alignment_i:
    case StrategyKind::alignment_ii: {
      const bool two = s.kind == StrategyKind::alignment_ii;
      const int dp = 3 * s.d - wc.M;
      if (dp != s.d_prime || 2 * s.d + (s.d - dp) != wc.M) {
        throw Error(ErrorCode::internal_contract, "d' identity violated");
      }
      ChannelRealization active = work;
      AlignmentResult a;
      if (two) {
        ReducedAlignment r = staged("alignment", [&] {
          return align_uplink_II(work, s.d, seed, opts);
        });
        if (2 * wc.M - wc.K * r.n_prime != s.d) {
          throw Error(ErrorCode::internal_contract, "2M - KN' != d");
        }
        active = std::move(r.reduced);
        a = std::move(r.alignment);
      } else {
        a = staged("alignment", [&] { return align_uplink_I(work, s.d, seed, opts); });
      }
      RelaySolution relay = staged("relay precoders", [&] {
        return solve_relay_precoders(active, a.U, dp, two ? RelayMode::II : RelayMode::I,
                                     seed, opts);
      });
      out.V = staged("post-processors", [&] {
        return build_postprocessors(active, relay.F, a.U, dp, seed, opts);
      });
      out.strategy = s;
      out.frame = wc;
      out.frame.d = s.d;
      out.U = std::move(a.U);
      out.F = std::move(relay.F);
      out.precoder_split = dp;
      out.retries = a.retries + relay.retries;
      break;
    }
  }

  if (s.disablement && !s.extension) {
    const SystemConfig& nc = ch.config();
    for (auto& u : out.U.blocks) u = pad(u, nc.M, u.cols());
    for (auto& f : out.F) f = pad(f, nc.N, nc.N);
    for (auto& v : out.V) v = pad(v, v.rows(), nc.M);
    out.frame.M = nc.M;
    out.frame.N = nc.N;
  }
  return out;
}

}  // namespace relaydof
