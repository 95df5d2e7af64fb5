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

// Acceptance suite: one pass/fail line per criterion. Run all criteria, or a
// single one with --criterion N.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "relaydof/channel.hpp"
#include "relaydof/designer.hpp"
#include "relaydof/error.hpp"
#include "relaydof/formulas.hpp"
#include "relaydof/numerics.hpp"
#include "relaydof/parallel.hpp"
#include "relaydof/random.hpp"
#include "relaydof/verifier.hpp"

using namespace relaydof;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

Outcome relay_counts() {
  const auto t0 = Clock::now();
  Outcome o;
  struct Case {
    double M, N, target;
    int want;
  };
  for (const Case c : {Case{1, 1, 1.5, 2}, Case{2, 1, 3, 12}, Case{5, 2, 7.5, 19},
                       Case{3, 1, 4.5, 27}, Case{3, 1, 3.5, 5}}) {
    const int got = min_relays(c.M, c.N, c.target);
    o.require(got == c.want, "min_relays(" + fmt(c.M) + "," + fmt(c.N) + "," +
                                 fmt(c.target) + ") = " + std::to_string(got) +
                                 ", want " + std::to_string(c.want));
  }
  const double t = seconds_since(t0);
  o.require(t < 1.0, "took " + fmt(t) + " s");
  if (o.pass) o.detail = "2, 12, 19, 27 and 5 reproduced in " + fmt(t) + " s";
  return o;
}

Outcome single_relay_regression() {
  const auto t0 = Clock::now();
  Outcome o;
  double worst = 0.0;
  for (int M = 1; M <= 30; ++M) {
    for (int N = 1; N <= 30; ++N) {
      worst = std::max(worst, std::abs(theorem1_dof(M, N, 1) - std::min(1.5 * M, double(N))));
    }
  }
  o.require(worst <= 1e-12, "max deviation " + fmt(worst));
  const double t = seconds_since(t0);
  o.require(t < 1.0, "took " + fmt(t) + " s");
  if (o.pass) o.detail = "900 pairs, max deviation " + fmt(worst);
  return o;
}

Outcome optimality_regions() {
  const auto t0 = Clock::now();
  Outcome o;
  const double N = 1.0;
  for (const int K : {2, 3, 5, 10}) {
    const double b1 = region_boundary_full_user(K);
    const double b3 = region_boundary_full_relay(K);
    const double top = 10.0 * K;
    // 500 points over [0, b1) U [b3, 10K], spaced by arc length of the union.
    const double span = b1 + (top - b3);
    int equal_fail = 0;
    for (int i = 0; i < 500; ++i) {
      const double s = span * i / 500.0;
      const double x = s < b1 ? s : b3 + (s - b1);
      if (std::abs(theorem1_dof(x * N, N, K) - upper_bound_dof(x * N, N, K)) > 1e-9) {
        ++equal_fail;
      }
    }
    int strict_fail = 0;
    for (int i = 1; i < 500; ++i) {
      const double x = b1 + (b3 - b1) * i / 500.0;
      if (!(theorem1_dof(x * N, N, K) < upper_bound_dof(x * N, N, K))) ++strict_fail;
    }
    o.require(equal_fail == 0, "K=" + std::to_string(K) + ": " +
                                   std::to_string(equal_fail) + " unequal points");
    o.require(strict_fail == 0, "K=" + std::to_string(K) + ": " +
                                    std::to_string(strict_fail) + " non-strict interior points");
  }
  const double t = seconds_since(t0);
  o.require(t < 1.0, "took " + fmt(t) + " s");
  if (o.pass) o.detail = "K in {2,3,5,10}: equality on optimal regions, strict gap inside";
  return o;
}

Outcome symmetric_dominance() {
  const auto t0 = Clock::now();
  Outcome o;
  const double N = 1.0;
  for (const int K : {2, 5}) {
    int fail = 0;
    for (int i = 0; i < 500; ++i) {
      const double x = 3.0 * K * i / 499.0;
      if (theorem1_dof(x * N, N, K) < symmetric_design_bound(x * N, N, K) - 1e-12) ++fail;
    }
    o.require(fail == 0, "K=" + std::to_string(K) + ": " + std::to_string(fail) +
                             " points below the baseline");
    const double x = 2.0 * K;
    const double ach = theorem1_dof(x * N, N, K);
    const double sym = symmetric_design_bound(x * N, N, K);
    o.require(ach > sym, "K=" + std::to_string(K) + ": no strict gain at ratio 2K");
    o.require(std::abs(ach - K * N) < 1e-12 &&
                  std::abs(sym - std::sqrt(6.0 * K) * N / 2.0) < 1e-12,
              "K=" + std::to_string(K) + ": large-ratio values are not KN and sqrt(6K)N/2");
  }
  const double t = seconds_since(t0);
  o.require(t < 1.0, "took " + fmt(t) + " s");
  if (o.pass) o.detail = "K in {2,5}: achievable >= symmetric, strict at ratio 2K";
  return o;
}

struct SeedRun {
  bool passed = false;
  bool structure = true;
  int retries = 0;
  std::string error;
};

Outcome end_to_end(int M, int N, int K, int d, StrategyKind kind, double budget,
                   const std::function<bool(const TransceiverDesign&)>& structure = {}) {
  const auto t0 = Clock::now();
  Outcome o;
  const Strategy s = select_strategy(M, N, K);
  o.require(s.kind == kind, "strategy is " + std::string(to_string(s.kind)));
  o.require(s.d == d, "strategy d = " + std::to_string(s.d));
  if (!o.pass) return o;

  std::vector<SeedRun> runs(100);
  parallel_for(runs.size(), [&](std::size_t i) {
    const std::uint64_t seed = i + 1;
    try {
      // Verification always uses the full native channel.
      const ChannelRealization ch = sample_channel({M, N, K, d}, seed);
      const TransceiverDesign ds = design(ch, s, seed);
      const VerificationReport r = verify(ch, ds);
      bool ok = r.passed;
      for (const double x : r.residuals) ok = ok && x <= 1e-8;
      for (const std::size_t x : r.ranks) ok = ok && x == static_cast<std::size_t>(2 * d);
      runs[i].passed = ok;
      runs[i].retries = ds.retries;
      if (structure) runs[i].structure = structure(ds);
    } catch (const Error& e) {
      runs[i].error = e.what();
    }
  });

  int passed = 0;
  int structure_fail = 0;
  std::vector<int> retries;
  for (const auto& r : runs) {
    passed += r.passed ? 1 : 0;
    structure_fail += r.structure ? 0 : 1;
    retries.push_back(r.retries);
  }
  std::nth_element(retries.begin(), retries.begin() + 50, retries.end());
  const int median = retries[50];
  const double t = seconds_since(t0);
  o.require(passed >= 99, std::to_string(passed) + "/100 verified");
  o.require(median == 0, "median retries " + std::to_string(median));
  o.require(structure_fail == 0, std::to_string(structure_fail) + " designs break structure");
  o.require(t <= budget, "took " + fmt(t) + " s");
  if (o.pass) {
    o.detail = std::to_string(passed) + "/100 verified, median retries " +
               std::to_string(median) + ", " + fmt(t) + " s";
  }
  return o;
}

Outcome rate_slopes() {
  Outcome o;
  std::string summary;
  struct Case {
    int M, N, K;
  };
  for (const Case c : {Case{14, 10, 2}, Case{10, 10, 2}, Case{2, 3, 2}}) {
    const Strategy s = select_strategy(c.M, c.N, c.K);
    const ChannelRealization ch = sample_channel({c.M, c.N, c.K, s.d}, 1);
    const TransceiverDesign ds = design(ch, s, 1);
    const RateTrace t = estimate_rate_slope(ch, ds, {40.0, 50.0, 60.0});
    const double target = 3.0 * s.d;
    const double dev = std::abs(t.slope_estimate - target) / target;
    const std::string tag = "(" + std::to_string(c.M) + "," + std::to_string(c.N) + "," +
                            std::to_string(c.K) + ")";
    o.require(dev <= 0.05, tag + " deviation " + fmt(dev));
    summary += (summary.empty() ? "" : ", ") + tag + " slope " + fmt(t.slope_estimate) +
               " vs " + fmt(target);
  }
  if (o.pass) o.detail = summary;
  return o;
}

Outcome numerics_properties() {
  const auto t0 = Clock::now();
  Outcome o;
  constexpr int kCases = 1000;
  Rng shapes(2718);
  std::uniform_int_distribution<int> dim(1, 10);
  int rank_nullity = 0, vec_kron = 0, null_space = 0, unitary = 0;
  for (int i = 0; i < kCases; ++i) {
    const auto seed = derive_seed(2718, {static_cast<std::uint64_t>(i)});
    Rng rng(seed);
    const int rows = dim(shapes);
    const int cols = dim(shapes);
    const int r = std::uniform_int_distribution<int>(0, std::min(rows, cols))(shapes);
    ComplexMatrix a = ComplexMatrix::Zero(rows, cols);
    if (r > 0) a = complex_gaussian(rows, r, rng) * complex_gaussian(r, cols, rng);

    // Rank-nullity.
    const ComplexMatrix b = null_space_basis(a);
    if (numerical_rank(a) != static_cast<std::size_t>(r) ||
        static_cast<Index>(numerical_rank(a)) + b.cols() != cols) {
      ++rank_nullity;
    }

    // Null-space orthonormality and residual bounds, both sides.
    const ComplexMatrix v = left_null_space_basis(a);
    const double ortho_b =
        (b.adjoint() * b - ComplexMatrix::Identity(b.cols(), b.cols())).norm();
    const double ortho_v =
        (v * v.adjoint() - ComplexMatrix::Identity(v.rows(), v.rows())).norm();
    const bool res_b = (a * b).norm() <= 1e-10 * a.norm() * std::sqrt(double(b.cols()));
    const bool res_v = (v * a).norm() <= 1e-10 * a.norm() * std::sqrt(double(v.rows()));
    if (ortho_b > 1e-12 || ortho_v > 1e-12 || !res_b || !res_v ||
        v.rows() != rows - static_cast<Index>(r)) {
      ++null_space;
    }

    // vec(AXB) = (B^T kron A) vec(X).
    const int p = dim(shapes), q = dim(shapes), s = dim(shapes), t = dim(shapes);
    const ComplexMatrix A = complex_gaussian(p, q, rng);
    const ComplexMatrix X = complex_gaussian(q, s, rng);
    const ComplexMatrix B = complex_gaussian(s, t, rng);
    const ComplexMatrix lhs = vectorize(A * X * B);
    const ComplexMatrix rhs = kronecker(B.transpose(), A) * vectorize(X);
    if ((lhs - rhs).norm() > 1e-12 * lhs.norm()) ++vec_kron;

    // Rank under unitary changes of basis.
    const ComplexMatrix Ul = random_unitary(rows, rng);
    const ComplexMatrix Ur = random_unitary(cols, rng);
    if (numerical_rank(Ul * a * Ur) != static_cast<std::size_t>(r)) ++unitary;
  }
  o.require(rank_nullity == 0, std::to_string(rank_nullity) + " rank-nullity failures");
  o.require(vec_kron == 0, std::to_string(vec_kron) + " vec-Kronecker failures");
  o.require(null_space == 0, std::to_string(null_space) + " null-space failures");
  o.require(unitary == 0, std::to_string(unitary) + " unitary-invariance failures");
  if (o.pass) {
    o.detail = "4 x " + std::to_string(kCases) + " randomized cases, zero failures, " +
               fmt(seconds_since(t0)) + " s";
  }
  return o;
}

// Largest design-frame d accepted by the strategy checks.
std::optional<Strategy> extension_strategy(const SystemConfig& native, int L, Rational m_star) {
  const ExtensionPlan plan = ExtensionPlan::make(L, m_star);
  const int Me = plan.total_columns();
  for (int d = Me; d >= 1; --d) {
    Strategy s;
    s.kind = StrategyKind::alignment_i;
    s.extension = plan;
    s.disablement = Disablement{static_cast<int>(plan.m_star.ceil()), native.N};
    s.d = d;
    s.d_prime = 3 * d - Me;
    s.n_prime = L * native.N;
    try {
      check_strategy(native, s);
      return s;
    } catch (const Error&) {
    }
  }
  return std::nullopt;
}

Outcome symbol_extension() {
  const auto t0 = Clock::now();
  Outcome o;
  struct Case {
    int L;
    Rational m_star;
    std::vector<int> pattern;
    SystemConfig native;  // small instance where alignment I is dimensionally possible
  };
  const std::vector<Case> cases{{2, {3, 2}, {2, 1}, {2, 1, 2, 0}},
                                {3, {4, 3}, {2, 1, 1}, {2, 2, 1, 0}}};
  std::string summary;
  for (const Case& c : cases) {
    const std::string tag = "(L=" + std::to_string(c.L) + ", M*=" +
                            std::to_string(c.m_star.num) + "/" +
                            std::to_string(c.m_star.den) + ")";
    const ExtensionPlan plan = ExtensionPlan::make(c.L, c.m_star);
    o.require(plan.block_col_sizes == c.pattern, tag + " wrong column pattern");

    // Structure: exact block diagonal with the per-use sizes.
    const ChannelRealization base = sample_channel(c.native, 1);
    const ChannelRealization ext = extend_channel(
        restrict_channel(base, static_cast<int>(c.m_star.ceil()), c.native.N), plan);
    const int N = c.native.N;
    bool block_diag = true;
    for (int k = 0; k < c.native.K; ++k) {
      for (int j = 0; j < 3; ++j) {
        const ComplexMatrix& h = ext.H(k, j);
        const ComplexMatrix& g = ext.G(j, k);
        block_diag = block_diag && h.rows() == c.L * N && h.cols() == plan.total_columns();
        block_diag = block_diag && g.rows() == plan.total_columns() && g.cols() == c.L * N;
        if (!block_diag) break;
        int col = 0;
        for (int l = 0; l < c.L; ++l) {
          const int m = plan.block_col_sizes[l];
          for (int lr = 0; lr < c.L; ++lr) {
            const bool diag = lr == l;
            const ComplexMatrix hb = h.block(lr * N, col, N, m);
            const ComplexMatrix gb = g.block(col, lr * N, m, N);
            block_diag = block_diag && (diag ? numerical_rank(hb) > 0 && numerical_rank(gb) > 0
                                             : hb.isZero(0.0) && gb.isZero(0.0));
          }
          col += m;
        }
      }
    }
    o.require(block_diag, tag + " extended channel is not exactly block diagonal");

    // Design with L*d streams on the extended channel.
    const std::optional<Strategy> s = extension_strategy(c.native, c.L, c.m_star);
    if (!s) {
      o.require(false, tag + " no dimensionally valid alignment I stream count");
      continue;
    }
    try {
      const TransceiverDesign ds = design(base, *s, 1);
      const VerificationReport r = verify(design_frame_channel(base, *s), ds);
      o.require(r.passed, tag + " design with L*d = " + std::to_string(s->d) +
                              " did not verify");
      if (r.passed) {
        summary += (summary.empty() ? "" : ", ") + tag + " verified with L*d = " +
                   std::to_string(s->d);
      }
    } catch (const Error& e) {
      o.require(false, tag + " design with L*d = " + std::to_string(s->d) + " failed: " +
                           e.what());
    }
  }
  const double t = seconds_since(t0);
  o.require(t <= 60.0, "took " + fmt(t) + " s");
  if (o.pass) o.detail = summary;
  return o;
}

struct Criterion {
  int id;
  const char* title;
  std::function<Outcome()> run;
};

std::vector<Criterion> criteria() {
  return {
      {1, "minimum relay counts", relay_counts},
      {2, "single-relay regression", single_relay_regression},
      {3, "optimality-region coincidence", optimality_regions},
      {4, "dominance over the symmetric baseline", symmetric_dominance},
      {5, "alignment I end to end (14,10,2,6)",
       [] { return end_to_end(14, 10, 2, 6, StrategyKind::alignment_i, 30.0); }},
      {6, "alignment II end to end (10,10,2,4)",
       [] {
         return end_to_end(10, 10, 2, 4, StrategyKind::alignment_ii, 30.0,
                           [](const TransceiverDesign& ds) {
                             return std::all_of(ds.F.begin(), ds.F.end(), [](const auto& F) {
                               return F.rightCols(2).isZero(0.0);
                             });
                           });
       }},
      {7, "no-alignment end to end (2,3,2,1)",
       [] { return end_to_end(2, 3, 2, 1, StrategyKind::no_alignment, 5.0); }},
      {8, "rate slope within 5% of 3d", rate_slopes},
      {9, "numerics property suite", numerics_properties},
      {10, "symbol-extension structural suite", symbol_extension},
  };
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--criterion" && i + 1 < argc) {
      only = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--criterion N]\n", argv[0]);
      return 2;
    }
  }
  int failures = 0;
  int ran = 0;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("unexpected error: ") + e.what();
    }
    std::printf("criterion %2d [PRIMARY] %s: %s | %s\n", c.id, o.pass ? "PASS" : "FAIL",
                c.title, o.detail.c_str());
    failures += o.pass ? 0 : 1;
  }
  if (ran == 0) {
    std::fprintf(stderr, "no criterion %d\n", only);
    return 2;
  }
  return failures == 0 ? 0 : 1;
}
