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

#include "relaydof/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "relaydof/channel.hpp"
#include "relaydof/designer.hpp"
#include "relaydof/error.hpp"
#include "relaydof/formulas.hpp"
#include "relaydof/parallel.hpp"
#include "relaydof/serialization.hpp"
#include "relaydof/verifier.hpp"

#ifndef RELAYDOF_VERSION
#define RELAYDOF_VERSION "0.0.0"
#endif

namespace relaydof::cli {

namespace {

struct Manifest {
  std::string subcommand;
  Json parameters = Json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::string> outputs;
  bool timestamp = true;

  Json to_json() const {
    Json j = {{"subcommand", subcommand},
              {"parameters", parameters},
              {"seed", seed ? Json(*seed) : Json(nullptr)},
              {"outputs", outputs},
              {"tool_version", RELAYDOF_VERSION}};
    if (timestamp) {
      const std::time_t now =
          std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
      std::tm tm{};
      gmtime_r(&now, &tm);
      std::ostringstream os;
      os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
      j["timestamp"] = os.str();
    }
    return j;
  }
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_input:
    case ErrorCode::invalid_parameter:
    case ErrorCode::unsupported_region:
    case ErrorCode::unreachable_target:
      return kUsage;
    case ErrorCode::io:
      return kIo;
    case ErrorCode::infeasible_alignment:
    case ErrorCode::infeasible_dimension:
    case ErrorCode::degenerate_instance:
    case ErrorCode::internal_contract:
    case ErrorCode::precondition:
      return kNumerical;
  }
  return kNumerical;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open '" + path + "' for writing");
  f << content;
  f.close();
  if (!f) throw Error(ErrorCode::io, "failed writing '" + path + "'");
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorCode::io, "cannot open '" + path + "'");
  std::ostringstream os;
  os << f.rdbuf();
  return os.str();
}

// Writes to `path`, or to `out` when path is empty.
void emit(const std::string& path, const std::string& content, std::ostream& out) {
  if (path.empty()) {
    out << content;
  } else {
    write_file(path, content);
  }
}

std::string num(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

struct Common {
  bool json = false;
  bool no_timestamp = false;
  std::string out_path;
};

void add_common(CLI::App* sub, Common& c, bool with_json = true) {
  if (with_json) sub->add_flag("--json", c.json, "Print JSON instead of text");
  sub->add_option("--out", c.out_path, "Output file (default: stdout)");
  sub->add_flag("--no-timestamp", c.no_timestamp, "Omit the manifest timestamp");
}

int cmd_formula(int M, int N, int K, const Common& c, std::ostream& out) {
  Manifest man{"formula", {{"M", M}, {"N", N}, {"K", K}}, std::nullopt,
               c.out_path.empty() ? std::vector<std::string>{}
                                  : std::vector<std::string>{c.out_path},
               !c.no_timestamp};
  const double upper = upper_bound_dof(M, N, K);
  const double achievable = theorem1_dof(M, N, K);
  const double symmetric = symmetric_design_bound(M, N, K);
  const double normalized = normalized_asymptotic_dof(M, N, K);
  std::optional<RegionLabel> region;
  if (K >= 2) region = corollary2_region(M, N, K);

  std::ostringstream os;
  if (c.json) {
    Json j = {{"manifest", man.to_json()},
              {"M", M},
              {"N", N},
              {"K", K},
              {"upper_bound", upper},
              {"achievable", achievable},
              {"symmetric", symmetric},
              {"normalized", normalized},
              {"region", nullptr}};
    if (region) {
      j["region"] = {{"label", std::string(to_string(region->region))},
                     {"lower", region->lower},
                     {"upper", std::isinf(region->upper) ? Json(nullptr)
                                                         : Json(region->upper)}};
    }
    os << j.dump(2) << '\n';
  } else {
    os << "M=" << M << " N=" << N << " K=" << K << '\n'
       << "upper_bound " << num(upper) << '\n'
       << "achievable  " << num(achievable) << '\n'
       << "region      "
       << (region ? std::string(to_string(region->region)) : std::string("single_relay"))
       << '\n'
       << "symmetric   " << num(symmetric) << '\n'
       << "normalized  " << num(normalized) << '\n';
  }
  emit(c.out_path, os.str(), out);
  return kOk;
}

int cmd_sweep(int K, int N, double rmin, double rmax, int points, const Common& c,
              std::ostream& out) {
  if (!(rmin < rmax) || rmin < 0.0) {
    throw Error(ErrorCode::invalid_parameter, "need 0 <= ratio-min < ratio-max");
  }
  if (points < 2) throw Error(ErrorCode::invalid_parameter, "need at least 2 points");
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i) {
    grid[i] = rmin + (rmax - rmin) * i / (points - 1);
  }
  const auto rows = sweep_curves(K, N, grid);
  std::ostringstream csv;
  write_curve_csv(csv, rows);
  Manifest man{"sweep",
               {{"K", K}, {"N", N}, {"ratio_min", rmin}, {"ratio_max", rmax},
                {"points", points}},
               std::nullopt,
               {},
               !c.no_timestamp};
  if (c.out_path.empty()) {
    out << csv.str();
  } else {
    // CSV stays header-first; the manifest goes in a sidecar file.
    man.outputs = {c.out_path, c.out_path + ".manifest.json"};
    write_file(c.out_path, csv.str());
    write_file(c.out_path + ".manifest.json", man.to_json().dump(2) + "\n");
  }
  return kOk;
}

int cmd_design(int M, int N, int K, std::uint64_t seed, bool extension,
               const std::string& dump_channel, const Common& c, std::ostream& out,
               std::ostream& err) {
  const SystemConfig config{M, N, K, 0};
  config.validate();
  StrategyOptions opts;
  opts.allow_extension = extension;
  const Strategy s = select_strategy(M, N, K, opts);
  const ChannelRealization ch = sample_channel(config, seed).with_streams(
      s.extension ? 0 : s.d);
  Manifest man{"design",
               {{"M", M}, {"N", N}, {"K", K}, {"extension", extension}},
               seed,
               {},
               !c.no_timestamp};
  if (!c.out_path.empty()) man.outputs.push_back(c.out_path);
  if (!dump_channel.empty()) {
    man.outputs.push_back(dump_channel);
    Json dump = channel_to_json(ch);
    dump["manifest"] = man.to_json();
    write_file(dump_channel, dump.dump(2) + "\n");
  }

  const TransceiverDesign ds = design(ch, s, seed);
  const VerificationReport report = verify(design_frame_channel(ch, s), ds);
  Json j = {{"manifest", man.to_json()},
            {"channel", channel_to_json(ch)},
            {"design", design_to_json(ds)},
            {"report", report_to_json(report)}};
  emit(c.out_path, j.dump(2) + "\n", out);
  if (s.d == 0) {
    err << "no strategy supports a stream at (M, N, K) = (" << M << ", " << N << ", "
        << K << "); emitted the d = 0 design\n";
  }
  if (!c.out_path.empty()) {
    out << "strategy " << to_string(s.kind) << " d=" << s.d
        << " per-use=" << num(s.streams_per_use())
        << " passed=" << (report.passed ? "true" : "false") << '\n';
  }
  if (!report.passed) {
    err << "design did not verify\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_slope(const std::string& path, const std::vector<double>& snr, const Common& c,
              std::ostream& out) {
  Json j;
  try {
    j = Json::parse(read_file(path));
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::invalid_input, "'" + path + "' is not JSON: " + e.what());
  }
  if (!j.contains("channel") || !j.contains("design")) {
    throw Error(ErrorCode::invalid_input, "'" + path + "' lacks channel or design");
  }
  const ChannelRealization ch = channel_from_json(j.at("channel"));
  const TransceiverDesign ds = design_from_json(j.at("design"));
  const RateTrace trace =
      estimate_rate_slope(design_frame_channel(ch, ds.strategy), ds, snr);
  // Slope of a frame spanning L channel uses, expressed per use.
  const double L = ds.strategy.extension ? ds.strategy.extension->L : 1.0;
  const double slope = trace.slope_estimate / L;
  const double target = 3.0 * ds.strategy.streams_per_use();
  const double deviation = target > 0.0 ? std::abs(slope - target) / target : 0.0;

  Manifest man{"slope", {{"design", path}, {"snr_db", snr}}, ch.seed(), {},
               !c.no_timestamp};
  if (!c.out_path.empty()) {
    man.outputs = {c.out_path, c.out_path + ".manifest.json"};
    std::ostringstream csv;
    write_rate_csv(csv, trace);
    write_file(c.out_path, csv.str());
    write_file(c.out_path + ".manifest.json", man.to_json().dump(2) + "\n");
  }
  if (c.json) {
    Json r = {{"manifest", man.to_json()},
              {"slope", slope},
              {"target_dof", target},
              {"deviation", deviation},
              {"trace", trace_to_json(trace)}};
    out << r.dump(2) << '\n';
  } else {
    out << "slope " << num(slope) << '\n'
        << "target " << num(target) << '\n'
        << "deviation " << num(deviation) << '\n';
  }
  return kOk;
}

int cmd_min_relays(double M, double N, double target, const Common& c, std::ostream& out) {
  const int K = min_relays(M, N, target);
  if (c.json) {
    Manifest man{"min-relays", {{"M", M}, {"N", N}, {"target", target}}, std::nullopt,
                 {}, !c.no_timestamp};
    out << Json{{"manifest", man.to_json()}, {"min_relays", K}}.dump(2) << '\n';
  } else {
    out << K << '\n';
  }
  return kOk;
}

int cmd_batch(int M, int N, int K, std::uint64_t seed, int seeds, const Common& c,
              std::ostream& out) {
  if (seeds < 1) throw Error(ErrorCode::invalid_parameter, "need at least one seed");
  const Strategy s = select_strategy(M, N, K);
  const SystemConfig config{M, N, K, 0};
  config.validate();
  struct Row {
    bool passed = false;
    int retries = 0;
    std::string error;
  };
  std::vector<Row> rows(seeds);
  parallel_for(rows.size(), [&](std::size_t i) {
    const std::uint64_t si = seed + i;
    try {
      const ChannelRealization ch = sample_channel(config, si);
      const TransceiverDesign ds = design(ch, s, si);
      const VerificationReport r = verify(design_frame_channel(ch, s), ds);
      rows[i] = {r.passed, ds.retries, ""};
    } catch (const Error& e) {
      rows[i] = {false, 0, e.what()};
    }
  });
  Json per = Json::array();
  int passed = 0;
  for (int i = 0; i < seeds; ++i) {
    passed += rows[i].passed ? 1 : 0;
    Json r = {{"seed", seed + i}, {"passed", rows[i].passed}, {"retries", rows[i].retries}};
    if (!rows[i].error.empty()) r["error"] = rows[i].error;
    per.push_back(std::move(r));
  }
  Manifest man{"batch", {{"M", M}, {"N", N}, {"K", K}, {"seeds", seeds}}, seed,
               c.out_path.empty() ? std::vector<std::string>{}
                                  : std::vector<std::string>{c.out_path},
               !c.no_timestamp};
  Json j = {{"manifest", man.to_json()},
            {"strategy", strategy_to_json(s)},
            {"passed", passed},
            {"total", seeds},
            {"runs", std::move(per)}};
  emit(c.out_path, j.dump(2) + "\n", out);
  return passed == seeds ? kOk : kNumerical;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Degrees-of-freedom calculator and transceiver designer for the "
               "multi-relay MIMO Y channel",
               "relay-dof"};
  app.require_subcommand(1);
  app.set_version_flag("--version", RELAYDOF_VERSION);

  int M = 0, N = 0, K = 0, points = 0, seeds = 100;
  std::uint64_t seed = 1;
  double ratio_min = 0.0, ratio_max = 0.0, target = 0.0;
  double Mr = 0.0, Nr = 0.0;
  bool extension = false;
  std::string design_path, dump_channel;
  std::vector<double> snr{40.0, 50.0, 60.0};
  Common common;

  auto* formula = app.add_subcommand("formula", "Evaluate the closed-form DoF expressions");
  formula->add_option("-M", M, "Antennas per user")->required()->check(CLI::PositiveNumber);
  formula->add_option("-N", N, "Antennas per relay")->required()->check(CLI::PositiveNumber);
  formula->add_option("-K", K, "Number of relays")->required()->check(CLI::PositiveNumber);
  add_common(formula, common);

  auto* sweep = app.add_subcommand("sweep", "Emit DoF curves over an M/N grid as CSV");
  sweep->add_option("-K", K, "Number of relays")->required()->check(CLI::PositiveNumber);
  sweep->add_option("-N", N, "Antennas per relay")->required()->check(CLI::PositiveNumber);
  sweep->add_option("--ratio-min", ratio_min, "Smallest M/N")->required();
  sweep->add_option("--ratio-max", ratio_max, "Largest M/N")->required();
  sweep->add_option("--points", points, "Grid points")->required();
  add_common(sweep, common, false);

  auto* dsg = app.add_subcommand("design", "Sample a channel, build and verify a design");
  dsg->add_option("-M", M, "Antennas per user")->required()->check(CLI::PositiveNumber);
  dsg->add_option("-N", N, "Antennas per relay")->required()->check(CLI::PositiveNumber);
  dsg->add_option("-K", K, "Number of relays")->required()->check(CLI::PositiveNumber);
  dsg->add_option("--seed", seed, "Channel and coefficient seed");
  dsg->add_flag("--extension", extension, "Allow symbol extension for rational d");
  dsg->add_option("--dump-channel", dump_channel, "Also write the channel JSON here");
  add_common(dsg, common, false);

  auto* slope = app.add_subcommand("slope", "High-SNR rate slope of a saved design");
  slope->add_option("design_json", design_path, "Output of the design subcommand")
      ->required();
  slope->add_option("--snr", snr, "SNR points in dB")->delimiter(',');
  add_common(slope, common);

  auto* relays = app.add_subcommand("min-relays", "Fewest relays reaching a total DoF");
  relays->add_option("-M", Mr, "Antennas per user")->required()->check(CLI::PositiveNumber);
  relays->add_option("-N", Nr, "Antennas per relay")->required()->check(CLI::PositiveNumber);
  relays->add_option("--target", target, "Target total DoF")->required();
  add_common(relays, common);

  auto* batch = app.add_subcommand("batch", "Design and verify over consecutive seeds");
  batch->add_option("-M", M, "Antennas per user")->required()->check(CLI::PositiveNumber);
  batch->add_option("-N", N, "Antennas per relay")->required()->check(CLI::PositiveNumber);
  batch->add_option("-K", K, "Number of relays")->required()->check(CLI::PositiveNumber);
  batch->add_option("--seed", seed, "First seed");
  batch->add_option("--seeds", seeds, "Number of seeds");
  add_common(batch, common, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << RELAYDOF_VERSION << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*formula) return cmd_formula(M, N, K, common, out);
    if (*sweep) return cmd_sweep(K, N, ratio_min, ratio_max, points, common, out);
    if (*dsg) return cmd_design(M, N, K, seed, extension, dump_channel, common, out, err);
    if (*slope) return cmd_slope(design_path, snr, common, out);
    if (*relays) return cmd_min_relays(Mr, Nr, target, common, out);
    if (*batch) return cmd_batch(M, N, K, seed, seeds, common, out);
  } catch (const Error& e) {
    err << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kNumerical;
  }
  return kUsage;
}

}  // namespace relaydof::cli
