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

#include "relaydof/serialization.hpp"

#include <iomanip>
#include <string>

#include "relaydof/error.hpp"

namespace relaydof {

namespace {

template <class T>
T field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw Error(ErrorCode::invalid_input, std::string("missing field '") + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::invalid_input,
                std::string("bad field '") + key + "': " + e.what());
  }
}

const Json& array_field(const Json& j, const char* key, std::size_t size) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_array() ||
      j.at(key).size() != size) {
    throw Error(ErrorCode::invalid_input,
                std::string("field '") + key + "' must be an array of " +
                    std::to_string(size));
  }
  return j.at(key);
}

}  // namespace

Json matrix_entries(const ComplexMatrix& a) {
  Json out = Json::array();
  for (Index r = 0; r < a.rows(); ++r) {
    for (Index c = 0; c < a.cols(); ++c) {
      out.push_back({a(r, c).real(), a(r, c).imag()});
    }
  }
  return out;
}

ComplexMatrix matrix_from_entries(const Json& j, Index rows, Index cols) {
  if (!j.is_array() || j.size() != static_cast<std::size_t>(rows * cols)) {
    throw Error(ErrorCode::invalid_input,
                "expected " + std::to_string(rows * cols) + " matrix entries");
  }
  ComplexMatrix out(rows, cols);
  std::size_t i = 0;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c, ++i) {
      const Json& e = j[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
        throw Error(ErrorCode::invalid_input, "matrix entry must be [re, im]");
      }
      out(r, c) = Complex(e[0].get<double>(), e[1].get<double>());
    }
  }
  if (!all_finite(out)) throw Error(ErrorCode::invalid_input, "non-finite matrix entry");
  return out;
}

Json matrix_to_json(const ComplexMatrix& a) {
  return {{"rows", a.rows()}, {"cols", a.cols()}, {"data", matrix_entries(a)}};
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto rows = field<Index>(j, "rows");
  const auto cols = field<Index>(j, "cols");
  if (rows < 0 || cols < 0) throw Error(ErrorCode::invalid_input, "negative matrix size");
  return matrix_from_entries(j.at("data"), rows, cols);
}

Json channel_to_json(const ChannelRealization& ch) {
  const SystemConfig& c = ch.config();
  Json h = Json::array();
  for (const auto& b : ch.uplink()) h.push_back(matrix_entries(b));
  Json g = Json::array();
  for (const auto& b : ch.downlink()) g.push_back(matrix_entries(b));
  return {{"config", {{"M", c.M}, {"N", c.N}, {"K", c.K}, {"d", c.d}}},
          {"seed", ch.seed()},
          {"rx_active", ch.active_rx()},
          {"H", std::move(h)},
          {"G", std::move(g)}};
}

ChannelRealization channel_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("config")) {
    throw Error(ErrorCode::invalid_input, "channel: missing 'config'");
  }
  const Json& cj = j.at("config");
  SystemConfig c{field<int>(cj, "M"), field<int>(cj, "N"), field<int>(cj, "K"),
                 field<int>(cj, "d")};
  c.validate();
  const int rx = j.contains("rx_active") ? field<int>(j, "rx_active") : c.N;
  if (rx < 1 || rx > c.N) throw Error(ErrorCode::invalid_input, "rx_active out of range");
  const auto blocks = static_cast<std::size_t>(3 * c.K);
  const Json& hj = array_field(j, "H", blocks);
  const Json& gj = array_field(j, "G", blocks);
  std::vector<ComplexMatrix> up, down;
  for (std::size_t i = 0; i < blocks; ++i) {
    up.push_back(matrix_from_entries(hj[i], rx, c.M));
    down.push_back(matrix_from_entries(gj[i], c.M, c.N));
  }
  return ChannelRealization(c, field<std::uint64_t>(j, "seed"), std::move(up),
                            std::move(down));
}

Json strategy_to_json(const Strategy& s) {
  Json out = {{"kind", std::string(to_string(s.kind))},
              {"d", s.d},
              {"d_prime", s.d_prime},
              {"n_prime", s.n_prime},
              {"streams_per_use", s.streams_per_use()},
              {"disablement", nullptr},
              {"extension", nullptr}};
  if (s.disablement) {
    out["disablement"] = {{"m_star", s.disablement->m_star},
                          {"n_star", s.disablement->n_star}};
  }
  if (s.extension) {
    const ExtensionPlan& p = *s.extension;
    out["extension"] = {{"L", p.L},
                        {"m_star", {p.m_star.num, p.m_star.den}},
                        {"block_col_sizes", p.block_col_sizes}};
  }
  return out;
}

Strategy strategy_from_json(const Json& j) {
  Strategy s;
  s.kind = strategy_kind_from_string(field<std::string>(j, "kind"));
  s.d = field<int>(j, "d");
  s.d_prime = field<int>(j, "d_prime");
  s.n_prime = field<int>(j, "n_prime");
  if (j.contains("disablement") && !j.at("disablement").is_null()) {
    const Json& dj = j.at("disablement");
    s.disablement = Disablement{field<int>(dj, "m_star"), field<int>(dj, "n_star")};
  }
  if (j.contains("extension") && !j.at("extension").is_null()) {
    const Json& ej = j.at("extension");
    const Json& m = array_field(ej, "m_star", 2);
    ExtensionPlan p;
    p.L = field<int>(ej, "L");
    p.m_star = Rational{m[0].get<long>(), m[1].get<long>()};
    p.block_col_sizes = field<std::vector<int>>(ej, "block_col_sizes");
    p.validate();
    s.extension = std::move(p);
  }
  return s;
}

Json design_to_json(const TransceiverDesign& d) {
  Json u = Json::array();
  for (int j = 0; j < 3; ++j) {
    for (const int jp : {j + 1, j + 2}) {
      u.push_back({{"j", j}, {"jp", user(jp)}, {"matrix", matrix_to_json(d.U.at(j, jp))}});
    }
  }
  Json f = Json::array();
  for (const auto& m : d.F) f.push_back(matrix_to_json(m));
  Json v = Json::array();
  for (const auto& m : d.V) v.push_back(matrix_to_json(m));
  const SystemConfig& c = d.frame;
  return {{"strategy", strategy_to_json(d.strategy)},
          {"frame", {{"M", c.M}, {"N", c.N}, {"K", c.K}, {"d", c.d}}},
          {"precoder_split", d.precoder_split},
          {"retries", d.retries},
          {"U", std::move(u)},
          {"F", std::move(f)},
          {"V", std::move(v)}};
}

TransceiverDesign design_from_json(const Json& j) {
  TransceiverDesign d;
  if (!j.is_object() || !j.contains("strategy") || !j.contains("frame")) {
    throw Error(ErrorCode::invalid_input, "design: missing 'strategy' or 'frame'");
  }
  d.strategy = strategy_from_json(j.at("strategy"));
  const Json& fj = j.at("frame");
  d.frame = SystemConfig{field<int>(fj, "M"), field<int>(fj, "N"), field<int>(fj, "K"),
                         field<int>(fj, "d")};
  d.frame.validate();
  d.precoder_split = field<int>(j, "precoder_split");
  d.retries = field<int>(j, "retries");
  const Json& uj = array_field(j, "U", 6);
  std::array<bool, 6> seen{};
  for (const Json& e : uj) {
    const int a = field<int>(e, "j");
    const int b = field<int>(e, "jp");
    if (a < 0 || a > 2 || b < 0 || b > 2 || a == b) {
      throw Error(ErrorCode::invalid_input, "user precoder indices out of range");
    }
    const int slot = UserPrecoders::slot(a, b);
    if (seen[slot]) throw Error(ErrorCode::invalid_input, "duplicate user precoder");
    seen[slot] = true;
    d.U.blocks[slot] = matrix_from_json(e.at("matrix"));
  }
  for (const Json& e : array_field(j, "F", static_cast<std::size_t>(d.frame.K))) {
    d.F.push_back(matrix_from_json(e));
  }
  const Json& vj = array_field(j, "V", 3);
  for (int i = 0; i < 3; ++i) d.V[i] = matrix_from_json(vj[i]);
  return d;
}

Json report_to_json(const VerificationReport& r) {
  return {{"residuals", r.residuals},
          {"ranks", r.ranks},
          {"self_interference_precancelled", r.self_interference_precancelled},
          {"passed", r.passed},
          {"retries_used", r.retries_used}};
}

Json trace_to_json(const RateTrace& t) {
  return {{"snr_db", t.snr_db},
          {"sum_rate_bits", t.sum_rate_bits},
          {"slope_estimate", t.slope_estimate}};
}

void write_rate_csv(std::ostream& os, const RateTrace& t) {
  os << "snr_db,sum_rate_bits\n" << std::setprecision(12);
  for (std::size_t i = 0; i < t.snr_db.size(); ++i) {
    os << t.snr_db[i] << ',' << t.sum_rate_bits[i] << '\n';
  }
}

void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& rows) {
  os << "ratio,achievable,symmetric,upper\n" << std::setprecision(12);
  for (const auto& r : rows) {
    os << r.ratio << ',' << r.achievable << ',' << r.symmetric << ',' << r.upper << '\n';
  }
}

}  // namespace relaydof
