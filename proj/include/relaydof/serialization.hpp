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

#include <ostream>
#include <vector>

#include <json.hpp>

#include "relaydof/channel.hpp"
#include "relaydof/designer.hpp"
#include "relaydof/formulas.hpp"
#include "relaydof/verifier.hpp"

namespace relaydof {

using Json = nlohmann::json;

/// Row-major list of [re, im] pairs.
Json matrix_entries(const ComplexMatrix& a);
ComplexMatrix matrix_from_entries(const Json& j, Index rows, Index cols);

/// {"rows", "cols", "data"} with data as in matrix_entries.
Json matrix_to_json(const ComplexMatrix& a);
ComplexMatrix matrix_from_json(const Json& j);

/// {"config":{M,N,K,d}, "seed", "rx_active", "H":[...], "G":[...]}; uplink
/// blocks k-major, downlink blocks j-major.
Json channel_to_json(const ChannelRealization& ch);
ChannelRealization channel_from_json(const Json& j);

Json strategy_to_json(const Strategy& s);
Strategy strategy_from_json(const Json& j);

Json design_to_json(const TransceiverDesign& d);
TransceiverDesign design_from_json(const Json& j);

Json report_to_json(const VerificationReport& r);
Json trace_to_json(const RateTrace& t);

/// Header `snr_db,sum_rate_bits`.
void write_rate_csv(std::ostream& os, const RateTrace& t);

/// Header `ratio,achievable,symmetric,upper`, 12 significant digits.
void write_curve_csv(std::ostream& os, const std::vector<CurveSample>& rows);

}  // namespace relaydof
