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

#include "relaydof/error.hpp"

namespace relaydof {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_input: return "invalid input";
    case ErrorCode::invalid_parameter: return "invalid parameter";
    case ErrorCode::infeasible_alignment: return "infeasible alignment";
    case ErrorCode::infeasible_dimension: return "infeasible dimension";
    case ErrorCode::degenerate_instance: return "degenerate instance";
    case ErrorCode::unsupported_region: return "unsupported region";
    case ErrorCode::unreachable_target: return "unreachable target";
    case ErrorCode::internal_contract: return "internal contract violation";
    case ErrorCode::precondition: return "precondition failed";
    case ErrorCode::io: return "i/o error";
  }
  return "unknown error";
}

}  // namespace relaydof
