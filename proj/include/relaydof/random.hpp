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
#include <initializer_list>
#include <random>

#include "relaydof/numerics.hpp"

namespace relaydof {

using Rng = std::mt19937_64;

/// Mixes a base seed with a list of integer tags (splitmix64 chaining), so
/// every matrix or coefficient draw gets its own independent stream.
std::uint64_t derive_seed(std::uint64_t base,
                          std::initializer_list<std::uint64_t> tags) noexcept;

/// i.i.d. circularly-symmetric complex Gaussian entries, unit variance.
ComplexMatrix complex_gaussian(Index rows, Index cols, Rng& rng);

/// Haar-ish random unitary (QR of a complex Gaussian matrix).
ComplexMatrix random_unitary(Index n, Rng& rng);

}  // namespace relaydof
