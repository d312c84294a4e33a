// Copyright 2026 The mmdbayes Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>

namespace mmdbayes {

using Rng = std::mt19937_64;

/// SplitMix64 finalizer; used for all seed derivation.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed of sub-stream `stream` of `seed`:
///   derive_seed(s, k) = splitmix64(splitmix64(s) ^ splitmix64(k + 0x9E3779B97F4A7C15)).
/// Distinct (seed, stream) pairs map to distinct 64-bit values with overwhelming
/// probability; callers that need certainty check for collisions explicitly.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) noexcept;

// The samplers below only consume raw 64-bit words, so a given seed yields the
// same draws with every standard library.

/// Uniform draw in the open interval (0, 1).
double uniform01(Rng& rng) noexcept;

/// Standard normal draw (Marsaglia polar method, no cached second value).
double standard_normal(Rng& rng) noexcept;

/// Standard Cauchy draw by inverse CDF, tan(pi (u - 1/2)).
double standard_cauchy(Rng& rng) noexcept;

}  // namespace mmdbayes
