// Copyright 2026 The qkge Authors.

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
/**
 * @file
 * Deterministic draws on top of mt19937_64. The std::uniform_* distributions
 * are implementation-defined, so a seed would not reproduce across
 * toolchains; these helpers pin the bit-level mapping instead.
 */
#pragma once

#include <bit>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "errors.hpp"

namespace qkge {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

/// Uniform double in [0, 1) using the top 53 bits of one draw.
inline double uniform_unit(std::mt19937_64 &rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform angle in [0, 2*pi).
inline double uniform_angle(std::mt19937_64 &rng) {
    return uniform_unit(rng) * kTwoPi;
}

/// Uniform index in [0, n) by masked rejection.
inline std::size_t uniform_index(std::mt19937_64 &rng, std::size_t n) {
    if (n == 0) {
        throw SamplingError("uniform_index: empty range");
    }
    if (n == 1) {
        return 0;
    }
    const std::uint64_t mask =
        ~std::uint64_t{0} >> std::countl_zero(static_cast<std::uint64_t>(n - 1));
    for (;;) {
        const std::uint64_t v = rng() & mask;
        if (v < n) {
            return static_cast<std::size_t>(v);
        }
    }
}

/// Fisher-Yates shuffle with the pinned index mapping above.
template <class T>
void shuffle_in_place(std::vector<T> &items, std::mt19937_64 &rng) {
    for (std::size_t i = items.size(); i > 1; --i) {
        const std::size_t j = uniform_index(rng, i);
        std::swap(items[i - 1], items[j]);
    }
}

} // namespace qkge
