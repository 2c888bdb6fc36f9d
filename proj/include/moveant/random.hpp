// SPDX-License-Identifier: Apache-2.0
//
// moveant: movable-antenna wideband multi-user MIMO simulation
// Copyright (C) 2026 The moveant authors
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
// ------------------------------------------------------------------------

#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <vector>

namespace moveant
{

// std::mt19937_64 and std::seed_seq are fully specified by the standard, so
// every stream below is bit-identical across standard libraries. The
// std::*_distribution templates are not, which is why uniform draws are
// built directly from the raw 64-bit output.
using Rng = std::mt19937_64;

inline Rng make_rng(std::initializer_list<std::uint64_t> keys)
{
    std::vector<std::uint32_t> words;
    words.reserve(2 * keys.size());
    for (std::uint64_t k : keys)
    {
        words.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
        words.push_back(static_cast<std::uint32_t>(k >> 32));
    }
    std::seed_seq seq(words.begin(), words.end());
    return Rng(seq);
}

/// Uniform draw in [0, 1) with 53 random mantissa bits.
inline double uniform01(Rng &rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

/// Uniform draw in [lo, hi).
inline double uniform(Rng &rng, double lo, double hi)
{
    return lo + (hi - lo) * uniform01(rng);
}

} // namespace moveant
