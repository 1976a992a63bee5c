/*
 * SPDX-FileCopyrightText: Copyright (c) 2026 HyCell Simulator Authors. All rights reserved.
 * SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace hycell::simkit {

namespace detail {

constexpr std::uint64_t fnv1a(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ull;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ull;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
    return x ^ (x >> 31);
}

} // namespace detail

using Rng = std::mt19937_64;

/// Derives one independent, named generator per stochastic component from a
/// scenario seed, so adding a component never shifts another's stream.
class RngStreams {
public:
    explicit RngStreams(std::uint64_t seed) : seed_(seed) {}

    [[nodiscard]] std::uint64_t seed() const noexcept { return seed_; }

    [[nodiscard]] Rng stream(std::string_view name) const
    {
        const std::uint64_t k = detail::splitmix64(seed_ ^ detail::splitmix64(detail::fnv1a(name)));
        std::seed_seq seq{static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
        return Rng(seq);
    }

private:
    std::uint64_t seed_;
};

} // namespace hycell::simkit
