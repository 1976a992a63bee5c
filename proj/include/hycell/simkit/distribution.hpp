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

#include <random>
#include <string>
#include <string_view>

#include "hycell/simkit/rng.hpp"

namespace hycell::simkit {

/// Scalar sampling distribution configured from a scenario file.
struct Distribution {
    enum class Kind { Constant, Exponential, Uniform, Normal };

    Kind kind = Kind::Constant;
    double a = 0.0; // value / mean / min / mean
    double b = 0.0; // -    / -    / max / std

    static Distribution constant(double v) { return {Kind::Constant, v, 0.0}; }
    static Distribution exponential(double mean) { return {Kind::Exponential, mean, 0.0}; }
    static Distribution uniform(double lo, double hi) { return {Kind::Uniform, lo, hi}; }
    static Distribution normal(double mean, double std) { return {Kind::Normal, mean, std}; }

    [[nodiscard]] bool is_constant() const noexcept { return kind == Kind::Constant; }

    [[nodiscard]] double mean() const noexcept
    {
        return kind == Kind::Uniform ? (a + b) / 2.0 : a;
    }

    /// Negative draws of the normal family are clamped to zero.
    double sample(Rng& rng) const
    {
        switch (kind) {
        case Kind::Constant: return a;
        case Kind::Exponential: return std::exponential_distribution<double>(1.0 / a)(rng);
        case Kind::Uniform: return std::uniform_real_distribution<double>(a, b)(rng);
        case Kind::Normal: {
            const double v = b > 0.0 ? std::normal_distribution<double>(a, b)(rng) : a;
            return v < 0.0 ? 0.0 : v;
        }
        }
        return a;
    }

    friend bool operator==(const Distribution&, const Distribution&) = default;
};

inline std::string_view to_string(Distribution::Kind k) noexcept
{
    switch (k) {
    case Distribution::Kind::Constant: return "constant";
    case Distribution::Kind::Exponential: return "exponential";
    case Distribution::Kind::Uniform: return "uniform";
    case Distribution::Kind::Normal: return "normal";
    }
    return "?";
}

} // namespace hycell::simkit
