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

#include <algorithm>
#include <cmath>
#include <random>

#include "hycell/simkit/rng.hpp"
#include "hycell/time.hpp"

namespace hycell::simkit {

/// CBS <-> TBS signaling overhead: a normal distribution truncated at zero,
/// plus optional independent per-message loss.
struct BackhaulModel {
    double overhead_mean_us = 360.0;
    double overhead_std_us = 100.0;
    double loss_probability = 0.0;
};

inline constexpr int kMaxDelayRedraws = 100;

/// One signaling overhead draw, rounded to whole microseconds. Negative draws
/// are redrawn; after kMaxDelayRedraws the result is clamped to zero.
inline Micros sample_backhaul_delay(Rng& rng, const BackhaulModel& model)
{
    if (!(model.overhead_std_us > 0.0)) {
        return Micros{std::llround(std::max(0.0, model.overhead_mean_us))};
    }
    std::normal_distribution<double> dist(model.overhead_mean_us, model.overhead_std_us);
    double v = dist(rng);
    for (int i = 0; v < 0.0 && i < kMaxDelayRedraws; ++i) v = dist(rng);
    return Micros{std::llround(std::max(0.0, v))};
}

inline bool sample_loss(Rng& rng, const BackhaulModel& model)
{
    if (!(model.loss_probability > 0.0)) return false;
    return std::bernoulli_distribution(model.loss_probability)(rng);
}

} // namespace hycell::simkit
