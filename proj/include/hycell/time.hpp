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

#include <chrono>
#include <cmath>
#include <cstdint>

namespace hycell {

/// Simulation time and durations, integer microseconds since scenario start.
using Micros = std::chrono::duration<std::int64_t, std::micro>;

using TbsId = std::uint16_t;

inline Micros from_seconds(double seconds) noexcept
{
    return Micros{static_cast<std::int64_t>(std::llround(seconds * 1e6))};
}

constexpr double to_seconds(Micros t) noexcept
{
    return static_cast<double>(t.count()) / 1e6;
}

} // namespace hycell
