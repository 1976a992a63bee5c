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

#include <array>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "hycell/error.hpp"
#include "hycell/tbs_agent.hpp"
#include "hycell/time.hpp"

namespace hycell::energy {

enum class SleepDepth { HALF, FULL };

constexpr std::string_view to_string(SleepDepth d) noexcept
{
    return d == SleepDepth::HALF ? "HALF" : "FULL";
}

/// Power draw in integer milliwatts. Table-style figures with at most three
/// decimals in watts are represented exactly.
struct Milliwatts {
    std::int64_t value = 0;

    static Milliwatts from_watts(double w) { return Milliwatts{std::llround(w * 1000.0)}; }
    [[nodiscard]] double watts() const noexcept { return static_cast<double>(value) / 1000.0; }

    friend Milliwatts operator+(Milliwatts a, Milliwatts b) noexcept { return {a.value + b.value}; }
    Milliwatts& operator+=(Milliwatts o) noexcept
    {
        value += o.value;
        return *this;
    }
    friend auto operator<=>(const Milliwatts&, const Milliwatts&) = default;
};

struct PowerProfile {
    double cbs_pc_w = 129.0;
    double cbs_usrp_w = 13.8;
    double tbs_pc_active_w = 108.5;
    double tbs_pc_software_off_w = 90.5;
    double tbs_pc_off_w = 0.0;
    double usrp_on_w = 13.8;
    double usrp_off_w = 0.0;
    double switch_w = 21.0;
    SleepDepth sleep_depth = SleepDepth::FULL;

    /// Throws InvalidScenario when a power is negative or the TBS PC figures
    /// are not ordered off <= software-off <= active.
    void validate() const
    {
        for (double w : {cbs_pc_w, cbs_usrp_w, tbs_pc_active_w, tbs_pc_software_off_w, tbs_pc_off_w, usrp_on_w,
                         usrp_off_w, switch_w}) {
            if (!(w >= 0.0)) throw Error(ErrorCode::InvalidScenario, "power figures must be >= 0");
        }
        if (!(tbs_pc_off_w <= tbs_pc_software_off_w && tbs_pc_software_off_w <= tbs_pc_active_w)) {
            throw Error(ErrorCode::InvalidScenario, "need tbs_pc_off_w <= tbs_pc_software_off_w <= tbs_pc_active_w");
        }
        if (!(usrp_off_w <= usrp_on_w)) throw Error(ErrorCode::InvalidScenario, "need usrp_off_w <= usrp_on_w");
    }
};

enum Component : std::size_t { CbsPc, CbsUsrp, Switch, TbsPc, TbsUsrp, kComponentCount };

constexpr std::string_view component_name(std::size_t c) noexcept
{
    constexpr std::array<std::string_view, kComponentCount> names{"cbs_pc", "cbs_usrp", "switch", "tbs_pc",
                                                                  "tbs_usrp"};
    return c < names.size() ? names[c] : "?";
}

using PowerBreakdown = std::array<Milliwatts, kComponentCount>;

inline Milliwatts total(const PowerBreakdown& p) noexcept
{
    Milliwatts sum;
    for (auto w : p) sum += w;
    return sum;
}

/// Draw of every component for the given TBS modes. Transitional modes draw
/// full power.
inline PowerBreakdown station_power(const PowerProfile& profile, std::span<const TbsMode> tbs_modes)
{
    PowerBreakdown p{};
    p[CbsPc] = Milliwatts::from_watts(profile.cbs_pc_w);
    p[CbsUsrp] = Milliwatts::from_watts(profile.cbs_usrp_w);
    p[Switch] = Milliwatts::from_watts(profile.switch_w);
    for (auto mode : tbs_modes) {
        if (mode == TbsMode::SLEEPING) {
            p[TbsPc] += Milliwatts::from_watts(profile.sleep_depth == SleepDepth::FULL ? profile.tbs_pc_off_w
                                                                                      : profile.tbs_pc_software_off_w);
            p[TbsUsrp] += Milliwatts::from_watts(profile.usrp_off_w);
        } else {
            p[TbsPc] += Milliwatts::from_watts(profile.tbs_pc_active_w);
            p[TbsUsrp] += Milliwatts::from_watts(profile.usrp_on_w);
        }
    }
    return p;
}

/// Energy in milliwatt-microseconds.
struct EnergyMwUs {
    std::int64_t value = 0;
    [[nodiscard]] double watt_hours() const noexcept { return static_cast<double>(value) / 3.6e12; }
    friend auto operator<=>(const EnergyMwUs&, const EnergyMwUs&) = default;
};

/// Piecewise-constant power integrated over a gap-free timeline.
class EnergyLedger {
public:
    explicit EnergyLedger(Micros start = Micros{0}) : last_update_(start) {}

    [[nodiscard]] Micros last_update() const noexcept { return last_update_; }
    [[nodiscard]] const PowerBreakdown& current_power() const noexcept { return power_; }
    [[nodiscard]] const std::array<EnergyMwUs, kComponentCount>& energy() const noexcept { return energy_; }

    [[nodiscard]] EnergyMwUs total_energy() const noexcept
    {
        EnergyMwUs sum;
        for (auto e : energy_) sum.value += e.value;
        return sum;
    }

    void accumulate(Micros from, Micros to, const PowerBreakdown& power)
    {
        if (from != last_update_) {
            throw Error(ErrorCode::TimelineGap, "interval starts at " + std::to_string(from.count()) +
                                                    " but ledger is at " + std::to_string(last_update_.count()));
        }
        if (to < from) throw Error(ErrorCode::TimelineGap, "interval ends before it starts");
        const auto dt = (to - from).count();
        for (std::size_t c = 0; c < kComponentCount; ++c) {
            energy_[c].value += power[c].value * dt;
        }
        power_ = power;
        last_update_ = to;
    }

    /// Integrates the current power up to `to`, then switches to `next`.
    void change_power(Micros to, const PowerBreakdown& next)
    {
        accumulate(last_update_, to, power_);
        power_ = next;
    }

    void set_initial_power(const PowerBreakdown& p) noexcept { power_ = p; }

private:
    Micros last_update_;
    PowerBreakdown power_{};
    std::array<EnergyMwUs, kComponentCount> energy_{};
};

inline double savings(double baseline, double actual)
{
    if (!(baseline > 0.0)) throw Error(ErrorCode::ZeroBaseline, "baseline must be positive");
    return (baseline - actual) / baseline;
}

} // namespace hycell::energy
