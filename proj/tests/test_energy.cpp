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

#include "hycell/energy.hpp"

#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "oracles.hpp"

namespace hycell::energy {
namespace {

using namespace std::chrono_literals;

PowerBreakdown power_for(SleepDepth depth, std::vector<TbsMode> modes)
{
    PowerProfile p;
    p.sleep_depth = depth;
    return station_power(p, modes);
}

double pc_w(const PowerBreakdown& b) { return b[CbsPc].watts() + b[TbsPc].watts(); }
double usrp_w(const PowerBreakdown& b) { return b[CbsUsrp].watts() + b[TbsUsrp].watts(); }

TEST(StationPower, NoSleepColumn)
{
    const auto b = power_for(SleepDepth::FULL, {TbsMode::ACTIVE, TbsMode::ACTIVE});
    EXPECT_DOUBLE_EQ(pc_w(b), 346.0);
    EXPECT_DOUBLE_EQ(usrp_w(b), 41.4);
    EXPECT_DOUBLE_EQ(b[Switch].watts(), 21.0);
    EXPECT_EQ(total(b).value, 408'400);
}

TEST(StationPower, HalfSleepColumn)
{
    const auto b = power_for(SleepDepth::HALF, {TbsMode::SLEEPING, TbsMode::SLEEPING});
    EXPECT_DOUBLE_EQ(pc_w(b), 310.0);
    EXPECT_DOUBLE_EQ(usrp_w(b), 13.8);
    EXPECT_EQ(total(b).value, 344'800);
}

TEST(StationPower, FullSleepColumn)
{
    const auto b = power_for(SleepDepth::FULL, {TbsMode::SLEEPING, TbsMode::SLEEPING});
    EXPECT_DOUBLE_EQ(pc_w(b), 129.0);
    EXPECT_DOUBLE_EQ(usrp_w(b), 13.8);
    EXPECT_EQ(total(b).value, 163'800);
}

TEST(StationPower, TransitionalModesDrawFullPower)
{
    const auto active = power_for(SleepDepth::FULL, {TbsMode::ACTIVE});
    EXPECT_EQ(power_for(SleepDepth::FULL, {TbsMode::SETTING_UP}), active);
    EXPECT_EQ(power_for(SleepDepth::FULL, {TbsMode::CLOSING_DOWN}), active);
}

TEST(StationPower, CbsAloneWithoutTbs)
{
    EXPECT_EQ(total(power_for(SleepDepth::FULL, {})).value, 163'800);
}

TEST(PowerProfile, Validate)
{
    PowerProfile p;
    EXPECT_NO_THROW(p.validate());
    p.tbs_pc_software_off_w = 200.0;
    EXPECT_THROW(p.validate(), Error);
    p = PowerProfile{};
    p.switch_w = -1.0;
    EXPECT_THROW(p.validate(), Error);
}

TEST(Accumulate, OneHourFullSleep)
{
    EnergyLedger ledger;
    const auto b = power_for(SleepDepth::FULL, {TbsMode::SLEEPING, TbsMode::SLEEPING});
    ledger.accumulate(0s, 1h, b);
    EXPECT_NEAR(ledger.total_energy().watt_hours(), 163.8, 1e-9);
    EXPECT_EQ(ledger.last_update(), Micros{1h});
}

TEST(Accumulate, ZeroLengthInterval)
{
    EnergyLedger ledger(5s);
    ledger.accumulate(5s, 5s, power_for(SleepDepth::FULL, {TbsMode::ACTIVE}));
    EXPECT_EQ(ledger.total_energy().value, 0);
    EXPECT_EQ(ledger.last_update(), Micros{5s});
}

TEST(Accumulate, GapsAndReversalsThrow)
{
    EnergyLedger ledger;
    const auto b = power_for(SleepDepth::FULL, {});
    ledger.accumulate(0s, 2s, b);
    try {
        ledger.accumulate(3s, 4s, b);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::TimelineGap);
    }
    EXPECT_THROW(ledger.accumulate(2s, 1s, b), Error);
}

TEST(Accumulate, PiecewiseTraceMatchesRiemannSum)
{
    std::mt19937_64 rng(77);
    const TbsMode modes[] = {TbsMode::ACTIVE, TbsMode::CLOSING_DOWN, TbsMode::SLEEPING, TbsMode::SETTING_UP};
    for (int trial = 0; trial < 200; ++trial) {
        PowerProfile p;
        p.sleep_depth = rng() % 2 == 0 ? SleepDepth::HALF : SleepDepth::FULL;
        const std::size_t n_tbs = 1 + rng() % 4;
        std::vector<TbsMode> state(n_tbs, TbsMode::ACTIVE);
        EnergyLedger ledger;
        ledger.set_initial_power(station_power(p, state));
        std::vector<std::pair<std::int64_t, double>> trace{{0, total(station_power(p, state)).watts()}};
        std::int64_t t = 0;
        for (int k = 0; k < 20; ++k) {
            t += 1000 * static_cast<std::int64_t>(rng() % 200);
            state[rng() % n_tbs] = modes[rng() % 4];
            const auto next = station_power(p, state);
            ledger.change_power(Micros{t}, next);
            trace.emplace_back(t, total(next).watts());
        }
        const std::int64_t end = t + 1000 * static_cast<std::int64_t>(rng() % 200);
        ledger.change_power(Micros{end}, ledger.current_power());
        const double want = oracle::riemann_wh(trace, 0, end, 1000);
        EXPECT_NEAR(ledger.total_energy().watt_hours(), want, 1e-9 * std::max(1.0, want));

        EnergyMwUs parts;
        for (auto e : ledger.energy()) parts.value += e.value;
        EXPECT_EQ(parts, ledger.total_energy());
    }
}

TEST(Savings, TableColumns)
{
    EXPECT_NEAR(savings(408.4, 163.8), 0.599, 5e-4);
    EXPECT_NEAR(savings(408.4, 344.8), 0.156, 5e-4);
    EXPECT_DOUBLE_EQ(savings(408.4, 163.8), (408.4 - 163.8) / 408.4);
    EXPECT_DOUBLE_EQ(savings(12.5, 12.5), 0.0);
}

TEST(Savings, ZeroBaseline)
{
    try {
        (void)savings(0.0, 1.0);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::ZeroBaseline);
    }
}

} // namespace
} // namespace hycell::energy
