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

#include "hycell/metrics.hpp"

#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hycell/simkit/simulator.hpp"
#include "oracles.hpp"

namespace hycell::metrics {
namespace {

TEST(ExportCdf, SingleSample)
{
    const auto cdf = export_cdf(std::vector<int>{5});
    ASSERT_EQ(cdf.size(), 1u);
    EXPECT_EQ(cdf[0].value, 5);
    EXPECT_DOUBLE_EQ(cdf[0].cumulative_fraction, 1.0);
}

TEST(ExportCdf, Duplicates)
{
    const auto cdf = export_cdf(std::vector<int>{1, 3, 1});
    ASSERT_EQ(cdf.size(), 2u);
    EXPECT_EQ(cdf[0].value, 1);
    EXPECT_DOUBLE_EQ(cdf[0].cumulative_fraction, 2.0 / 3.0);
    EXPECT_EQ(cdf[1].value, 3);
    EXPECT_DOUBLE_EQ(cdf[1].cumulative_fraction, 1.0);
}

TEST(ExportCdf, EmptyThrows)
{
    try {
        (void)export_cdf(std::vector<double>{});
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::EmptySamples);
    }
}

TEST(ExportCdf, RandomSetsMatchCountingOracle)
{
    std::mt19937_64 rng(12);
    for (int trial = 0; trial < 1000; ++trial) {
        std::vector<std::int64_t> v(1 + rng() % 60);
        const auto spread = 1 + rng() % 40;
        for (auto& x : v) x = static_cast<std::int64_t>(rng() % spread);
        const auto got = export_cdf(v);
        const auto want = oracle::cdf(v);
        ASSERT_EQ(got.size(), want.size());
        for (std::size_t i = 0; i < got.size(); ++i) {
            EXPECT_EQ(got[i].value, want[i].first);
            EXPECT_DOUBLE_EQ(got[i].cumulative_fraction, want[i].second);
            if (i > 0) {
                EXPECT_GT(got[i].value, got[i - 1].value);
                EXPECT_GE(got[i].cumulative_fraction, got[i - 1].cumulative_fraction);
            }
        }
        EXPECT_DOUBLE_EQ(got.back().cumulative_fraction, 1.0);
    }
}

TEST(CdfCsv, Layout)
{
    EXPECT_EQ(cdf_csv({360, 250, 360, 400}),
              "value_us,cumulative_fraction\n250,0.250000\n360,0.750000\n400,1.000000\n");
    EXPECT_EQ(cdf_csv({}), "value_us,cumulative_fraction\n");
}

TEST(EventLog, RoundTripRebuildsTheBundle)
{
    for (const char* name : {"wake_on_demand", "lossy", "idle_half_sleep"}) {
        const auto s = simkit::load_scenario(std::string(HYCELL_SOURCE_DIR "/scenarios/") + name + ".json");
        const auto r = simkit::run(s);
        std::istringstream in(write_event_log(r.events));
        const auto records = read_event_log(in);
        EXPECT_EQ(records.size(), r.events.size());
        EXPECT_EQ(bundle_from_records(records), r.bundle) << name;
    }
}

TEST(EventLog, RecordsAreTimeOrdered)
{
    const auto r = simkit::run(simkit::load_scenario(HYCELL_SOURCE_DIR "/scenarios/lossy.json"));
    for (std::size_t i = 1; i < r.events.size(); ++i) {
        ASSERT_LE(r.events[i - 1].at("t").get<std::int64_t>(), r.events[i].at("t").get<std::int64_t>());
    }
    EXPECT_EQ(r.events.front().at("type"), "header");
    EXPECT_EQ(r.events.back().at("type"), "end");
}

TEST(EventLog, ReadErrors)
{
    std::istringstream bad("{\"type\":\"header\",\"t\":0}\nnot json\n");
    try {
        (void)read_event_log(bad);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidLog);
        EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
    }
    std::istringstream untyped("{\"t\":0}\n");
    EXPECT_THROW((void)read_event_log(untyped), Error);
    EXPECT_THROW((void)bundle_from_records({}), Error);
}

TEST(Summary, RoundingRules)
{
    const auto r = simkit::run(simkit::load_scenario(HYCELL_SOURCE_DIR "/scenarios/idle_full_sleep.json"));
    const auto j = summary_json(r.bundle);
    EXPECT_DOUBLE_EQ(j["energy"]["final_power_w"].get<double>(), 163.8);
    EXPECT_DOUBLE_EQ(j["energy"]["baseline_power_w"].get<double>(), 408.4);
    const double wh = j["energy"]["total_wh"].get<double>();
    EXPECT_DOUBLE_EQ(wh, round_to(wh, 3));
    EXPECT_EQ(j["requests"]["issued"].get<int>(), 0);
}

TEST(Csv, LoadsAndModesHeaders)
{
    const auto r = simkit::run(simkit::load_scenario(HYCELL_SOURCE_DIR "/scenarios/idle_full_sleep.json"));
    EXPECT_EQ(modes_csv(r.bundle).rfind("time_us,tbs_id,from,to\n", 0), 0u);
    EXPECT_NE(modes_csv(r.bundle).find(",1,ACTIVE,CLOSING_DOWN\n"), std::string::npos);
    EXPECT_EQ(loads_csv(r.bundle).rfind("time_us,tbs_id,load_bps\n", 0), 0u);
}

} // namespace
} // namespace hycell::metrics
