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

#include "hycell/simkit/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "hycell/replay.hpp"

namespace hycell::simkit {
namespace {

using namespace std::chrono_literals;
using nlohmann::json;

ScenarioConfig scenario(json doc)
{
    doc["version"] = 1;
    if (!doc.contains("horizon_s")) doc["horizon_s"] = 60;
    return parse_scenario(doc);
}

std::vector<json> of_type(const std::vector<json>& events, const std::string& type)
{
    std::vector<json> out;
    std::copy_if(events.begin(), events.end(), std::back_inserter(out),
                 [&](const json& r) { return r.at("type") == type; });
    return out;
}

// -- event queue --------------------------------------------------------------

TEST(EventQueue, EqualTimesKeepInsertionOrder)
{
    EventQueue<int> q;
    q.schedule(Micros{5}, 1);
    q.schedule(Micros{5}, 2);
    q.schedule(Micros{5}, 3);
    EXPECT_EQ(q.pop()->payload, 1);
    EXPECT_EQ(q.pop()->payload, 2);
    EXPECT_EQ(q.pop()->payload, 3);
    EXPECT_FALSE(q.pop().has_value());
}

TEST(EventQueue, PastEventRejected)
{
    EventQueue<int> q;
    q.schedule(Micros{10}, 0);
    (void)q.pop();
    EXPECT_EQ(q.clock(), Micros{10});
    try {
        q.schedule(Micros{9}, 1);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::PastEvent);
    }
    EXPECT_NO_THROW(q.schedule(Micros{10}, 2));
}

TEST(EventQueue, RandomBatchMatchesSortOracle)
{
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 200; ++trial) {
        EventQueue<int> q;
        std::vector<std::pair<std::int64_t, int>> expected;
        for (int i = 0; i < 200; ++i) {
            const auto t = static_cast<std::int64_t>(rng() % 50);
            q.schedule(Micros{t}, i);
            expected.emplace_back(t, i);
        }
        std::stable_sort(expected.begin(), expected.end(),
                         [](const auto& a, const auto& b) { return a.first < b.first; });
        for (const auto& [t, i] : expected) {
            const auto e = q.pop();
            ASSERT_TRUE(e.has_value());
            EXPECT_EQ(e->time.count(), t);
            EXPECT_EQ(e->payload, i);
        }
        EXPECT_TRUE(q.empty());
    }
}

TEST(EventQueue, InterleavedScheduleAndPop)
{
    EventQueue<int> q;
    q.schedule(Micros{3}, 3);
    q.schedule(Micros{1}, 1);
    EXPECT_EQ(q.pop()->payload, 1);
    q.schedule(Micros{2}, 2);
    EXPECT_EQ(q.next_time(), Micros{2});
    EXPECT_EQ(q.pop()->payload, 2);
    EXPECT_EQ(q.pop()->payload, 3);
}

// -- random streams and distributions -------------------------------------------

TEST(RngStreams, NamedStreamsAreStableAndDistinct)
{
    const RngStreams a(42);
    const RngStreams b(42);
    auto x = a.stream("tbs/1");
    auto y = b.stream("tbs/1");
    auto z = a.stream("tbs/2");
    const auto x0 = x();
    EXPECT_EQ(x0, y());
    EXPECT_NE(x0, z());
    EXPECT_NE(RngStreams(43).stream("tbs/1")(), x0);
}

TEST(Distribution, Sampling)
{
    Rng rng(1);
    EXPECT_DOUBLE_EQ(Distribution::constant(2.5).sample(rng), 2.5);
    for (int i = 0; i < 1000; ++i) {
        const double u = Distribution::uniform(1.0, 2.0).sample(rng);
        EXPECT_GE(u, 1.0);
        EXPECT_LE(u, 2.0);
        EXPECT_GE(Distribution::normal(0.1, 5.0).sample(rng), 0.0);
    }
    double sum = 0.0;
    for (int i = 0; i < 100000; ++i) sum += Distribution::exponential(3.0).sample(rng);
    EXPECT_NEAR(sum / 100000.0, 3.0, 0.05);
    EXPECT_DOUBLE_EQ(Distribution::uniform(1.0, 3.0).mean(), 2.0);
}

// -- backhaul -------------------------------------------------------------------

TEST(Backhaul, DegenerateModel)
{
    Rng rng(3);
    const BackhaulModel m{360.0, 0.0, 0.0};
    for (int i = 0; i < 100; ++i) EXPECT_EQ(sample_backhaul_delay(rng, m), Micros{360});
}

TEST(Backhaul, DefaultModelStatistics)
{
    Rng rng(RngStreams(1).stream("backhaul"));
    const BackhaulModel m;
    const int n = 100000;
    std::vector<double> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) v.push_back(static_cast<double>(sample_backhaul_delay(rng, m).count()));
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (double x : v) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / (n - 1));
    EXPECT_NEAR(mean, 360.0, 3.6);
    EXPECT_NEAR(sd, 100.0, 5.0);
    EXPECT_GE(*std::min_element(v.begin(), v.end()), 0.0);
}

TEST(Backhaul, LossRate)
{
    Rng rng(4);
    const BackhaulModel m{360.0, 100.0, 0.25};
    int lost = 0;
    for (int i = 0; i < 40000; ++i) lost += sample_loss(rng, m) ? 1 : 0;
    EXPECT_NEAR(lost / 40000.0, 0.25, 0.01);
    EXPECT_FALSE(sample_loss(rng, BackhaulModel{}));
}

// -- UE -------------------------------------------------------------------------

TEST(UeStep, SessionDuration)
{
    EXPECT_EQ(session_duration(16800, 2400.0), 7s);
    EXPECT_EQ(session_duration(1, 3.0), Micros{333334});

    UeAgent ue(UeProfile{}, Rng(1));
    auto out = ue.step(UeArrival{}, 1s);
    ASSERT_FALSE(out.empty());
    const auto send = std::get<SendRequest>(out.front());
    out = ue.step(UeAssigned{send.request}, 2s);
    ASSERT_EQ(out.size(), 1u);
    const auto plan = std::get<SessionPlan>(out.front());
    EXPECT_EQ(plan.bytes, 16800u);
    EXPECT_EQ(plan.end, 9s);
    EXPECT_EQ(ue.succeeded(), 1u);
}

TEST(UeStep, RetransmitsThenFails)
{
    UeProfile p;
    p.max_retransmits = 3;
    UeAgent ue(p, Rng(1));
    const auto first = std::get<SendRequest>(ue.step(UeArrival{}, 0s).front());
    Micros now = 0s;
    for (std::uint32_t k = 2; k <= 4; ++k) {
        const auto out = ue.step(UeRefused{first.request}, now);
        ASSERT_EQ(out.size(), 1u);
        const auto resend = std::get<SendRequest>(out.front());
        EXPECT_EQ(resend.attempt, k);
        EXPECT_EQ(resend.at, now + p.retransmit_interval);
        now = resend.at;
    }
    const auto out = ue.step(UeRefused{first.request}, now);
    ASSERT_EQ(out.size(), 1u);
    const auto failed = std::get<RequestFailed>(out.front());
    EXPECT_EQ(failed.attempts, 4u);
    EXPECT_EQ(ue.failed(), 1u);
    EXPECT_EQ(ue.in_flight(), 0u);
}

TEST(UeStep, StopAndMaxRequests)
{
    UeProfile p;
    p.interarrival_s = Distribution::constant(1.0);
    p.max_requests = 2;
    UeAgent ue(p, Rng(1));
    ASSERT_EQ(ue.first_arrival(), Micros{0});
    EXPECT_EQ(ue.step(UeArrival{}, 0s).size(), 2u);
    EXPECT_EQ(ue.step(UeArrival{}, 1s).size(), 1u);

    UeProfile q;
    q.interarrival_s = Distribution::constant(5.0);
    q.stop = 4s;
    UeAgent stopped(q, Rng(1));
    EXPECT_EQ(stopped.step(UeArrival{}, 0s).size(), 1u);
}

// -- scenario files ----------------------------------------------------------------

TEST(Scenario, Defaults)
{
    const auto s = scenario({{"tbs", {{{"id", 1}}}}});
    ASSERT_EQ(s.tbs.size(), 1u);
    EXPECT_EQ(s.tbs[0].params.setup_time, Micros{8'400'000});
    EXPECT_EQ(s.tbs[0].params.close_down_time, Micros{52'000});
    EXPECT_EQ(s.tbs[0].params.pdtch_slots_per_arfcn, 7);
    EXPECT_EQ(s.cbs.retention_period, 10s);
    EXPECT_TRUE(s.sleeping_enabled);
    EXPECT_DOUBLE_EQ(s.backhaul.overhead_mean_us, 360.0);
}

TEST(Scenario, ReportsEveryProblem)
{
    json doc = {{"version", 1},
                {"horizon_s", -1},
                {"colour", "blue"},
                {"tbs", {{{"id", 0}, {"setup_s", {{"dist", "gamma"}}}}}},
                {"ues", {{{"id", 1}, {"channel", "LTE:BCH"}}}}};
    try {
        (void)parse_scenario(doc);
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.code(), ErrorCode::InvalidScenario);
        const std::string what = e.what();
        for (const char* needle : {"horizon_s", "colour", "tbs[0].id", "tbs[0].setup_s.dist", "ues[0].channel"}) {
            EXPECT_NE(what.find(needle), std::string::npos) << needle << " missing from: " << what;
        }
    }
}

TEST(Scenario, DistributionForms)
{
    const auto s = scenario({{"tbs", {{{"id", 1}, {"setup_s", {{"dist", "normal"}, {"mean", 8.4}, {"std", 0.5}}}}}},
                             {"ues",
                              {{{"id", 3},
                                {"channel", "umts:dtch"},
                                {"interarrival_s", {{"dist", "uniform"}, {"min", 1}, {"max", 2}}},
                                {"session_size_bytes", 1000}}}}});
    EXPECT_EQ(s.tbs[0].setup_s.kind, Distribution::Kind::Normal);
    EXPECT_EQ(s.ues[0].interarrival_s.kind, Distribution::Kind::Uniform);
    EXPECT_EQ(s.ues[0].channel.to_string(), "UMTS:DTCH");
    EXPECT_DOUBLE_EQ(s.ues[0].session_size_bytes.a, 1000.0);
}

TEST(Scenario, RejectsWrongVersionAndDuplicateIds)
{
    EXPECT_THROW((void)parse_scenario(json{{"version", 2}, {"horizon_s", 1}}), Error);
    EXPECT_THROW((void)scenario({{"tbs", {{{"id", 1}}, {{"id", 1}}}}}), Error);
    EXPECT_THROW((void)parse_scenario_text("{ not json"), Error);
}

TEST(Scenario, BundledFilesValidate)
{
    for (const char* name : {"idle_no_sleep", "idle_half_sleep", "idle_full_sleep", "delay_overhead",
                             "load_balance", "wake_on_demand", "lossy"}) {
        EXPECT_NO_THROW((void)load_scenario(std::string(HYCELL_SOURCE_DIR "/scenarios/") + name + ".json")) << name;
    }
}

// -- whole runs ----------------------------------------------------------------------

TEST(Run, IdleStationsFallAsleep)
{
    const auto s = scenario({{"tbs", {{{"id", 1}}, {{"id", 2}}}}});
    const auto r = run(s, 1);
    EXPECT_EQ(r.bundle.energy.final_power.value, 163'800);
    const auto modes = r.bundle.mode_log;
    ASSERT_EQ(modes.size(), 4u);
    for (const auto& m : modes) EXPECT_LE(m.time_us, 5'000'000 + 1'000 + 52'000);
    EXPECT_EQ(r.bundle.close_down_durations, (std::vector<std::int64_t>{52'000, 52'000}));
}

TEST(Run, SameSeedSameResult)
{
    const auto s = load_scenario(HYCELL_SOURCE_DIR "/scenarios/lossy.json");
    const auto a = run(s, 5);
    const auto b = run(s, 5);
    EXPECT_EQ(a.bundle, b.bundle);
    EXPECT_EQ(metrics::write_event_log(a.events), metrics::write_event_log(b.events));
    const auto c = run(s, 6);
    EXPECT_NE(metrics::write_event_log(a.events), metrics::write_event_log(c.events));
}

TEST(Run, WakeOnDemandSucceedsAfterSetup)
{
    // one sleeping TBS, one request: the first attempt triggers the wake and
    // the retransmission after the 8.4 s setup gets the channel
    const auto s = scenario({{"tbs", {{{"id", 1}, {"initial_mode", "SLEEPING"}}}},
                             {"ues", {{{"id", 1}, {"start_s", 1}, {"max_requests", 1}}}}});
    const auto r = run(s, 3);
    const auto outcomes = of_type(r.events, "outcome");
    ASSERT_EQ(outcomes.size(), 1u);
    EXPECT_EQ(outcomes[0].at("result"), "succeeded");
    EXPECT_EQ(outcomes[0].at("attempts").get<int>(), static_cast<int>(std::ceil(8.4 / 2.0)) + 1);
    ASSERT_EQ(r.bundle.setup_durations.size(), 1u);
    EXPECT_EQ(r.bundle.setup_durations[0], 8'400'000);
}

TEST(Run, LoadBalanceSendsNewSessionsToIdleStation)
{
    const auto s = load_scenario(HYCELL_SOURCE_DIR "/scenarios/load_balance.json");
    const auto r = run(s);
    std::size_t to_second = 0;
    for (const auto& d : r.bundle.dispatch_log) {
        if (d.decision == "DispatchTo" && d.ue == 2 && d.tbs == 2) ++to_second;
    }
    EXPECT_GE(to_second, 3u);
    EXPECT_LT(std::abs(r.bundle.final_loads.at(1) - r.bundle.final_loads.at(2)), 2400.0);
}

TEST(Run, AccountingAndByteClosure)
{
    for (const char* name : {"wake_on_demand", "lossy", "load_balance"}) {
        const auto s = load_scenario(std::string(HYCELL_SOURCE_DIR "/scenarios/") + name + ".json");
        const auto r = run(s);
        const auto& q = r.bundle.requests;
        EXPECT_EQ(q.issued, q.succeeded + q.failed + q.in_flight()) << name;
        EXPECT_LE(q.succeeded + q.failed, q.issued) << name;
        const auto& b = r.bundle.bytes;
        EXPECT_EQ(b.reported + b.unreported, b.transmitted) << name;
        EXPECT_EQ(b.completed_sessions + b.live_sessions, b.transmitted) << name;
        EXPECT_GT(b.transmitted, 0u) << name;
        const auto check = replay::verify(r.events);
        EXPECT_TRUE(check.ok()) << name << ": " << (check.ok() ? "" : check.violations.front());
    }
}

TEST(Run, DelayRecordsMatchTheRoundTrip)
{
    const auto s = scenario({{"cbs", {{"sleeping_enabled", false}}},
                             {"backhaul", {{"overhead_std_us", 0}}},
                             {"tbs", {{{"id", 1}}}},
                             {"ues", {{{"id", 1}, {"start_s", 2}, {"interarrival_s", 1.5}}}}});
    const auto r = run(s, 2);
    ASSERT_FALSE(r.bundle.delay_samples.empty());
    for (auto d : r.bundle.delay_samples) EXPECT_EQ(d, 360);
}

TEST(Run, VariableTransitionDurations)
{
    const auto s = scenario({{"horizon_s", 200},
                             {"tbs",
                              {{{"id", 1},
                                {"initial_mode", "SLEEPING"},
                                {"setup_s", {{"dist", "uniform"}, {"min", 6}, {"max", 10}}},
                                {"close_down_s", {{"dist", "exponential"}, {"mean", 0.05}}}}}},
                             {"ues", {{{"id", 1}, {"start_s", 1}, {"interarrival_s", 40}}}}});
    const auto r = run(s, 9);
    ASSERT_GE(r.bundle.setup_durations.size(), 2u);
    for (auto d : r.bundle.setup_durations) {
        EXPECT_GE(d, 6'000'000);
        EXPECT_LE(d, 10'000'000);
    }
    EXPECT_TRUE(replay::verify(r.events).ok());
}

} // namespace
} // namespace hycell::simkit
