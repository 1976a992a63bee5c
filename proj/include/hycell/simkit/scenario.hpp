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

// Scenario files: JSON documents, schema version 1. Unknown keys are errors.
//
//   {
//     "version": 1, "name": "...", "horizon_s": 120, "seed": 7,
//     "cbs":      { retention_s, routine_period_s, ack_timeout_s, max_retries,
//                   wake_hold_s, sleeping_enabled, low_rate_service_s },
//     "policy":   { "type": "threshold", capacity_bps, rho_up, rho_down },
//     "backhaul": { overhead_mean_us, overhead_std_us, loss_probability },
//     "energy":   { cbs_pc_w, cbs_usrp_w, tbs_pc_active_w, tbs_pc_software_off_w,
//                   tbs_pc_off_w, usrp_on_w, usrp_off_w, switch_w,
//                   sleep_depth: "HALF" | "FULL" },
//     "tbs": [ { id, arfcn_count, pdtch_slots_per_arfcn, setup_s, close_down_s,
//                report_interval_s, report_start_s, initial_mode } ],
//     "ues": [ { id, channel: "GSM_GPRS:PDTCH", interarrival_s, session_size_bytes,
//                session_rate_bps, retransmit_interval_s, max_retransmits,
//                start_s, stop_s, max_requests } ]
//   }
//
// Distribution-valued fields (setup_s, close_down_s, interarrival_s,
// session_size_bytes) take a number (constant) or an object:
//   {"dist": "constant", "value": v} | {"dist": "exponential", "mean": m} |
//   {"dist": "uniform", "min": a, "max": b} | {"dist": "normal", "mean": m, "std": s}

#include <cstdint>
#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hycell/cbs_controller.hpp"
#include "hycell/channel_separation.hpp"
#include "hycell/energy.hpp"
#include "hycell/error.hpp"
#include "hycell/simkit/backhaul.hpp"
#include "hycell/simkit/distribution.hpp"
#include "hycell/simkit/ue.hpp"
#include "hycell/tbs_agent.hpp"

namespace hycell::simkit {

inline constexpr int kScenarioVersion = 1;

struct TbsConfig {
    TbsParams params;
    Distribution setup_s = Distribution::constant(to_seconds(kDefaultSetupTime));
    Distribution close_down_s = Distribution::constant(to_seconds(kDefaultCloseDownTime));
    Micros report_start{0};
    TbsMode initial_mode = TbsMode::ACTIVE;
};

struct ScenarioConfig {
    int version = kScenarioVersion;
    std::string name = "scenario";
    Micros horizon{60'000'000};
    std::uint64_t seed = 1;
    CbsParams cbs;
    bool sleeping_enabled = true;
    Micros low_rate_service{60'000'000};
    ThresholdParams policy;
    BackhaulModel backhaul;
    energy::PowerProfile energy;
    std::vector<TbsConfig> tbs;
    std::vector<UeProfile> ues;
};

namespace detail {

using nlohmann::json;

/// Walks a JSON document, recording every schema violation with its path.
class SchemaReader {
public:
    std::vector<std::string> errors;

    void fail(const std::string& path, const std::string& message) { errors.push_back(path + ": " + message); }

    bool expect_object(const json& j, const std::string& path, std::initializer_list<const char*> allowed)
    {
        if (!j.is_object()) {
            fail(path, "expected an object");
            return false;
        }
        std::set<std::string> keys(allowed.begin(), allowed.end());
        for (const auto& [k, v] : j.items()) {
            if (!keys.contains(k)) fail(join(path, k), "unknown key");
        }
        return true;
    }

    static std::string join(const std::string& path, const std::string& key)
    {
        return path.empty() ? key : path + "." + key;
    }

    void number(const json& j, const char* key, const std::string& path, double& out, double min_exclusive,
                bool allow_equal_min = false)
    {
        if (!j.contains(key)) return;
        const auto p = join(path, key);
        const auto& v = j.at(key);
        if (!v.is_number()) {
            fail(p, "expected a number");
            return;
        }
        const double d = v.get<double>();
        if (allow_equal_min ? d < min_exclusive : d <= min_exclusive) {
            fail(p, std::string("must be ") + (allow_equal_min ? ">= " : "> ") + trim(min_exclusive));
            return;
        }
        out = d;
    }

    void seconds(const json& j, const char* key, const std::string& path, Micros& out, bool allow_zero = false)
    {
        double s = to_seconds(out);
        const double before = s;
        number(j, key, path, s, 0.0, allow_zero);
        if (s != before) out = from_seconds(s);
    }

    template <typename Int>
    void integer(const json& j, const char* key, const std::string& path, Int& out, std::int64_t min,
                 std::int64_t max)
    {
        if (!j.contains(key)) return;
        const auto p = join(path, key);
        const auto& v = j.at(key);
        if (!v.is_number_integer()) {
            fail(p, "expected an integer");
            return;
        }
        const auto i = v.get<std::int64_t>();
        if (i < min || i > max) {
            fail(p, "must be in [" + std::to_string(min) + ", " + std::to_string(max) + "]");
            return;
        }
        out = static_cast<Int>(i);
    }

    void boolean(const json& j, const char* key, const std::string& path, bool& out)
    {
        if (!j.contains(key)) return;
        if (!j.at(key).is_boolean()) {
            fail(join(path, key), "expected true or false");
            return;
        }
        out = j.at(key).get<bool>();
    }

    void string(const json& j, const char* key, const std::string& path, std::string& out)
    {
        if (!j.contains(key)) return;
        if (!j.at(key).is_string()) {
            fail(join(path, key), "expected a string");
            return;
        }
        out = j.at(key).get<std::string>();
    }

    void distribution(const json& j, const char* key, const std::string& path, Distribution& out)
    {
        if (!j.contains(key)) return;
        const auto p = join(path, key);
        const auto& v = j.at(key);
        if (v.is_number()) {
            if (v.get<double>() < 0.0) {
                fail(p, "must be >= 0");
                return;
            }
            out = Distribution::constant(v.get<double>());
            return;
        }
        if (!v.is_object() || !v.contains("dist") || !v.at("dist").is_string()) {
            fail(p, "expected a number or an object with a \"dist\" key");
            return;
        }
        const auto kind = v.at("dist").get<std::string>();
        double a = 0.0;
        double b = 0.0;
        const std::size_t before = errors.size();
        if (kind == "constant") {
            expect_object(v, p, {"dist", "value"});
            require(v, "value", p);
            number(v, "value", p, a, 0.0, true);
            if (errors.size() == before) out = Distribution::constant(a);
        } else if (kind == "exponential") {
            expect_object(v, p, {"dist", "mean"});
            require(v, "mean", p);
            number(v, "mean", p, a, 0.0);
            if (errors.size() == before) out = Distribution::exponential(a);
        } else if (kind == "uniform") {
            expect_object(v, p, {"dist", "min", "max"});
            require(v, "min", p);
            require(v, "max", p);
            number(v, "min", p, a, 0.0, true);
            number(v, "max", p, b, 0.0, true);
            if (errors.size() == before && !(a <= b)) fail(p, "min must not exceed max");
            if (errors.size() == before) out = Distribution::uniform(a, b);
        } else if (kind == "normal") {
            expect_object(v, p, {"dist", "mean", "std"});
            require(v, "mean", p);
            require(v, "std", p);
            number(v, "mean", p, a, 0.0, true);
            number(v, "std", p, b, 0.0, true);
            if (errors.size() == before) out = Distribution::normal(a, b);
        } else {
            fail(join(p, "dist"), "unknown distribution '" + kind + "'");
        }
    }

    void require(const json& j, const char* key, const std::string& path)
    {
        if (!j.contains(key)) fail(join(path, key), "required");
    }

private:
    static std::string trim(double d)
    {
        std::ostringstream os;
        os << d;
        return os.str();
    }
};

inline void read_tbs(SchemaReader& r, const json& j, const std::string& p, TbsConfig& t)
{
    if (!r.expect_object(j, p, {"id", "arfcn_count", "pdtch_slots_per_arfcn", "setup_s", "close_down_s",
                                "report_interval_s", "report_start_s", "initial_mode"})) {
        return;
    }
    r.require(j, "id", p);
    r.integer(j, "id", p, t.params.id, 1, 65535);
    r.integer(j, "arfcn_count", p, t.params.arfcn_count, 1, 16);
    r.integer(j, "pdtch_slots_per_arfcn", p, t.params.pdtch_slots_per_arfcn, 1, 7);
    r.distribution(j, "setup_s", p, t.setup_s);
    r.distribution(j, "close_down_s", p, t.close_down_s);
    r.seconds(j, "report_interval_s", p, t.params.report_interval);
    r.seconds(j, "report_start_s", p, t.report_start, true);
    if (t.setup_s.is_constant()) t.params.setup_time = from_seconds(t.setup_s.a);
    if (t.close_down_s.is_constant()) t.params.close_down_time = from_seconds(t.close_down_s.a);
    if (j.contains("initial_mode")) {
        std::string m;
        r.string(j, "initial_mode", p, m);
        if (m == "ACTIVE") t.initial_mode = TbsMode::ACTIVE;
        else if (m == "SLEEPING") t.initial_mode = TbsMode::SLEEPING;
        else r.fail(SchemaReader::join(p, "initial_mode"), "expected \"ACTIVE\" or \"SLEEPING\"");
    }
}

inline void read_ue(SchemaReader& r, const json& j, const std::string& p, UeProfile& u)
{
    if (!r.expect_object(j, p, {"id", "channel", "interarrival_s", "session_size_bytes", "session_rate_bps",
                                "retransmit_interval_s", "max_retransmits", "start_s", "stop_s", "max_requests"})) {
        return;
    }
    r.require(j, "id", p);
    r.integer(j, "id", p, u.ue_id, 0, UINT32_MAX);
    if (j.contains("channel")) {
        std::string c;
        r.string(j, "channel", p, c);
        try {
            if (!c.empty()) u.channel = LogicalChannel::parse(c);
        } catch (const Error& e) {
            r.fail(SchemaReader::join(p, "channel"), e.what());
        }
    }
    r.distribution(j, "interarrival_s", p, u.interarrival_s);
    r.distribution(j, "session_size_bytes", p, u.session_size_bytes);
    r.number(j, "session_rate_bps", p, u.session_rate_bps, 0.0);
    r.seconds(j, "retransmit_interval_s", p, u.retransmit_interval);
    r.integer(j, "max_retransmits", p, u.max_retransmits, 0, 1000);
    r.seconds(j, "start_s", p, u.start, true);
    if (j.contains("stop_s")) {
        Micros stop{0};
        r.seconds(j, "stop_s", p, stop, true);
        u.stop = stop;
    }
    if (j.contains("max_requests")) {
        std::uint32_t n = 0;
        r.integer(j, "max_requests", p, n, 0, UINT32_MAX);
        u.max_requests = n;
    }
    if (u.interarrival_s.kind != Distribution::Kind::Constant && !(u.interarrival_s.mean() > 0.0)) {
        r.fail(SchemaReader::join(p, "interarrival_s"), "mean must be > 0");
    }
}

} // namespace detail

/// Parses and validates a scenario document. Throws InvalidScenario listing
/// every offending field.
inline ScenarioConfig parse_scenario(const nlohmann::json& doc)
{
    detail::SchemaReader r;
    ScenarioConfig s;
    if (!r.expect_object(doc, "", {"version", "name", "horizon_s", "seed", "cbs", "policy", "backhaul", "energy",
                                   "tbs", "ues"})) {
        throw Error(ErrorCode::InvalidScenario, "(root): expected an object");
    }
    r.require(doc, "version", "");
    if (doc.contains("version")) {
        if (!doc.at("version").is_number_integer() || doc.at("version").get<int>() != kScenarioVersion) {
            r.fail("version", "unsupported schema version (expected " + std::to_string(kScenarioVersion) + ")");
        }
    }
    r.string(doc, "name", "", s.name);
    r.require(doc, "horizon_s", "");
    r.seconds(doc, "horizon_s", "", s.horizon);
    r.integer(doc, "seed", "", s.seed, 0, INT64_MAX);

    if (doc.contains("cbs")) {
        const auto& c = doc.at("cbs");
        if (r.expect_object(c, "cbs", {"retention_s", "routine_period_s", "ack_timeout_s", "max_retries",
                                       "wake_hold_s", "sleeping_enabled", "low_rate_service_s"})) {
            r.seconds(c, "retention_s", "cbs", s.cbs.retention_period);
            r.seconds(c, "routine_period_s", "cbs", s.cbs.routine_period);
            r.seconds(c, "ack_timeout_s", "cbs", s.cbs.ack_timeout);
            r.integer(c, "max_retries", "cbs", s.cbs.max_retries, 1, 100);
            r.seconds(c, "wake_hold_s", "cbs", s.cbs.wake_hold, true);
            r.boolean(c, "sleeping_enabled", "cbs", s.sleeping_enabled);
            r.seconds(c, "low_rate_service_s", "cbs", s.low_rate_service, true);
        }
    }
    if (doc.contains("policy")) {
        const auto& p = doc.at("policy");
        if (r.expect_object(p, "policy", {"type", "capacity_bps", "rho_up", "rho_down"})) {
            std::string type = "threshold";
            r.string(p, "type", "policy", type);
            if (type != "threshold") r.fail("policy.type", "unknown policy '" + type + "'");
            r.number(p, "capacity_bps", "policy", s.policy.capacity_bps, 0.0);
            r.number(p, "rho_up", "policy", s.policy.rho_up, 0.0);
            r.number(p, "rho_down", "policy", s.policy.rho_down, 0.0, true);
            if (!(s.policy.rho_down < s.policy.rho_up)) r.fail("policy", "rho_down must be below rho_up");
        }
    }
    if (doc.contains("backhaul")) {
        const auto& b = doc.at("backhaul");
        if (r.expect_object(b, "backhaul", {"overhead_mean_us", "overhead_std_us", "loss_probability"})) {
            r.number(b, "overhead_mean_us", "backhaul", s.backhaul.overhead_mean_us, 0.0, true);
            r.number(b, "overhead_std_us", "backhaul", s.backhaul.overhead_std_us, 0.0, true);
            r.number(b, "loss_probability", "backhaul", s.backhaul.loss_probability, 0.0, true);
            if (s.backhaul.loss_probability >= 1.0) r.fail("backhaul.loss_probability", "must be < 1");
        }
    }
    if (doc.contains("energy")) {
        const auto& e = doc.at("energy");
        if (r.expect_object(e, "energy", {"cbs_pc_w", "cbs_usrp_w", "tbs_pc_active_w", "tbs_pc_software_off_w",
                                          "tbs_pc_off_w", "usrp_on_w", "usrp_off_w", "switch_w", "sleep_depth"})) {
            auto& pp = s.energy;
            r.number(e, "cbs_pc_w", "energy", pp.cbs_pc_w, 0.0, true);
            r.number(e, "cbs_usrp_w", "energy", pp.cbs_usrp_w, 0.0, true);
            r.number(e, "tbs_pc_active_w", "energy", pp.tbs_pc_active_w, 0.0, true);
            r.number(e, "tbs_pc_software_off_w", "energy", pp.tbs_pc_software_off_w, 0.0, true);
            r.number(e, "tbs_pc_off_w", "energy", pp.tbs_pc_off_w, 0.0, true);
            r.number(e, "usrp_on_w", "energy", pp.usrp_on_w, 0.0, true);
            r.number(e, "usrp_off_w", "energy", pp.usrp_off_w, 0.0, true);
            r.number(e, "switch_w", "energy", pp.switch_w, 0.0, true);
            if (e.contains("sleep_depth")) {
                std::string d;
                r.string(e, "sleep_depth", "energy", d);
                if (d == "HALF") pp.sleep_depth = energy::SleepDepth::HALF;
                else if (d == "FULL") pp.sleep_depth = energy::SleepDepth::FULL;
                else r.fail("energy.sleep_depth", "expected \"HALF\" or \"FULL\"");
            }
            try {
                pp.validate();
            } catch (const Error& err) {
                r.fail("energy", err.what());
            }
        }
    }

    r.require(doc, "tbs", "");
    if (doc.contains("tbs")) {
        const auto& list = doc.at("tbs");
        if (!list.is_array()) {
            r.fail("tbs", "expected an array");
        } else {
            std::set<TbsId> seen;
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto path = "tbs[" + std::to_string(i) + "]";
                TbsConfig t;
                detail::read_tbs(r, list[i], path, t);
                if (t.params.id != 0 && !seen.insert(t.params.id).second) r.fail(path + ".id", "duplicate TBS id");
                s.tbs.push_back(t);
            }
        }
    }
    if (doc.contains("ues")) {
        const auto& list = doc.at("ues");
        if (!list.is_array()) {
            r.fail("ues", "expected an array");
        } else {
            std::set<std::uint32_t> seen;
            for (std::size_t i = 0; i < list.size(); ++i) {
                const auto path = "ues[" + std::to_string(i) + "]";
                UeProfile u;
                detail::read_ue(r, list[i], path, u);
                if (!seen.insert(u.ue_id).second) r.fail(path + ".id", "duplicate UE id");
                s.ues.push_back(u);
            }
        }
    }

    if (!r.errors.empty()) {
        std::string msg;
        for (const auto& e : r.errors) msg += "\n  " + e;
        throw Error(ErrorCode::InvalidScenario, std::to_string(r.errors.size()) + " problem(s):" + msg);
    }
    for (auto& t : s.tbs) {
        if (t.params.report_interval.count() <= 0) t.params.report_interval = Micros{1'000'000};
    }
    return s;
}

inline ScenarioConfig parse_scenario_text(const std::string& text)
{
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw Error(ErrorCode::InvalidScenario, std::string("not valid JSON: ") + e.what());
    }
    return parse_scenario(doc);
}

inline ScenarioConfig load_scenario(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::InvalidScenario, "cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_scenario_text(buf.str());
}

} // namespace hycell::simkit
