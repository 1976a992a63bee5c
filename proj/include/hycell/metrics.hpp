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

// Metrics derived from the event log. The simulator emits one JSON record
// per event; MetricsRecorder folds any record stream -- live or re-read from
// events.log -- into the same MetricsBundle.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "hycell/energy.hpp"
#include "hycell/error.hpp"
#include "hycell/tbs_agent.hpp"
#include "hycell/time.hpp"

namespace hycell::metrics {

using nlohmann::json;

template <typename T>
struct CdfRecord {
    T value{};
    double cumulative_fraction = 0.0;
    friend bool operator==(const CdfRecord&, const CdfRecord&) = default;
};

/// Empirical CDF over the sorted distinct sample values.
template <typename T>
std::vector<CdfRecord<T>> export_cdf(std::vector<T> samples)
{
    if (samples.empty()) throw Error(ErrorCode::EmptySamples, "cannot build a CDF from no samples");
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    std::vector<CdfRecord<T>> out;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        if (i + 1 < samples.size() && samples[i + 1] == samples[i]) continue;
        out.push_back({samples[i], static_cast<double>(i + 1) / n});
    }
    return out;
}

inline TbsMode parse_mode(const std::string& s)
{
    if (s == "ACTIVE") return TbsMode::ACTIVE;
    if (s == "CLOSING_DOWN") return TbsMode::CLOSING_DOWN;
    if (s == "SLEEPING") return TbsMode::SLEEPING;
    if (s == "SETTING_UP") return TbsMode::SETTING_UP;
    throw Error(ErrorCode::InvalidLog, "unknown TBS mode '" + s + "'");
}

struct DispatchEntry {
    std::int64_t time_us = 0;
    std::uint32_t ue = 0;
    std::uint32_t request = 0;
    std::uint32_t attempt = 0;
    std::string decision;
    std::optional<TbsId> tbs;
    std::string reason;
    bool retry = false;
    std::optional<bool> assigned;
    std::optional<std::int64_t> delay_us;
    friend bool operator==(const DispatchEntry&, const DispatchEntry&) = default;
};

struct LoadPoint {
    std::int64_t time_us = 0;
    TbsId tbs = 0;
    double load_bps = 0.0;
    friend bool operator==(const LoadPoint&, const LoadPoint&) = default;
};

struct ModeEntry {
    std::int64_t time_us = 0;
    TbsId tbs = 0;
    TbsMode from = TbsMode::ACTIVE;
    TbsMode to = TbsMode::ACTIVE;
    friend bool operator==(const ModeEntry&, const ModeEntry&) = default;
};

struct EnergySummary {
    std::array<energy::EnergyMwUs, energy::kComponentCount> per_component{};
    energy::EnergyMwUs total;
    energy::EnergyMwUs baseline;
    energy::Milliwatts final_power;
    energy::Milliwatts baseline_power;
    friend bool operator==(const EnergySummary&, const EnergySummary&) = default;

    [[nodiscard]] double energy_savings() const
    {
        return energy::savings(baseline.watt_hours(), total.watt_hours());
    }
    [[nodiscard]] double steady_state_savings() const
    {
        return energy::savings(baseline_power.watts(), final_power.watts());
    }
};

struct RequestCounters {
    std::uint64_t issued = 0;
    std::uint64_t succeeded = 0;
    std::uint64_t failed = 0;
    std::uint64_t low_rate = 0;
    [[nodiscard]] std::uint64_t in_flight() const noexcept { return issued - succeeded - failed; }
    friend bool operator==(const RequestCounters&, const RequestCounters&) = default;
};

struct ByteCounters {
    std::uint64_t transmitted = 0;
    std::uint64_t reported = 0;
    std::uint64_t unreported = 0;
    std::uint64_t completed_sessions = 0;
    std::uint64_t live_sessions = 0;
    friend bool operator==(const ByteCounters&, const ByteCounters&) = default;
};

struct MetricsBundle {
    std::string scenario;
    std::uint64_t seed = 0;
    std::int64_t horizon_us = 0;
    std::vector<DispatchEntry> dispatch_log;
    std::vector<LoadPoint> load_series;
    std::vector<ModeEntry> mode_log;
    std::vector<std::int64_t> delay_samples;
    std::vector<std::int64_t> setup_durations;
    std::vector<std::int64_t> close_down_durations;
    EnergySummary energy;
    RequestCounters requests;
    ByteCounters bytes;
    std::uint64_t commands_sent = 0;
    std::uint64_t acks_matched = 0;
    std::uint64_t stray_acks = 0;
    std::uint64_t unreachable = 0;
    std::uint64_t lost_messages = 0;
    std::map<TbsId, double> final_loads;
    friend bool operator==(const MetricsBundle&, const MetricsBundle&) = default;
};

inline energy::PowerProfile profile_from_json(const json& j)
{
    energy::PowerProfile p;
    p.cbs_pc_w = j.at("cbs_pc_w").get<double>();
    p.cbs_usrp_w = j.at("cbs_usrp_w").get<double>();
    p.tbs_pc_active_w = j.at("tbs_pc_active_w").get<double>();
    p.tbs_pc_software_off_w = j.at("tbs_pc_software_off_w").get<double>();
    p.tbs_pc_off_w = j.at("tbs_pc_off_w").get<double>();
    p.usrp_on_w = j.at("usrp_on_w").get<double>();
    p.usrp_off_w = j.at("usrp_off_w").get<double>();
    p.switch_w = j.at("switch_w").get<double>();
    p.sleep_depth = j.at("sleep_depth").get<std::string>() == "HALF" ? energy::SleepDepth::HALF
                                                                      : energy::SleepDepth::FULL;
    return p;
}

inline json profile_to_json(const energy::PowerProfile& p)
{
    return json{{"cbs_pc_w", p.cbs_pc_w},
                {"cbs_usrp_w", p.cbs_usrp_w},
                {"tbs_pc_active_w", p.tbs_pc_active_w},
                {"tbs_pc_software_off_w", p.tbs_pc_software_off_w},
                {"tbs_pc_off_w", p.tbs_pc_off_w},
                {"usrp_on_w", p.usrp_on_w},
                {"usrp_off_w", p.usrp_off_w},
                {"switch_w", p.switch_w},
                {"sleep_depth", std::string(energy::to_string(p.sleep_depth))}};
}

/// Folds event records into a MetricsBundle.
class MetricsRecorder {
public:
    void consume(const json& rec)
    {
        try {
            apply(rec);
        } catch (const json::exception& e) {
            throw Error(ErrorCode::InvalidLog, std::string("malformed ") + rec.value("type", "?") + " record: " + e.what());
        }
    }

    [[nodiscard]] const MetricsBundle& bundle() const noexcept { return bundle_; }
    [[nodiscard]] bool finished() const noexcept { return finished_; }

private:
    void apply(const json& rec)
    {
        const auto type = rec.at("type").get<std::string>();
        const auto t = rec.at("t").get<std::int64_t>();
        if (type == "header") {
            bundle_.scenario = rec.at("name").get<std::string>();
            bundle_.seed = rec.at("seed").get<std::uint64_t>();
            bundle_.horizon_us = rec.at("horizon_us").get<std::int64_t>();
            profile_ = profile_from_json(rec.at("energy"));
            for (const auto& s : rec.at("tbs")) {
                modes_[s.at("id").get<TbsId>()] = parse_mode(s.at("initial_mode").get<std::string>());
            }
            ledger_ = energy::EnergyLedger(Micros{t});
            ledger_.set_initial_power(current_power());
        } else if (type == "request") {
            if (rec.at("attempt").get<std::uint32_t>() == 1) ++bundle_.requests.issued;
        } else if (type == "dispatch") {
            DispatchEntry e;
            e.time_us = t;
            e.ue = rec.at("ue").get<std::uint32_t>();
            e.request = rec.at("req").get<std::uint32_t>();
            e.attempt = rec.at("attempt").get<std::uint32_t>();
            e.decision = rec.at("decision").get<std::string>();
            if (rec.contains("tbs")) e.tbs = rec.at("tbs").get<TbsId>();
            e.reason = rec.value("reason", "");
            e.retry = rec.value("retry", false);
            if (e.decision == "DispatchTo") open_dispatch_[{e.ue, e.request}] = bundle_.dispatch_log.size();
            if (e.decision == "ServeByCbs") ++bundle_.requests.low_rate;
            bundle_.dispatch_log.push_back(std::move(e));
        } else if (type == "assign") {
            const auto delay = rec.at("delay_us").get<std::int64_t>();
            bundle_.delay_samples.push_back(delay);
            auto it = open_dispatch_.find({rec.at("ue").get<std::uint32_t>(), rec.at("req").get<std::uint32_t>()});
            if (it != open_dispatch_.end()) {
                auto& e = bundle_.dispatch_log[it->second];
                e.assigned = rec.at("assigned").get<bool>();
                e.delay_us = delay;
                open_dispatch_.erase(it);
            }
        } else if (type == "outcome") {
            if (rec.at("result").get<std::string>() == "succeeded") ++bundle_.requests.succeeded;
            else ++bundle_.requests.failed;
        } else if (type == "load") {
            bundle_.load_series.push_back({t, rec.at("tbs").get<TbsId>(), rec.at("load_bps").get<double>()});
        } else if (type == "mode") {
            const auto tbs = rec.at("tbs").get<TbsId>();
            const auto from = parse_mode(rec.at("from").get<std::string>());
            const auto to = parse_mode(rec.at("to").get<std::string>());
            bundle_.mode_log.push_back({t, tbs, from, to});
            if (to == TbsMode::SETTING_UP || to == TbsMode::CLOSING_DOWN) entered_[tbs] = t;
            if (from == TbsMode::SETTING_UP && to == TbsMode::ACTIVE && entered_.contains(tbs)) {
                bundle_.setup_durations.push_back(t - entered_[tbs]);
            }
            if (from == TbsMode::CLOSING_DOWN && to == TbsMode::SLEEPING && entered_.contains(tbs)) {
                bundle_.close_down_durations.push_back(t - entered_[tbs]);
            }
            modes_[tbs] = to;
            ledger_.change_power(Micros{t}, current_power());
        } else if (type == "command") {
            ++bundle_.commands_sent;
        } else if (type == "ack") {
            if (rec.at("matched").get<bool>()) ++bundle_.acks_matched;
            else ++bundle_.stray_acks;
        } else if (type == "unreachable") {
            ++bundle_.unreachable;
        } else if (type == "lost") {
            ++bundle_.lost_messages;
        } else if (type == "end") {
            ledger_.change_power(Micros{t}, current_power());
            auto& es = bundle_.energy;
            es.per_component = ledger_.energy();
            es.total = ledger_.total_energy();
            es.final_power = energy::total(current_power());
            std::vector<TbsMode> all_on(modes_.size(), TbsMode::ACTIVE);
            es.baseline_power = energy::total(energy::station_power(profile_, all_on));
            es.baseline = energy::EnergyMwUs{es.baseline_power.value * bundle_.horizon_us};
            const auto& b = rec.at("bytes");
            bundle_.bytes.transmitted = b.at("transmitted").get<std::uint64_t>();
            bundle_.bytes.reported = b.at("reported").get<std::uint64_t>();
            bundle_.bytes.unreported = b.at("unreported").get<std::uint64_t>();
            bundle_.bytes.completed_sessions = b.at("completed_sessions").get<std::uint64_t>();
            bundle_.bytes.live_sessions = b.at("live_sessions").get<std::uint64_t>();
            for (const auto& [k, v] : rec.at("final_loads").items()) {
                bundle_.final_loads[static_cast<TbsId>(std::stoul(k))] = v.get<double>();
            }
            finished_ = true;
        }
    }

    [[nodiscard]] energy::PowerBreakdown current_power() const
    {
        std::vector<TbsMode> modes;
        for (const auto& [id, m] : modes_) modes.push_back(m);
        return energy::station_power(profile_, modes);
    }

    MetricsBundle bundle_;
    energy::PowerProfile profile_;
    energy::EnergyLedger ledger_;
    std::map<TbsId, TbsMode> modes_;
    std::map<TbsId, std::int64_t> entered_;
    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> open_dispatch_;
    bool finished_ = false;
};

inline MetricsBundle bundle_from_records(const std::vector<json>& records)
{
    MetricsRecorder r;
    for (const auto& rec : records) r.consume(rec);
    if (!r.finished()) throw Error(ErrorCode::InvalidLog, "event log has no end record");
    return r.bundle();
}

// ---------------------------------------------------------------------------
// Serialization

inline double round_to(double v, int decimals)
{
    const double scale = std::pow(10.0, decimals);
    return std::round(v * scale) / scale;
}

inline std::string write_event_log(const std::vector<json>& records)
{
    std::string out;
    for (const auto& r : records) {
        out += r.dump();
        out += '\n';
    }
    return out;
}

inline std::vector<json> read_event_log(std::istream& in)
{
    std::vector<json> records;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        try {
            records.push_back(json::parse(line));
        } catch (const json::parse_error& e) {
            throw Error(ErrorCode::InvalidLog, "line " + std::to_string(lineno) + ": " + e.what());
        }
        if (!records.back().is_object() || !records.back().contains("type") || !records.back().contains("t")) {
            throw Error(ErrorCode::InvalidLog, "line " + std::to_string(lineno) + ": record needs type and t");
        }
    }
    return records;
}

namespace detail {

inline json sample_stats(const std::vector<std::int64_t>& v)
{
    if (v.empty()) return json{{"count", 0}};
    const double n = static_cast<double>(v.size());
    const double mean = std::accumulate(v.begin(), v.end(), 0.0) / n;
    double ss = 0.0;
    for (auto x : v) ss += (static_cast<double>(x) - mean) * (static_cast<double>(x) - mean);
    const double sd = v.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
    return json{{"count", v.size()},
                {"mean_us", round_to(mean, 3)},
                {"std_us", round_to(sd, 3)},
                {"min_us", *std::min_element(v.begin(), v.end())},
                {"max_us", *std::max_element(v.begin(), v.end())}};
}

} // namespace detail

inline json summary_json(const MetricsBundle& b)
{
    json energy_components = json::object();
    for (std::size_t c = 0; c < energy::kComponentCount; ++c) {
        energy_components[std::string(energy::component_name(c))] = round_to(b.energy.per_component[c].watt_hours(), 3);
    }
    json final_loads = json::object();
    for (const auto& [id, load] : b.final_loads) final_loads[std::to_string(id)] = round_to(load, 3);

    return json{
        {"scenario", b.scenario},
        {"seed", b.seed},
        {"horizon_us", b.horizon_us},
        {"requests",
         {{"issued", b.requests.issued},
          {"succeeded", b.requests.succeeded},
          {"failed", b.requests.failed},
          {"in_flight", b.requests.in_flight()},
          {"low_rate", b.requests.low_rate}}},
        {"dispatches", b.delay_samples.size()},
        {"delay_overhead", detail::sample_stats(b.delay_samples)},
        {"setup_time", detail::sample_stats(b.setup_durations)},
        {"close_down_time", detail::sample_stats(b.close_down_durations)},
        {"energy",
         {{"components_wh", energy_components},
          {"total_wh", round_to(b.energy.total.watt_hours(), 3)},
          {"baseline_wh", round_to(b.energy.baseline.watt_hours(), 3)},
          {"savings", round_to(b.energy.energy_savings(), 4)},
          {"final_power_w", round_to(b.energy.final_power.watts(), 1)},
          {"baseline_power_w", round_to(b.energy.baseline_power.watts(), 1)},
          {"steady_state_savings", round_to(b.energy.steady_state_savings(), 4)}}},
        {"bytes",
         {{"transmitted", b.bytes.transmitted},
          {"reported", b.bytes.reported},
          {"unreported", b.bytes.unreported},
          {"completed_sessions", b.bytes.completed_sessions},
          {"live_sessions", b.bytes.live_sessions}}},
        {"control",
         {{"commands_sent", b.commands_sent},
          {"acks_matched", b.acks_matched},
          {"stray_acks", b.stray_acks},
          {"unreachable", b.unreachable},
          {"lost_messages", b.lost_messages}}},
        {"final_loads_bps", final_loads},
    };
}

inline std::string loads_csv(const MetricsBundle& b)
{
    std::ostringstream os;
    os << "time_us,tbs_id,load_bps\n" << std::fixed << std::setprecision(3);
    for (const auto& p : b.load_series) os << p.time_us << ',' << p.tbs << ',' << p.load_bps << '\n';
    return os.str();
}

inline std::string modes_csv(const MetricsBundle& b)
{
    std::ostringstream os;
    os << "time_us,tbs_id,from,to\n";
    for (const auto& m : b.mode_log) {
        os << m.time_us << ',' << m.tbs << ',' << to_string(m.from) << ',' << to_string(m.to) << '\n';
    }
    return os.str();
}

inline std::string cdf_csv(const std::vector<std::int64_t>& samples)
{
    std::ostringstream os;
    os << "value_us,cumulative_fraction\n" << std::fixed << std::setprecision(6);
    if (samples.empty()) return os.str();
    for (const auto& r : export_cdf(samples)) os << r.value << ',' << r.cumulative_fraction << '\n';
    return os.str();
}

/// Writes summary.json, loads.csv, modes.csv, cdf_*.csv and events.log.
inline void write_outputs(const std::filesystem::path& dir, const MetricsBundle& b, const std::vector<json>& records)
{
    std::filesystem::create_directories(dir);
    auto put = [&dir](const char* name, const std::string& text) {
        std::ofstream out(dir / name, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::InvalidScenario, "cannot write " + (dir / name).string());
        out << text;
    };
    put("summary.json", summary_json(b).dump(2) + "\n");
    put("loads.csv", loads_csv(b));
    put("modes.csv", modes_csv(b));
    put("cdf_delay.csv", cdf_csv(b.delay_samples));
    put("cdf_setup.csv", cdf_csv(b.setup_durations));
    put("cdf_closedown.csv", cdf_csv(b.close_down_durations));
    put("events.log", write_event_log(records));
}

} // namespace hycell::metrics
