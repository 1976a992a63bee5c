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

// Offline protocol checks over a stored event log.

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"

#include "hycell/metrics.hpp"
#include "hycell/tbs_agent.hpp"

namespace hycell::replay {

using nlohmann::json;

struct ReplayReport {
    std::vector<std::string> violations;
    std::optional<metrics::MetricsBundle> bundle;

    [[nodiscard]] bool ok() const noexcept { return violations.empty(); }
};

namespace detail {

class Checker {
public:
    std::vector<std::string> violations;

    void run(const std::vector<json>& records)
    {
        if (records.empty() || records.front().at("type") != "header") {
            fail(0, "log does not start with a header record");
            return;
        }
        if (records.back().at("type") != "end") fail(records.size() - 1, "log does not finish with an end record");

        std::int64_t last_t = INT64_MIN;
        for (std::size_t i = 0; i < records.size(); ++i) {
            const auto& r = records[i];
            const auto t = r.at("t").get<std::int64_t>();
            if (t < last_t) fail(i, "time goes backwards");
            last_t = t;
            check(i, r, t);
        }
        finish(records.size() - 1);
    }

private:
    struct Issued {
        TbsId tbs = 0;
        std::int64_t first_sent = 0;
    };

    void fail(std::size_t line, const std::string& what)
    {
        violations.push_back("record " + std::to_string(line + 1) + ": " + what);
    }

    void check(std::size_t i, const json& r, std::int64_t t)
    {
        const auto type = r.at("type").get<std::string>();
        if (type == "header") {
            ack_timeout_ = r.at("ack_timeout_us").get<std::int64_t>();
            max_retries_ = r.at("max_retries").get<std::int64_t>();
            for (const auto& s : r.at("tbs")) {
                const auto id = s.at("id").get<TbsId>();
                modes_[id] = metrics::parse_mode(s.at("initial_mode").get<std::string>());
                if (!s.at("setup_us").is_null()) setup_[id] = s.at("setup_us").get<std::int64_t>();
                if (!s.at("close_down_us").is_null()) close_down_[id] = s.at("close_down_us").get<std::int64_t>();
            }
        } else if (type == "request") {
            const Key k{r.at("ue").get<std::uint32_t>(), r.at("req").get<std::uint32_t>()};
            if (r.at("attempt").get<std::uint32_t>() == 1) {
                if (!issued_requests_.insert(k).second) fail(i, "request issued twice");
            } else if (!issued_requests_.contains(k)) {
                fail(i, "retransmission of a request never issued");
            }
        } else if (type == "dispatch") {
            if (r.at("decision") != "DispatchTo") return;
            const auto chosen = r.at("tbs").get<TbsId>();
            const auto& modes = r.at("modes");
            const auto key = std::to_string(chosen);
            if (!modes.contains(key) || modes.at(key) != "ACTIVE") {
                fail(i, "dispatch to TBS " + key + " which is not believed ACTIVE");
            }
            std::optional<double> chosen_load;
            double best = 0.0;
            bool first = true;
            for (const auto& c : r.at("candidates")) {
                const double load = c.at("load_bps").get<double>();
                if (c.at("tbs").get<TbsId>() == chosen) chosen_load = load;
                if (first || load < best) best = load;
                first = false;
            }
            if (!chosen_load) fail(i, "dispatch target " + key + " is not among the candidates");
            else if (*chosen_load > best) fail(i, "dispatch to TBS " + key + " is not the least loaded");
        } else if (type == "outcome") {
            const Key k{r.at("ue").get<std::uint32_t>(), r.at("req").get<std::uint32_t>()};
            if (!issued_requests_.contains(k)) fail(i, "outcome for a request never issued");
            if (!settled_.insert(k).second) fail(i, "request settled twice");
            if (r.at("result") == "succeeded") ++succeeded_;
            else ++failed_;
        } else if (type == "session_start") {
            session_bytes_[r.at("session").get<std::uint32_t>()] = r.at("bytes").get<std::uint64_t>();
        } else if (type == "session_end") {
            const auto id = r.at("session").get<std::uint32_t>();
            auto it = session_bytes_.find(id);
            if (it == session_bytes_.end()) fail(i, "end of a session that never started");
            else if (it->second != r.at("bytes").get<std::uint64_t>()) fail(i, "session byte count changed");
            ended_bytes_ += r.at("bytes").get<std::uint64_t>();
        } else if (type == "report") {
            if (!r.at("marker").get<bool>()) reported_bytes_ += r.at("bytes").get<std::uint64_t>();
        } else if (type == "command") {
            const auto id = r.at("id").get<std::uint32_t>();
            const auto tbs = r.at("tbs").get<TbsId>();
            if (r.at("attempt").get<std::uint32_t>() == 1) {
                for (const auto& [other, cmd] : open_commands_) {
                    if (cmd.tbs == tbs) fail(i, "second pending command for TBS " + std::to_string(tbs));
                }
                open_commands_[id] = Issued{tbs, t};
            } else if (!open_commands_.contains(id)) {
                fail(i, "resend of command " + std::to_string(id) + " that is not pending");
            }
        } else if (type == "ack") {
            if (!r.at("matched").get<bool>()) return;
            close_command(i, r.at("id").get<std::uint32_t>(), t);
        } else if (type == "unreachable") {
            close_command(i, r.at("id").get<std::uint32_t>(), t);
        } else if (type == "mode") {
            const auto tbs = r.at("tbs").get<TbsId>();
            const auto from = metrics::parse_mode(r.at("from").get<std::string>());
            const auto to = metrics::parse_mode(r.at("to").get<std::string>());
            if (modes_.contains(tbs) && modes_[tbs] != from) {
                fail(i, "TBS " + std::to_string(tbs) + " leaves " + std::string(to_string(from)) + " but was " +
                            std::string(to_string(modes_[tbs])));
            }
            if (!is_legal_transition(from, to)) {
                fail(i, "illegal transition " + std::string(to_string(from)) + " -> " + std::string(to_string(to)));
            }
            if (from == TbsMode::SETTING_UP && setup_.contains(tbs) && entered_.contains(tbs) &&
                t - entered_[tbs] != setup_[tbs]) {
                fail(i, "setup took " + std::to_string(t - entered_[tbs]) + " us");
            }
            if (from == TbsMode::CLOSING_DOWN && close_down_.contains(tbs) && entered_.contains(tbs) &&
                t - entered_[tbs] != close_down_[tbs]) {
                fail(i, "close-down took " + std::to_string(t - entered_[tbs]) + " us");
            }
            entered_[tbs] = t;
            modes_[tbs] = to;
        } else if (type == "end") {
            end_t_ = t;
            const auto& b = r.at("bytes");
            const auto transmitted = b.at("transmitted").get<std::uint64_t>();
            if (b.at("reported").get<std::uint64_t>() != reported_bytes_) {
                fail(i, "reported byte total disagrees with the report records");
            }
            if (reported_bytes_ + b.at("unreported").get<std::uint64_t>() != transmitted) {
                fail(i, "reported + unreported bytes != transmitted bytes");
            }
            if (ended_bytes_ + b.at("live_sessions").get<std::uint64_t>() != transmitted) {
                fail(i, "completed + live session bytes != transmitted bytes");
            }
        }
    }

    void close_command(std::size_t i, std::uint32_t id, std::int64_t t)
    {
        auto it = open_commands_.find(id);
        if (it == open_commands_.end()) return; // duplicate ack of a resent command
        if (t - it->second.first_sent > max_retries_ * ack_timeout_) {
            fail(i, "command " + std::to_string(id) + " settled after the retry budget");
        }
        open_commands_.erase(it);
    }

    void finish(std::size_t last)
    {
        if (!end_t_) return;
        for (const auto& [id, cmd] : open_commands_) {
            if (*end_t_ - cmd.first_sent > max_retries_ * ack_timeout_) {
                fail(last, "command " + std::to_string(id) + " never acked and TBS not marked unreachable");
            }
        }
        if (succeeded_ + failed_ > issued_requests_.size()) fail(last, "more outcomes than requests");
    }

    using Key = std::pair<std::uint32_t, std::uint32_t>;

    std::int64_t ack_timeout_ = 0;
    std::int64_t max_retries_ = 0;
    std::map<TbsId, TbsMode> modes_;
    std::map<TbsId, std::int64_t> entered_;
    std::map<TbsId, std::int64_t> setup_;
    std::map<TbsId, std::int64_t> close_down_;
    std::set<Key> issued_requests_;
    std::set<Key> settled_;
    std::uint64_t succeeded_ = 0;
    std::uint64_t failed_ = 0;
    std::map<std::uint32_t, std::uint64_t> session_bytes_;
    std::uint64_t ended_bytes_ = 0;
    std::uint64_t reported_bytes_ = 0;
    std::map<std::uint32_t, Issued> open_commands_;
    std::optional<std::int64_t> end_t_;
};

} // namespace detail

/// Re-verifies protocol invariants over `records` and rebuilds the metrics.
inline ReplayReport verify(const std::vector<json>& records)
{
    ReplayReport report;
    detail::Checker checker;
    try {
        checker.run(records);
    } catch (const json::exception& e) {
        checker.violations.push_back(std::string("malformed record: ") + e.what());
    } catch (const Error& e) {
        checker.violations.push_back(e.what());
    }
    report.violations = std::move(checker.violations);
    try {
        report.bundle = metrics::bundle_from_records(records);
    } catch (const Error& e) {
        report.violations.push_back(e.what());
    }
    return report;
}

} // namespace hycell::replay
