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
#include <cstdint>
#include <deque>
#include <limits>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string_view>
#include <variant>
#include <vector>

#include "hycell/channel_separation.hpp"
#include "hycell/error.hpp"
#include "hycell/time.hpp"
#include "hycell/wire.hpp"

namespace hycell {

/// Mode of a TBS as believed by the CBS.
enum class BelievedMode { ACTIVE, SLEEPING, TRANSITIONING, UNREACHABLE };

constexpr std::string_view to_string(BelievedMode m) noexcept
{
    switch (m) {
    case BelievedMode::ACTIVE: return "ACTIVE";
    case BelievedMode::SLEEPING: return "SLEEPING";
    case BelievedMode::TRANSITIONING: return "TRANSITIONING";
    case BelievedMode::UNREACHABLE: return "UNREACHABLE";
    }
    return "?";
}

enum class CommandKind { Sleep, Wake };

constexpr std::string_view to_string(CommandKind k) noexcept
{
    return k == CommandKind::Sleep ? "Sleep" : "Wake";
}

struct LoadSample {
    TbsId tbs_id = 0;
    Micros received_at{0};
    std::uint8_t slot_usage = 0;
    std::uint8_t arfcn_usage = 0;
    std::uint32_t data_rate_bps = 0;

    friend bool operator==(const LoadSample&, const LoadSample&) = default;
};

struct PendingCommand {
    TbsId tbs_id = 0;
    CommandKind kind = CommandKind::Sleep;
    Micros issued_at{0};
    std::uint32_t retries = 0;
};

inline constexpr Micros kNeverSlept = Micros::min();

struct TbsRecord {
    BelievedMode mode = BelievedMode::ACTIVE;
    std::deque<LoadSample> samples;
    /// Direction of the transition in progress while mode is TRANSITIONING.
    std::optional<CommandKind> awaiting;
    Micros slept_at = kNeverSlept;
    /// Set when the TBS finished a commanded wake-up.
    std::optional<Micros> woken_at;
};

struct CbsParams {
    Micros retention_period{10'000'000};
    Micros report_interval{1'000'000};
    Micros routine_period{5'000'000};
    Micros ack_timeout{100'000};
    std::uint32_t max_retries = 3;
    /// A TBS woken by command is not put back to sleep within this period.
    Micros wake_hold{10'000'000};
};

struct ServeByCbs {
    friend bool operator==(const ServeByCbs&, const ServeByCbs&) = default;
};
struct DispatchTo {
    TbsId tbs_id = 0;
    friend bool operator==(const DispatchTo&, const DispatchTo&) = default;
};

enum class RejectReason { NoTbs, AllAsleep, Busy, Unreachable };

constexpr std::string_view to_string(RejectReason r) noexcept
{
    switch (r) {
    case RejectReason::NoTbs: return "NoTbs";
    case RejectReason::AllAsleep: return "AllAsleep";
    case RejectReason::Busy: return "Busy";
    case RejectReason::Unreachable: return "Unreachable";
    }
    return "?";
}

struct Reject {
    RejectReason reason = RejectReason::NoTbs;
    friend bool operator==(const Reject&, const Reject&) = default;
};

using DispatchDecision = std::variant<ServeByCbs, DispatchTo, Reject>;

struct Candidate {
    TbsId tbs_id = 0;
    double load_bps = 0.0;
    friend bool operator==(const Candidate&, const Candidate&) = default;
};

struct DispatchResult {
    DispatchDecision decision;
    /// ACTIVE, non-excluded TBSs and their loads at decision time.
    std::vector<Candidate> candidates;
    /// Wake issued because nothing was awake to serve the request.
    std::optional<wire::Message> wake;
};

// ---------------------------------------------------------------------------
// Sleeping policies

struct PolicyEntry {
    TbsId tbs_id = 0;
    BelievedMode mode = BelievedMode::ACTIVE;
    std::optional<CommandKind> awaiting;
    double load_bps = 0.0;
    Micros slept_at = kNeverSlept;
    bool hold = false; // must stay active
};

struct PolicyInput {
    double total_load_bps = 0.0;
    std::vector<PolicyEntry> stations; // ascending tbs_id
};

/// Decision function of the sleeping-control routine. Implementations map the
/// CBS's view to the set of TBSs that should be active.
class SleepPolicy {
public:
    virtual ~SleepPolicy() = default;
    [[nodiscard]] virtual std::set<TbsId> target_active_set(const PolicyInput& input) const = 0;
};

struct ThresholdParams {
    double capacity_bps = 7 * 2400.0;
    double rho_up = 0.7;
    double rho_down = 0.3;
};

/// Number of TBSs that should be active for the given total load.
///
/// Zero load sleeps everything. Above rho_up per active station the count
/// jumps to the smallest n that brings the per-station load under rho_up.
/// Otherwise one station is released when the remaining ones would still sit
/// under rho_down.
inline std::size_t threshold_policy(double total_load_bps, std::size_t active_count, std::size_t tbs_count,
                                    const ThresholdParams& params)
{
    if (total_load_bps <= 0.0) return 0;
    const double up = params.rho_up * params.capacity_bps;
    const double down = params.rho_down * params.capacity_bps;

    const double per_active = active_count == 0 ? std::numeric_limits<double>::infinity()
                                                : total_load_bps / static_cast<double>(active_count);
    if (per_active > up) {
        const auto n_up = static_cast<std::size_t>(std::ceil(total_load_bps / up));
        return std::min(n_up, tbs_count);
    }
    if (active_count >= 2 && total_load_bps / static_cast<double>(active_count - 1) < down) {
        return active_count - 1;
    }
    return active_count;
}

class ThresholdPolicy final : public SleepPolicy {
public:
    explicit ThresholdPolicy(ThresholdParams params = {}) : params_(params)
    {
        if (!(params_.rho_down < params_.rho_up)) {
            throw Error(ErrorCode::InvalidScenario, "threshold policy needs rho_down < rho_up");
        }
        if (!(params_.capacity_bps > 0.0)) {
            throw Error(ErrorCode::InvalidScenario, "threshold policy capacity must be positive");
        }
    }

    [[nodiscard]] const ThresholdParams& params() const noexcept { return params_; }

    [[nodiscard]] std::set<TbsId> target_active_set(const PolicyInput& input) const override
    {
        std::vector<const PolicyEntry*> on;
        std::vector<const PolicyEntry*> off;
        for (const auto& s : input.stations) {
            if (is_committed_on(s)) on.push_back(&s);
            else if (s.mode == BelievedMode::SLEEPING) off.push_back(&s);
        }
        const std::size_t target =
            threshold_policy(input.total_load_bps, on.size(), on.size() + off.size(), params_);

        std::set<TbsId> result;
        // keep held stations first, then the most loaded
        std::stable_sort(on.begin(), on.end(), [](const PolicyEntry* a, const PolicyEntry* b) {
            if (a->hold != b->hold) return a->hold;
            if (a->load_bps != b->load_bps) return a->load_bps > b->load_bps;
            return a->tbs_id < b->tbs_id;
        });
        for (std::size_t i = 0; i < on.size(); ++i) {
            if (i < target || on[i]->hold) result.insert(on[i]->tbs_id);
        }
        std::stable_sort(off.begin(), off.end(), [](const PolicyEntry* a, const PolicyEntry* b) {
            if (a->slept_at != b->slept_at) return a->slept_at < b->slept_at;
            return a->tbs_id < b->tbs_id;
        });
        for (std::size_t i = 0; i < off.size() && on.size() + i < target; ++i) {
            result.insert(off[i]->tbs_id);
        }
        return result;
    }

    static bool is_committed_on(const PolicyEntry& s) noexcept
    {
        return s.mode == BelievedMode::ACTIVE ||
               (s.mode == BelievedMode::TRANSITIONING && s.awaiting == CommandKind::Wake);
    }

private:
    ThresholdParams params_;
};

// ---------------------------------------------------------------------------
// Global view and controller

struct CbsView {
    CbsParams params;
    std::map<TbsId, TbsRecord> stations;
    std::map<std::uint32_t, PendingCommand> pending_commands;
    std::uint32_t next_command_id = 1;
    std::uint64_t stray_acks = 0;
    Micros now{0};
};

/// Belief change caused by a controller operation, for the event log.
struct BeliefChange {
    TbsId tbs_id = 0;
    BelievedMode from = BelievedMode::ACTIVE;
    BelievedMode to = BelievedMode::ACTIVE;
    bool registered = false;
};

struct TimeoutOutcome {
    enum class Kind { None, Resend, Unreachable } kind = Kind::None;
    std::optional<wire::Message> resend;
    TbsId tbs_id = 0;
    std::uint32_t retries = 0;
};

/// The CBS: load aggregation, least-loaded dispatch and sleeping control.
/// Single-threaded; every operation advances the view to `now`.
class CbsController {
public:
    explicit CbsController(CbsParams params = {}) { view_.params = params; }

    [[nodiscard]] const CbsView& view() const noexcept { return view_; }
    [[nodiscard]] const CbsParams& params() const noexcept { return view_.params; }

    [[nodiscard]] std::optional<BelievedMode> mode_of(TbsId id) const
    {
        auto it = view_.stations.find(id);
        if (it == view_.stations.end()) return std::nullopt;
        return it->second.mode;
    }

    [[nodiscard]] bool has_pending_for(TbsId id) const
    {
        return std::any_of(view_.pending_commands.begin(), view_.pending_commands.end(),
                           [id](const auto& kv) { return kv.second.tbs_id == id; });
    }

    /// Appends the sample (registering unknown TBSs), prunes the window and
    /// applies any mode change the report implies.
    std::optional<BeliefChange> ingest_load_report(TbsId tbs_id, const wire::LoadReport& report, Micros now)
    {
        advance(now);
        auto [it, inserted] = view_.stations.try_emplace(tbs_id);
        TbsRecord& rec = it->second;
        std::optional<BeliefChange> change;
        if (inserted) {
            rec.mode = report.is_sleeping_marker() ? BelievedMode::SLEEPING : BelievedMode::ACTIVE;
            if (rec.mode == BelievedMode::SLEEPING) rec.slept_at = now;
            change = BeliefChange{tbs_id, rec.mode, rec.mode, true};
        }

        if (report.is_sleeping_marker()) {
            if (!inserted && rec.mode != BelievedMode::SLEEPING) {
                change = BeliefChange{tbs_id, rec.mode, BelievedMode::SLEEPING, false};
                rec.mode = BelievedMode::SLEEPING;
                rec.slept_at = now;
            }
            rec.awaiting.reset();
            rec.woken_at.reset();
            rec.samples.clear();
            clear_pending(tbs_id, CommandKind::Sleep);
            return change;
        }

        if (rec.mode == BelievedMode::SLEEPING && !inserted) {
            // stale report from before the close-down
            return change;
        }
        if (rec.mode == BelievedMode::TRANSITIONING && rec.awaiting == CommandKind::Wake) {
            change = BeliefChange{tbs_id, rec.mode, BelievedMode::ACTIVE, false};
            rec.mode = BelievedMode::ACTIVE;
            rec.awaiting.reset();
            rec.woken_at = now;
            clear_pending(tbs_id, CommandKind::Wake);
        } else if (rec.mode == BelievedMode::UNREACHABLE) {
            change = BeliefChange{tbs_id, rec.mode, BelievedMode::ACTIVE, false};
            rec.mode = BelievedMode::ACTIVE;
        }

        rec.samples.push_back(
            LoadSample{tbs_id, now, report.slot_usage, report.arfcn_usage, report.data_rate_bps});
        prune(rec, now);
        return change;
    }

    /// Mean reported data rate over the retention window; 0 with no samples.
    [[nodiscard]] double compute_load(TbsId tbs_id, Micros now) const
    {
        auto it = view_.stations.find(tbs_id);
        if (it == view_.stations.end()) {
            throw Error(ErrorCode::UnknownTbs, "TBS " + std::to_string(tbs_id));
        }
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& s : it->second.samples) {
            if (in_window(s, now)) {
                sum += s.data_rate_bps;
                ++n;
            }
        }
        return n == 0 ? 0.0 : sum / static_cast<double>(n);
    }

    /// Serves low-rate requests locally and sends high-rate ones to the least
    /// loaded ACTIVE TBS (lowest id on ties). `excluded` holds TBSs that
    /// already refused this request.
    DispatchResult dispatch(const LogicalChannel& channel, Micros now, const std::set<TbsId>& excluded = {})
    {
        advance(now);
        DispatchResult result{ServeByCbs{}, {}, std::nullopt};
        if (classify_channel(channel) == ServingSide::CBS) return result;

        for (const auto& [id, rec] : view_.stations) {
            if (rec.mode == BelievedMode::ACTIVE && !excluded.contains(id)) {
                result.candidates.push_back(Candidate{id, compute_load(id, now)});
            }
        }
        if (!result.candidates.empty()) {
            const auto best = std::min_element(
                result.candidates.begin(), result.candidates.end(),
                [](const Candidate& a, const Candidate& b) {
                    return a.load_bps != b.load_bps ? a.load_bps < b.load_bps : a.tbs_id < b.tbs_id;
                });
            result.decision = DispatchTo{best->tbs_id};
            return result;
        }

        if (view_.stations.empty()) {
            result.decision = Reject{RejectReason::NoTbs};
            return result;
        }
        bool any_active = false;
        bool any_sleeping = false;
        bool any_waking = false;
        bool any_transitioning = false;
        for (const auto& [id, rec] : view_.stations) {
            any_active |= rec.mode == BelievedMode::ACTIVE;
            any_sleeping |= rec.mode == BelievedMode::SLEEPING;
            any_transitioning |= rec.mode == BelievedMode::TRANSITIONING;
            any_waking |= rec.mode == BelievedMode::TRANSITIONING && rec.awaiting == CommandKind::Wake;
        }
        if (any_active) {
            result.decision = Reject{RejectReason::Busy};
        } else if (any_sleeping || any_transitioning) {
            result.decision = Reject{RejectReason::AllAsleep};
            if (any_sleeping && !any_waking) {
                result.wake = issue(least_recently_slept(), CommandKind::Wake, now);
            }
        } else {
            result.decision = Reject{RejectReason::Unreachable};
        }
        return result;
    }

    /// One cycle of sleeping control. Stations in transition are left alone,
    /// and a new batch of Sleeps (or Wakes) waits until the previous batch in
    /// the same direction has completed.
    std::vector<wire::Message> sleeping_routine(const SleepPolicy& policy, Micros now)
    {
        advance(now);
        PolicyInput input;
        bool sleeps_in_flight = false;
        bool wakes_in_flight = false;
        for (const auto& [id, rec] : view_.stations) {
            if (rec.mode == BelievedMode::UNREACHABLE) continue;
            PolicyEntry e;
            e.tbs_id = id;
            e.mode = rec.mode;
            e.awaiting = rec.awaiting;
            e.slept_at = rec.slept_at;
            if (rec.mode == BelievedMode::ACTIVE) {
                e.load_bps = compute_load(id, now);
                e.hold = rec.woken_at && now - *rec.woken_at < view_.params.wake_hold;
                input.total_load_bps += e.load_bps;
            }
            sleeps_in_flight |= rec.awaiting == CommandKind::Sleep;
            wakes_in_flight |= rec.awaiting == CommandKind::Wake;
            input.stations.push_back(e);
        }

        const auto target = policy.target_active_set(input);
        std::vector<wire::Message> out;
        for (const auto& e : input.stations) {
            const bool want_on = target.contains(e.tbs_id);
            if (e.mode == BelievedMode::ACTIVE && !want_on && !e.hold && !sleeps_in_flight) {
                out.push_back(issue(e.tbs_id, CommandKind::Sleep, now));
            } else if (e.mode == BelievedMode::SLEEPING && want_on && !wakes_in_flight) {
                out.push_back(issue(e.tbs_id, CommandKind::Wake, now));
            }
        }
        return out;
    }

    /// Clears the matching pending command. Returns false for stray acks.
    bool handle_ack(TbsId tbs_id, const wire::Ack& ack, Micros now)
    {
        advance(now);
        auto it = view_.pending_commands.find(ack.acked_command_id);
        if (it == view_.pending_commands.end() || it->second.tbs_id != tbs_id) {
            ++view_.stray_acks;
            return false;
        }
        view_.pending_commands.erase(it);
        return true;
    }

    /// Called ack_timeout after each (re)send of a command.
    TimeoutOutcome handle_timeout(std::uint32_t command_id, Micros now)
    {
        advance(now);
        TimeoutOutcome outcome;
        auto it = view_.pending_commands.find(command_id);
        if (it == view_.pending_commands.end()) return outcome;
        PendingCommand& cmd = it->second;
        ++cmd.retries;
        outcome.tbs_id = cmd.tbs_id;
        outcome.retries = cmd.retries;
        if (cmd.retries >= view_.params.max_retries) {
            auto& rec = view_.stations.at(cmd.tbs_id);
            rec.mode = BelievedMode::UNREACHABLE;
            rec.awaiting.reset();
            view_.pending_commands.erase(it);
            outcome.kind = TimeoutOutcome::Kind::Unreachable;
            return outcome;
        }
        cmd.issued_at = now;
        outcome.kind = TimeoutOutcome::Kind::Resend;
        outcome.resend = make_command(cmd.tbs_id, cmd.kind, command_id, now);
        return outcome;
    }

private:
    [[nodiscard]] bool in_window(const LoadSample& s, Micros now) const noexcept
    {
        return now - s.received_at <= view_.params.retention_period;
    }

    void prune(TbsRecord& rec, Micros now) const
    {
        while (!rec.samples.empty() && !in_window(rec.samples.front(), now)) {
            rec.samples.pop_front();
        }
    }

    void advance(Micros now)
    {
        if (now > view_.now) view_.now = now;
    }

    void clear_pending(TbsId tbs_id, CommandKind kind)
    {
        std::erase_if(view_.pending_commands,
                      [&](const auto& kv) { return kv.second.tbs_id == tbs_id && kv.second.kind == kind; });
    }

    [[nodiscard]] TbsId least_recently_slept() const
    {
        std::optional<TbsId> best;
        Micros best_at = Micros::max();
        for (const auto& [id, rec] : view_.stations) {
            if (rec.mode == BelievedMode::SLEEPING && rec.slept_at < best_at) {
                best = id;
                best_at = rec.slept_at;
            }
        }
        return *best;
    }

    static wire::Message make_command(TbsId tbs_id, CommandKind kind, std::uint32_t id, Micros now)
    {
        wire::Message msg;
        msg.header = {tbs_id, static_cast<std::uint64_t>(now.count())};
        if (kind == CommandKind::Sleep) msg.payload = wire::Sleep{id};
        else msg.payload = wire::Wake{id};
        return msg;
    }

    wire::Message issue(TbsId tbs_id, CommandKind kind, Micros now)
    {
        auto& rec = view_.stations.at(tbs_id);
        rec.mode = BelievedMode::TRANSITIONING;
        rec.awaiting = kind;
        if (kind == CommandKind::Sleep) rec.woken_at.reset();
        const std::uint32_t id = view_.next_command_id++;
        view_.pending_commands[id] = PendingCommand{tbs_id, kind, now, 0};
        return make_command(tbs_id, kind, id, now);
    }

    CbsView view_;
};

} // namespace hycell
