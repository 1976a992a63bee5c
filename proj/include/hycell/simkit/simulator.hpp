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

#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "hycell/cbs_controller.hpp"
#include "hycell/metrics.hpp"
#include "hycell/simkit/backhaul.hpp"
#include "hycell/simkit/event_queue.hpp"
#include "hycell/simkit/rng.hpp"
#include "hycell/simkit/scenario.hpp"
#include "hycell/simkit/ue.hpp"
#include "hycell/tbs_agent.hpp"
#include "hycell/wire.hpp"

namespace hycell::simkit {

// Event kinds
struct MessageDelivery {
    bool to_cbs = true; // otherwise to the TBS named in the header
    std::vector<std::byte> bytes;
};
struct UeRequest {
    std::size_t ue = 0; // index into the scenario's UE list
    std::uint32_t request = 0;
    std::uint32_t attempt = 0;
    bool arrival = false; // a fresh request rather than a retransmission
};
struct UeSessionEnd {
    SessionId session = 0;
};
struct TimerFire {
    enum class Kind { Transition, AckTimeout, DispatchTimeout, LowRateDone };
    Kind kind = Kind::Transition;
    std::uint32_t id = 0; // TBS id, command id, or dispatch id
};
struct ReportTick {
    TbsId tbs = 0;
};
struct RoutineTick {};

using SimEvent = std::variant<MessageDelivery, UeRequest, UeSessionEnd, TimerFire, ReportTick, RoutineTick>;

struct RunResult {
    metrics::MetricsBundle bundle;
    std::vector<nlohmann::json> events;
};

/// Single-threaded discrete-event run of one scenario.
class Simulator {
public:
    Simulator(ScenarioConfig config, std::uint64_t seed)
        : cfg_(std::move(config)),
          streams_(seed),
          backhaul_rng_(streams_.stream("backhaul")),
          cbs_(cfg_.cbs),
          policy_(cfg_.policy)
    {
        cfg_.seed = seed;
        for (const auto& t : cfg_.tbs) {
            TbsRuntime rt{TbsAgent(t.params, t.initial_mode), streams_.stream("tbs/" + std::to_string(t.params.id)), t, {}, 0, false};
            tbs_.emplace(t.params.id, std::move(rt));
        }
        for (auto& [id, rt] : tbs_) {
            if (!rt.cfg.setup_s.is_constant() || !rt.cfg.close_down_s.is_constant()) {
                TbsRuntime* self = &rt;
                rt.agent.set_duration_sampler([self](TransitionKind k) {
                    const auto& d = k == TransitionKind::SetUp ? self->cfg.setup_s : self->cfg.close_down_s;
                    return from_seconds(d.sample(self->rng));
                });
            }
        }
        for (const auto& u : cfg_.ues) {
            ues_.emplace_back(u, streams_.stream("ue/" + std::to_string(u.ue_id)));
        }
    }

    Simulator(const Simulator&) = delete;
    Simulator& operator=(const Simulator&) = delete;

    RunResult run()
    {
        emit_header();
        for (const auto& [id, rt] : tbs_) queue_.schedule(rt.cfg.report_start, ReportTick{id});
        if (cfg_.sleeping_enabled) queue_.schedule(cfg_.cbs.routine_period, RoutineTick{});
        for (std::size_t i = 0; i < ues_.size(); ++i) {
            if (auto t = ues_[i].first_arrival()) queue_.schedule(*t, UeRequest{i, 0, 0, true});
        }

        while (auto when = queue_.next_time()) {
            if (*when > cfg_.horizon) break;
            auto ev = queue_.pop();
            now_ = ev->time;
            std::visit([this](auto& e) { handle(e); }, ev->payload);
        }
        now_ = cfg_.horizon;
        emit_end();

        RunResult result;
        result.events.assign(std::make_move_iterator(records_.begin()), std::make_move_iterator(records_.end()));
        records_.clear();
        result.bundle = metrics::bundle_from_records(result.events);
        return result;
    }

private:
    struct LiveSession {
        Micros start{0};
        Micros end{0};
        std::uint64_t bytes = 0;
        std::uint64_t credited = 0;
    };

    struct TbsRuntime {
        TbsAgent agent;
        Rng rng;
        TbsConfig cfg;
        std::map<SessionId, LiveSession> sessions;
        std::uint64_t window_bytes = 0;
        bool announced = false;
    };

    struct PendingDispatch {
        std::size_t ue = 0;
        std::uint32_t request = 0;
        std::uint32_t attempt = 0;
        TbsId tbs = 0;
        Micros sent_at{0};
        Micros return_leg{0};
        std::set<TbsId> excluded;
    };

    using json = nlohmann::json;

    // -- logging ------------------------------------------------------------

    json& record(const char* type)
    {
        records_.push_back(json{{"type", type}, {"t", now_.count()}});
        return records_.back();
    }

    void emit_header()
    {
        auto& h = record("header");
        h["version"] = kScenarioVersion;
        h["name"] = cfg_.name;
        h["seed"] = cfg_.seed;
        h["horizon_us"] = cfg_.horizon.count();
        h["sleeping_enabled"] = cfg_.sleeping_enabled;
        h["retention_us"] = cfg_.cbs.retention_period.count();
        h["ack_timeout_us"] = cfg_.cbs.ack_timeout.count();
        h["max_retries"] = cfg_.cbs.max_retries;
        h["energy"] = metrics::profile_to_json(cfg_.energy);
        json list = json::array();
        for (const auto& [id, rt] : tbs_) {
            json t{{"id", id}, {"initial_mode", std::string(to_string(rt.agent.mode()))}};
            t["setup_us"] = rt.cfg.setup_s.is_constant() ? json(rt.cfg.params.setup_time.count()) : json(nullptr);
            t["close_down_us"] =
                rt.cfg.close_down_s.is_constant() ? json(rt.cfg.params.close_down_time.count()) : json(nullptr);
            list.push_back(std::move(t));
        }
        h["tbs"] = std::move(list);
    }

    void emit_end()
    {
        std::uint64_t live = 0;
        std::uint64_t unreported = dropped_bytes_;
        for (auto& [id, rt] : tbs_) {
            credit_sessions(rt);
            for (const auto& [sid, s] : rt.sessions) live += s.credited;
            unreported += rt.window_bytes;
        }
        auto& e = record("end");
        e["bytes"] = json{{"transmitted", transmitted_bytes_},
                          {"reported", reported_bytes_},
                          {"unreported", unreported},
                          {"completed_sessions", completed_bytes_},
                          {"live_sessions", live}};
        json loads = json::object();
        for (const auto& [id, rec] : cbs_.view().stations) loads[std::to_string(id)] = cbs_.compute_load(id, now_);
        e["final_loads"] = std::move(loads);
    }

    std::map<TbsId, BelievedMode> beliefs() const
    {
        std::map<TbsId, BelievedMode> out;
        for (const auto& [id, rec] : cbs_.view().stations) out[id] = rec.mode;
        return out;
    }

    void log_belief_changes(const std::map<TbsId, BelievedMode>& before)
    {
        for (const auto& [id, mode] : beliefs()) {
            auto it = before.find(id);
            if (it != before.end() && it->second == mode) continue;
            auto& r = record("belief");
            r["tbs"] = id;
            r["from"] = it == before.end() ? "NONE" : std::string(to_string(it->second));
            r["to"] = std::string(to_string(mode));
        }
    }

    void log_mode(TbsId id, TbsMode from, TbsMode to)
    {
        if (from == to) return;
        auto& r = record("mode");
        r["tbs"] = id;
        r["from"] = std::string(to_string(from));
        r["to"] = std::string(to_string(to));
    }

    void log_command(const wire::Message& msg, std::uint32_t attempt)
    {
        auto& r = record("command");
        r["tbs"] = msg.header.tbs_id;
        if (const auto* s = std::get_if<wire::Sleep>(&msg.payload)) {
            r["kind"] = "Sleep";
            r["id"] = s->command_id;
        } else {
            r["kind"] = "Wake";
            r["id"] = std::get<wire::Wake>(msg.payload).command_id;
        }
        r["attempt"] = attempt;
    }

    // -- transport ------------------------------------------------------------

    void transmit(bool to_cbs, const wire::Message& msg, Micros delay)
    {
        if (sample_loss(backhaul_rng_, cfg_.backhaul)) {
            auto& r = record("lost");
            r["to_cbs"] = to_cbs;
            r["msg_type"] = static_cast<int>(msg.type());
            r["tbs"] = msg.header.tbs_id;
            return;
        }
        queue_.schedule(now_ + delay, MessageDelivery{to_cbs, wire::encode(msg)});
    }

    Micros one_way_delay() { return sample_backhaul_delay(backhaul_rng_, cfg_.backhaul) / 2; }

    wire::Message stamp(TbsId id, wire::Payload payload) const
    {
        return wire::Message{{id, static_cast<std::uint64_t>(now_.count())}, std::move(payload)};
    }

    void send_command(const wire::Message& msg, std::uint32_t attempt)
    {
        log_command(msg, attempt);
        const auto id = std::visit(
            [](const auto& p) -> std::uint32_t {
                using P = std::decay_t<decltype(p)>;
                if constexpr (std::is_same_v<P, wire::Sleep> || std::is_same_v<P, wire::Wake>) return p.command_id;
                else return 0;
            },
            msg.payload);
        transmit(false, msg, one_way_delay());
        queue_.schedule(now_ + cfg_.cbs.ack_timeout, TimerFire{TimerFire::Kind::AckTimeout, id});
    }

    // -- byte accounting ------------------------------------------------------

    static std::uint64_t bytes_due(const LiveSession& s, Micros t)
    {
        if (t >= s.end) return s.bytes;
        if (t <= s.start) return 0;
        const auto elapsed = static_cast<unsigned __int128>((t - s.start).count());
        const auto span = static_cast<unsigned __int128>((s.end - s.start).count());
        return static_cast<std::uint64_t>(s.bytes * elapsed / span);
    }

    void credit(TbsRuntime& rt, LiveSession& s)
    {
        const auto due = bytes_due(s, now_);
        rt.window_bytes += due - s.credited;
        transmitted_bytes_ += due - s.credited;
        s.credited = due;
    }

    void credit_sessions(TbsRuntime& rt)
    {
        for (auto& [id, s] : rt.sessions) credit(rt, s);
    }

    void after_tbs_change(TbsRuntime& rt, TbsMode before, std::optional<Micros> deadline_before)
    {
        const auto after = rt.agent.mode();
        log_mode(rt.agent.id(), before, after);
        if (after == TbsMode::SLEEPING && before != TbsMode::SLEEPING) {
            dropped_bytes_ += rt.window_bytes;
            rt.window_bytes = 0;
        }
        const auto deadline = rt.agent.transition_deadline();
        if (deadline && deadline != deadline_before) {
            queue_.schedule(*deadline, TimerFire{TimerFire::Kind::Transition, rt.agent.id()});
        }
    }

    // -- event handlers -------------------------------------------------------

    void handle(ReportTick& e)
    {
        auto& rt = tbs_.at(e.tbs);
        queue_.schedule(now_ + rt.cfg.params.report_interval, ReportTick{e.tbs});
        if (rt.agent.mode() == TbsMode::SLEEPING && !rt.announced) {
            // an initially sleeping TBS makes itself known once
            rt.announced = true;
            send_report(rt, wire::LoadReport{wire::kSleepingMarker, wire::kSleepingMarker, 0}, 0);
            return;
        }
        rt.announced = true;
        if (rt.agent.mode() != TbsMode::ACTIVE) return;
        credit_sessions(rt);
        const auto bytes = rt.window_bytes;
        const auto report = rt.agent.generate_load_report(bytes, now_);
        rt.window_bytes = 0;
        reported_bytes_ += bytes;
        send_report(rt, report, bytes);
    }

    void send_report(TbsRuntime& rt, const wire::LoadReport& report, std::uint64_t bytes)
    {
        auto& r = record("report");
        r["tbs"] = rt.agent.id();
        r["slot_usage"] = report.slot_usage;
        r["arfcn_usage"] = report.arfcn_usage;
        r["data_rate_bps"] = report.data_rate_bps;
        r["bytes"] = bytes;
        r["marker"] = report.is_sleeping_marker();
        transmit(true, stamp(rt.agent.id(), report), one_way_delay());
    }

    void handle(RoutineTick&)
    {
        queue_.schedule(now_ + cfg_.cbs.routine_period, RoutineTick{});
        const auto before = beliefs();
        const auto commands = cbs_.sleeping_routine(policy_, now_);
        log_belief_changes(before);
        for (const auto& msg : commands) send_command(msg, 1);
    }

    void handle(UeRequest& e)
    {
        auto& ue = ues_[e.ue];
        if (e.arrival) {
            for (const auto& out : ue.step(UeArrival{}, now_)) apply_ue_output(e.ue, out);
            return;
        }
        auto& r = record("request");
        r["ue"] = ue.profile().ue_id;
        r["req"] = e.request;
        r["attempt"] = e.attempt;
        r["channel"] = ue.profile().channel.to_string();
        r["class"] = std::string(to_string(classify_channel(ue.profile().channel) == ServingSide::TBS
                                               ? RequestClass::HIGH_RATE
                                               : RequestClass::LOW_RATE));
        dispatch(e.ue, e.request, e.attempt, {});
    }

    void apply_ue_output(std::size_t ue_index, const UeOutput& out)
    {
        auto& ue = ues_[ue_index];
        if (const auto* send = std::get_if<SendRequest>(&out)) {
            queue_.schedule(send->at, UeRequest{ue_index, send->request, send->attempt, false});
        } else if (const auto* next = std::get_if<NextArrival>(&out)) {
            queue_.schedule(next->at, UeRequest{ue_index, 0, 0, true});
        } else if (const auto* failed = std::get_if<RequestFailed>(&out)) {
            auto& r = record("outcome");
            r["ue"] = ue.profile().ue_id;
            r["req"] = failed->request;
            r["result"] = "failed";
            r["attempts"] = failed->attempts;
        } else if (const auto* plan = std::get_if<SessionPlan>(&out)) {
            (void)plan; // sessions are started by the assignment handler
        }
    }

    void dispatch(std::size_t ue_index, std::uint32_t request, std::uint32_t attempt, std::set<TbsId> excluded)
    {
        auto& ue = ues_[ue_index];
        const auto before = beliefs();
        const auto result = cbs_.dispatch(ue.profile().channel, now_, excluded);

        auto& r = record("dispatch");
        r["ue"] = ue.profile().ue_id;
        r["req"] = request;
        r["attempt"] = attempt;
        r["retry"] = !excluded.empty();
        json candidates = json::array();
        for (const auto& c : result.candidates) candidates.push_back(json{{"tbs", c.tbs_id}, {"load_bps", c.load_bps}});
        r["candidates"] = std::move(candidates);
        json modes = json::object();
        for (const auto& [id, m] : before) modes[std::to_string(id)] = std::string(to_string(m));
        r["modes"] = std::move(modes);

        if (std::holds_alternative<ServeByCbs>(result.decision)) {
            r["decision"] = "ServeByCbs";
            auto& o = record("outcome");
            o["ue"] = ue.profile().ue_id;
            o["req"] = request;
            o["result"] = "succeeded";
            o["attempts"] = attempt;
            ue.served_locally(request);
            low_rate_jobs_.emplace_back(ue.profile().ue_id, request);
            queue_.schedule(now_ + cfg_.low_rate_service,
                            TimerFire{TimerFire::Kind::LowRateDone, static_cast<std::uint32_t>(low_rate_jobs_.size() - 1)});
            return;
        }
        if (const auto* reject = std::get_if<Reject>(&result.decision)) {
            r["decision"] = "Reject";
            r["reason"] = std::string(to_string(reject->reason));
            log_belief_changes(before);
            if (result.wake) send_command(*result.wake, 1);
            for (const auto& out : ue.step(UeRefused{request}, now_)) apply_ue_output(ue_index, out);
            return;
        }
        const TbsId target = std::get<DispatchTo>(result.decision).tbs_id;
        r["decision"] = "DispatchTo";
        r["tbs"] = target;

        const std::uint32_t id = next_dispatch_id_++;
        const Micros round_trip = sample_backhaul_delay(backhaul_rng_, cfg_.backhaul);
        const Micros first_leg = round_trip / 2;
        pending_dispatch_[id] = PendingDispatch{ue_index, request, attempt, target, now_, round_trip - first_leg,
                                                std::move(excluded)};
        transmit(false, stamp(target, wire::TbsRequest{id}), first_leg);
        queue_.schedule(now_ + cfg_.cbs.ack_timeout, TimerFire{TimerFire::Kind::DispatchTimeout, id});
    }

    void refused(std::uint32_t dispatch_id)
    {
        auto node = pending_dispatch_.extract(dispatch_id);
        auto& p = node.mapped();
        auto& ue = ues_[p.ue];
        if (p.excluded.empty()) {
            // one retry with the next least loaded station
            p.excluded.insert(p.tbs);
            dispatch(p.ue, p.request, p.attempt, p.excluded);
            return;
        }
        auto& r = record("dispatch");
        r["ue"] = ue.profile().ue_id;
        r["req"] = p.request;
        r["attempt"] = p.attempt;
        r["retry"] = true;
        r["candidates"] = json::array();
        r["modes"] = json::object();
        r["decision"] = "Reject";
        r["reason"] = std::string(to_string(RejectReason::Busy));
        for (const auto& out : ue.step(UeRefused{p.request}, now_)) apply_ue_output(p.ue, out);
    }

    void handle(MessageDelivery& e)
    {
        const auto msg = wire::decode(e.bytes);
        if (e.to_cbs) deliver_to_cbs(msg);
        else deliver_to_tbs(msg);
    }

    void deliver_to_tbs(const wire::Message& msg)
    {
        auto it = tbs_.find(msg.header.tbs_id);
        if (it == tbs_.end()) return;
        auto& rt = it->second;
        const auto mode_before = rt.agent.mode();
        const auto deadline_before = rt.agent.transition_deadline();

        if (const auto* req = std::get_if<wire::TbsRequest>(&msg.payload)) {
            const auto response = rt.agent.handle_tbs_request(*req, now_);
            auto pd = pending_dispatch_.find(req->request_id);
            const Micros back = pd != pending_dispatch_.end() ? pd->second.return_leg : one_way_delay();
            transmit(true, stamp(rt.agent.id(), response), back);
        } else if (const auto* sleep = std::get_if<wire::Sleep>(&msg.payload)) {
            const auto ack = rt.agent.handle_command(*sleep, now_);
            after_tbs_change(rt, mode_before, deadline_before);
            transmit(true, stamp(rt.agent.id(), ack), one_way_delay());
        } else if (const auto* wake = std::get_if<wire::Wake>(&msg.payload)) {
            const auto ack = rt.agent.handle_command(*wake, now_);
            after_tbs_change(rt, mode_before, deadline_before);
            transmit(true, stamp(rt.agent.id(), ack), one_way_delay());
        }
    }

    void deliver_to_cbs(const wire::Message& msg)
    {
        const TbsId src = msg.header.tbs_id;
        if (const auto* report = std::get_if<wire::LoadReport>(&msg.payload)) {
            const auto before = beliefs();
            cbs_.ingest_load_report(src, *report, now_);
            log_belief_changes(before);
            if (!report->is_sleeping_marker() && cbs_.mode_of(src) != BelievedMode::SLEEPING) {
                auto& r = record("load");
                r["tbs"] = src;
                r["load_bps"] = cbs_.compute_load(src, now_);
            }
        } else if (const auto* response = std::get_if<wire::TbsResponse>(&msg.payload)) {
            on_response(src, *response);
        } else if (const auto* ack = std::get_if<wire::Ack>(&msg.payload)) {
            const bool matched = cbs_.handle_ack(src, *ack, now_);
            auto& r = record("ack");
            r["tbs"] = src;
            r["id"] = ack->acked_command_id;
            r["matched"] = matched;
        }
    }

    void on_response(TbsId src, const wire::TbsResponse& response)
    {
        auto it = pending_dispatch_.find(response.request_id);
        if (it == pending_dispatch_.end()) {
            // timed out already; give the channel back
            if (response.assigned) release_orphan(src, response.request_id);
            return;
        }
        auto& p = it->second;
        auto& ue = ues_[p.ue];
        auto& r = record("assign");
        r["ue"] = ue.profile().ue_id;
        r["req"] = p.request;
        r["attempt"] = p.attempt;
        r["tbs"] = src;
        r["dispatch_id"] = response.request_id;
        r["assigned"] = response.assigned;
        r["arfcn"] = response.arfcn;
        r["timeslot"] = response.timeslot;
        r["delay_us"] = (now_ - p.sent_at).count();
        if (!response.assigned) {
            refused(response.request_id);
            return;
        }
        const auto request = p.request;
        const auto ue_index = p.ue;
        pending_dispatch_.erase(it);
        for (const auto& out : ue.step(UeAssigned{request}, now_)) {
            if (const auto* plan = std::get_if<SessionPlan>(&out)) {
                auto& rt = tbs_.at(src);
                rt.sessions[response.request_id] = LiveSession{now_, plan->end, plan->bytes, 0};
                auto& s = record("session_start");
                s["session"] = response.request_id;
                s["ue"] = ue.profile().ue_id;
                s["req"] = request;
                s["tbs"] = src;
                s["bytes"] = plan->bytes;
                s["end_us"] = plan->end.count();
                auto& o = record("outcome");
                o["ue"] = ue.profile().ue_id;
                o["req"] = request;
                o["result"] = "succeeded";
                o["attempts"] = plan->attempts;
                queue_.schedule(plan->end, UeSessionEnd{response.request_id});
            } else {
                apply_ue_output(ue_index, out);
            }
        }
    }

    void release_orphan(TbsId src, SessionId session)
    {
        auto& rt = tbs_.at(src);
        const auto mode_before = rt.agent.mode();
        const auto deadline_before = rt.agent.transition_deadline();
        rt.agent.release_channel(session, now_);
        after_tbs_change(rt, mode_before, deadline_before);
    }

    void handle(UeSessionEnd& e)
    {
        for (auto& [id, rt] : tbs_) {
            auto it = rt.sessions.find(e.session);
            if (it == rt.sessions.end()) continue;
            credit(rt, it->second);
            completed_bytes_ += it->second.bytes;
            auto& r = record("session_end");
            r["session"] = e.session;
            r["tbs"] = id;
            r["bytes"] = it->second.bytes;
            rt.sessions.erase(it);
            const auto mode_before = rt.agent.mode();
            const auto deadline_before = rt.agent.transition_deadline();
            rt.agent.release_channel(e.session, now_);
            after_tbs_change(rt, mode_before, deadline_before);
            return;
        }
    }

    void handle(TimerFire& e)
    {
        switch (e.kind) {
        case TimerFire::Kind::Transition: {
            auto& rt = tbs_.at(static_cast<TbsId>(e.id));
            const auto mode_before = rt.agent.mode();
            const auto deadline_before = rt.agent.transition_deadline();
            const auto note = rt.agent.step_transition(now_);
            if (!note) return;
            after_tbs_change(rt, mode_before, deadline_before);
            send_report(rt, *note, 0);
            return;
        }
        case TimerFire::Kind::AckTimeout: {
            const auto before = beliefs();
            const auto outcome = cbs_.handle_timeout(e.id, now_);
            if (outcome.kind == TimeoutOutcome::Kind::Resend) {
                send_command(*outcome.resend, outcome.retries + 1);
            } else if (outcome.kind == TimeoutOutcome::Kind::Unreachable) {
                auto& r = record("unreachable");
                r["tbs"] = outcome.tbs_id;
                r["id"] = e.id;
                log_belief_changes(before);
            }
            return;
        }
        case TimerFire::Kind::DispatchTimeout:
            if (pending_dispatch_.contains(e.id)) {
                auto& p = pending_dispatch_.at(e.id);
                auto& r = record("assign");
                r["ue"] = ues_[p.ue].profile().ue_id;
                r["req"] = p.request;
                r["attempt"] = p.attempt;
                r["tbs"] = p.tbs;
                r["dispatch_id"] = e.id;
                r["assigned"] = false;
                r["arfcn"] = 0;
                r["timeslot"] = 0;
                r["delay_us"] = (now_ - p.sent_at).count();
                r["timeout"] = true;
                refused(e.id);
            }
            return;
        case TimerFire::Kind::LowRateDone: {
            const auto [ue_id, request] = low_rate_jobs_.at(e.id);
            auto& r = record("low_rate_done");
            r["ue"] = ue_id;
            r["req"] = request;
            return;
        }
        }
    }

    ScenarioConfig cfg_;
    RngStreams streams_;
    Rng backhaul_rng_;
    CbsController cbs_;
    ThresholdPolicy policy_;
    std::map<TbsId, TbsRuntime> tbs_;
    std::vector<UeAgent> ues_;
    EventQueue<SimEvent> queue_;
    Micros now_{0};
    std::deque<json> records_; // stable references while a record is filled in
    std::vector<std::pair<std::uint32_t, std::uint32_t>> low_rate_jobs_;
    std::map<std::uint32_t, PendingDispatch> pending_dispatch_;
    std::uint32_t next_dispatch_id_ = 1;
    std::uint64_t transmitted_bytes_ = 0;
    std::uint64_t reported_bytes_ = 0;
    std::uint64_t dropped_bytes_ = 0;
    std::uint64_t completed_bytes_ = 0;
};

/// Runs `scenario` with `seed`; identical inputs give identical results.
inline RunResult run(const ScenarioConfig& scenario, std::uint64_t seed)
{
    Simulator sim(scenario, seed);
    return sim.run();
}

inline RunResult run(const ScenarioConfig& scenario) { return run(scenario, scenario.seed); }

} // namespace hycell::simkit
