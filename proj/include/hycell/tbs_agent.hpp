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
#include <cstdint>
#include <functional>
#include <optional>
#include <string_view>
#include <variant>
#include <vector>

#include "hycell/error.hpp"
#include "hycell/time.hpp"
#include "hycell/wire.hpp"

namespace hycell {

enum class TbsMode { ACTIVE, CLOSING_DOWN, SLEEPING, SETTING_UP };

constexpr std::string_view to_string(TbsMode m) noexcept
{
    switch (m) {
    case TbsMode::ACTIVE: return "ACTIVE";
    case TbsMode::CLOSING_DOWN: return "CLOSING_DOWN";
    case TbsMode::SLEEPING: return "SLEEPING";
    case TbsMode::SETTING_UP: return "SETTING_UP";
    }
    return "?";
}

/// Legal edges of the TBS mode graph, self-loops included.
constexpr bool is_legal_transition(TbsMode from, TbsMode to) noexcept
{
    if (from == to) return true;
    switch (from) {
    case TbsMode::ACTIVE: return to == TbsMode::CLOSING_DOWN;
    case TbsMode::CLOSING_DOWN: return to == TbsMode::SLEEPING;
    case TbsMode::SLEEPING: return to == TbsMode::SETTING_UP;
    case TbsMode::SETTING_UP: return to == TbsMode::ACTIVE;
    }
    return false;
}

using SessionId = std::uint32_t;

inline constexpr Micros kDefaultSetupTime{8'400'000};
inline constexpr Micros kDefaultCloseDownTime{52'000};

struct TbsParams {
    TbsId id = 0;
    std::uint16_t arfcn_count = 1;
    // Timeslot 0 of each carrier carries control, so PDTCH slots are numbered
    // from first_pdtch_timeslot upward.
    std::uint8_t pdtch_slots_per_arfcn = 7;
    std::uint8_t first_pdtch_timeslot = 1;
    Micros setup_time = kDefaultSetupTime;
    Micros close_down_time = kDefaultCloseDownTime;
    Micros report_interval = Micros{1'000'000};
};

struct ChannelAssignment {
    std::uint16_t arfcn = 0;
    std::uint8_t timeslot = 0;
    SessionId session_id = 0;

    friend bool operator==(const ChannelAssignment&, const ChannelAssignment&) = default;
};

enum class TransitionKind { SetUp, CloseDown };

/// TBS protocol state machine: channel occupancy, sleep/wake transitions and
/// load reporting. Every operation is a synchronous transition driven by the
/// caller's clock.
class TbsAgent {
public:
    /// Returns the duration of the next transition of the given kind.
    using DurationSampler = std::function<Micros(TransitionKind)>;

    explicit TbsAgent(TbsParams params, TbsMode initial = TbsMode::ACTIVE)
        : params_(params),
          mode_(initial),
          channels_(static_cast<std::size_t>(params.arfcn_count) * params.pdtch_slots_per_arfcn)
    {
        if (initial == TbsMode::CLOSING_DOWN || initial == TbsMode::SETTING_UP) {
            throw Error(ErrorCode::InvalidScenario, "a TBS must start ACTIVE or SLEEPING");
        }
    }

    void set_duration_sampler(DurationSampler sampler) { sampler_ = std::move(sampler); }

    [[nodiscard]] const TbsParams& params() const noexcept { return params_; }
    [[nodiscard]] TbsId id() const noexcept { return params_.id; }
    [[nodiscard]] TbsMode mode() const noexcept { return mode_; }
    [[nodiscard]] bool drain_pending() const noexcept { return drain_pending_; }
    [[nodiscard]] std::optional<Micros> transition_deadline() const noexcept { return deadline_; }
    [[nodiscard]] std::size_t capacity() const noexcept { return channels_.size(); }

    [[nodiscard]] std::size_t busy_count() const noexcept
    {
        return static_cast<std::size_t>(
            std::count_if(channels_.begin(), channels_.end(), [](const auto& c) { return c.has_value(); }));
    }

    [[nodiscard]] std::vector<ChannelAssignment> assignments() const
    {
        std::vector<ChannelAssignment> out;
        for (std::size_t i = 0; i < channels_.size(); ++i) {
            if (channels_[i]) out.push_back(assignment_at(i, *channels_[i]));
        }
        return out;
    }

    /// Assigns the lowest free (arfcn, timeslot), arfcn-major, or refuses.
    /// The CBS request id doubles as the session id.
    wire::TbsResponse handle_tbs_request(const wire::TbsRequest& request, Micros /*now*/)
    {
        wire::TbsResponse response{request.request_id, false, 0, 0};
        if (mode_ != TbsMode::ACTIVE || drain_pending_) return response;
        for (std::size_t i = 0; i < channels_.size(); ++i) {
            if (!channels_[i]) {
                channels_[i] = request.request_id;
                const auto a = assignment_at(i, request.request_id);
                response.assigned = true;
                response.arfcn = a.arfcn;
                response.timeslot = a.timeslot;
                return response;
            }
        }
        return response;
    }

    /// Applies a Sleep or Wake. An Ack is produced for every command,
    /// including ones that do not apply in the current mode.
    wire::Ack handle_command(const std::variant<wire::Sleep, wire::Wake>& command, Micros now)
    {
        if (const auto* sleep = std::get_if<wire::Sleep>(&command)) {
            if (mode_ == TbsMode::ACTIVE && !drain_pending_) {
                if (busy_count() == 0) {
                    begin(TransitionKind::CloseDown, now);
                } else {
                    drain_pending_ = true;
                }
            }
            return wire::Ack{sleep->command_id};
        }
        const auto& wake = std::get<wire::Wake>(command);
        if (mode_ == TbsMode::SLEEPING) {
            begin(TransitionKind::SetUp, now);
        }
        return wire::Ack{wake.command_id};
    }

    /// Completes a pending transition once its deadline has been reached and
    /// returns the mode-change notification for the CBS.
    std::optional<wire::LoadReport> step_transition(Micros now)
    {
        if (!deadline_ || now < *deadline_) return std::nullopt;
        deadline_.reset();
        if (mode_ == TbsMode::CLOSING_DOWN) {
            mode_ = TbsMode::SLEEPING;
            return wire::LoadReport{wire::kSleepingMarker, wire::kSleepingMarker, 0};
        }
        mode_ = TbsMode::ACTIVE;
        return generate_load_report(0, now);
    }

    wire::LoadReport generate_load_report(std::uint64_t window_bytes, Micros /*now*/) const
    {
        if (mode_ != TbsMode::ACTIVE) {
            throw Error(ErrorCode::NotActive, "TBS " + std::to_string(params_.id) + " is " + std::string(to_string(mode_)));
        }
        wire::LoadReport report;
        report.slot_usage = static_cast<std::uint8_t>(busy_count());
        std::uint8_t carriers = 0;
        for (std::uint16_t a = 0; a < params_.arfcn_count; ++a) {
            const auto first = channels_.begin() + static_cast<std::ptrdiff_t>(a) * params_.pdtch_slots_per_arfcn;
            if (std::any_of(first, first + params_.pdtch_slots_per_arfcn, [](const auto& c) { return c.has_value(); })) {
                ++carriers;
            }
        }
        report.arfcn_usage = carriers;
        const auto interval_us = static_cast<std::uint64_t>(params_.report_interval.count());
        const std::uint64_t rate = interval_us == 0 ? 0 : window_bytes * 1'000'000 / interval_us;
        report.data_rate_bps = static_cast<std::uint32_t>(std::min<std::uint64_t>(rate, UINT32_MAX));
        return report;
    }

    /// Frees the session's channel. Once a draining TBS has no busy channel
    /// left it starts closing down.
    void release_channel(SessionId session, Micros now)
    {
        auto it = std::find(channels_.begin(), channels_.end(), std::optional<SessionId>{session});
        if (it == channels_.end()) {
            throw Error(ErrorCode::UnknownSession, "session " + std::to_string(session));
        }
        it->reset();
        if (drain_pending_ && busy_count() == 0) {
            drain_pending_ = false;
            begin(TransitionKind::CloseDown, now);
        }
    }

private:
    [[nodiscard]] ChannelAssignment assignment_at(std::size_t index, SessionId session) const
    {
        const auto per = params_.pdtch_slots_per_arfcn;
        return ChannelAssignment{static_cast<std::uint16_t>(index / per),
                                 static_cast<std::uint8_t>(params_.first_pdtch_timeslot + index % per), session};
    }

    void begin(TransitionKind kind, Micros now)
    {
        Micros duration = kind == TransitionKind::SetUp ? params_.setup_time : params_.close_down_time;
        if (sampler_) duration = std::max(Micros{0}, sampler_(kind));
        mode_ = kind == TransitionKind::SetUp ? TbsMode::SETTING_UP : TbsMode::CLOSING_DOWN;
        deadline_ = now + duration;
    }

    TbsParams params_;
    TbsMode mode_;
    std::vector<std::optional<SessionId>> channels_;
    std::optional<Micros> deadline_;
    bool drain_pending_ = false;
    DurationSampler sampler_;
};

} // namespace hycell
