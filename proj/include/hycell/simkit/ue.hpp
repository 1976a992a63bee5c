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

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <variant>
#include <vector>

#include "hycell/channel_separation.hpp"
#include "hycell/simkit/distribution.hpp"
#include "hycell/simkit/rng.hpp"
#include "hycell/time.hpp"

namespace hycell::simkit {

struct UeProfile {
    std::uint32_t ue_id = 0;
    LogicalChannel channel = LogicalChannel::make(Standard::GSM_GPRS, "PDTCH");
    Distribution interarrival_s = Distribution::exponential(10.0);
    Distribution session_size_bytes = Distribution::constant(16'800.0);
    double session_rate_bps = 2'400.0;
    Micros retransmit_interval{2'000'000};
    std::uint32_t max_retransmits = 10;
    Micros start{0};
    std::optional<Micros> stop;
    std::optional<std::uint32_t> max_requests;
};

/// Session duration for `bytes` at `rate_bps` bytes per second, rounded up to
/// whole microseconds.
inline Micros session_duration(std::uint64_t bytes, double rate_bps)
{
    return Micros{static_cast<std::int64_t>(std::ceil(static_cast<double>(bytes) * 1e6 / rate_bps))};
}

// Inputs and outputs of UeAgent::step.
struct UeArrival {};
struct UeRefused {
    std::uint32_t request = 0;
};
struct UeAssigned {
    std::uint32_t request = 0;
};
using UeInput = std::variant<UeArrival, UeRefused, UeAssigned>;

/// Send (or resend) a channel request to the CBS at `at`.
struct SendRequest {
    std::uint32_t request = 0;
    std::uint32_t attempt = 1;
    Micros at{0};
};
struct NextArrival {
    Micros at{0};
};
struct RequestFailed {
    std::uint32_t request = 0;
    std::uint32_t attempts = 0;
};
struct SessionPlan {
    std::uint32_t request = 0;
    std::uint64_t bytes = 0;
    Micros end{0};
    std::uint32_t attempts = 0;
};
using UeOutput = std::variant<SendRequest, NextArrival, RequestFailed, SessionPlan>;

/// Retransmitting request generator for one UE. Request numbers are local to
/// the UE and start at 1.
class UeAgent {
public:
    explicit UeAgent(UeProfile profile, Rng rng) : profile_(std::move(profile)), rng_(std::move(rng)) {}

    [[nodiscard]] const UeProfile& profile() const noexcept { return profile_; }
    [[nodiscard]] std::uint32_t issued() const noexcept { return issued_; }
    [[nodiscard]] std::uint32_t succeeded() const noexcept { return succeeded_; }
    [[nodiscard]] std::uint32_t failed() const noexcept { return failed_; }
    [[nodiscard]] std::size_t in_flight() const noexcept { return attempts_.size(); }

    /// Time of the first request, if the profile issues any.
    std::optional<Micros> first_arrival()
    {
        if (profile_.max_requests && *profile_.max_requests == 0) return std::nullopt;
        return within_stop(profile_.start);
    }

    std::vector<UeOutput> step(const UeInput& input, Micros now)
    {
        std::vector<UeOutput> out;
        if (std::holds_alternative<UeArrival>(input)) {
            const std::uint32_t req = ++issued_;
            attempts_[req] = 1;
            out.push_back(SendRequest{req, 1, now});
            if (!profile_.max_requests || issued_ < *profile_.max_requests) {
                const auto gap = from_seconds(profile_.interarrival_s.sample(rng_));
                if (auto next = within_stop(now + std::max(gap, Micros{1}))) out.push_back(NextArrival{*next});
            }
        } else if (const auto* refused = std::get_if<UeRefused>(&input)) {
            auto it = attempts_.find(refused->request);
            if (it == attempts_.end()) return out;
            // attempts counts the original transmission; retransmits are the rest
            if (it->second > profile_.max_retransmits) {
                out.push_back(RequestFailed{it->first, it->second});
                ++failed_;
                attempts_.erase(it);
            } else {
                ++it->second;
                out.push_back(SendRequest{it->first, it->second, now + profile_.retransmit_interval});
            }
        } else {
            const auto& assigned = std::get<UeAssigned>(input);
            auto it = attempts_.find(assigned.request);
            if (it == attempts_.end()) return out;
            const double drawn = profile_.session_size_bytes.sample(rng_);
            const auto bytes = static_cast<std::uint64_t>(std::max(1.0, std::round(drawn)));
            out.push_back(SessionPlan{it->first, bytes, now + session_duration(bytes, profile_.session_rate_bps),
                                      it->second});
            ++succeeded_;
            attempts_.erase(it);
        }
        return out;
    }

    /// Low-rate requests complete at the CBS; this only settles the counters.
    void served_locally(std::uint32_t request)
    {
        if (attempts_.erase(request) != 0) ++succeeded_;
    }

private:
    [[nodiscard]] std::optional<Micros> within_stop(Micros t) const
    {
        if (profile_.stop && t > *profile_.stop) return std::nullopt;
        return t;
    }

    UeProfile profile_;
    Rng rng_;
    std::uint32_t issued_ = 0;
    std::uint32_t succeeded_ = 0;
    std::uint32_t failed_ = 0;
    std::map<std::uint32_t, std::uint32_t> attempts_; // request -> transmissions so far
};

} // namespace hycell::simkit
