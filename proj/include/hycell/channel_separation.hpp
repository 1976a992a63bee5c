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
#include <array>
#include <cctype>
#include <span>
#include <string>
#include <string_view>

#include "hycell/error.hpp"

namespace hycell {

enum class Standard { GSM_GPRS, UMTS, LTE };

enum class ServingSide { CBS, TBS };

enum class RequestClass { LOW_RATE, HIGH_RATE };

constexpr std::string_view to_string(Standard s) noexcept
{
    switch (s) {
    case Standard::GSM_GPRS: return "GSM_GPRS";
    case Standard::UMTS: return "UMTS";
    case Standard::LTE: return "LTE";
    }
    return "?";
}

constexpr std::string_view to_string(ServingSide s) noexcept
{
    return s == ServingSide::CBS ? "CBS" : "TBS";
}

constexpr std::string_view to_string(RequestClass c) noexcept
{
    return c == RequestClass::LOW_RATE ? "LOW_RATE" : "HIGH_RATE";
}

namespace detail {

struct SeparationRow {
    Standard standard;
    std::string_view name;
    ServingSide side;
};

// Broadcast, common control/paging and common traffic stay at the control
// station; dedicated traffic and dedicated/associated control go to traffic
// stations.
inline constexpr std::array<SeparationRow, 18> kSeparationTable{{
    {Standard::GSM_GPRS, "BCH", ServingSide::CBS},
    {Standard::GSM_GPRS, "CCCH", ServingSide::CBS},
    {Standard::GSM_GPRS, "PACCH", ServingSide::TBS},
    {Standard::GSM_GPRS, "TCH", ServingSide::CBS},
    {Standard::GSM_GPRS, "PDTCH", ServingSide::TBS},

    {Standard::UMTS, "BCCH", ServingSide::CBS},
    {Standard::UMTS, "CCCH", ServingSide::CBS},
    {Standard::UMTS, "PCCH", ServingSide::CBS},
    {Standard::UMTS, "DCCH", ServingSide::TBS},
    {Standard::UMTS, "CTCH", ServingSide::CBS},
    {Standard::UMTS, "DTCH", ServingSide::TBS},

    {Standard::LTE, "BCCH", ServingSide::CBS},
    {Standard::LTE, "CCCH", ServingSide::CBS},
    {Standard::LTE, "PCCH", ServingSide::CBS},
    {Standard::LTE, "DCCH", ServingSide::TBS},
    {Standard::LTE, "MTCH", ServingSide::CBS},
    {Standard::LTE, "MCCH", ServingSide::CBS},
    {Standard::LTE, "DTCH", ServingSide::TBS},
}};

inline std::string to_upper(std::string_view text)
{
    std::string out(text);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

} // namespace detail

/// A (standard, channel-name) pair. Construct through `make` or `parse`,
/// which reject names outside the standard's channel set.
class LogicalChannel {
public:
    static LogicalChannel make(Standard standard, std::string_view name)
    {
        const std::string upper = detail::to_upper(name);
        for (const auto& row : detail::kSeparationTable) {
            if (row.standard == standard && row.name == upper) {
                return LogicalChannel{standard, row.name};
            }
        }
        throw Error(ErrorCode::InvalidChannel,
                    std::string(hycell::to_string(standard)) + " has no channel '" + std::string(name) + "'");
    }

    /// Parses "STANDARD:NAME", case-insensitively.
    static LogicalChannel parse(std::string_view text)
    {
        const auto colon = text.find(':');
        if (colon == std::string_view::npos) {
            throw Error(ErrorCode::InvalidChannel, "expected STANDARD:NAME, got '" + std::string(text) + "'");
        }
        return make(parse_standard(text.substr(0, colon)), text.substr(colon + 1));
    }

    static Standard parse_standard(std::string_view text)
    {
        const std::string upper = detail::to_upper(text);
        if (upper == "GSM_GPRS") return Standard::GSM_GPRS;
        if (upper == "UMTS") return Standard::UMTS;
        if (upper == "LTE") return Standard::LTE;
        throw Error(ErrorCode::InvalidChannel, "unknown standard '" + std::string(text) + "'");
    }

    [[nodiscard]] Standard standard() const noexcept { return standard_; }
    [[nodiscard]] std::string_view name() const noexcept { return name_; }

    [[nodiscard]] std::string to_string() const
    {
        return std::string(hycell::to_string(standard_)) + ":" + std::string(name_);
    }

    friend bool operator==(const LogicalChannel&, const LogicalChannel&) = default;

private:
    LogicalChannel(Standard standard, std::string_view name) : standard_(standard), name_(name) {}

    Standard standard_;
    std::string_view name_; // points into the static table
};

/// Every valid (standard, channel) pair, in table order.
inline std::span<const detail::SeparationRow> separation_table() noexcept
{
    return detail::kSeparationTable;
}

inline ServingSide classify_channel(const LogicalChannel& channel)
{
    for (const auto& row : detail::kSeparationTable) {
        if (row.standard == channel.standard() && row.name == channel.name()) {
            return row.side;
        }
    }
    // unreachable by construction of LogicalChannel
    throw Error(ErrorCode::InvalidChannel, channel.to_string());
}

inline RequestClass classify_request(Standard standard, std::string_view requested_channel_name)
{
    const auto channel = LogicalChannel::make(standard, requested_channel_name);
    return classify_channel(channel) == ServingSide::TBS ? RequestClass::HIGH_RATE : RequestClass::LOW_RATE;
}

} // namespace hycell
