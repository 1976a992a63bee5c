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

#include <stdexcept>
#include <string>
#include <string_view>

namespace hycell {

/// Typed failure categories raised by the library.
enum class ErrorCode {
    InvalidChannel,
    UnknownType,
    TruncatedMessage,
    TrailingBytes,
    MalformedPayload,
    UnknownTbs,
    UnknownSession,
    NotActive,
    PastEvent,
    TimelineGap,
    ZeroBaseline,
    EmptySamples,
    InvalidScenario,
    InvalidLog,
};

constexpr std::string_view to_string(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::InvalidChannel: return "InvalidChannel";
    case ErrorCode::UnknownType: return "UnknownType";
    case ErrorCode::TruncatedMessage: return "TruncatedMessage";
    case ErrorCode::TrailingBytes: return "TrailingBytes";
    case ErrorCode::MalformedPayload: return "MalformedPayload";
    case ErrorCode::UnknownTbs: return "UnknownTbs";
    case ErrorCode::UnknownSession: return "UnknownSession";
    case ErrorCode::NotActive: return "NotActive";
    case ErrorCode::PastEvent: return "PastEvent";
    case ErrorCode::TimelineGap: return "TimelineGap";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::EmptySamples: return "EmptySamples";
    case ErrorCode::InvalidScenario: return "InvalidScenario";
    case ErrorCode::InvalidLog: return "InvalidLog";
    }
    return "Unknown";
}

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
    {
    }

    [[nodiscard]] ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace hycell
