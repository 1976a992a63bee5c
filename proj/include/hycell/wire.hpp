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

// CBS <-> TBS backhaul messages and their fixed-layout binary codec.
//
// Layout (little-endian, no padding):
//   [msg_type:1][tbs_id:2][timestamp_us:8][payload]
//
//   type  payload                                              bytes
//   1     LoadReport  slot_usage:1 arfcn_usage:1 data_rate:4      6
//   2     TbsRequest  request_id:4                                4
//   3     TbsResponse request_id:4 assigned:1 arfcn:2 timeslot:1  8
//   4     Sleep       command_id:4                                4
//   5     Wake        command_id:4                                4
//   6     Ack         acked_command_id:4                          4

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "hycell/error.hpp"
#include "hycell/time.hpp"

namespace hycell::wire {

enum class MessageType : std::uint8_t {
    LoadReport = 1,
    TbsRequest = 2,
    TbsResponse = 3,
    Sleep = 4,
    Wake = 5,
    Ack = 6,
};

inline constexpr std::size_t kHeaderSize = 11;

/// slot_usage/arfcn_usage value carried by the notification a TBS sends once
/// it has finished closing down. Regular reports never reach it because
/// capacity is bounded well below 255 slots.
inline constexpr std::uint8_t kSleepingMarker = 0xFF;

struct MessageHeader {
    TbsId tbs_id = 0;
    std::uint64_t timestamp_us = 0;

    friend bool operator==(const MessageHeader&, const MessageHeader&) = default;
};

struct LoadReport {
    std::uint8_t slot_usage = 0;
    std::uint8_t arfcn_usage = 0;
    std::uint32_t data_rate_bps = 0; // bytes per second on PDTCH

    [[nodiscard]] bool is_sleeping_marker() const noexcept
    {
        return slot_usage == kSleepingMarker && arfcn_usage == kSleepingMarker;
    }

    friend bool operator==(const LoadReport&, const LoadReport&) = default;
};

struct TbsRequest {
    std::uint32_t request_id = 0;
    friend bool operator==(const TbsRequest&, const TbsRequest&) = default;
};

struct TbsResponse {
    std::uint32_t request_id = 0;
    bool assigned = false;
    std::uint16_t arfcn = 0;
    std::uint8_t timeslot = 0;
    friend bool operator==(const TbsResponse&, const TbsResponse&) = default;
};

struct Sleep {
    std::uint32_t command_id = 0;
    friend bool operator==(const Sleep&, const Sleep&) = default;
};

struct Wake {
    std::uint32_t command_id = 0;
    friend bool operator==(const Wake&, const Wake&) = default;
};

struct Ack {
    std::uint32_t acked_command_id = 0;
    friend bool operator==(const Ack&, const Ack&) = default;
};

using Payload = std::variant<LoadReport, TbsRequest, TbsResponse, Sleep, Wake, Ack>;

struct Message {
    MessageHeader header;
    Payload payload;

    [[nodiscard]] MessageType type() const noexcept
    {
        return static_cast<MessageType>(payload.index() + 1);
    }

    friend bool operator==(const Message&, const Message&) = default;
};

constexpr std::size_t payload_size(MessageType type) noexcept
{
    switch (type) {
    case MessageType::LoadReport: return 6;
    case MessageType::TbsResponse: return 8;
    case MessageType::TbsRequest:
    case MessageType::Sleep:
    case MessageType::Wake:
    case MessageType::Ack: return 4;
    }
    return 0;
}

namespace detail {

class Writer {
public:
    explicit Writer(std::size_t reserve) { bytes_.reserve(reserve); }

    template <typename T>
    void put(T value)
    {
        auto raw = static_cast<std::uint64_t>(value);
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            bytes_.push_back(static_cast<std::byte>(raw & 0xFFu));
            raw >>= 8;
        }
    }

    std::vector<std::byte> take() && { return std::move(bytes_); }

private:
    std::vector<std::byte> bytes_;
};

class Reader {
public:
    explicit Reader(std::span<const std::byte> bytes) : bytes_(bytes) {}

    template <typename T>
    T get()
    {
        std::uint64_t raw = 0;
        for (std::size_t i = 0; i < sizeof(T); ++i) {
            raw |= static_cast<std::uint64_t>(bytes_[pos_ + i]) << (8 * i);
        }
        pos_ += sizeof(T);
        return static_cast<T>(raw);
    }

private:
    std::span<const std::byte> bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline std::vector<std::byte> encode(const Message& msg)
{
    const auto type = msg.type();
    detail::Writer w(kHeaderSize + payload_size(type));
    w.put(static_cast<std::uint8_t>(type));
    w.put(msg.header.tbs_id);
    w.put(msg.header.timestamp_us);
    std::visit(
        [&w](const auto& p) {
            using P = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<P, LoadReport>) {
                w.put(p.slot_usage);
                w.put(p.arfcn_usage);
                w.put(p.data_rate_bps);
            } else if constexpr (std::is_same_v<P, TbsRequest>) {
                w.put(p.request_id);
            } else if constexpr (std::is_same_v<P, TbsResponse>) {
                w.put(p.request_id);
                w.put(static_cast<std::uint8_t>(p.assigned ? 1 : 0));
                w.put(p.arfcn);
                w.put(p.timeslot);
            } else if constexpr (std::is_same_v<P, Sleep> || std::is_same_v<P, Wake>) {
                w.put(p.command_id);
            } else if constexpr (std::is_same_v<P, Ack>) {
                w.put(p.acked_command_id);
            }
        },
        msg.payload);
    return std::move(w).take();
}

inline Message decode(std::span<const std::byte> bytes)
{
    if (bytes.empty()) {
        throw Error(ErrorCode::TruncatedMessage, "empty input");
    }
    const auto raw_type = static_cast<std::uint8_t>(bytes[0]);
    if (raw_type < 1 || raw_type > 6) {
        throw Error(ErrorCode::UnknownType, "message type " + std::to_string(raw_type));
    }
    const auto type = static_cast<MessageType>(raw_type);
    const std::size_t expected = kHeaderSize + payload_size(type);
    if (bytes.size() < expected) {
        throw Error(ErrorCode::TruncatedMessage,
                    std::to_string(bytes.size()) + " of " + std::to_string(expected) + " bytes");
    }
    if (bytes.size() > expected) {
        throw Error(ErrorCode::TrailingBytes,
                    std::to_string(bytes.size() - expected) + " bytes past end of message");
    }

    detail::Reader r(bytes);
    r.get<std::uint8_t>();
    Message msg;
    msg.header.tbs_id = r.get<std::uint16_t>();
    msg.header.timestamp_us = r.get<std::uint64_t>();
    switch (type) {
    case MessageType::LoadReport: {
        LoadReport p;
        p.slot_usage = r.get<std::uint8_t>();
        p.arfcn_usage = r.get<std::uint8_t>();
        p.data_rate_bps = r.get<std::uint32_t>();
        msg.payload = p;
        break;
    }
    case MessageType::TbsRequest:
        msg.payload = TbsRequest{r.get<std::uint32_t>()};
        break;
    case MessageType::TbsResponse: {
        TbsResponse p;
        p.request_id = r.get<std::uint32_t>();
        const auto assigned = r.get<std::uint8_t>();
        if (assigned > 1) {
            throw Error(ErrorCode::MalformedPayload, "assigned flag " + std::to_string(assigned));
        }
        p.assigned = assigned == 1;
        p.arfcn = r.get<std::uint16_t>();
        p.timeslot = r.get<std::uint8_t>();
        msg.payload = p;
        break;
    }
    case MessageType::Sleep:
        msg.payload = Sleep{r.get<std::uint32_t>()};
        break;
    case MessageType::Wake:
        msg.payload = Wake{r.get<std::uint32_t>()};
        break;
    case MessageType::Ack:
        msg.payload = Ack{r.get<std::uint32_t>()};
        break;
    }
    return msg;
}

inline std::string to_hex(std::span<const std::byte> bytes)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    for (std::size_t i = 0; i < bytes.size(); ++i) {
        if (i != 0) out.push_back(' ');
        const auto b = static_cast<unsigned>(bytes[i]);
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xF]);
    }
    return out;
}

} // namespace hycell::wire
