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
#include <string>
#include <utility>
#include <vector>

#include "hycell/error.hpp"
#include "hycell/time.hpp"

namespace hycell::simkit {

/// Min-heap of timed events with a virtual clock. Events pop in
/// (time, sequence) order, so equal-time events keep insertion order.
template <typename Payload>
class EventQueue {
public:
    struct Entry {
        Micros time{0};
        std::uint64_t sequence = 0;
        Payload payload;
    };

    [[nodiscard]] Micros clock() const noexcept { return clock_; }
    [[nodiscard]] bool empty() const noexcept { return heap_.empty(); }
    [[nodiscard]] std::size_t size() const noexcept { return heap_.size(); }

    [[nodiscard]] std::optional<Micros> next_time() const
    {
        if (heap_.empty()) return std::nullopt;
        return heap_.front().time;
    }

    std::uint64_t schedule(Micros time, Payload payload)
    {
        if (time < clock_) {
            throw Error(ErrorCode::PastEvent, "event at " + std::to_string(time.count()) + " us is before clock " +
                                                  std::to_string(clock_.count()) + " us");
        }
        const auto seq = next_sequence_++;
        heap_.push_back(Entry{time, seq, std::move(payload)});
        std::push_heap(heap_.begin(), heap_.end(), later);
        return seq;
    }

    /// Removes the earliest event and advances the clock to its time.
    std::optional<Entry> pop()
    {
        if (heap_.empty()) return std::nullopt;
        std::pop_heap(heap_.begin(), heap_.end(), later);
        Entry e = std::move(heap_.back());
        heap_.pop_back();
        clock_ = e.time;
        return e;
    }

private:
    static bool later(const Entry& a, const Entry& b) noexcept
    {
        return a.time != b.time ? a.time > b.time : a.sequence > b.sequence;
    }

    std::vector<Entry> heap_;
    std::uint64_t next_sequence_ = 0;
    Micros clock_{0};
};

} // namespace hycell::simkit
