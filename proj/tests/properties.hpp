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

// Property checks shared by the unit tests and the acceptance binary. Each
// returns an empty string on success and a description of the first failure
// otherwise.

#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hycell/tbs_agent.hpp"

namespace props {

using hycell::Micros;
using hycell::TbsAgent;
using hycell::TbsMode;

/// Drives one TBS agent through `steps` random commands and events.
inline std::string random_command_sequence(std::uint64_t seed, int steps)
{
    std::mt19937_64 rng(seed);
    auto pick = [&rng](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };

    hycell::TbsParams p;
    p.id = static_cast<hycell::TbsId>(1 + pick(8));
    p.arfcn_count = static_cast<std::uint16_t>(1 + pick(2));
    p.pdtch_slots_per_arfcn = static_cast<std::uint8_t>(1 + pick(7));
    p.setup_time = Micros{1 + pick(20)};
    p.close_down_time = Micros{1 + pick(20)};
    TbsAgent agent(p, pick(2) == 0 ? TbsMode::ACTIVE : TbsMode::SLEEPING);

    Micros now{0};
    Micros entered{0};
    std::uint32_t next_id = 1;
    std::vector<hycell::SessionId> live;
    std::ostringstream why;

    for (int step = 0; step < steps; ++step) {
        const TbsMode before = agent.mode();
        const int op = pick(7);
        try {
            switch (op) {
            case 0: (void)agent.handle_command(hycell::wire::Sleep{next_id++}, now); break;
            case 1: (void)agent.handle_command(hycell::wire::Wake{next_id++}, now); break;
            case 2: {
                const auto r = agent.handle_tbs_request({next_id}, now);
                if (r.assigned) {
                    if (before != TbsMode::ACTIVE || agent.drain_pending()) {
                        why << "assigned while " << to_string(before);
                        return why.str();
                    }
                    live.push_back(next_id);
                }
                ++next_id;
                break;
            }
            case 3:
                if (!live.empty()) {
                    const auto i = static_cast<std::size_t>(pick(static_cast<int>(live.size())));
                    agent.release_channel(live[i], now);
                    live.erase(live.begin() + static_cast<std::ptrdiff_t>(i));
                }
                break;
            case 4: now += Micros{pick(15)}; [[fallthrough]];
            case 5: (void)agent.step_transition(now); break;
            default:
                if (agent.mode() == TbsMode::ACTIVE) (void)agent.generate_load_report(static_cast<std::uint64_t>(pick(1000)), now);
                break;
            }
        } catch (const hycell::Error& e) {
            why << "step " << step << " op " << op << ": unexpected " << e.what();
            return why.str();
        }
        const TbsMode after = agent.mode();
        if (!hycell::is_legal_transition(before, after)) {
            why << "step " << step << ": " << to_string(before) << " -> " << to_string(after);
            return why.str();
        }
        if (before != after) {
            const auto spent = now - entered;
            if (before == TbsMode::SETTING_UP && spent < p.setup_time) {
                why << "setup finished after " << spent.count() << " us";
                return why.str();
            }
            if (before == TbsMode::CLOSING_DOWN && spent < p.close_down_time) {
                why << "close-down finished after " << spent.count() << " us";
                return why.str();
            }
            entered = now;
        }
        const bool transitional = after == TbsMode::SETTING_UP || after == TbsMode::CLOSING_DOWN;
        if (agent.transition_deadline().has_value() != transitional) return "deadline out of step with mode";
        if (agent.drain_pending() && after != TbsMode::ACTIVE) return "drain pending outside ACTIVE";
        if (after != TbsMode::ACTIVE && agent.busy_count() != 0) return "busy channels outside ACTIVE";
        if (agent.busy_count() != live.size() || agent.busy_count() > agent.capacity()) return "occupancy drift";
    }
    return {};
}

} // namespace props
