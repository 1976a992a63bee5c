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

#include "hycell/cli.hpp"

#include <cstdint>
#include <fstream>
#include <optional>

#include "CLI11.hpp"

#include "hycell/error.hpp"
#include "hycell/metrics.hpp"
#include "hycell/replay.hpp"
#include "hycell/simkit/scenario.hpp"
#include "hycell/simkit/simulator.hpp"

namespace hycell::cli {

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"HyCell separated-architecture simulator", "hycell"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::optional<std::uint64_t> seed;
    std::string out_dir;
    auto* run = app.add_subcommand("run", "Run a scenario and write its outputs");
    run->add_option("--scenario", scenario_path, "Scenario file")->required();
    run->add_option("--seed", seed, "Override the scenario seed");
    run->add_option("--out", out_dir, "Output directory")->required();

    std::string log_path;
    auto* replay = app.add_subcommand("replay", "Re-verify protocol invariants over an event log");
    replay->add_option("--log", log_path, "events.log file")->required();

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check a scenario file against the schema");
    validate->add_option("--scenario", validate_path, "Scenario file")->required();

    // CLI11 parses in reverse order when given a vector
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        out << app.help();
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << e.what() << '\n';
        return kScenarioError;
    }

    try {
        if (run->parsed()) {
            const auto cfg = simkit::load_scenario(scenario_path);
            const auto result = simkit::run(cfg, seed.value_or(cfg.seed));
            metrics::write_outputs(out_dir, result.bundle, result.events);
            out << "wrote " << out_dir << " (" << result.events.size() << " events)\n";
            return kOk;
        }
        if (validate->parsed()) {
            const auto cfg = simkit::load_scenario(validate_path);
            out << validate_path << ": ok (" << cfg.tbs.size() << " TBS, " << cfg.ues.size() << " UE)\n";
            return kOk;
        }
        std::ifstream in(log_path);
        if (!in) {
            err << "cannot open " << log_path << '\n';
            return kScenarioError;
        }
        const auto records = metrics::read_event_log(in);
        const auto report = replay::verify(records);
        if (!report.ok()) {
            for (const auto& v : report.violations) err << v << '\n';
            err << report.violations.size() << " invariant violation(s)\n";
            return kInvariantViolation;
        }
        out << log_path << ": " << records.size() << " records, all invariants hold\n";
        return kOk;
    } catch (const Error& e) {
        err << e.what() << '\n';
        return e.code() == ErrorCode::InvalidLog ? kInvariantViolation : kScenarioError;
    }
}

} // namespace hycell::cli
