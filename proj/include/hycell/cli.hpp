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

#include <iostream>
#include <string>
#include <vector>

namespace hycell::cli {

enum ExitStatus : int {
    kOk = 0,
    kScenarioError = 1,
    kInvariantViolation = 2,
};

/// Entry point behind the hycell tool. `args` excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr);

} // namespace hycell::cli
