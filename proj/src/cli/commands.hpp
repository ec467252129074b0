// Copyright 2026 The riskcdf Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef RISKCDF_SRC_CLI_COMMANDS_HPP_
#define RISKCDF_SRC_CLI_COMMANDS_HPP_

#include <filesystem>
#include <ostream>

#include "riskcdf/cli.hpp"

namespace riskcdf::cli {

// Each command reads its flags from `inv`, writes files under `out_dir` and
// prints a one-line summary to `out`.
void CmdCdf(const Invocation& inv, const std::filesystem::path& out_dir,
            std::ostream& out);
void CmdAssess(const Invocation& inv, const std::filesystem::path& out_dir,
               std::ostream& out);
void CmdBound(const Invocation& inv, const std::filesystem::path& out_dir,
              std::ostream& out);
void CmdTrain(const Invocation& inv, const std::filesystem::path& out_dir,
              std::ostream& out);
void CmdComplexity(const Invocation& inv, const std::filesystem::path& out_dir,
                   std::ostream& out);
void CmdGradcheck(const Invocation& inv, const std::filesystem::path& out_dir,
                  std::ostream& out);
void CmdMonteCarlo(const Invocation& inv, const std::filesystem::path& out_dir,
                   std::ostream& out);

}  // namespace riskcdf::cli

#endif  // RISKCDF_SRC_CLI_COMMANDS_HPP_
