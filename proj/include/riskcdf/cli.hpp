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

// Command-line frontend.
//
//   riskcdf <command> [flags]
//
// Commands: cdf, assess, bound, train, complexity, gradcheck, montecarlo,
// replay. Every command writes its outputs plus manifest.json into --out.
// Any flag can also come from the environment as RISKCDF_<FLAG>, with dashes
// turned into underscores (RISKCDF_SEED, RISKCDF_SUPPORT_BOUND).
//
// Exit codes: 0 success, 2 configuration error, 3 data error, 4 numeric
// failure.

#ifndef RISKCDF_CLI_HPP_
#define RISKCDF_CLI_HPP_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "riskcdf/models.hpp"
#include "riskcdf/risks.hpp"

namespace riskcdf::cli {

/// Parsed command line: the subcommand and raw flag values keyed by flag
/// name without dashes. Boolean flags map to {"true"}.
struct Invocation {
  std::string command;
  std::map<std::string, std::vector<std::string>> flags;

  bool Has(const std::string& name) const;
  std::string String(const std::string& name, const std::string& fallback = "") const;
  std::vector<std::string> List(const std::string& name) const;
  std::optional<double> Real(const std::string& name) const;
  std::optional<std::size_t> Count(const std::string& name) const;
  std::uint64_t Seed() const;
  std::size_t Threads() const;
  bool Flag(const std::string& name) const;

  /// Command followed by its flags in a fixed order. Feeding these back to
  /// Run repeats the invocation without depending on the environment.
  std::vector<std::string> CanonicalArgs() const;
};

/// Parses args (without the program name). Throws Error(ConfigError) on
/// unknown commands or flags. Returns nullopt after printing help.
std::optional<Invocation> Parse(const std::vector<std::string>& args,
                                std::ostream& out);

/// Lower-case hex SHA-256 of a file's bytes. Throws FormatError if the file
/// cannot be read.
std::string Sha256Hex(const std::filesystem::path& path);

/// Input files named by the invocation (--input, --distortion-file and file
/// based risk specs).
std::vector<std::filesystem::path> InputFiles(const Invocation& inv);

/// {command, args, flags, seed, threads, inputs[{path, sha256}], version,
/// timestamp}.
nlohmann::json BuildManifest(const Invocation& inv);

/// "mean", "cvar:<alpha>" or "distortion[:<path>]" (path defaults to
/// `distortion_file`).
DistortionSpec ParseDistortion(const std::string& spec,
                               const std::string& distortion_file);

/// Evaluates one --risk entry of the assess command on `cdf` with losses in
/// [0, support_bound]. Throws ConfigError for unknown names.
RiskValue EvaluateRisk(const std::string& spec, const EmpiricalCdf& cdf,
                       double support_bound, const std::string& distortion_file);

/// `count` fixed logistic models on two features, parameters drawn from
/// (seed, k).
std::vector<LossModel> FixedLogisticModels(std::size_t count, std::uint64_t seed);

/// Runs one command; returns the process exit code. Diagnostics go to `err`,
/// one-line summaries to `out`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace riskcdf::cli

#endif  // RISKCDF_CLI_HPP_
