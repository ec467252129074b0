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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <deque>
#include <functional>

#include "CLI11.hpp"
#include "commands.hpp"
#include "riskcdf/cli.hpp"
#include "riskcdf/csv.hpp"
#include "riskcdf/error.hpp"

namespace riskcdf::cli {
namespace {

enum class Kind { kValue, kList, kBool };

struct FlagDef {
  const char* name;
  Kind kind;
  const char* help;
  std::vector<std::string> commands;  // empty: every command but replay
};

struct CommandDef {
  const char* name;
  const char* help;
  std::function<void(const Invocation&, const std::filesystem::path&,
                     std::ostream&)>
      body;
};

const std::vector<CommandDef>& Commands() {
  static const std::vector<CommandDef> kCommands = {
      {"cdf", "empirical CDF breakpoints and summary of a loss vector", CmdCdf},
      {"assess", "risk values and one shared error certificate for a loss table",
       CmdAssess},
      {"bound", "uniform CDF-error certificate", CmdBound},
      {"train", "distortion-risk gradient descent", CmdTrain},
      {"complexity", "permutation complexity of a loss matrix", CmdComplexity},
      {"gradcheck", "finite-difference check of the distortion-risk gradient",
       CmdGradcheck},
      {"montecarlo", "Monte Carlo distribution of the worst CDF error",
       CmdMonteCarlo},
      {"replay", "re-run a command from its manifest.json", nullptr},
  };
  return kCommands;
}

const std::vector<FlagDef>& Flags() {
  static const std::vector<FlagDef> kFlags = {
      {"input", Kind::kValue, "input file", {"cdf", "assess", "train", "complexity"}},
      {"out", Kind::kValue, "output directory (default .)", {}},
      {"header", Kind::kBool, "the loss file has a header row", {"cdf"}},
      {"risk", Kind::kList,
       "risk spec, repeatable: mean, cvar:A, mean_var:C, distortion[:FILE], "
       "spectral:FILE, oce:entropic[:G], oce:cvar:A, inverted_oce:...",
       {"assess", "train", "gradcheck"}},
      {"distortion-file", Kind::kValue, "t,g table for the 'distortion' risk",
       {"assess", "train", "gradcheck"}},
      {"n", Kind::kValue, "sample size", {"assess", "bound", "montecarlo"}},
      {"delta", Kind::kValue, "confidence parameter", {"assess", "bound", "montecarlo"}},
      {"support-bound", Kind::kValue, "loss upper bound D (default: data max)",
       {"assess"}},
      {"method", Kind::kValue,
       "finite_class, permutation, growth, vc_sauer or user_supplied", {"bound"}},
      {"class-size", Kind::kValue, "number of hypotheses", {"bound", "montecarlo"}},
      {"n-pi", Kind::kValue, "permutation complexity", {"bound"}},
      {"growth", Kind::kValue, "growth count", {"bound"}},
      {"vc-dim", Kind::kValue, "VC dimension", {"bound"}},
      {"epsilon", Kind::kValue, "externally obtained epsilon", {"bound"}},
      {"preset", Kind::kValue, "bound: finite_class or vc_sauer growth; train: blobs",
       {"bound", "train"}},
      {"arch", Kind::kValue, "linear, logistic or mlp", {"train", "gradcheck"}},
      {"hidden", Kind::kValue, "comma-separated MLP widths", {"train", "gradcheck"}},
      {"eta", Kind::kValue, "learning rate", {"train"}},
      {"beta", Kind::kValue, "smoothness estimate", {"train"}},
      {"iters", Kind::kValue, "iteration count T", {"train"}},
      {"no-noise", Kind::kBool, "drop the Gaussian step noise (testing only)",
       {"train"}},
      {"label-column", Kind::kValue, "label column of a dataset CSV", {"train"}},
      {"mode", Kind::kValue, "exact or greedy", {"complexity"}},
      {"trials", Kind::kValue, "number of random points", {"gradcheck"}},
      {"reps", Kind::kValue, "Monte Carlo repetitions", {"montecarlo"}},
      {"reference-size", Kind::kValue, "reference sample size", {"montecarlo"}},
      {"seed", Kind::kValue, "random seed", {}},
      {"threads", Kind::kValue, "worker threads (default 1)", {}},
      {"manifest", Kind::kValue, "manifest.json to replay", {"replay"}},
  };
  return kFlags;
}

bool Applies(const FlagDef& flag, const std::string& command) {
  if (flag.commands.empty()) return command != "replay" || flag.name == std::string("out");
  return std::find(flag.commands.begin(), flag.commands.end(), command) !=
         flag.commands.end();
}

std::string EnvName(const std::string& flag) {
  std::string env = "RISKCDF_";
  for (char c : flag) {
    env.push_back(c == '-' ? '_' : static_cast<char>(std::toupper(
                                       static_cast<unsigned char>(c))));
  }
  return env;
}

[[noreturn]] void BadValue(const std::string& name, const std::string& value,
                           const char* expected) {
  throw Error(ErrorCode::kConfigError,
              "--" + name + ": '" + value + "' is not " + expected);
}

int Replay(const Invocation& inv, std::ostream& out, std::ostream& err) {
  if (!inv.Has("manifest")) {
    throw Error(ErrorCode::kConfigError, "replay needs --manifest");
  }
  const auto manifest = nlohmann::json::parse(ReadTextFile(inv.String("manifest")));
  for (const auto& input : manifest.at("inputs")) {
    const std::string path = input.at("path").get<std::string>();
    if (Sha256Hex(path) != input.at("sha256").get<std::string>()) {
      throw Error(ErrorCode::kFormatError,
                  path + " changed since the recorded run");
    }
  }
  auto args = manifest.at("args").get<std::vector<std::string>>();
  if (inv.Has("out")) {
    auto it = std::find(args.begin(), args.end(), "--out");
    if (it != args.end() && std::next(it) != args.end()) {
      *std::next(it) = inv.String("out");
    } else {
      args.push_back("--out");
      args.push_back(inv.String("out"));
    }
  }
  return Run(args, out, err);
}

}  // namespace

bool Invocation::Has(const std::string& name) const {
  auto it = flags.find(name);
  return it != flags.end() && !it->second.empty();
}

std::string Invocation::String(const std::string& name,
                               const std::string& fallback) const {
  return Has(name) ? flags.at(name).back() : fallback;
}

std::vector<std::string> Invocation::List(const std::string& name) const {
  return Has(name) ? flags.at(name) : std::vector<std::string>{};
}

std::optional<double> Invocation::Real(const std::string& name) const {
  if (!Has(name)) return std::nullopt;
  const std::string value = String(name);
  double v = 0.0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    BadValue(name, value, "a number");
  }
  return v;
}

std::optional<std::size_t> Invocation::Count(const std::string& name) const {
  if (!Has(name)) return std::nullopt;
  const std::string value = String(name);
  std::size_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    BadValue(name, value, "a nonnegative integer");
  }
  return v;
}

std::uint64_t Invocation::Seed() const {
  if (!Has("seed")) return 0;
  const std::string value = String("seed");
  std::uint64_t v = 0;
  const auto [ptr, ec] =
      std::from_chars(value.data(), value.data() + value.size(), v);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    BadValue("seed", value, "an unsigned 64-bit integer");
  }
  return v;
}

std::size_t Invocation::Threads() const {
  const std::size_t t = Count("threads").value_or(1);
  if (t == 0) BadValue("threads", "0", "a positive integer");
  return t;
}

bool Invocation::Flag(const std::string& name) const {
  return Has(name) && String(name) == "true";
}

std::vector<std::string> Invocation::CanonicalArgs() const {
  std::vector<std::string> args = {command};
  for (const auto& def : Flags()) {
    auto it = flags.find(def.name);
    if (it == flags.end() || it->second.empty()) continue;
    const std::string flag = std::string("--") + def.name;
    if (def.kind == Kind::kBool) {
      if (it->second.back() == "true") args.push_back(flag);
      continue;
    }
    for (const auto& v : it->second) {
      args.push_back(flag);
      args.push_back(v);
    }
  }
  return args;
}

std::optional<Invocation> Parse(const std::vector<std::string>& args,
                                std::ostream& out) {
  CLI::App app{"riskcdf: risk functionals of empirical loss CDFs"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all");

  std::deque<std::vector<std::string>> values;
  std::deque<bool> bools;
  struct Binding {
    std::string command;
    const FlagDef* def;
    CLI::Option* option;
    std::size_t slot;
  };
  std::vector<Binding> bindings;

  for (const auto& cmd : Commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.help);
    for (const auto& def : Flags()) {
      if (!Applies(def, cmd.name)) continue;
      const std::string flag = std::string("--") + def.name;
      CLI::Option* opt = nullptr;
      std::size_t slot = 0;
      if (def.kind == Kind::kBool) {
        slot = bools.size();
        bools.push_back(false);
        opt = sub->add_flag(flag, bools.back(), def.help);
      } else {
        slot = values.size();
        values.emplace_back();
        opt = sub->add_option(flag, values.back(), def.help);
        opt->allow_extra_args(false);
        if (def.kind == Kind::kValue) {
          opt->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
        }
      }
      opt->envname(EnvName(def.name));
      bindings.push_back({cmd.name, &def, opt, slot});
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help(app.get_subcommands().empty()
                        ? ""
                        : app.get_subcommands().front()->get_name());
    return std::nullopt;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return std::nullopt;
  } catch (const CLI::ParseError& e) {
    throw Error(ErrorCode::kConfigError, e.what());
  }

  Invocation inv;
  inv.command = app.get_subcommands().front()->get_name();
  for (const auto& b : bindings) {
    if (b.command != inv.command || b.option->count() == 0) continue;
    if (b.def->kind == Kind::kBool) {
      if (bools[b.slot]) inv.flags[b.def->name] = {"true"};
    } else {
      inv.flags[b.def->name] = values[b.slot];
    }
  }
  return inv;
}

int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  try {
    const auto inv = Parse(args, out);
    if (!inv) return 0;
    if (inv->command == "replay") return Replay(*inv, out, err);
    const auto& commands = Commands();
    const auto cmd = std::find_if(commands.begin(), commands.end(),
                                  [&](const CommandDef& c) {
                                    return c.name == inv->command;
                                  });
    const std::filesystem::path out_dir = inv->String("out", ".");
    WriteTextFile(out_dir / "manifest.json", BuildManifest(*inv).dump(2) + "\n");
    cmd->body(*inv, out_dir, out);
    return 0;
  } catch (const Error& e) {
    err << "riskcdf: " << e.what() << '\n';
    return static_cast<int>(ClassOf(e.code()));
  } catch (const nlohmann::json::exception& e) {
    err << "riskcdf: ConfigError: " << e.what() << '\n';
    return static_cast<int>(ErrorClass::kConfig);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "riskcdf: ConfigError: " << e.what() << '\n';
    return static_cast<int>(ErrorClass::kConfig);
  } catch (const std::exception& e) {
    err << "riskcdf: " << e.what() << '\n';
    return static_cast<int>(ErrorClass::kNumeric);
  }
}

}  // namespace riskcdf::cli
