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

#include <openssl/evp.h>

#include <chrono>
#include <ctime>
#include <fstream>
#include <iterator>

#include "riskcdf/cli.hpp"
#include "riskcdf/error.hpp"

#ifndef RISKCDF_VERSION
#define RISKCDF_VERSION "unknown"
#endif

namespace riskcdf::cli {
namespace {

std::string UtcTimestamp() {
  const std::time_t now =
      std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string Sha256Hex(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw Error(ErrorCode::kFormatError, "cannot read " + path.string());
  }
  const std::string bytes((std::istreambuf_iterator<char>(in)),
                          std::istreambuf_iterator<char>());
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &length, EVP_sha256(),
                 nullptr) != 1) {
    throw Error(ErrorCode::kConfigError, "SHA-256 digest failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

std::vector<std::filesystem::path> InputFiles(const Invocation& inv) {
  std::vector<std::filesystem::path> files;
  if (inv.Has("input")) files.emplace_back(inv.String("input"));
  if (inv.Has("distortion-file")) files.emplace_back(inv.String("distortion-file"));
  for (const auto& risk : inv.List("risk")) {
    for (const std::string prefix : {"distortion:", "spectral:"}) {
      if (risk.rfind(prefix, 0) == 0 && risk.size() > prefix.size()) {
        files.emplace_back(risk.substr(prefix.size()));
      }
    }
  }
  return files;
}

nlohmann::json BuildManifest(const Invocation& inv) {
  nlohmann::json flags = nlohmann::json::object();
  for (const auto& [name, values] : inv.flags) {
    flags[name] = values.size() == 1 ? nlohmann::json(values.front())
                                     : nlohmann::json(values);
  }
  nlohmann::json inputs = nlohmann::json::array();
  for (const auto& path : InputFiles(inv)) {
    inputs.push_back({{"path", path.string()}, {"sha256", Sha256Hex(path)}});
  }
  return {{"command", inv.command},
          {"args", inv.CanonicalArgs()},
          {"flags", flags},
          {"seed", inv.Seed()},
          {"threads", inv.Threads()},
          {"inputs", inputs},
          {"version", RISKCDF_VERSION},
          {"timestamp", UtcTimestamp()}};
}

}  // namespace riskcdf::cli
