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

#ifndef RISKCDF_TESTS_TEST_UTIL_HPP_
#define RISKCDF_TESTS_TEST_UTIL_HPP_

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <string>

#include "riskcdf/error.hpp"

namespace riskcdf::testing {

// Fresh directory per test under the gtest temp root.
inline std::filesystem::path ScratchDir() {
  const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
  auto dir = std::filesystem::path(::testing::TempDir()) / "riskcdf_tests" /
             (std::string(info->test_suite_name()) + "." + info->name());
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::filesystem::path WriteFile(const std::filesystem::path& path,
                                       const std::string& contents) {
  std::ofstream(path) << contents;
  return path;
}

}  // namespace riskcdf::testing

// Asserts that `stmt` throws riskcdf::Error with the given code.
#define EXPECT_RISKCDF_ERROR(stmt, expected_code)                        \
  do {                                                                   \
    try {                                                                \
      stmt;                                                              \
      ADD_FAILURE() << "no exception from " #stmt;                       \
    } catch (const ::riskcdf::Error& e) {                                \
      EXPECT_EQ(e.code(), ::riskcdf::ErrorCode::expected_code) << e.what(); \
    }                                                                    \
  } while (false)

#endif  // RISKCDF_TESTS_TEST_UTIL_HPP_
