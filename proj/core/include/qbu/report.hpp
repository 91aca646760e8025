// Copyright 2026 The qbu Authors
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

#ifndef QBU_REPORT_HPP
#define QBU_REPORT_HPP

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace qbu {

enum class CheckStatus { pass, fail, skipped };

struct CheckResult {
  std::string name;
  CheckStatus status = CheckStatus::pass;
  std::string measured;
  std::string expected;
  double tolerance = 0.0;
  std::string note;  // convention, gating, or failure detail
};

struct RunReport {
  std::string command;
  std::uint64_t config_hash = 0;
  std::vector<CheckResult> checks;
  double wall_time_seconds = 0.0;

  bool all_passed() const;
  int fail_count() const;
};

std::uint64_t fnv1a(const void* data, std::size_t len);
std::uint64_t fnv1a_str(const std::string& s);

// Serialized with stable key order; wall_time_seconds is the only field that
// may differ between identical runs.
std::string report_to_json(const RunReport& r);
void save_report(const RunReport& r, const std::string& path);

// Helpers for building checks out of comparisons.
CheckResult check_close(const std::string& name, double measured, double expected,
                        double tolerance, const std::string& note = "");
CheckResult check_true(const std::string& name, bool ok, const std::string& measured,
                       const std::string& expected, const std::string& note = "");

}  // namespace qbu

#endif  // QBU_REPORT_HPP
