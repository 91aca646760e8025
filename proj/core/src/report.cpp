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

#include "qbu/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "qbu/errors.hpp"

namespace qbu {

namespace {

const char* status_name(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::skipped:
      return "skipped";
  }
  return "unknown";
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

bool RunReport::all_passed() const {
  for (const auto& c : checks)
    if (c.status == CheckStatus::fail) return false;
  return true;
}

int RunReport::fail_count() const {
  int n = 0;
  for (const auto& c : checks)
    if (c.status == CheckStatus::fail) ++n;
  return n;
}

std::uint64_t fnv1a(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 14695981039346656037ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

std::uint64_t fnv1a_str(const std::string& s) { return fnv1a(s.data(), s.size()); }

std::string report_to_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["command"] = r.command;
  j["config_hash"] = r.config_hash;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : r.checks) {
    nlohmann::ordered_json jc;
    jc["name"] = c.name;
    jc["status"] = status_name(c.status);
    jc["measured"] = c.measured;
    jc["expected"] = c.expected;
    jc["tolerance"] = c.tolerance;
    jc["note"] = c.note;
    j["checks"].push_back(std::move(jc));
  }
  j["check_count"] = r.checks.size();
  j["fail_count"] = r.fail_count();
  j["all_passed"] = r.all_passed();
  j["wall_time_seconds"] = r.wall_time_seconds;
  return j.dump(2) + "\n";
}

void save_report(const RunReport& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw invalid_input("cannot open for writing: " + path);
  out << report_to_json(r);
  if (!out) throw invalid_input("write failed: " + path);
}

CheckResult check_close(const std::string& name, double measured, double expected,
                        double tolerance, const std::string& note) {
  CheckResult c;
  c.name = name;
  c.measured = fmt_double(measured);
  c.expected = fmt_double(expected);
  c.tolerance = tolerance;
  c.note = note;
  bool ok;
  if (std::isnan(measured) || std::isnan(expected)) {
    ok = false;
  } else if (std::isinf(measured) || std::isinf(expected)) {
    ok = measured == expected;  // same infinity
  } else {
    ok = std::abs(measured - expected) <= tolerance;
  }
  c.status = ok ? CheckStatus::pass : CheckStatus::fail;
  return c;
}

CheckResult check_true(const std::string& name, bool ok, const std::string& measured,
                       const std::string& expected, const std::string& note) {
  CheckResult c;
  c.name = name;
  c.status = ok ? CheckStatus::pass : CheckStatus::fail;
  c.measured = measured;
  c.expected = expected;
  c.note = note;
  return c;
}

}  // namespace qbu
