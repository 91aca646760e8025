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

#include <doctest.h>

#include <string>

#include "qbu/errors.hpp"
#include "qbu/verify.hpp"

using namespace qbu;

namespace {

// Report serialization with the wall-time line (the one legitimately varying
// field) blanked out.
std::string stable_json(const RunReport& r) {
  RunReport copy = r;
  copy.wall_time_seconds = 0.0;
  return report_to_json(copy);
}

}  // namespace

TEST_CASE("run_suite rejects unknown suite names") {
  CHECK_THROWS_AS(run_suite("spectra", VerifyOptions{}), invalid_input);
  CHECK_THROWS_AS(run_suite("", VerifyOptions{}), invalid_input);
}

TEST_CASE("constants suite passes and reruns byte-identically") {
  const RunReport a = run_suite("constants", VerifyOptions{});
  const RunReport b = run_suite("constants", VerifyOptions{});
  CHECK(a.all_passed());
  CHECK(a.checks.size() > 15);
  CHECK(a.config_hash != 0);
  CHECK(stable_json(a) == stable_json(b));
}

TEST_CASE("oracle suite results do not depend on the thread count") {
  VerifyOptions one;
  one.quick = true;
  VerifyOptions four = one;
  four.threads = 4;
  const RunReport a = run_suite("oracles", one);
  const RunReport b = run_suite("oracles", four);
  CHECK(a.all_passed());
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].measured == b.checks[i].measured);
    CHECK(a.checks[i].status == b.checks[i].status);
  }
}

TEST_CASE("lemma suite passes in quick mode") {
  VerifyOptions opts;
  opts.quick = true;
  const RunReport r = run_suite("lemmas", opts);
  CHECK(r.all_passed());
  CHECK(r.command == "verify --suite lemmas --seed 1 --d 3 --samples 10000 --quick");
}

TEST_CASE("graph chain suite passes in quick mode") {
  VerifyOptions opts;
  opts.quick = true;
  opts.threads = 4;
  const RunReport r = run_suite("graph-chain", opts);
  CHECK(r.all_passed());
}

TEST_CASE("end to end suite passes in quick mode") {
  VerifyOptions opts;
  opts.quick = true;
  const RunReport r = run_suite("end-to-end", opts);
  CHECK(r.all_passed());
}

TEST_CASE("a different seed changes the command and its hash") {
  VerifyOptions a, b;
  b.seed = 7;
  a.quick = b.quick = true;
  const RunReport ra = run_suite("lemmas", a);
  const RunReport rb = run_suite("lemmas", b);
  CHECK(ra.config_hash != rb.config_hash);
  CHECK(rb.all_passed());
}
