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

#pragma once

#include <stdexcept>
#include <string>

namespace qbu {

// Malformed caller input: bad files, domain violations, non-Hermitian or
// non-PSD matrices, dimension mismatches.  Maps to CLI exit code 2.
class invalid_input : public std::invalid_argument {
 public:
  explicit invalid_input(const std::string& what) : std::invalid_argument(what) {}
};

// Work refused up front because it would blow a guard (matrix size, polynomial
// degree, enumeration width).  Maps to CLI exit code 3.
class resource_limit : public std::runtime_error {
 public:
  explicit resource_limit(const std::string& what) : std::runtime_error(what) {}
};

// A result that cannot be trusted numerically, e.g. near-coincident
// interpolation nodes.  Carries enough text to identify the offending nodes.
class conditioning_error : public std::runtime_error {
 public:
  explicit conditioning_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace qbu
