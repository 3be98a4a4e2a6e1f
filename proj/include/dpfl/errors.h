// Copyright 2026 The DPFL Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DPFL_ERRORS_H_
#define DPFL_ERRORS_H_

#include <stdexcept>
#include <string>

namespace dpfl {

// Invalid user-supplied configuration: bad ranges, mismatched dimensions,
// unreadable inputs. Raised before any work is done where possible.
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

// A caller broke a documented precondition (e.g. an unclipped gradient was
// handed to the noisy mean).
class ContractViolation : public std::logic_error {
 public:
  explicit ContractViolation(const std::string& what)
      : std::logic_error(what) {}
};

// A computation produced NaN/Inf. The message carries a short state dump.
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace dpfl

#endif  // DPFL_ERRORS_H_
