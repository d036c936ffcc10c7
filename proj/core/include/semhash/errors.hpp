// Copyright 2026 The Semhash Authors.
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

#ifndef SEMHASH_ERRORS_HPP_
#define SEMHASH_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace semhash {

// Malformed or inconsistent input data: bad files, shape mismatches,
// unknown labels, invalid configuration values.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

// Numeric failure during computation (NaN/Inf, impossible estimate).
class NumericError : public std::runtime_error {
 public:
  explicit NumericError(const std::string& what) : std::runtime_error(what) {}
};

// A minibatch on which a loss term is undefined (all-identical outputs,
// all-identical targets, batch too small). The training loop skips these.
class DegenerateBatchError : public NumericError {
 public:
  explicit DegenerateBatchError(const std::string& what) : NumericError(what) {}
};

}  // namespace semhash

#endif  // SEMHASH_ERRORS_HPP_
