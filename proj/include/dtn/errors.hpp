// Copyright 2026 the dtn authors
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

#ifndef DTN_ERRORS_HPP_
#define DTN_ERRORS_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dtn {

/// Invalid argument or parameter outside its mathematical domain.
class DomainError : public std::invalid_argument {
 public:
  explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Cholesky factorization hit a non-positive pivot.
class NotPositiveDefiniteError : public std::runtime_error {
 public:
  NotPositiveDefiniteError(const std::string& what, std::size_t pivot)
      : std::runtime_error(what), pivot_index_(pivot) {}

  std::size_t pivot_index() const { return pivot_index_; }

 private:
  std::size_t pivot_index_;
};

/// Malformed configuration; `key()` names the offending field.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, const std::string& key)
      : std::runtime_error(what), key_(key) {}

  const std::string& key() const { return key_; }

 private:
  std::string key_;
};

}  // namespace dtn

#endif  // DTN_ERRORS_HPP_
