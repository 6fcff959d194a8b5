// Copyright 2026 The pathint Authors
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

#ifndef PATHINT_ERRORS_HPP_
#define PATHINT_ERRORS_HPP_

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace pathint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid configuration, mismatched dimensions or incompatible options.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// A state became non-finite while integrating the dynamics.
class IntegrationDiverged : public Error {
 public:
  IntegrationDiverged(int rollout, int step, const std::string& what)
      : Error(what), rollout_(rollout), step_(step) {}

  int rollout() const { return rollout_; }
  int step() const { return step_; }

 private:
  int rollout_;
  int step_;
};

/// Every cost in a batch is non-finite, so no weight can be formed.
class DegenerateBatch : public Error {
 public:
  using Error::Error;
};

class InsufficientSamples : public Error {
 public:
  using Error::Error;
};

/// A multiple-importance-sampling reweighting violates the unbiasedness condition.
class InvalidScheme : public Error {
 public:
  using Error::Error;
};

/// Warnings (covariance repair, rank-deficient Jacobians) go through this sink.
/// The default handler writes to std::clog.
using WarningHandler = std::function<void(std::string_view)>;
void set_warning_handler(WarningHandler handler);
void warn(std::string_view message);

}  // namespace pathint

#endif  // PATHINT_ERRORS_HPP_
