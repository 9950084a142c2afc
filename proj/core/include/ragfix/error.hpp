/*
 * Copyright 2026 The ragfix Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>

namespace ragfix {

/// Root of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Caller passed something the operation cannot accept (empty text, bad identifier).
class InputError : public Error {
 public:
  using Error::Error;
};

/// A documented precondition between components was broken (dimension mismatch,
/// duplicate ids).
class ContractError : public Error {
 public:
  using Error::Error;
};

/// Invalid or incomplete configuration. The CLI maps this to exit code 2.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Something outside the process is missing or unusable: compiler binary,
/// unreadable directory. The CLI maps this to exit code 3.
class EnvironmentError : public Error {
 public:
  using Error::Error;
};

/// Network failure that survived the retry budget.
class TransportError : public Error {
 public:
  using Error::Error;
};

/// On-disk data has the wrong magic or version.
class FormatError : public Error {
 public:
  using Error::Error;
};

/// On-disk data is internally inconsistent (truncated payload, digest mismatch).
class CorruptionError : public Error {
 public:
  using Error::Error;
};

/// A subprocess exceeded its time budget. Carries whatever output it produced.
class TimeoutError : public Error {
 public:
  TimeoutError(const std::string& what, std::string partial_output)
      : Error(what), partial_output_(std::move(partial_output)) {}

  const std::string& partial_output() const noexcept { return partial_output_; }

 private:
  std::string partial_output_;
};

/// Misuse of a test double, e.g. a scripted provider asked for a turn it has no reply for.
class HarnessError : public Error {
 public:
  using Error::Error;
};

}  // namespace ragfix
