// Copyright 2026 The ecpsim Authors
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

#ifndef ECPSIM_ERRORS_HPP
#define ECPSIM_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ecpsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two factors of a tensor product share a mode.
class ModeCollisionError : public Error {
 public:
  using Error::Error;
};

/// A zero-norm state was used where a physical state is required.
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// A linear mode substitution does not preserve the inner product.
class UnitarityError : public Error {
 public:
  using Error::Error;
};

/// An optical element was wired inconsistently with its port contract.
class PortContractError : public Error {
 public:
  using Error::Error;
};

/// Out-of-range or non-normalized physical parameter.
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// VBS schedule cannot be built (zero coefficient).
class ScheduleError : public Error {
 public:
  using Error::Error;
};

/// Inconsistent run configuration, e.g. schedule shorter than the round count.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Instance too large for the enumeration oracle or the photon cap.
class UnsupportedInstanceError : public Error {
 public:
  using Error::Error;
};

/// Circuit text error with a 1-based source position.
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

/// A circuit parameter is missing or binds to an invalid value.
class BindingError : public Error {
 public:
  using Error::Error;
};

}  // namespace ecpsim

#endif  // ECPSIM_ERRORS_HPP
