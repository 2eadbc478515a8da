/* Copyright 2026 The replimerge Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace replimerge {

/// Base of every error raised by the library. The CLI maps subclasses to
/// process exit codes (see tools/replimerge.cpp).
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed textual input. `position` is a 1-based line number for line
/// oriented formats and a 0-based token index for token streams.
class ParseError : public Error {
 public:
  ParseError(std::string what, std::size_t position)
      : Error(std::move(what)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Input that parses but violates a structural invariant (grammar, view,
/// document conformance).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// Grammar invariant violations; carries every violated invariant.
class GrammarError : public ValidationError {
 public:
  explicit GrammarError(std::vector<std::string> violations)
      : ValidationError(join(violations)), violations_(std::move(violations)) {}
  const std::vector<std::string>& violations() const { return violations_; }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out = "invalid grammar:";
    for (const auto& s : v) out += "\n  - " + s;
    return out;
  }
  std::vector<std::string> violations_;
};

class AddressError : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class NotABud : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class TypeMismatch : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

class UnrealizableEdit : public ValidationError {
 public:
  using ValidationError::ValidationError;
};

/// Two trees or states whose roots are of different sorts admit no consensus.
class RootTypeConflict : public Error {
 public:
  using Error::Error;
};

/// A state-space exploration hit its budget before converging.
class BudgetExceeded : public Error {
 public:
  using Error::Error;
};

}  // namespace replimerge
