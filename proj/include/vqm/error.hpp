// Copyright 2026 The VQM Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace vqm {

/// Category of a library failure. The C API maps each kind onto a status code.
enum class ErrorKind {
  Argument,
  Size,
  Shape,
  Index,
  Validation,
  Parse,
  Numerical,
  Capacity,
  Io,
  Version,
  Training,
};

const char *to_string(ErrorKind kind);

class Error : public std::runtime_error {
public:
  Error(ErrorKind kind, const std::string &message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

private:
  ErrorKind kind_;
};

/// Parse failure that knows where it happened (1-based line, 0 if unknown).
class ParseError : public Error {
public:
  ParseError(const std::string &source, std::size_t line,
             const std::string &message);

  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &message);

inline void require(bool condition, ErrorKind kind, const std::string &message) {
  if (!condition)
    fail(kind, message);
}

} // namespace vqm
