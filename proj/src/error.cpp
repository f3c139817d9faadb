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

#include "vqm/error.hpp"

namespace vqm {

const char *to_string(ErrorKind kind) {
  switch (kind) {
  case ErrorKind::Argument:
    return "argument error";
  case ErrorKind::Size:
    return "size error";
  case ErrorKind::Shape:
    return "shape error";
  case ErrorKind::Index:
    return "index error";
  case ErrorKind::Validation:
    return "validation error";
  case ErrorKind::Parse:
    return "parse error";
  case ErrorKind::Numerical:
    return "numerical error";
  case ErrorKind::Capacity:
    return "capacity error";
  case ErrorKind::Io:
    return "I/O error";
  case ErrorKind::Version:
    return "version error";
  case ErrorKind::Training:
    return "training error";
  }
  return "error";
}

namespace {
std::string located(const std::string &source, std::size_t line,
                    const std::string &message) {
  std::string out = source;
  if (line > 0)
    out += ":" + std::to_string(line);
  return out + ": " + message;
}
} // namespace

ParseError::ParseError(const std::string &source, std::size_t line,
                       const std::string &message)
    : Error(ErrorKind::Parse, located(source, line, message)), line_(line) {}

void fail(ErrorKind kind, const std::string &message) {
  throw Error(kind, message);
}

} // namespace vqm
