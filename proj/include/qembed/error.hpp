// Copyright 2026 The qembed Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace qembed {

class Error : public std::runtime_error {
 public:
    using std::runtime_error::runtime_error;
};

/// Malformed input. `line()` is 1-based, or 0 when the format has no lines.
class ParseError : public Error {
 public:
    ParseError(const std::string& what, std::size_t line = 0)
            : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

    std::size_t line() const noexcept { return line_; }

 private:
    std::size_t line_;
};

/// Two objects that must agree on dimensions do not.
class ShapeError : public Error {
 public:
    using Error::Error;
};

/// A solver refused or failed to produce samples.
class SolverError : public Error {
 public:
    using Error::Error;
};

}  // namespace qembed
