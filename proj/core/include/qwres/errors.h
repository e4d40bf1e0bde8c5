// Copyright 2026 The qwres Authors
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

#ifndef QWRES_ERRORS_H
#define QWRES_ERRORS_H

#include <stdexcept>
#include <string>

namespace qwres {

/// Base of every error raised by the library.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A q-plate would move populated amplitude outside the OAM register.
struct TruncationError : Error {
    using Error::Error;
};

/// Post-selected probabilities vanish, so the renormalized features are undefined.
struct DegenerateInput : Error {
    using Error::Error;
};

struct DimensionMismatch : Error {
    using Error::Error;
};

/// Two finite-difference points snapped onto the same grid value.
struct GridCollision : Error {
    using Error::Error;
};

struct ParseError : Error {
    ParseError(const std::string &what, int line, int column)
        : Error(what), line(line), column(column) {}
    int line;
    int column;
};

struct ValidationError : Error {
    ValidationError(const std::string &field, const std::string &what)
        : Error(field + ": " + what), field(field) {}
    std::string field;
};

struct IoError : Error {
    using Error::Error;
};

}  // namespace qwres

#endif  // QWRES_ERRORS_H
