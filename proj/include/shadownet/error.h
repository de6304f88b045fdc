// Copyright 2026 The ShadowNet Authors
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

#ifndef SHADOWNET_ERROR_H
#define SHADOWNET_ERROR_H

#include <stdexcept>
#include <string>
#include <string_view>

namespace shadownet {

enum class ErrorKind {
    InvalidArgument,
    NotHermitian,
    DimMismatch,
    TooLarge,
    IndexOutOfRange,
    LengthMismatch,
    ShapeMismatch,
    DegenerateFactor,
    ResampleLimit,
    VersionMismatch,
    ChecksumMismatch,
    SchemaViolation,
    TaskMismatch,
    MissingShadows,
    Io,
};

std::string_view error_kind_name(ErrorKind kind);

/// Error raised by every shadownet module. The kind is stable and matched on
/// by tests and by the CLI when mapping failures onto exit codes.
class Error : public std::runtime_error {
   public:
    Error(ErrorKind kind, const std::string &what);
    ErrorKind kind() const noexcept {
        return kind_;
    }

   private:
    ErrorKind kind_;
};

[[noreturn]] void fail(ErrorKind kind, const std::string &what);

inline void require(bool condition, ErrorKind kind, const std::string &what) {
    if (!condition) {
        fail(kind, what);
    }
}

}  // namespace shadownet

#endif
