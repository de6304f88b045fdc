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

#include "shadownet/error.h"

namespace shadownet {

std::string_view error_kind_name(ErrorKind kind) {
    switch (kind) {
        case ErrorKind::InvalidArgument:
            return "InvalidArgument";
        case ErrorKind::NotHermitian:
            return "NotHermitian";
        case ErrorKind::DimMismatch:
            return "DimMismatch";
        case ErrorKind::TooLarge:
            return "TooLarge";
        case ErrorKind::IndexOutOfRange:
            return "IndexOutOfRange";
        case ErrorKind::LengthMismatch:
            return "LengthMismatch";
        case ErrorKind::ShapeMismatch:
            return "ShapeMismatch";
        case ErrorKind::DegenerateFactor:
            return "DegenerateFactor";
        case ErrorKind::ResampleLimit:
            return "ResampleLimit";
        case ErrorKind::VersionMismatch:
            return "VersionMismatch";
        case ErrorKind::ChecksumMismatch:
            return "ChecksumMismatch";
        case ErrorKind::SchemaViolation:
            return "SchemaViolation";
        case ErrorKind::TaskMismatch:
            return "TaskMismatch";
        case ErrorKind::MissingShadows:
            return "MissingShadows";
        case ErrorKind::Io:
            return "Io";
    }
    return "Unknown";
}

Error::Error(ErrorKind kind, const std::string &what)
    : std::runtime_error(std::string(error_kind_name(kind)) + ": " + what), kind_(kind) {
}

void fail(ErrorKind kind, const std::string &what) {
    throw Error(kind, what);
}

}  // namespace shadownet
