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

#ifndef SHADOWNET_BASIS_H
#define SHADOWNET_BASIS_H

#include <cstdint>

namespace shadownet {

/// Single-qubit measurement basis. The numeric codes are the on-disk encoding.
enum class Basis : uint8_t { X = 0, Y = 1, Z = 2 };

}  // namespace shadownet

#endif
