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

#ifndef SHADOWNET_SPINSYS_H
#define SHADOWNET_SPINSYS_H

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "shadownet/qmat.h"

namespace shadownet::spinsys {

enum class Pauli : uint8_t { I = 0, X = 1, Y = 2, Z = 3 };

char pauli_char(Pauli p);

/// coeff * (ops[0] kron ops[1] kron ... ), qubit 0 leftmost.
struct PauliTerm {
    double coeff = 1.0;
    std::vector<Pauli> ops;

    size_t n_qubits() const {
        return ops.size();
    }
    /// Number of non-identity factors.
    int weight() const;
    std::string label() const;

    static PauliTerm from_label(std::string_view label, double coeff = 1.0);
};

/// Product a*b of two Pauli strings, returned with its scalar phase i^log_i.
struct PauliProduct {
    std::vector<Pauli> ops;
    int log_i = 0;  // 0..3
};
PauliProduct multiply(std::span<const Pauli> a, std::span<const Pauli> b);

class Hamiltonian {
   public:
    Hamiltonian(size_t n_qubits, std::vector<PauliTerm> terms);

    size_t n_qubits() const {
        return n_qubits_;
    }
    const std::vector<PauliTerm> &terms() const {
        return terms_;
    }

   private:
    size_t n_qubits_;
    std::vector<PauliTerm> terms_;
};

/// H = jz sum_i Z_i Z_{i+1} - jx sum_i X_i on an open chain.
Hamiltonian build_tfim(size_t n, double jz, double jx);

/// H = -sum_i [delta_i (X_i X_{i+1} + Y_i Y_{i+1}) + Z_i Z_{i+1}] on an open chain.
Hamiltonian build_xxz(size_t n, std::span<const double> deltas);

/// XXZ with the same coupling on every bond.
Hamiltonian build_xxz_uniform(size_t n, double delta);

constexpr size_t kMaxDenseQubits = 12;

/// Dense matrix of a single Pauli string (coefficient included).
qmat::ComplexMatrix pauli_matrix(const PauliTerm &term);

qmat::ComplexMatrix realize(const Hamiltonian &h);

struct GroundState {
    double energy;
    qmat::DensityMatrix state;
    double gap;
};

GroundState ground_state(const Hamiltonian &h);

}  // namespace shadownet::spinsys

#endif
