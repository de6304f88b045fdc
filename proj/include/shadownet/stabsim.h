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

#ifndef SHADOWNET_STABSIM_H
#define SHADOWNET_STABSIM_H

#include <cstdint>
#include <span>
#include <vector>

#include "shadownet/basis.h"
#include "shadownet/qmat.h"
#include "shadownet/rng.h"
#include "shadownet/spinsys.h"

namespace shadownet::stabsim {

using spinsys::Pauli;

/// Bit-packed Hermitian Pauli string: (-1)^negative * prod_j P_j with P_j
/// encoded as (x_j, z_j); (1, 1) is Y.
class PauliString {
   public:
    explicit PauliString(size_t n = 0);
    static PauliString from_ops(std::span<const Pauli> ops, bool negative = false);

    size_t n() const {
        return n_;
    }
    Pauli at(size_t q) const;
    void set(size_t q, Pauli p);
    std::vector<Pauli> ops() const;
    bool negative = false;

    bool x_bit(size_t q) const {
        return (x_[q >> 6] >> (q & 63)) & 1;
    }
    bool z_bit(size_t q) const {
        return (z_[q >> 6] >> (q & 63)) & 1;
    }
    const std::vector<uint64_t> &xs() const {
        return x_;
    }
    const std::vector<uint64_t> &zs() const {
        return z_;
    }
    std::vector<uint64_t> &xs() {
        return x_;
    }
    std::vector<uint64_t> &zs() {
        return z_;
    }
    bool has_x_part() const;
    bool commutes_with(const PauliString &other) const;

    bool operator==(const PauliString &) const = default;

   private:
    size_t n_;
    std::vector<uint64_t> x_, z_;
};

/// Aaronson-Gottesman stabilizer tableau with destabilizers. Rows [0, n) are
/// destabilizers, rows [n, 2n) stabilizers.
class Tableau {
   public:
    explicit Tableau(size_t n);  // |0...0>

    size_t n() const {
        return n_;
    }

    void h(size_t q);
    void s(size_t q);
    void s_dag(size_t q);
    void cnot(size_t control, size_t target);
    void apply_pauli(size_t q, Pauli p);

    /// Z measurement; returns bit b meaning eigenvalue (-1)^b.
    int measure_z(size_t q, RngStream &rng);

    /// Probability of the +1 outcome when measuring `p`. When the outcome is
    /// random the state is projected onto the +1 eigenspace.
    double project_plus(const PauliString &p);

    /// <p> for the current state: +1, -1 or 0.
    int expectation(const PauliString &p) const;

    PauliString stabilizer(size_t i) const;
    PauliString destabilizer(size_t i) const;

    /// Symplectic check: destabilizer i anticommutes with stabilizer i only,
    /// every other pair commutes.
    bool is_valid() const;

   private:
    PauliString row(size_t r) const;
    void set_row(size_t r, const PauliString &p);
    void row_mul(size_t dst, size_t src);
    bool row_anticommutes(size_t r, const PauliString &p) const;
    int stabilizer_product_sign(const PauliString &p) const;
    void debug_check() const;

    size_t n_;
    size_t words_;
    std::vector<uint64_t> x_, z_;
    std::vector<uint8_t> r_;
};

enum class OpKind : uint8_t { H, CNOT, Noise1, Noise2 };

struct Instruction {
    OpKind kind;
    uint32_t q0;
    uint32_t q1 = 0;

    bool is_gate() const {
        return kind == OpKind::H || kind == OpKind::CNOT;
    }
    bool is_noise() const {
        return !is_gate();
    }
    bool operator==(const Instruction &) const = default;
};

/// Depolarization rates; p1 after single-qubit gates, p2 after two-qubit gates.
struct NoiseModel {
    double p1 = 0;
    double p2 = 0;

    NoiseModel() = default;
    NoiseModel(double p1, double p2);
    static NoiseModel noiseless() {
        return {};
    }
};

/// Ordered list of H/CNOT gates with noise sites interleaved. Noise-site
/// rates come from the NoiseModel supplied at run time.
class CliffordCircuit {
   public:
    explicit CliffordCircuit(size_t n);

    size_t n() const {
        return n_;
    }
    const std::vector<Instruction> &instructions() const {
        return ops_;
    }
    std::vector<Instruction> gates() const;
    std::vector<Instruction> noise_sites() const;

    void add_h(size_t q);
    void add_cnot(size_t control, size_t target);
    void add_noise1(size_t q);
    void add_noise2(size_t q0, size_t q1);

   private:
    void check_qubit(size_t q) const;
    size_t n_;
    std::vector<Instruction> ops_;
};

enum class GhzKind : uint8_t { Global = 0, Local = 1 };

/// Global: H(0), CNOT(0,1), ..., CNOT(n-2,n-1). Local: H on every qubit.
/// A noise site follows every gate on its support.
CliffordCircuit ghz_circuit(size_t n, GhzKind kind);

Tableau run_noiseless(const CliffordCircuit &c);

/// One stochastic Pauli unraveling of the noisy circuit starting from |0...0>.
Tableau run_trajectory(const CliffordCircuit &c, const NoiseModel &noise, RngStream &rng);

/// Rotates each qubit into its basis and measures Z; consumes the tableau.
std::vector<uint8_t> measure_in_bases(Tableau t, std::span<const Basis> bases, RngStream &rng);

constexpr size_t kMaxExactFidelityQubits = 24;
constexpr size_t kMaxDenseQubits = 8;

/// F(noisy, ideal) by back-propagating every ideal stabilizer through the
/// circuit and attenuating by (1 - p) at each noise site it touches.
double exact_fidelity(const CliffordCircuit &c, const NoiseModel &noise);

struct McEstimate {
    double estimate;
    double std_error;
};

/// Monte-Carlo fidelity from n_traj trajectories; each trajectory contributes
/// the product of +1 probabilities of the ideal stabilizer generators.
McEstimate mc_fidelity(const CliffordCircuit &c, const NoiseModel &noise, size_t n_traj, RngStream &rng);

/// Exact channel simulation on a dense density matrix (n <= 8).
qmat::DensityMatrix dense_noisy_state(const CliffordCircuit &c, const NoiseModel &noise);

void depolarize_1q(qmat::ComplexMatrix &rho, size_t n, size_t q, double p);
void depolarize_2q(qmat::ComplexMatrix &rho, size_t n, size_t q0, size_t q1, double p);
void apply_cnot(qmat::ComplexMatrix &rho, size_t n, size_t control, size_t target);

qmat::PureState ghz_state(size_t n);
qmat::PureState plus_state(size_t n);

/// (1 - p)|GHZ><GHZ| + p|perp><perp| with |perp> = X on qubit 1 applied to |0...0>.
qmat::DensityMatrix stateprep_mixture(size_t n, double p);

}  // namespace shadownet::stabsim

#endif
