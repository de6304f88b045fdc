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

#ifndef SHADOWNET_SHADOWS_H
#define SHADOWNET_SHADOWS_H

#include <cstdint>
#include <span>
#include <vector>

#include "shadownet/basis.h"
#include "shadownet/bytes.h"
#include "shadownet/qmat.h"
#include "shadownet/rng.h"
#include "shadownet/spinsys.h"
#include "shadownet/stabsim.h"

namespace shadownet::shadows {

enum class Source : uint8_t { Dense = 0, Stabilizer = 1 };

struct Snapshot {
    std::vector<Basis> bases;
    std::vector<uint8_t> bits;
};

/// M Pauli-basis snapshots of an n-qubit state, stored snapshot-major.
class ShadowSet {
   public:
    ShadowSet(size_t n, std::vector<Basis> bases, std::vector<uint8_t> bits, uint64_t seed, Source source);

    size_t n() const {
        return n_;
    }
    size_t m() const {
        return bases_.size() / n_;
    }
    uint64_t seed() const {
        return seed_;
    }
    Source source() const {
        return source_;
    }
    Basis basis(size_t m, size_t j) const {
        return bases_[m * n_ + j];
    }
    uint8_t bit(size_t m, size_t j) const {
        return bits_[m * n_ + j];
    }
    Snapshot snapshot(size_t m) const;

    /// Per snapshot: n basis bytes, then n bits packed 8 per byte (LSB first).
    void write(ByteWriter &w) const;
    static ShadowSet read(ByteReader &r);

    bool operator==(const ShadowSet &) const = default;

   private:
    size_t n_;
    std::vector<Basis> bases_;
    std::vector<uint8_t> bits_;
    uint64_t seed_;
    Source source_;
};

constexpr size_t kMaxDenseQubits = 8;

/// Uniform random bases; outcomes by sequential conditional sampling of the
/// rotated Born distribution. Snapshot m uses stream rng.child(m).
ShadowSet collect_dense(const qmat::DensityMatrix &rho, size_t m, const RngStream &rng);

/// One fresh noise trajectory per snapshot, measured in uniform random bases.
ShadowSet collect_stabilizer(const stabsim::CliffordCircuit &c, const stabsim::NoiseModel &noise, size_t m,
                             const RngStream &rng);

/// 3 U^dagger |b><b| U - I = I/2 + (3/2)(-1)^b P.
qmat::ComplexMatrix local_inverse(Basis basis, uint8_t bit);
qmat::ComplexMatrix inverse_snapshot_local(const Snapshot &s, size_t j);

/// Mean over snapshots of the n-fold tensor product of local inverses.
qmat::ComplexMatrix shadow_state(const ShadowSet &ss);

/// Per-qubit mean of local inverses.
std::vector<qmat::ComplexMatrix> local_snapshots(const ShadowSet &ss);

/// Per-snapshot single-shot estimates of coeff * Tr(P rho); each is 0 or
/// +/- 3^k coeff.
std::vector<double> pauli_snapshot_values(const ShadowSet &ss, const spinsys::PauliTerm &p);
double estimate_pauli(const ShadowSet &ss, const spinsys::PauliTerm &p);

/// Sequential chunks of floor(len / K) values (remainder dropped); median of
/// the chunk means (mean of the middle two for even K).
double median_of_means(std::span<const double> values, size_t k_split);

/// Sum over terms of the median-of-means estimate of each term.
double estimate_energy(const ShadowSet &ss, const spinsys::Hamiltonian &h, size_t k_split);

/// |psi><psi| = sum_i gamma_i P_i with unit-coefficient Pauli strings P_i.
struct WeightedPauli {
    double gamma;
    spinsys::PauliTerm term;
};
using PauliDecomposition = std::vector<WeightedPauli>;

/// sum_i gamma_i estimate_pauli(P_i): plain means.
double estimate_fidelity_pauli(const ShadowSet &ss, std::span<const WeightedPauli> target);
/// sum_i gamma_i median_of_means(P_i): the estimate paired with fidelity_bound.
double estimate_fidelity_mom(const ShadowSet &ss, std::span<const WeightedPauli> target, size_t k_split);

constexpr size_t kMaxDecompositionQubits = 24;

/// 2^-n sum_S S over the stabilizer group generated by `generators` (signs
/// included); generators must commute and be independent.
PauliDecomposition stabilizer_decomposition(std::span<const stabsim::PauliString> generators);
/// Generators X^n and Z_i Z_{i+1}.
PauliDecomposition ghz_pauli_decomposition(size_t n);
/// |+>^n: generators X_i.
PauliDecomposition plus_pauli_decomposition(size_t n);

qmat::ComplexMatrix decomposition_matrix(std::span<const WeightedPauli> d);

struct BoundSpec {
    size_t k_split;
    double delta;
    size_t r;

    /// Validates K <= M and delta in (0, 1); r = floor(M / K).
    static BoundSpec make(size_t m, size_t k_split, double delta);
};

struct BoundTerm {
    double gamma;
    int locality;
};

/// sum_i |alpha_i| sqrt(34 3^{k_i} / R).
double energy_bound(const spinsys::Hamiltonian &h, size_t m, size_t k_split, double delta);
/// sum_i |gamma_i| sqrt(34 3^{k_i} / R); identity terms contribute 0.
double fidelity_bound(std::span<const BoundTerm> terms, size_t m, size_t k_split, double delta);
double fidelity_bound(std::span<const WeightedPauli> d, size_t m, size_t k_split, double delta);
/// Closed form 2 sqrt(34 3^n / R) for the n-qubit GHZ target.
double ghz_closed_form_bound(size_t n, size_t m, size_t k_split, double delta);

}  // namespace shadownet::shadows

#endif
