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

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>

#include "shadownet/error.h"
#include "shadownet/shadows.h"

namespace shadownet::shadows {

using qmat::ComplexMatrix;
using qmat::cplx;
using spinsys::Pauli;
using spinsys::PauliTerm;

ComplexMatrix local_inverse(Basis basis, uint8_t bit) {
    double s = bit ? -1.5 : 1.5;
    ComplexMatrix m(2);
    switch (basis) {
        case Basis::X:
            m(0, 0) = m(1, 1) = 0.5;
            m(0, 1) = m(1, 0) = s;
            break;
        case Basis::Y:
            m(0, 0) = m(1, 1) = 0.5;
            m(0, 1) = cplx(0, -s);
            m(1, 0) = cplx(0, s);
            break;
        case Basis::Z:
            m(0, 0) = 0.5 + s;
            m(1, 1) = 0.5 - s;
            break;
    }
    return m;
}

ComplexMatrix inverse_snapshot_local(const Snapshot &s, size_t j) {
    require(j < s.bases.size() && j < s.bits.size(), ErrorKind::IndexOutOfRange, "qubit index out of range");
    return local_inverse(s.bases[j], s.bits[j]);
}

ComplexMatrix shadow_state(const ShadowSet &ss) {
    size_t n = ss.n();
    require(n <= kMaxDenseQubits, ErrorKind::TooLarge, "shadow_state is limited to 8 qubits");
    // Identical snapshots share one tensor product; key = base-6 digits of
    // (basis, bit) per qubit.
    std::map<uint64_t, size_t> counts;
    for (size_t s = 0; s < ss.m(); s++) {
        uint64_t key = 0;
        for (size_t j = 0; j < n; j++) {
            key = key * 6 + 2 * static_cast<uint64_t>(ss.basis(s, j)) + ss.bit(s, j);
        }
        counts[key]++;
    }
    size_t dim = size_t{1} << n;
    ComplexMatrix acc(dim);
    std::vector<ComplexMatrix> factors(n);
    for (const auto &[key, count] : counts) {
        uint64_t k = key;
        for (size_t j = n; j-- > 0;) {
            uint64_t digit = k % 6;
            k /= 6;
            factors[j] = local_inverse(static_cast<Basis>(digit / 2), static_cast<uint8_t>(digit % 2));
        }
        acc += qmat::kron_all(factors) * cplx(static_cast<double>(count));
    }
    return acc * cplx(1.0 / static_cast<double>(ss.m()));
}

std::vector<ComplexMatrix> local_snapshots(const ShadowSet &ss) {
    std::vector<ComplexMatrix> out;
    for (size_t j = 0; j < ss.n(); j++) {
        size_t counts[6] = {};
        for (size_t s = 0; s < ss.m(); s++) {
            counts[2 * static_cast<size_t>(ss.basis(s, j)) + ss.bit(s, j)]++;
        }
        ComplexMatrix acc(2);
        for (size_t d = 0; d < 6; d++) {
            if (counts[d]) {
                acc += local_inverse(static_cast<Basis>(d / 2), static_cast<uint8_t>(d % 2)) *
                       cplx(static_cast<double>(counts[d]));
            }
        }
        out.push_back(acc * cplx(1.0 / static_cast<double>(ss.m())));
    }
    return out;
}

std::vector<double> pauli_snapshot_values(const ShadowSet &ss, const PauliTerm &p) {
    require(p.ops.size() == ss.n(), ErrorKind::LengthMismatch, "Pauli length differs from shadow qubit count");
    std::vector<size_t> support;
    std::vector<Basis> need;
    for (size_t j = 0; j < p.ops.size(); j++) {
        if (p.ops[j] != Pauli::I) {
            support.push_back(j);
            need.push_back(static_cast<Basis>(static_cast<int>(p.ops[j]) - 1));
        }
    }
    double full = p.coeff * std::pow(3.0, static_cast<double>(support.size()));
    std::vector<double> out(ss.m(), 0.0);
    for (size_t s = 0; s < ss.m(); s++) {
        int parity = 0;
        bool hit = true;
        for (size_t k = 0; k < support.size(); k++) {
            if (ss.basis(s, support[k]) != need[k]) {
                hit = false;
                break;
            }
            parity ^= ss.bit(s, support[k]);
        }
        if (hit) {
            out[s] = parity ? -full : full;
        }
    }
    return out;
}

double estimate_pauli(const ShadowSet &ss, const PauliTerm &p) {
    std::vector<double> v = pauli_snapshot_values(ss, p);
    // Every value is 0 or +/-coeff 3^k, so counting signs is exact.
    double full = p.coeff * std::pow(3.0, p.weight());
    int64_t net = 0;
    for (double x : v) {
        net += (x > 0) - (x < 0);
    }
    if (full < 0) {
        net = -net;
    }
    return full * (static_cast<double>(net) / static_cast<double>(v.size()));
}

double median_of_means(std::span<const double> values, size_t k_split) {
    require(k_split >= 1, ErrorKind::InvalidArgument, "median of means needs K >= 1");
    require(k_split <= values.size(), ErrorKind::InvalidArgument, "median of means needs K <= number of values");
    size_t chunk = values.size() / k_split;
    std::vector<double> means(k_split);
    for (size_t k = 0; k < k_split; k++) {
        double s = 0;
        for (size_t i = k * chunk; i < (k + 1) * chunk; i++) {
            s += values[i];
        }
        means[k] = s / static_cast<double>(chunk);
    }
    std::sort(means.begin(), means.end());
    if (k_split % 2 == 1) {
        return means[k_split / 2];
    }
    return 0.5 * (means[k_split / 2 - 1] + means[k_split / 2]);
}

double estimate_energy(const ShadowSet &ss, const spinsys::Hamiltonian &h, size_t k_split) {
    require(h.n_qubits() == ss.n(), ErrorKind::LengthMismatch, "Hamiltonian size differs from shadow qubit count");
    double e = 0;
    for (const auto &t : h.terms()) {
        std::vector<double> v = pauli_snapshot_values(ss, t);
        e += median_of_means(v, k_split);
    }
    return e;
}

double estimate_fidelity_pauli(const ShadowSet &ss, std::span<const WeightedPauli> target) {
    double f = 0;
    for (const auto &w : target) {
        f += w.gamma * estimate_pauli(ss, w.term);
    }
    return f;
}

double estimate_fidelity_mom(const ShadowSet &ss, std::span<const WeightedPauli> target, size_t k_split) {
    double f = 0;
    for (const auto &w : target) {
        std::vector<double> v = pauli_snapshot_values(ss, w.term);
        f += w.gamma * median_of_means(v, k_split);
    }
    return f;
}

PauliDecomposition stabilizer_decomposition(std::span<const stabsim::PauliString> generators) {
    size_t n = generators.size();
    require(n >= 1 && n <= kMaxDecompositionQubits, ErrorKind::TooLarge,
            "stabilizer decomposition is limited to 24 generators");
    for (const auto &g : generators) {
        require(g.n() == n, ErrorKind::LengthMismatch, "generator length differs from generator count");
    }
    double weight = std::ldexp(1.0, -static_cast<int>(n));
    size_t total = size_t{1} << n;
    PauliDecomposition out;
    out.reserve(total);
    std::vector<Pauli> cur(n, Pauli::I);
    int log_i = 0;  // cur carries the phase i^log_i
    out.push_back({weight, PauliTerm{1.0, cur}});
    for (size_t k = 1; k < total; k++) {
        const auto &g = generators[std::countr_zero(k)];
        auto prod = spinsys::multiply(cur, g.ops());
        cur = std::move(prod.ops);
        log_i = (log_i + prod.log_i + (g.negative ? 2 : 0)) & 3;
        require(log_i % 2 == 0, ErrorKind::InvalidArgument, "generators do not commute");
        double sign = log_i == 0 ? 1.0 : -1.0;
        out.push_back({sign * weight, PauliTerm{1.0, cur}});
    }
    std::vector<std::string> labels;
    for (const auto &w : out) {
        labels.push_back(w.term.label());
    }
    std::sort(labels.begin(), labels.end());
    require(std::adjacent_find(labels.begin(), labels.end()) == labels.end(), ErrorKind::InvalidArgument,
            "generators are not independent");
    return out;
}

PauliDecomposition ghz_pauli_decomposition(size_t n) {
    require(n >= 1, ErrorKind::InvalidArgument, "GHZ decomposition needs at least one qubit");
    require(n <= kMaxDecompositionQubits, ErrorKind::TooLarge, "GHZ decomposition is limited to 24 qubits");
    std::vector<stabsim::PauliString> gens;
    stabsim::PauliString xs(n);
    for (size_t q = 0; q < n; q++) {
        xs.set(q, Pauli::X);
    }
    gens.push_back(xs);
    for (size_t q = 0; q + 1 < n; q++) {
        stabsim::PauliString zz(n);
        zz.set(q, Pauli::Z);
        zz.set(q + 1, Pauli::Z);
        gens.push_back(zz);
    }
    return stabilizer_decomposition(gens);
}

PauliDecomposition plus_pauli_decomposition(size_t n) {
    require(n >= 1, ErrorKind::InvalidArgument, "product decomposition needs at least one qubit");
    require(n <= kMaxDecompositionQubits, ErrorKind::TooLarge, "product decomposition is limited to 24 qubits");
    std::vector<stabsim::PauliString> gens;
    for (size_t q = 0; q < n; q++) {
        stabsim::PauliString x(n);
        x.set(q, Pauli::X);
        gens.push_back(x);
    }
    return stabilizer_decomposition(gens);
}

ComplexMatrix decomposition_matrix(std::span<const WeightedPauli> d) {
    require(!d.empty(), ErrorKind::InvalidArgument, "empty decomposition");
    size_t n = d.front().term.ops.size();
    require(n <= kMaxDenseQubits, ErrorKind::TooLarge, "dense decomposition matrix is limited to 8 qubits");
    ComplexMatrix m(size_t{1} << n);
    for (const auto &w : d) {
        PauliTerm t = w.term;
        t.coeff *= w.gamma;
        m += spinsys::pauli_matrix(t);
    }
    return m;
}

}  // namespace shadownet::shadows
