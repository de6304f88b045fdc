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

#include "shadownet/error.h"
#include "shadownet/stabsim.h"

namespace shadownet::stabsim {

namespace {

void flip(std::vector<uint64_t> &words, size_t q, bool on) {
    if (on) {
        words[q >> 6] ^= uint64_t{1} << (q & 63);
    }
}

// Conjugates p by a self-inverse gate (sign ignored).
void conjugate(PauliString &p, const Instruction &op) {
    if (op.kind == OpKind::H) {
        bool x = p.x_bit(op.q0);
        bool z = p.z_bit(op.q0);
        flip(p.xs(), op.q0, x != z);
        flip(p.zs(), op.q0, x != z);
    } else if (op.kind == OpKind::CNOT) {
        flip(p.xs(), op.q1, p.x_bit(op.q0));
        flip(p.zs(), op.q0, p.z_bit(op.q1));
    }
}

// Number of non-zero 4-bit nibbles in w.
int nonzero_nibbles(uint64_t w) {
    uint64_t m = w | (w >> 1);
    m |= m >> 2;
    return std::popcount(m & 0x1111111111111111ULL);
}

std::vector<PauliString> ideal_generators(const CliffordCircuit &c) {
    Tableau ideal = run_noiseless(c);
    std::vector<PauliString> gens;
    for (size_t i = 0; i < c.n(); i++) {
        gens.push_back(ideal.stabilizer(i));
    }
    return gens;
}

}  // namespace

double exact_fidelity(const CliffordCircuit &c, const NoiseModel &noise) {
    size_t n = c.n();
    require(n <= kMaxExactFidelityQubits, ErrorKind::TooLarge, "exact fidelity is limited to 24 qubits");
    const auto &ops = c.instructions();

    // Every noise site owns a 4-bit slot holding the (x, z) bits of the
    // back-propagated Pauli on its support.
    std::vector<size_t> slot(ops.size(), 0);
    size_t n_sites = 0;
    for (size_t i = 0; i < ops.size(); i++) {
        if (ops[i].is_noise()) {
            slot[i] = n_sites++;
        }
    }
    size_t words = std::max<size_t>(1, (4 * n_sites + 63) / 64);
    std::vector<uint64_t> mask1(words), mask2(words);
    for (size_t i = 0; i < ops.size(); i++) {
        if (ops[i].is_noise()) {
            auto &mask = ops[i].kind == OpKind::Noise1 ? mask1 : mask2;
            mask[slot[i] / 16] |= uint64_t{0xF} << (4 * (slot[i] % 16));
        }
    }

    std::vector<PauliString> gens = ideal_generators(c);
    std::vector<std::vector<uint64_t>> patterns(n, std::vector<uint64_t>(words));
    for (size_t g = 0; g < n; g++) {
        PauliString p = gens[g];
        for (size_t i = ops.size(); i-- > 0;) {
            const Instruction &op = ops[i];
            if (op.is_gate()) {
                conjugate(p, op);
                continue;
            }
            uint64_t nib = p.x_bit(op.q0) | (p.z_bit(op.q0) << 1);
            if (op.kind == OpKind::Noise2) {
                nib |= (p.x_bit(op.q1) << 2) | (p.z_bit(op.q1) << 3);
            }
            patterns[g][slot[i] / 16] |= nib << (4 * (slot[i] % 16));
        }
        // Ideal stabilizers pull back to stabilizers of |0...0>.
        require(!p.has_x_part(), ErrorKind::InvalidArgument, "back-propagated stabilizer is not diagonal");
    }

    size_t n_gates1 = 0, n_gates2 = 0;
    for (const auto &op : ops) {
        n_gates1 += op.kind == OpKind::Noise1;
        n_gates2 += op.kind == OpKind::Noise2;
    }
    std::vector<uint64_t> counts((n_gates1 + 1) * (n_gates2 + 1), 0);
    std::vector<uint64_t> cur(words, 0);
    counts[0] = 1;
    uint64_t total = uint64_t{1} << n;
    for (uint64_t k = 1; k < total; k++) {
        const auto &pat = patterns[std::countr_zero(k)];
        int c1 = 0, c2 = 0;
        for (size_t w = 0; w < words; w++) {
            cur[w] ^= pat[w];
            c1 += nonzero_nibbles(cur[w] & mask1[w]);
            c2 += nonzero_nibbles(cur[w] & mask2[w]);
        }
        counts[c1 * (n_gates2 + 1) + c2]++;
    }

    double f = 0;
    for (size_t c1 = 0; c1 <= n_gates1; c1++) {
        for (size_t c2 = 0; c2 <= n_gates2; c2++) {
            uint64_t cnt = counts[c1 * (n_gates2 + 1) + c2];
            if (cnt) {
                f += static_cast<double>(cnt) * std::pow(1 - noise.p1, c1) * std::pow(1 - noise.p2, c2);
            }
        }
    }
    f = std::ldexp(f, -static_cast<int>(n));
    return std::clamp(f, 0.0, 1.0);
}

McEstimate mc_fidelity(const CliffordCircuit &c, const NoiseModel &noise, size_t n_traj, RngStream &rng) {
    require(n_traj >= 100, ErrorKind::InvalidArgument, "mc_fidelity needs at least 100 trajectories");
    std::vector<PauliString> gens = ideal_generators(c);
    double sum = 0, sum_sq = 0;
    for (size_t t = 0; t < n_traj; t++) {
        RngStream stream = rng.child(t);
        Tableau tab = run_trajectory(c, noise, stream);
        double prob = 1;
        for (const auto &g : gens) {
            prob *= tab.project_plus(g);
            if (prob == 0) {
                break;
            }
        }
        sum += prob;
        sum_sq += prob * prob;
    }
    double nt = static_cast<double>(n_traj);
    double mean = sum / nt;
    double var = std::max(0.0, (sum_sq - nt * mean * mean) / (nt - 1));
    return {mean, std::sqrt(var / nt)};
}

}  // namespace shadownet::stabsim
