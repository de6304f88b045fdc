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
#include <string>

#include "shadownet/error.h"
#include "shadownet/stabsim.h"

namespace shadownet::stabsim {

NoiseModel::NoiseModel(double p1, double p2) : p1(p1), p2(p2) {
    require(p1 >= 0 && p1 <= 1 && p2 >= 0 && p2 <= 1, ErrorKind::InvalidArgument,
            "depolarization rates must lie in [0, 1]");
}

CliffordCircuit::CliffordCircuit(size_t n) : n_(n) {
    require(n > 0, ErrorKind::InvalidArgument, "circuit needs at least one qubit");
}

void CliffordCircuit::check_qubit(size_t q) const {
    require(q < n_, ErrorKind::IndexOutOfRange, "qubit " + std::to_string(q) + " out of range");
}

void CliffordCircuit::add_h(size_t q) {
    check_qubit(q);
    ops_.push_back({OpKind::H, static_cast<uint32_t>(q)});
}

void CliffordCircuit::add_cnot(size_t control, size_t target) {
    check_qubit(control);
    check_qubit(target);
    require(control != target, ErrorKind::InvalidArgument, "CNOT control equals target");
    ops_.push_back({OpKind::CNOT, static_cast<uint32_t>(control), static_cast<uint32_t>(target)});
}

void CliffordCircuit::add_noise1(size_t q) {
    check_qubit(q);
    ops_.push_back({OpKind::Noise1, static_cast<uint32_t>(q)});
}

void CliffordCircuit::add_noise2(size_t q0, size_t q1) {
    check_qubit(q0);
    check_qubit(q1);
    require(q0 != q1, ErrorKind::InvalidArgument, "two-qubit noise on a single qubit");
    ops_.push_back({OpKind::Noise2, static_cast<uint32_t>(q0), static_cast<uint32_t>(q1)});
}

std::vector<Instruction> CliffordCircuit::gates() const {
    std::vector<Instruction> out;
    for (const auto &op : ops_) {
        if (op.is_gate()) {
            out.push_back(op);
        }
    }
    return out;
}

std::vector<Instruction> CliffordCircuit::noise_sites() const {
    std::vector<Instruction> out;
    for (const auto &op : ops_) {
        if (op.is_noise()) {
            out.push_back(op);
        }
    }
    return out;
}

CliffordCircuit ghz_circuit(size_t n, GhzKind kind) {
    require(n > 0, ErrorKind::InvalidArgument, "GHZ circuit needs at least one qubit");
    CliffordCircuit c(n);
    if (kind == GhzKind::Local) {
        for (size_t q = 0; q < n; q++) {
            c.add_h(q);
            c.add_noise1(q);
        }
        return c;
    }
    c.add_h(0);
    c.add_noise1(0);
    for (size_t q = 0; q + 1 < n; q++) {
        c.add_cnot(q, q + 1);
        c.add_noise2(q, q + 1);
    }
    return c;
}

namespace {

void apply_gate(Tableau &t, const Instruction &op) {
    if (op.kind == OpKind::H) {
        t.h(op.q0);
    } else if (op.kind == OpKind::CNOT) {
        t.cnot(op.q0, op.q1);
    }
}

}  // namespace

Tableau run_noiseless(const CliffordCircuit &c) {
    Tableau t(c.n());
    for (const auto &op : c.instructions()) {
        apply_gate(t, op);
    }
    return t;
}

Tableau run_trajectory(const CliffordCircuit &c, const NoiseModel &noise, RngStream &rng) {
    Tableau t(c.n());
    for (const auto &op : c.instructions()) {
        if (op.is_gate()) {
            apply_gate(t, op);
            continue;
        }
        double u = rng.uniform();
        if (op.kind == OpKind::Noise1) {
            double w = noise.p1 / 4;
            if (u < 3 * w) {
                int k = std::min(2, static_cast<int>(u / w));
                t.apply_pauli(op.q0, static_cast<Pauli>(k + 1));
            }
        } else {
            double w = noise.p2 / 16;
            if (u < 15 * w) {
                int k = std::min(14, static_cast<int>(u / w)) + 1;
                t.apply_pauli(op.q0, static_cast<Pauli>(k / 4));
                t.apply_pauli(op.q1, static_cast<Pauli>(k % 4));
            }
        }
    }
    return t;
}

std::vector<uint8_t> measure_in_bases(Tableau t, std::span<const Basis> bases, RngStream &rng) {
    require(bases.size() == t.n(), ErrorKind::LengthMismatch, "basis list length differs from qubit count");
    std::vector<uint8_t> bits(t.n());
    for (size_t q = 0; q < t.n(); q++) {
        if (bases[q] == Basis::X) {
            t.h(q);
        } else if (bases[q] == Basis::Y) {
            t.s_dag(q);
            t.h(q);
        }
    }
    for (size_t q = 0; q < t.n(); q++) {
        bits[q] = static_cast<uint8_t>(t.measure_z(q, rng));
    }
    return bits;
}

}  // namespace shadownet::stabsim
