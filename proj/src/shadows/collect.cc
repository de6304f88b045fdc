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
#include <map>
#include <string>

#include "shadownet/error.h"
#include "shadownet/shadows.h"

namespace shadownet::shadows {

using qmat::ComplexMatrix;

ShadowSet::ShadowSet(size_t n, std::vector<Basis> bases, std::vector<uint8_t> bits, uint64_t seed, Source source)
    : n_(n), bases_(std::move(bases)), bits_(std::move(bits)), seed_(seed), source_(source) {
    require(n > 0, ErrorKind::InvalidArgument, "shadow set needs at least one qubit");
    require(bases_.size() == bits_.size() && bases_.size() % n == 0, ErrorKind::LengthMismatch,
            "snapshot bases and bits must both hold M * n entries");
    require(!bases_.empty(), ErrorKind::InvalidArgument, "shadow set needs at least one snapshot");
    for (size_t i = 0; i < bases_.size(); i++) {
        require(static_cast<uint8_t>(bases_[i]) <= 2 && bits_[i] <= 1, ErrorKind::InvalidArgument,
                "basis codes must be 0..2 and bits 0..1");
    }
}

Snapshot ShadowSet::snapshot(size_t m) const {
    require(m < this->m(), ErrorKind::IndexOutOfRange, "snapshot index out of range");
    Snapshot s;
    s.bases.assign(bases_.begin() + m * n_, bases_.begin() + (m + 1) * n_);
    s.bits.assign(bits_.begin() + m * n_, bits_.begin() + (m + 1) * n_);
    return s;
}

void ShadowSet::write(ByteWriter &w) const {
    w.u32(static_cast<uint32_t>(n_));
    w.u64(m());
    w.u64(seed_);
    w.u8(static_cast<uint8_t>(source_));
    size_t packed = (n_ + 7) / 8;
    std::vector<uint8_t> buf(packed);
    for (size_t s = 0; s < m(); s++) {
        w.bytes(&bases_[s * n_], n_);
        std::fill(buf.begin(), buf.end(), 0);
        for (size_t j = 0; j < n_; j++) {
            buf[j / 8] |= bits_[s * n_ + j] << (j % 8);
        }
        w.bytes(buf.data(), packed);
    }
}

ShadowSet ShadowSet::read(ByteReader &r) {
    size_t n = r.u32();
    uint64_t m = r.u64();
    uint64_t seed = r.u64();
    uint8_t source = r.u8();
    require(n > 0 && source <= 1, ErrorKind::SchemaViolation, "bad shadow set header");
    size_t packed = (n + 7) / 8;
    require(m <= r.remaining() / (n + packed), ErrorKind::SchemaViolation, "shadow set truncated");
    std::vector<Basis> bases(m * n);
    std::vector<uint8_t> bits(m * n);
    for (size_t s = 0; s < m; s++) {
        const uint8_t *b = r.bytes(n);
        for (size_t j = 0; j < n; j++) {
            require(b[j] <= 2, ErrorKind::SchemaViolation, "basis code out of range");
            bases[s * n + j] = static_cast<Basis>(b[j]);
        }
        const uint8_t *p = r.bytes(packed);
        for (size_t j = 0; j < n; j++) {
            bits[s * n + j] = (p[j / 8] >> (j % 8)) & 1;
        }
    }
    return ShadowSet(n, std::move(bases), std::move(bits), seed, static_cast<Source>(source));
}

namespace {

ComplexMatrix rotation(Basis b) {
    switch (b) {
        case Basis::X:
            return qmat::hadamard();
        case Basis::Y:
            return qmat::hadamard() * qmat::phase_s().adjoint();
        default:
            return qmat::pauli_i();
    }
}

size_t log2_dim(size_t dim) {
    size_t n = 0;
    while ((size_t{1} << n) < dim) {
        n++;
    }
    return n;
}

}  // namespace

ShadowSet collect_dense(const qmat::DensityMatrix &rho, size_t m, const RngStream &rng) {
    size_t n = log2_dim(rho.dim());
    require(n <= kMaxDenseQubits, ErrorKind::TooLarge, "dense shadow collection is limited to 8 qubits");
    require(m > 0, ErrorKind::InvalidArgument, "need at least one snapshot");
    const ComplexMatrix rot[3] = {rotation(Basis::X), rotation(Basis::Y), rotation(Basis::Z)};

    // Prefix sums of the rotated Born distribution, one table per basis
    // configuration, built on first use.
    std::map<size_t, std::vector<double>> cumulative;
    std::vector<Basis> bases(m * n);
    std::vector<uint8_t> bits(m * n);
    std::vector<ComplexMatrix> per_qubit(n);
    for (size_t s = 0; s < m; s++) {
        RngStream stream = rng.child(s);
        size_t key = 0;
        for (size_t j = 0; j < n; j++) {
            auto b = static_cast<Basis>(stream.below(3));
            bases[s * n + j] = b;
            key = key * 3 + static_cast<size_t>(b);
        }
        auto it = cumulative.find(key);
        if (it == cumulative.end()) {
            for (size_t j = 0; j < n; j++) {
                per_qubit[j] = rot[static_cast<size_t>(bases[s * n + j])];
            }
            std::vector<double> probs = qmat::rotated_diagonal(rho.mat(), per_qubit);
            std::vector<double> cum(probs.size() + 1, 0.0);
            for (size_t i = 0; i < probs.size(); i++) {
                cum[i + 1] = cum[i] + probs[i];
            }
            it = cumulative.emplace(key, std::move(cum)).first;
        }
        const std::vector<double> &cum = it->second;
        // Measure qubit 0 first, then each later qubit conditioned on the
        // outcomes so far; index blocks with a fixed prefix are contiguous.
        size_t lo = 0, width = rho.dim();
        for (size_t j = 0; j < n; j++) {
            width /= 2;
            double p_block = cum[lo + 2 * width] - cum[lo];
            double p0 = cum[lo + width] - cum[lo];
            uint8_t bit = stream.uniform() * p_block < p0 ? 0 : 1;
            bits[s * n + j] = bit;
            lo += bit * width;
        }
    }
    return ShadowSet(n, std::move(bases), std::move(bits), rng.key(), Source::Dense);
}

ShadowSet collect_stabilizer(const stabsim::CliffordCircuit &c, const stabsim::NoiseModel &noise, size_t m,
                             const RngStream &rng) {
    require(m > 0, ErrorKind::InvalidArgument, "need at least one snapshot");
    size_t n = c.n();
    std::vector<Basis> bases(m * n);
    std::vector<uint8_t> bits(m * n);
    for (size_t s = 0; s < m; s++) {
        RngStream stream = rng.child(s);
        RngStream traj = stream.child(0);
        RngStream meas = stream.child(1);
        for (size_t j = 0; j < n; j++) {
            bases[s * n + j] = static_cast<Basis>(stream.below(3));
        }
        stabsim::Tableau t = stabsim::run_trajectory(c, noise, traj);
        auto out = stabsim::measure_in_bases(std::move(t), std::span<const Basis>(&bases[s * n], n), meas);
        std::copy(out.begin(), out.end(), bits.begin() + s * n);
    }
    return ShadowSet(n, std::move(bases), std::move(bits), rng.key(), Source::Stabilizer);
}

}  // namespace shadownet::shadows
