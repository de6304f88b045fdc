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

#include <bit>
#include <cassert>

#include "shadownet/error.h"
#include "shadownet/stabsim.h"

namespace shadownet::stabsim {

namespace {

size_t word_count(size_t n) {
    return (n + 63) / 64;
}

// Phase exponent (log_i) picked up by left * right, with left updated in
// place to the product. Counts +i / -i contributions per bit position with a
// two-bit counter, then sums the counters.
int mul_into(uint64_t *lx, uint64_t *lz, const uint64_t *rx, const uint64_t *rz, size_t words) {
    uint64_t cnt1 = 0;
    uint64_t cnt2 = 0;
    for (size_t w = 0; w < words; w++) {
        uint64_t x1 = lx[w];
        uint64_t z1 = lz[w];
        uint64_t x2 = rx[w];
        uint64_t z2 = rz[w];
        uint64_t nx = x1 ^ x2;
        uint64_t nz = z1 ^ z2;
        uint64_t x1z2 = x1 & z2;
        uint64_t anti = (x2 & z1) ^ x1z2;
        cnt2 ^= (cnt1 ^ nx ^ nz ^ x1z2) & anti;
        cnt1 ^= anti;
        lx[w] = nx;
        lz[w] = nz;
    }
    return (std::popcount(cnt1) + 2 * std::popcount(cnt2)) & 3;
}

}  // namespace

PauliString::PauliString(size_t n) : n_(n), x_(word_count(n)), z_(word_count(n)) {
}

PauliString PauliString::from_ops(std::span<const Pauli> ops, bool negative) {
    PauliString p(ops.size());
    for (size_t q = 0; q < ops.size(); q++) {
        p.set(q, ops[q]);
    }
    p.negative = negative;
    return p;
}

Pauli PauliString::at(size_t q) const {
    bool x = x_bit(q);
    bool z = z_bit(q);
    if (x && z) {
        return Pauli::Y;
    }
    return x ? Pauli::X : (z ? Pauli::Z : Pauli::I);
}

void PauliString::set(size_t q, Pauli p) {
    require(q < n_, ErrorKind::IndexOutOfRange, "Pauli index out of range");
    uint64_t bit = uint64_t{1} << (q & 63);
    bool x = p == Pauli::X || p == Pauli::Y;
    bool z = p == Pauli::Z || p == Pauli::Y;
    x_[q >> 6] = x ? (x_[q >> 6] | bit) : (x_[q >> 6] & ~bit);
    z_[q >> 6] = z ? (z_[q >> 6] | bit) : (z_[q >> 6] & ~bit);
}

std::vector<Pauli> PauliString::ops() const {
    std::vector<Pauli> out(n_);
    for (size_t q = 0; q < n_; q++) {
        out[q] = at(q);
    }
    return out;
}

bool PauliString::has_x_part() const {
    for (uint64_t w : x_) {
        if (w) {
            return true;
        }
    }
    return false;
}

bool PauliString::commutes_with(const PauliString &other) const {
    require(n_ == other.n_, ErrorKind::LengthMismatch, "Pauli length mismatch");
    int parity = 0;
    for (size_t w = 0; w < x_.size(); w++) {
        parity ^= std::popcount((x_[w] & other.z_[w]) ^ (z_[w] & other.x_[w])) & 1;
    }
    return parity == 0;
}

Tableau::Tableau(size_t n)
    : n_(n), words_(word_count(n)), x_(2 * n * words_), z_(2 * n * words_), r_(2 * n) {
    require(n > 0, ErrorKind::InvalidArgument, "tableau needs at least one qubit");
    for (size_t q = 0; q < n; q++) {
        x_[q * words_ + (q >> 6)] |= uint64_t{1} << (q & 63);
        z_[(q + n) * words_ + (q >> 6)] |= uint64_t{1} << (q & 63);
    }
}

void Tableau::h(size_t q) {
    size_t w = q >> 6;
    uint64_t bit = uint64_t{1} << (q & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        uint64_t &xw = x_[r * words_ + w];
        uint64_t &zw = z_[r * words_ + w];
        bool x = xw & bit;
        bool z = zw & bit;
        r_[r] ^= x & z;
        if (x != z) {
            xw ^= bit;
            zw ^= bit;
        }
    }
    debug_check();
}

void Tableau::s(size_t q) {
    size_t w = q >> 6;
    uint64_t bit = uint64_t{1} << (q & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        bool x = x_[r * words_ + w] & bit;
        bool z = z_[r * words_ + w] & bit;
        r_[r] ^= x & z;
        if (x) {
            z_[r * words_ + w] ^= bit;
        }
    }
    debug_check();
}

void Tableau::s_dag(size_t q) {
    size_t w = q >> 6;
    uint64_t bit = uint64_t{1} << (q & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        bool x = x_[r * words_ + w] & bit;
        bool z = z_[r * words_ + w] & bit;
        r_[r] ^= x & !z;
        if (x) {
            z_[r * words_ + w] ^= bit;
        }
    }
    debug_check();
}

void Tableau::cnot(size_t control, size_t target) {
    require(control != target && control < n_ && target < n_, ErrorKind::InvalidArgument, "bad CNOT qubits");
    size_t wc = control >> 6, wt = target >> 6;
    uint64_t bc = uint64_t{1} << (control & 63), bt = uint64_t{1} << (target & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        uint64_t *xs = &x_[r * words_];
        uint64_t *zs = &z_[r * words_];
        bool xc = xs[wc] & bc;
        bool zc = zs[wc] & bc;
        bool xt = xs[wt] & bt;
        bool zt = zs[wt] & bt;
        r_[r] ^= xc & zt & (xt == zc);
        if (xc) {
            xs[wt] ^= bt;
        }
        if (zt) {
            zs[wc] ^= bc;
        }
    }
    debug_check();
}

void Tableau::apply_pauli(size_t q, Pauli p) {
    if (p == Pauli::I) {
        return;
    }
    size_t w = q >> 6;
    uint64_t bit = uint64_t{1} << (q & 63);
    for (size_t r = 0; r < 2 * n_; r++) {
        bool x = x_[r * words_ + w] & bit;
        bool z = z_[r * words_ + w] & bit;
        bool flip = false;
        switch (p) {
            case Pauli::X:
                flip = z;
                break;
            case Pauli::Z:
                flip = x;
                break;
            case Pauli::Y:
                flip = x != z;
                break;
            case Pauli::I:
                break;
        }
        r_[r] ^= flip;
    }
}

void Tableau::row_mul(size_t dst, size_t src) {
    int log_i = mul_into(&x_[dst * words_], &z_[dst * words_], &x_[src * words_], &z_[src * words_], words_);
    log_i = (log_i + 2 * r_[dst] + 2 * r_[src]) & 3;
    r_[dst] = log_i >> 1;
}

bool Tableau::row_anticommutes(size_t r, const PauliString &p) const {
    int parity = 0;
    for (size_t w = 0; w < words_; w++) {
        parity ^= std::popcount((x_[r * words_ + w] & p.zs()[w]) ^ (z_[r * words_ + w] & p.xs()[w])) & 1;
    }
    return parity;
}

PauliString Tableau::row(size_t r) const {
    PauliString p(n_);
    for (size_t w = 0; w < words_; w++) {
        p.xs()[w] = x_[r * words_ + w];
        p.zs()[w] = z_[r * words_ + w];
    }
    p.negative = r_[r];
    return p;
}

void Tableau::set_row(size_t r, const PauliString &p) {
    for (size_t w = 0; w < words_; w++) {
        x_[r * words_ + w] = p.xs()[w];
        z_[r * words_ + w] = p.zs()[w];
    }
    r_[r] = p.negative;
}

PauliString Tableau::stabilizer(size_t i) const {
    require(i < n_, ErrorKind::IndexOutOfRange, "stabilizer index out of range");
    return row(n_ + i);
}

PauliString Tableau::destabilizer(size_t i) const {
    require(i < n_, ErrorKind::IndexOutOfRange, "destabilizer index out of range");
    return row(i);
}

int Tableau::measure_z(size_t q, RngStream &rng) {
    require(q < n_, ErrorKind::IndexOutOfRange, "measured qubit out of range");
    size_t w = q >> 6;
    uint64_t bit = uint64_t{1} << (q & 63);
    size_t p = 2 * n_;
    for (size_t r = n_; r < 2 * n_; r++) {
        if (x_[r * words_ + w] & bit) {
            p = r;
            break;
        }
    }
    if (p < 2 * n_) {
        int outcome = static_cast<int>(rng.next_u64() >> 63);
        for (size_t r = 0; r < 2 * n_; r++) {
            if (r != p && (x_[r * words_ + w] & bit)) {
                row_mul(r, p);
            }
        }
        set_row(p - n_, row(p));
        PauliString zq(n_);
        zq.set(q, Pauli::Z);
        zq.negative = outcome;
        set_row(p, zq);
        debug_check();
        return outcome;
    }
    PauliString zq(n_);
    zq.set(q, Pauli::Z);
    return stabilizer_product_sign(zq);
}

int Tableau::stabilizer_product_sign(const PauliString &p) const {
    std::vector<uint64_t> ax(words_), az(words_);
    int log_i = 0;
    for (size_t i = 0; i < n_; i++) {
        if (row_anticommutes(i, p)) {
            size_t r = n_ + i;
            log_i += mul_into(ax.data(), az.data(), &x_[r * words_], &z_[r * words_], words_) + 2 * r_[r];
        }
    }
    return (log_i >> 1) & 1;
}

int Tableau::expectation(const PauliString &p) const {
    require(p.n() == n_, ErrorKind::LengthMismatch, "Pauli length differs from tableau");
    for (size_t r = n_; r < 2 * n_; r++) {
        if (row_anticommutes(r, p)) {
            return 0;
        }
    }
    // p is +/- the product of the stabilizers whose destabilizer anticommutes with p.
    return stabilizer_product_sign(p) == static_cast<int>(p.negative) ? 1 : -1;
}

double Tableau::project_plus(const PauliString &p) {
    require(p.n() == n_, ErrorKind::LengthMismatch, "Pauli length differs from tableau");
    size_t pivot = 2 * n_;
    for (size_t r = n_; r < 2 * n_; r++) {
        if (row_anticommutes(r, p)) {
            pivot = r;
            break;
        }
    }
    if (pivot == 2 * n_) {
        return expectation(p) > 0 ? 1.0 : 0.0;
    }
    for (size_t r = 0; r < 2 * n_; r++) {
        if (r != pivot && row_anticommutes(r, p)) {
            row_mul(r, pivot);
        }
    }
    set_row(pivot - n_, row(pivot));
    set_row(pivot, p);
    debug_check();
    return 0.5;
}

bool Tableau::is_valid() const {
    for (size_t a = 0; a < 2 * n_; a++) {
        PauliString pa = row(a);
        for (size_t b = a + 1; b < 2 * n_; b++) {
            bool should_anticommute = b == a + n_;
            if (row_anticommutes(b, pa) != should_anticommute) {
                return false;
            }
        }
    }
    return true;
}

void Tableau::debug_check() const {
#ifndef NDEBUG
    assert(is_valid());
#endif
}

}  // namespace shadownet::stabsim
