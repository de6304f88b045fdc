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

#include "shadownet/spinsys.h"

#include <set>

#include "shadownet/error.h"

namespace shadownet::spinsys {

using qmat::ComplexMatrix;
using qmat::cplx;

char pauli_char(Pauli p) {
    return "IXYZ"[static_cast<int>(p)];
}

int PauliTerm::weight() const {
    int k = 0;
    for (Pauli p : ops) {
        k += p != Pauli::I;
    }
    return k;
}

std::string PauliTerm::label() const {
    std::string s;
    for (Pauli p : ops) {
        s += pauli_char(p);
    }
    return s;
}

PauliTerm PauliTerm::from_label(std::string_view label, double coeff) {
    PauliTerm t{coeff, {}};
    for (char c : label) {
        switch (c) {
            case 'I':
                t.ops.push_back(Pauli::I);
                break;
            case 'X':
                t.ops.push_back(Pauli::X);
                break;
            case 'Y':
                t.ops.push_back(Pauli::Y);
                break;
            case 'Z':
                t.ops.push_back(Pauli::Z);
                break;
            default:
                fail(ErrorKind::InvalidArgument, std::string("bad Pauli label character '") + c + "'");
        }
    }
    return t;
}

PauliProduct multiply(std::span<const Pauli> a, std::span<const Pauli> b) {
    require(a.size() == b.size(), ErrorKind::LengthMismatch, "Pauli product length mismatch");
    // log_i of sigma_a * sigma_b for single-qubit Paulis in order I, X, Y, Z.
    static constexpr int kPhase[4][4] = {
        {0, 0, 0, 0},
        {0, 0, 1, 3},  // XY = iZ, XZ = -iY
        {0, 3, 0, 1},  // YX = -iZ, YZ = iX
        {0, 1, 3, 0},  // ZX = iY, ZY = -iX
    };
    PauliProduct out;
    out.ops.resize(a.size());
    for (size_t j = 0; j < a.size(); j++) {
        int x = static_cast<int>(a[j]);
        int y = static_cast<int>(b[j]);
        int r = x == y ? 0 : (x == 0 ? y : (y == 0 ? x : 6 - x - y));
        out.ops[j] = static_cast<Pauli>(r);
        out.log_i = (out.log_i + kPhase[x][y]) & 3;
    }
    return out;
}

Hamiltonian::Hamiltonian(size_t n_qubits, std::vector<PauliTerm> terms)
    : n_qubits_(n_qubits), terms_(std::move(terms)) {
    require(n_qubits_ > 0, ErrorKind::InvalidArgument, "Hamiltonian needs at least one qubit");
    require(!terms_.empty(), ErrorKind::InvalidArgument, "Hamiltonian needs at least one term");
    std::set<std::string> seen;
    for (const auto &t : terms_) {
        require(t.ops.size() == n_qubits_, ErrorKind::LengthMismatch, "term length differs from qubit count");
        require(seen.insert(t.label()).second, ErrorKind::InvalidArgument, "duplicate Pauli string " + t.label());
    }
}

namespace {

PauliTerm two_site(size_t n, size_t i, Pauli p, double coeff) {
    PauliTerm t{coeff, std::vector<Pauli>(n, Pauli::I)};
    t.ops[i] = p;
    t.ops[i + 1] = p;
    return t;
}

}  // namespace

Hamiltonian build_tfim(size_t n, double jz, double jx) {
    require(n >= 2, ErrorKind::InvalidArgument, "TFIM needs n >= 2");
    std::vector<PauliTerm> terms;
    for (size_t i = 0; i + 1 < n; i++) {
        terms.push_back(two_site(n, i, Pauli::Z, jz));
    }
    for (size_t i = 0; i < n; i++) {
        PauliTerm t{-jx, std::vector<Pauli>(n, Pauli::I)};
        t.ops[i] = Pauli::X;
        terms.push_back(std::move(t));
    }
    return Hamiltonian(n, std::move(terms));
}

Hamiltonian build_xxz(size_t n, std::span<const double> deltas) {
    require(n >= 2, ErrorKind::InvalidArgument, "XXZ needs n >= 2");
    require(deltas.size() == n - 1, ErrorKind::LengthMismatch,
            "XXZ needs " + std::to_string(n - 1) + " couplings, got " + std::to_string(deltas.size()));
    std::vector<PauliTerm> terms;
    for (size_t i = 0; i + 1 < n; i++) {
        terms.push_back(two_site(n, i, Pauli::X, -deltas[i]));
        terms.push_back(two_site(n, i, Pauli::Y, -deltas[i]));
        terms.push_back(two_site(n, i, Pauli::Z, -1.0));
    }
    return Hamiltonian(n, std::move(terms));
}

Hamiltonian build_xxz_uniform(size_t n, double delta) {
    require(n >= 2, ErrorKind::InvalidArgument, "XXZ needs n >= 2");
    std::vector<double> d(n - 1, delta);
    return build_xxz(n, d);
}

namespace {

// Adds coeff * P to m, using that a Pauli string maps |c> to phase(c) |c ^ xmask>.
void accumulate_pauli(ComplexMatrix &m, const PauliTerm &term) {
    size_t n = term.ops.size();
    size_t dim = m.dim();
    size_t xmask = 0;
    for (size_t j = 0; j < n; j++) {
        if (term.ops[j] == Pauli::X || term.ops[j] == Pauli::Y) {
            xmask |= size_t{1} << (n - 1 - j);
        }
    }
    for (size_t c = 0; c < dim; c++) {
        cplx phase = term.coeff;
        for (size_t j = 0; j < n; j++) {
            bool bit = (c >> (n - 1 - j)) & 1;
            switch (term.ops[j]) {
                case Pauli::I:
                case Pauli::X:
                    break;
                case Pauli::Y:
                    phase *= bit ? cplx(0, -1) : cplx(0, 1);
                    break;
                case Pauli::Z:
                    if (bit) {
                        phase = -phase;
                    }
                    break;
            }
        }
        m(c ^ xmask, c) += phase;
    }
}

}  // namespace

ComplexMatrix pauli_matrix(const PauliTerm &term) {
    size_t n = term.ops.size();
    require(n <= kMaxDenseQubits, ErrorKind::TooLarge, "dense Pauli matrix above 12 qubits");
    ComplexMatrix m(size_t{1} << n);
    accumulate_pauli(m, term);
    return m;
}

ComplexMatrix realize(const Hamiltonian &h) {
    require(h.n_qubits() <= kMaxDenseQubits, ErrorKind::TooLarge,
            "cannot realize " + std::to_string(h.n_qubits()) + " qubits densely (limit 12)");
    ComplexMatrix m(size_t{1} << h.n_qubits());
    for (const auto &t : h.terms()) {
        accumulate_pauli(m, t);
    }
    return m;
}

GroundState ground_state(const Hamiltonian &h) {
    auto eig = qmat::herm_eig(realize(h));
    size_t d = eig.values.size();
    std::vector<cplx> v(d);
    double norm = 0;
    for (size_t i = 0; i < d; i++) {
        v[i] = eig.vectors(i, 0);
        norm += std::norm(v[i]);
    }
    norm = std::sqrt(norm);
    for (auto &a : v) {
        a /= norm;
    }
    double gap = d > 1 ? std::max(eig.values[1] - eig.values[0], 0.0) : 0.0;
    return GroundState{eig.values[0], qmat::DensityMatrix::from_pure(qmat::PureState(std::move(v))), gap};
}

}  // namespace shadownet::spinsys
