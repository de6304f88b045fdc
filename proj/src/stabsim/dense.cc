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

#include <cmath>

#include "shadownet/error.h"
#include "shadownet/stabsim.h"

namespace shadownet::stabsim {

using qmat::ComplexMatrix;
using qmat::cplx;

namespace {

size_t bit_of(size_t n, size_t q) {
    return size_t{1} << (n - 1 - q);
}

}  // namespace

void apply_cnot(ComplexMatrix &rho, size_t n, size_t control, size_t target) {
    size_t cb = bit_of(n, control), tb = bit_of(n, target);
    size_t dim = rho.dim();
    auto perm = [&](size_t i) { return (i & cb) ? i ^ tb : i; };
    ComplexMatrix out(dim);
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            out(perm(r), perm(c)) = rho(r, c);
        }
    }
    rho = std::move(out);
}

// rho <- (1 - p) rho + p (I/2 on q) (x) Tr_q rho.
void depolarize_1q(ComplexMatrix &rho, size_t n, size_t q, double p) {
    size_t b = bit_of(n, q);
    size_t dim = rho.dim();
    ComplexMatrix out(dim);
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            cplx v = (1 - p) * rho(r, c);
            if ((r & b) == (c & b)) {
                v += (p / 2) * (rho(r & ~b, c & ~b) + rho(r | b, c | b));
            }
            out(r, c) = v;
        }
    }
    rho = std::move(out);
}

void depolarize_2q(ComplexMatrix &rho, size_t n, size_t q0, size_t q1, double p) {
    size_t b = bit_of(n, q0) | bit_of(n, q1);
    size_t dim = rho.dim();
    size_t combos[4] = {0, bit_of(n, q0), bit_of(n, q1), b};
    ComplexMatrix out(dim);
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = 0; c < dim; c++) {
            cplx v = (1 - p) * rho(r, c);
            if ((r & b) == (c & b)) {
                cplx tr = 0;
                for (size_t k : combos) {
                    tr += rho((r & ~b) | k, (c & ~b) | k);
                }
                v += (p / 4) * tr;
            }
            out(r, c) = v;
        }
    }
    rho = std::move(out);
}

qmat::DensityMatrix dense_noisy_state(const CliffordCircuit &c, const NoiseModel &noise) {
    size_t n = c.n();
    require(n <= kMaxDenseQubits, ErrorKind::TooLarge, "dense simulation is limited to 8 qubits");
    size_t dim = size_t{1} << n;
    ComplexMatrix rho(dim);
    rho(0, 0) = 1;
    ComplexMatrix h = qmat::hadamard();
    for (const auto &op : c.instructions()) {
        switch (op.kind) {
            case OpKind::H:
                qmat::apply_1q(rho, n, op.q0, h);
                break;
            case OpKind::CNOT:
                apply_cnot(rho, n, op.q0, op.q1);
                break;
            case OpKind::Noise1:
                depolarize_1q(rho, n, op.q0, noise.p1);
                break;
            case OpKind::Noise2:
                depolarize_2q(rho, n, op.q0, op.q1, noise.p2);
                break;
        }
    }
    // Round-off from repeated channel application stays far below the
    // validation tolerances; symmetrize so Hermiticity is exact.
    ComplexMatrix sym = (rho + rho.adjoint()) * cplx(0.5);
    return qmat::DensityMatrix(std::move(sym));
}

qmat::PureState ghz_state(size_t n) {
    require(n >= 1 && n <= kMaxDenseQubits, ErrorKind::TooLarge, "dense GHZ state is limited to 8 qubits");
    std::vector<cplx> amps(size_t{1} << n, 0.0);
    amps.front() = M_SQRT1_2;
    amps.back() += M_SQRT1_2;
    return qmat::PureState(std::move(amps));
}

qmat::PureState plus_state(size_t n) {
    require(n >= 1 && n <= kMaxDenseQubits, ErrorKind::TooLarge, "dense product state is limited to 8 qubits");
    size_t dim = size_t{1} << n;
    return qmat::PureState(std::vector<cplx>(dim, 1 / std::sqrt(static_cast<double>(dim))));
}

qmat::DensityMatrix stateprep_mixture(size_t n, double p) {
    require(n >= 2, ErrorKind::InvalidArgument, "state-prep mixture needs at least two qubits");
    require(n <= kMaxDenseQubits, ErrorKind::TooLarge, "state-prep mixture is limited to 8 qubits");
    require(p >= 0 && p <= 1, ErrorKind::InvalidArgument, "mixture weight must lie in [0, 1]");
    ComplexMatrix ghz = ghz_state(n).projector();
    size_t dim = size_t{1} << n;
    ComplexMatrix perp(dim);
    size_t idx = bit_of(n, 1);
    perp(idx, idx) = 1;
    return qmat::DensityMatrix(ghz * cplx(1 - p) + perp * cplx(p));
}

}  // namespace shadownet::stabsim
