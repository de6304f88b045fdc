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

#include "shadownet/qmat.h"

#include <cmath>

#include "gtest/gtest.h"
#include "shadownet/error.h"

using namespace shadownet;
using namespace shadownet::qmat;

namespace {

// Independent triple-loop product, used as an oracle for the Eigen-backed one.
ComplexMatrix naive_mul(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.dim());
    for (size_t i = 0; i < a.dim(); i++) {
        for (size_t j = 0; j < a.dim(); j++) {
            cplx s = 0;
            for (size_t k = 0; k < a.dim(); k++) {
                s += a(i, k) * b(k, j);
            }
            out(i, j) = s;
        }
    }
    return out;
}

}  // namespace

TEST(qmat, kron_identity_and_zz) {
    EXPECT_EQ(kron(pauli_i(), pauli_i()), ComplexMatrix::identity(4));
    EXPECT_EQ(kron(pauli_z(), pauli_z()), ComplexMatrix::diagonal({1, -1, -1, 1}));
}

TEST(qmat, kron_index_formula) {
    ComplexMatrix a = pauli_x(), b = pauli_z();
    ComplexMatrix k = kron(a, b);
    for (size_t r = 0; r < 4; r++) {
        for (size_t c = 0; c < 4; c++) {
            EXPECT_EQ(k(r, c), a(r / 2, c / 2) * b(r % 2, c % 2));
        }
    }
}

TEST(qmat, kron_associative) {
    // Small Gaussian integers keep every product exact.
    RngStream rng(3);
    auto small = [&](size_t dim) {
        ComplexMatrix m(dim);
        for (auto &z : m.entries()) {
            z = cplx(static_cast<double>(rng.below(7)) - 3, static_cast<double>(rng.below(7)) - 3);
        }
        return m;
    };
    ComplexMatrix a = small(2), b = small(3), c = small(2);
    EXPECT_EQ(kron(kron(a, b), c), kron(a, kron(b, c)));
}

TEST(qmat, herm_eig_diagonal) {
    EigenSystem e = herm_eig(ComplexMatrix::diagonal({3, 1, 2}));
    ASSERT_EQ(e.values.size(), 3u);
    EXPECT_NEAR(e.values[0], 1, 1e-12);
    EXPECT_NEAR(e.values[1], 2, 1e-12);
    EXPECT_NEAR(e.values[2], 3, 1e-12);
}

TEST(qmat, herm_eig_pauli_x) {
    EigenSystem e = herm_eig(pauli_x());
    EXPECT_NEAR(e.values[0], -1, 1e-12);
    EXPECT_NEAR(e.values[1], 1, 1e-12);
    // |-> up to phase.
    EXPECT_NEAR(std::abs(e.vectors(0, 0) + e.vectors(1, 0)), 0, 1e-12);
    EXPECT_NEAR(std::abs(e.vectors(0, 1) - e.vectors(1, 1)), 0, 1e-12);
}

TEST(qmat, herm_eig_reconstruction) {
    RngStream rng(11);
    ComplexMatrix a = random_hermitian(8, rng);
    EigenSystem e = herm_eig(a);
    ComplexMatrix lambda(8);
    double sum = 0;
    for (size_t k = 0; k < 8; k++) {
        lambda(k, k) = e.values[k];
        sum += e.values[k];
        if (k > 0) {
            EXPECT_LE(e.values[k - 1], e.values[k]);
        }
    }
    ComplexMatrix rebuilt = naive_mul(naive_mul(e.vectors, lambda), e.vectors.adjoint());
    EXPECT_LE(rebuilt.max_abs_diff(a), 1e-8);
    EXPECT_LE(naive_mul(e.vectors.adjoint(), e.vectors).max_abs_diff(ComplexMatrix::identity(8)), 1e-8);
    EXPECT_NEAR(sum, a.trace().real(), 1e-8);
}

TEST(qmat, herm_eig_rejects_non_hermitian) {
    ComplexMatrix m(2);
    m(0, 1) = 1;
    try {
        herm_eig(m);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
    }
}

TEST(qmat, matmul_matches_naive) {
    RngStream rng(5);
    ComplexMatrix a = random_hermitian(6, rng), b = random_hermitian(6, rng);
    EXPECT_LE((a * b).max_abs_diff(naive_mul(a, b)), 1e-12);
}

TEST(qmat, psd_sqrt_cases) {
    ComplexMatrix s = psd_sqrt(DensityMatrix::maximally_mixed(2));
    EXPECT_LE(s.max_abs_diff(ComplexMatrix::identity(2) * cplx(M_SQRT1_2)), 1e-12);

    PureState plus({M_SQRT1_2, M_SQRT1_2});
    ComplexMatrix proj = plus.projector();
    EXPECT_LE(psd_sqrt(DensityMatrix::from_pure(plus)).max_abs_diff(proj), 1e-8);

    RngStream rng(2);
    DensityMatrix rho = random_density_matrix(4, rng);
    ComplexMatrix r = psd_sqrt(rho);
    EXPECT_LE(naive_mul(r, r).max_abs_diff(rho.mat()), 1e-8);
    EXPECT_TRUE(r.is_hermitian(1e-10));
    for (double v : herm_eig(r).values) {
        EXPECT_GE(v, -1e-9);
    }
}

TEST(qmat, psd_sqrt_squares_back_up_to_dim_64) {
    RngStream rng(8);
    for (size_t dim : {2, 8, 64}) {
        DensityMatrix rho = random_density_matrix(dim, rng, dim / 2);
        ComplexMatrix r = psd_sqrt(rho);
        EXPECT_LE(naive_mul(r, r).max_abs_diff(rho.mat()), 1e-8) << dim;
    }
}

TEST(qmat, fidelity_cases) {
    RngStream rng(9);
    DensityMatrix rho = random_density_matrix(4, rng);
    EXPECT_NEAR(fidelity(rho, rho), 1, 1e-8);
    DensityMatrix zero = DensityMatrix::from_pure(PureState::basis(2, 0));
    DensityMatrix one = DensityMatrix::from_pure(PureState::basis(2, 1));
    EXPECT_NEAR(fidelity(zero, one), 0, 1e-12);
    EXPECT_NEAR(fidelity(zero, DensityMatrix::maximally_mixed(2)), 0.5, 1e-12);
}

TEST(qmat, fidelity_symmetric_and_bounded) {
    RngStream rng(10);
    for (int t = 0; t < 20; t++) {
        DensityMatrix a = random_density_matrix(4, rng);
        DensityMatrix b = random_density_matrix(4, rng, 1 + t % 4);
        double f = fidelity(a, b);
        EXPECT_GE(f, 0);
        EXPECT_LE(f, 1);
        EXPECT_NEAR(f, fidelity(b, a), 1e-8);
    }
}

TEST(qmat, fidelity_dim_mismatch) {
    try {
        fidelity(DensityMatrix::maximally_mixed(2), DensityMatrix::maximally_mixed(4));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::DimMismatch);
    }
}

TEST(qmat, expectation_cases) {
    DensityMatrix zero = DensityMatrix::from_pure(PureState::basis(2, 0));
    EXPECT_DOUBLE_EQ(expectation(zero, pauli_z()), 1);
    EXPECT_DOUBLE_EQ(expectation(DensityMatrix::maximally_mixed(2), pauli_y()), 0);

    RngStream rng(12);
    DensityMatrix rho = random_density_matrix(8, rng);
    ComplexMatrix obs = random_hermitian(8, rng);
    EigenSystem e = herm_eig(obs);
    double oracle = 0;
    for (size_t k = 0; k < 8; k++) {
        cplx q = 0;
        for (size_t r = 0; r < 8; r++) {
            for (size_t c = 0; c < 8; c++) {
                q += std::conj(e.vectors(r, k)) * rho.mat()(r, c) * e.vectors(c, k);
            }
        }
        oracle += e.values[k] * q.real();
    }
    EXPECT_NEAR(expectation(rho, obs), oracle, 1e-10);
}

TEST(qmat, expectation_rejects_non_hermitian) {
    ComplexMatrix m(2);
    m(0, 1) = 1;
    try {
        expectation(DensityMatrix::maximally_mixed(2), m);
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::NotHermitian);
    }
}

TEST(qmat, density_matrix_validation) {
    EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal({0.5, 0.4})), Error);
    EXPECT_THROW(DensityMatrix(ComplexMatrix::diagonal({1.5, -0.5})), Error);
    ComplexMatrix m = ComplexMatrix::diagonal({0.5, 0.5});
    m(0, 1) = 0.1;
    EXPECT_THROW(DensityMatrix{m}, Error);
    EXPECT_THROW(PureState({1.0, 1.0}), Error);
}

TEST(qmat, apply_1q_matches_kron) {
    RngStream rng(13);
    DensityMatrix rho = random_density_matrix(8, rng);
    ComplexMatrix h = hadamard();
    ComplexMatrix out = rho.mat();
    apply_1q(out, 3, 1, h);
    std::vector<ComplexMatrix> f = {pauli_i(), h, pauli_i()};
    ComplexMatrix u = kron_all(f);
    EXPECT_LE(out.max_abs_diff(naive_mul(naive_mul(u, rho.mat()), u.adjoint())), 1e-12);
}

TEST(qmat, rotated_diagonal_matches_dense) {
    RngStream rng(14);
    DensityMatrix rho = random_density_matrix(4, rng);
    std::vector<ComplexMatrix> f = {hadamard(), phase_s()};
    ComplexMatrix u = kron_all(f);
    ComplexMatrix full = naive_mul(naive_mul(u, rho.mat()), u.adjoint());
    std::vector<double> d = rotated_diagonal(rho.mat(), f);
    for (size_t i = 0; i < 4; i++) {
        EXPECT_NEAR(d[i], full(i, i).real(), 1e-12);
    }
}
