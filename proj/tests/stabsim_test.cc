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

#include "shadownet/stabsim.h"

#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "gtest/gtest.h"
#include "shadownet/error.h"

using namespace shadownet;
using namespace shadownet::stabsim;
using qmat::ComplexMatrix;
using qmat::cplx;

namespace {

PauliString ps(const std::string &label, bool negative = false) {
    auto ops = spinsys::PauliTerm::from_label(label).ops;
    return PauliString::from_ops(ops, negative);
}

double dense_pauli(const ComplexMatrix &rho, const PauliString &p) {
    spinsys::PauliTerm t{p.negative ? -1.0 : 1.0, p.ops()};
    cplx v = 0;
    ComplexMatrix m = spinsys::pauli_matrix(t);
    for (size_t r = 0; r < rho.dim(); r++) {
        for (size_t c = 0; c < rho.dim(); c++) {
            v += rho(r, c) * m(c, r);
        }
    }
    return v.real();
}

PauliString random_pauli(size_t n, RngStream &rng) {
    PauliString p(n);
    for (size_t q = 0; q < n; q++) {
        p.set(q, static_cast<Pauli>(rng.below(4)));
    }
    p.negative = rng.below(2);
    return p;
}

// Applies the same random Clifford sequence to a tableau and a dense matrix.
void random_clifford(Tableau &t, ComplexMatrix &rho, size_t n, size_t depth, RngStream &rng) {
    ComplexMatrix s = qmat::phase_s();
    ComplexMatrix sd = s.adjoint();
    for (size_t k = 0; k < depth; k++) {
        size_t q = rng.below(n);
        switch (rng.below(5)) {
            case 0:
                t.h(q);
                qmat::apply_1q(rho, n, q, qmat::hadamard());
                break;
            case 1:
                t.s(q);
                qmat::apply_1q(rho, n, q, s);
                break;
            case 2:
                t.s_dag(q);
                qmat::apply_1q(rho, n, q, sd);
                break;
            case 3: {
                size_t r = (q + 1 + rng.below(n - 1)) % n;
                t.cnot(q, r);
                apply_cnot(rho, n, q, r);
                break;
            }
            default: {
                auto p = static_cast<Pauli>(1 + rng.below(3));
                t.apply_pauli(q, p);
                ComplexMatrix u = p == Pauli::X ? qmat::pauli_x() : p == Pauli::Y ? qmat::pauli_y() : qmat::pauli_z();
                qmat::apply_1q(rho, n, q, u);
            }
        }
    }
}

ComplexMatrix zero_state(size_t n) {
    ComplexMatrix rho(size_t{1} << n);
    rho(0, 0) = 1;
    return rho;
}

double chi2_critical(size_t dof) {
    return boost::math::quantile(boost::math::complement(boost::math::chi_squared(static_cast<double>(dof)), 0.001));
}

}  // namespace

TEST(stabsim, ghz_circuit_layout) {
    CliffordCircuit g = ghz_circuit(3, GhzKind::Global);
    std::vector<Instruction> expected = {{OpKind::H, 0}, {OpKind::CNOT, 0, 1}, {OpKind::CNOT, 1, 2}};
    EXPECT_EQ(g.gates(), expected);
    std::vector<Instruction> noise = {{OpKind::Noise1, 0}, {OpKind::Noise2, 0, 1}, {OpKind::Noise2, 1, 2}};
    EXPECT_EQ(g.noise_sites(), noise);
    // Each gate is immediately followed by its noise site.
    for (size_t i = 0; i < g.instructions().size(); i += 2) {
        EXPECT_TRUE(g.instructions()[i].is_gate());
        EXPECT_EQ(g.instructions()[i + 1].q0, g.instructions()[i].q0);
    }

    CliffordCircuit l = ghz_circuit(2, GhzKind::Local);
    std::vector<Instruction> lg = {{OpKind::H, 0}, {OpKind::H, 1}};
    EXPECT_EQ(l.gates(), lg);
    EXPECT_THROW(ghz_circuit(0, GhzKind::Global), Error);
}

TEST(stabsim, noiseless_ghz_stabilizers) {
    Tableau t = run_noiseless(ghz_circuit(3, GhzKind::Global));
    EXPECT_EQ(t.expectation(ps("XXX")), 1);
    EXPECT_EQ(t.expectation(ps("ZZI")), 1);
    EXPECT_EQ(t.expectation(ps("IZZ")), 1);
    EXPECT_EQ(t.expectation(ps("YYX")), -1);
    EXPECT_EQ(t.expectation(ps("ZII")), 0);
    EXPECT_TRUE(t.is_valid());
}

TEST(stabsim, ghz_z_measurements_are_correlated) {
    CliffordCircuit c = ghz_circuit(3, GhzKind::Global);
    Tableau ideal = run_noiseless(c);
    RngStream rng(1);
    int ones = 0;
    const int shots = 2000;
    std::vector<Basis> zzz(3, Basis::Z);
    for (int s = 0; s < shots; s++) {
        auto bits = measure_in_bases(ideal, zzz, rng);
        EXPECT_TRUE(bits[0] == bits[1] && bits[1] == bits[2]);
        ones += bits[0];
    }
    EXPECT_NEAR(ones, shots / 2, 3 * std::sqrt(shots / 4.0));
}

TEST(stabsim, expectation_matches_dense_on_random_cliffords) {
    RngStream rng(7);
    for (int trial = 0; trial < 40; trial++) {
        size_t n = 2 + trial % 4;
        Tableau t(n);
        ComplexMatrix rho = zero_state(n);
        random_clifford(t, rho, n, 30, rng);
        ASSERT_TRUE(t.is_valid());
        for (int k = 0; k < 30; k++) {
            PauliString p = random_pauli(n, rng);
            EXPECT_NEAR(t.expectation(p), dense_pauli(rho, p), 1e-10);
        }
        for (size_t i = 0; i < n; i++) {
            EXPECT_NEAR(dense_pauli(rho, t.stabilizer(i)), 1.0, 1e-10);
        }
    }
}

TEST(stabsim, project_plus_matches_dense_and_collapses) {
    RngStream rng(8);
    for (int trial = 0; trial < 40; trial++) {
        size_t n = 2 + trial % 3;
        Tableau t(n);
        ComplexMatrix rho = zero_state(n);
        random_clifford(t, rho, n, 25, rng);
        PauliString p = random_pauli(n, rng);
        double expected = 0.5 * (1 + dense_pauli(rho, p));
        EXPECT_NEAR(t.project_plus(p), expected, 1e-10);
        ASSERT_TRUE(t.is_valid());
        if (expected > 0.25) {
            EXPECT_EQ(t.expectation(p), 1);
        }
    }
}

TEST(stabsim, measure_z_collapses_consistently) {
    RngStream rng(9);
    for (int trial = 0; trial < 40; trial++) {
        size_t n = 3;
        Tableau t(n);
        ComplexMatrix rho = zero_state(n);
        random_clifford(t, rho, n, 20, rng);
        size_t q = rng.below(n);
        int b = t.measure_z(q, rng);
        PauliString z(n);
        z.set(q, Pauli::Z);
        EXPECT_EQ(t.expectation(z), b ? -1 : 1);
        EXPECT_EQ(t.measure_z(q, rng), b);
        EXPECT_TRUE(t.is_valid());
    }
}

TEST(stabsim, wide_tableau_crosses_word_boundary) {
    CliffordCircuit c = ghz_circuit(130, GhzKind::Global);
    Tableau t = run_noiseless(c);
    EXPECT_TRUE(t.is_valid());
    PauliString allx(130);
    PauliString zz(130);
    for (size_t q = 0; q < 130; q++) {
        allx.set(q, Pauli::X);
    }
    zz.set(63, Pauli::Z);
    zz.set(64, Pauli::Z);
    EXPECT_EQ(t.expectation(allx), 1);
    EXPECT_EQ(t.expectation(zz), 1);
    RngStream rng(3);
    std::vector<Basis> zs(130, Basis::Z);
    auto bits = measure_in_bases(t, zs, rng);
    for (auto b : bits) {
        EXPECT_EQ(b, bits[0]);
    }
}

TEST(stabsim, noiseless_trajectory_is_deterministic) {
    CliffordCircuit c = ghz_circuit(4, GhzKind::Global);
    RngStream rng(5);
    Tableau a = run_trajectory(c, NoiseModel::noiseless(), rng);
    Tableau b = run_noiseless(c);
    for (size_t i = 0; i < 4; i++) {
        EXPECT_EQ(a.stabilizer(i), b.stabilizer(i));
    }
}

TEST(stabsim, fully_depolarized_single_qubit) {
    CliffordCircuit c(1);
    c.add_h(0);
    c.add_noise1(0);
    NoiseModel full(1, 0);
    RngStream rng(6);
    const int shots = 100000;
    int zeros_z = 0, zeros_x = 0;
    std::vector<Basis> bz = {Basis::Z}, bx = {Basis::X};
    for (int s = 0; s < shots; s++) {
        RngStream sr = rng.child(s);
        Tableau t = run_trajectory(c, full, sr);
        zeros_z += measure_in_bases(t, bz, sr)[0] == 0;
        zeros_x += measure_in_bases(t, bx, sr)[0] == 0;
    }
    double sigma = std::sqrt(shots * 0.25);
    EXPECT_NEAR(zeros_z, shots / 2.0, 3 * sigma);
    EXPECT_NEAR(zeros_x, shots / 2.0, 3 * sigma);
}

TEST(stabsim, trajectory_ensemble_matches_dense_channel) {
    CliffordCircuit c = ghz_circuit(3, GhzKind::Global);
    NoiseModel noise(0.05, 0.05);
    ComplexMatrix rho = dense_noisy_state(c, noise).mat();
    std::vector<PauliString> probes = {ps("XXX"), ps("ZZI"), ps("IZZ"), ps("YYX"), ps("ZIZ"), ps("XYY")};
    std::vector<double> sum(probes.size(), 0), sum_sq(probes.size(), 0);
    RngStream rng(10);
    const int traj = 100000;
    for (int k = 0; k < traj; k++) {
        RngStream sr = rng.child(k);
        Tableau t = run_trajectory(c, noise, sr);
        for (size_t j = 0; j < probes.size(); j++) {
            double v = t.expectation(probes[j]);
            sum[j] += v;
            sum_sq[j] += v * v;
        }
    }
    for (size_t j = 0; j < probes.size(); j++) {
        double mean = sum[j] / traj;
        double se = std::sqrt((sum_sq[j] / traj - mean * mean) / traj);
        EXPECT_LE(std::abs(mean - dense_pauli(rho, probes[j])), 4 * se + 1e-12) << j;
    }
}

TEST(stabsim, measure_in_bases_single_qubit) {
    Tableau zero(1);
    RngStream rng(12);
    std::vector<Basis> bz = {Basis::Z}, bx = {Basis::X};
    const int shots = 100000;
    int ones = 0;
    for (int s = 0; s < shots; s++) {
        EXPECT_EQ(measure_in_bases(zero, bz, rng)[0], 0);
        ones += measure_in_bases(zero, bx, rng)[0];
    }
    double e = shots / 2.0;
    double chi2 = 2 * (ones - e) * (ones - e) / e;
    EXPECT_LT(chi2, chi2_critical(1));
}

TEST(stabsim, ghz_x_parity_even) {
    Tableau t = run_noiseless(ghz_circuit(3, GhzKind::Global));
    RngStream rng(13);
    std::vector<Basis> bx(3, Basis::X);
    for (int s = 0; s < 500; s++) {
        auto bits = measure_in_bases(t, bx, rng);
        EXPECT_EQ((bits[0] + bits[1] + bits[2]) % 2, 0);
    }
}

TEST(stabsim, measure_in_bases_born_rule) {
    CliffordCircuit c = ghz_circuit(3, GhzKind::Global);
    NoiseModel noise(0.08, 0.1);
    ComplexMatrix rho = dense_noisy_state(c, noise).mat();
    std::vector<std::vector<Basis>> settings = {
        {Basis::X, Basis::Y, Basis::Z}, {Basis::Y, Basis::Y, Basis::X}, {Basis::Z, Basis::Z, Basis::Z}};
    ComplexMatrix sdag_h = qmat::hadamard() * qmat::phase_s().adjoint();
    RngStream rng(14);
    for (const auto &bases : settings) {
        std::vector<ComplexMatrix> rot;
        for (Basis b : bases) {
            rot.push_back(b == Basis::X ? qmat::hadamard() : b == Basis::Y ? sdag_h : qmat::pauli_i());
        }
        std::vector<double> probs = qmat::rotated_diagonal(rho, rot);
        std::vector<double> hist(8, 0);
        const int shots = 100000;
        for (int s = 0; s < shots; s++) {
            RngStream sr = rng.child(s);
            Tableau t = run_trajectory(c, noise, sr);
            auto bits = measure_in_bases(t, bases, sr);
            hist[bits[0] * 4 + bits[1] * 2 + bits[2]] += 1;
        }
        double chi2 = 0;
        size_t dof = 0;
        for (size_t i = 0; i < 8; i++) {
            double e = probs[i] * shots;
            if (e > 1e-9) {
                chi2 += (hist[i] - e) * (hist[i] - e) / e;
                dof++;
            } else {
                EXPECT_EQ(hist[i], 0);
            }
        }
        EXPECT_LT(chi2, chi2_critical(dof - 1));
    }
}

TEST(stabsim, exact_fidelity_noiseless_is_one) {
    for (size_t n : {1, 3, 8}) {
        EXPECT_DOUBLE_EQ(exact_fidelity(ghz_circuit(n, GhzKind::Global), NoiseModel::noiseless()), 1);
        EXPECT_DOUBLE_EQ(exact_fidelity(ghz_circuit(n, GhzKind::Local), NoiseModel::noiseless()), 1);
    }
}

TEST(stabsim, exact_fidelity_closed_forms) {
    for (double p1 : {0.0, 0.02, 0.3}) {
        for (size_t n : {1, 4, 10}) {
            double f = exact_fidelity(ghz_circuit(n, GhzKind::Local), NoiseModel(p1, 0.7));
            EXPECT_NEAR(f, std::pow(1 - p1 / 2, n), 1e-12);
        }
    }
    for (double p2 : {0.0, 0.05, 0.4}) {
        EXPECT_NEAR(exact_fidelity(ghz_circuit(2, GhzKind::Global), NoiseModel(0, p2)), 1 - 0.75 * p2, 1e-12);
    }
}

TEST(stabsim, exact_fidelity_matches_dense_channel) {
    for (size_t n : {2, 4, 6}) {
        for (GhzKind kind : {GhzKind::Global, GhzKind::Local}) {
            CliffordCircuit c = ghz_circuit(n, kind);
            qmat::DensityMatrix ideal = qmat::DensityMatrix::from_pure(kind == GhzKind::Global ? ghz_state(n) : plus_state(n));
            for (double p1 : {0.0, 0.05, 0.1}) {
                for (double p2 : {0.0, 0.05, 0.1}) {
                    NoiseModel noise(p1, p2);
                    double dense = qmat::fidelity(dense_noisy_state(c, noise), ideal);
                    EXPECT_NEAR(exact_fidelity(c, noise), dense, 1e-10) << n << " " << p1 << " " << p2;
                }
            }
        }
    }
}

TEST(stabsim, exact_fidelity_generic_circuit) {
    CliffordCircuit c(3);
    c.add_h(1);
    c.add_noise1(1);
    c.add_cnot(1, 0);
    c.add_noise2(1, 0);
    c.add_h(2);
    c.add_noise1(2);
    c.add_cnot(2, 0);
    c.add_noise2(0, 2);
    c.add_h(1);
    c.add_noise1(1);
    NoiseModel noise(0.07, 0.03);
    qmat::DensityMatrix noisy = dense_noisy_state(c, noise);
    qmat::DensityMatrix ideal = dense_noisy_state(c, NoiseModel::noiseless());
    EXPECT_NEAR(exact_fidelity(c, noise), qmat::fidelity(noisy, ideal), 1e-10);
}

TEST(stabsim, exact_fidelity_limits) {
    try {
        exact_fidelity(ghz_circuit(25, GhzKind::Global), NoiseModel(0.01, 0.01));
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::TooLarge);
    }
    double f = exact_fidelity(ghz_circuit(16, GhzKind::Global), NoiseModel(0.01, 0.02));
    EXPECT_GT(f, 0);
    EXPECT_LT(f, 1);
}

TEST(stabsim, mc_fidelity_noiseless) {
    RngStream rng(15);
    McEstimate e = mc_fidelity(ghz_circuit(5, GhzKind::Global), NoiseModel::noiseless(), 200, rng);
    EXPECT_EQ(e.estimate, 1);
    EXPECT_EQ(e.std_error, 0);
    EXPECT_THROW(mc_fidelity(ghz_circuit(2, GhzKind::Global), NoiseModel::noiseless(), 99, rng), Error);
}

TEST(stabsim, mc_fidelity_agrees_with_exact) {
    RngStream rng(16);
    CliffordCircuit g = ghz_circuit(4, GhzKind::Global);
    NoiseModel ng(0.01, 0.05);
    McEstimate e = mc_fidelity(g, ng, 4000, rng);
    EXPECT_LE(std::abs(e.estimate - exact_fidelity(g, ng)), 4 * e.std_error);

    RngStream rng2(17);
    McEstimate l = mc_fidelity(ghz_circuit(10, GhzKind::Local), NoiseModel(0.02, 0), 4000, rng2);
    EXPECT_LE(std::abs(l.estimate - std::pow(0.99, 10)), 4 * l.std_error);
}

TEST(stabsim, mc_fidelity_coverage) {
    CliffordCircuit g = ghz_circuit(6, GhzKind::Global);
    NoiseModel noise(0.05, 0.1);
    double exact = exact_fidelity(g, noise);
    int covered = 0;
    for (int rep = 0; rep < 20; rep++) {
        RngStream rng = RngStream::keyed(99, {static_cast<uint64_t>(rep)});
        McEstimate e = mc_fidelity(g, noise, 1000, rng);
        covered += std::abs(e.estimate - exact) <= 4 * e.std_error;
    }
    EXPECT_GE(covered, 19);
}

TEST(stabsim, dense_noisy_state_cases) {
    qmat::DensityMatrix bell = dense_noisy_state(ghz_circuit(2, GhzKind::Global), NoiseModel::noiseless());
    EXPECT_LE(bell.mat().max_abs_diff(ghz_state(2).projector()), 1e-12);

    CliffordCircuit c(1);
    c.add_h(0);
    c.add_noise1(0);
    qmat::DensityMatrix mixed = dense_noisy_state(c, NoiseModel(1, 0));
    EXPECT_LE(mixed.mat().max_abs_diff(ComplexMatrix::identity(2) * cplx(0.5)), 1e-12);

    EXPECT_THROW(dense_noisy_state(ghz_circuit(9, GhzKind::Global), NoiseModel::noiseless()), Error);
}

TEST(stabsim, depolarize_2q_full_rate_is_partial_trace) {
    RngStream rng(18);
    qmat::DensityMatrix rho = qmat::random_density_matrix(8, rng);
    ComplexMatrix m = rho.mat();
    depolarize_2q(m, 3, 0, 2, 1.0);
    // Qubits 0 and 2 become maximally mixed and uncorrelated with qubit 1.
    for (size_t r = 0; r < 8; r++) {
        for (size_t c = 0; c < 8; c++) {
            cplx expected = 0;
            if ((r & 5) == (c & 5)) {
                cplx red = 0;
                for (size_t k : {0, 1, 4, 5}) {
                    red += rho.mat()((r & 2) | k, (c & 2) | k);
                }
                expected = red / 4.0;
            }
            EXPECT_NEAR(std::abs(m(r, c) - expected), 0, 1e-14);
        }
    }
}

TEST(stabsim, stateprep_mixture_cases) {
    EXPECT_LE(stateprep_mixture(3, 0).mat().max_abs_diff(ghz_state(3).projector()), 1e-15);
    ComplexMatrix perp = stateprep_mixture(3, 1).mat();
    EXPECT_EQ(perp(2, 2), cplx(1));  // |010>
    EXPECT_NEAR(perp.trace().real(), 1, 1e-15);
    qmat::DensityMatrix ghz = qmat::DensityMatrix::from_pure(ghz_state(4));
    EXPECT_NEAR(qmat::fidelity(stateprep_mixture(4, 0.3), ghz), 0.7, 1e-12);
    EXPECT_THROW(stateprep_mixture(9, 0.1), Error);
}

TEST(stabsim, noise_model_validation) {
    EXPECT_THROW(NoiseModel(-0.1, 0), Error);
    EXPECT_THROW(NoiseModel(0, 1.1), Error);
}
