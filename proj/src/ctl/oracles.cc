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

#include "shadownet/ctl.h"
#include "shadownet/error.h"
#include "shadownet/gradnet/tape.h"
#include "shadownet/shadows.h"
#include "shadownet/stabsim.h"

namespace shadownet::ctl {

namespace {

using qmat::ComplexMatrix;
using qmat::DensityMatrix;
using spinsys::Pauli;

double dense_expectation(const DensityMatrix &rho, const std::vector<Pauli> &ops, double sign = 1.0) {
    return qmat::expectation(rho, spinsys::pauli_matrix(spinsys::PauliTerm{sign, ops}));
}

ComplexMatrix basis_rotation(Basis b) {
    if (b == Basis::X) {
        return qmat::hadamard();
    }
    if (b == Basis::Y) {
        return qmat::hadamard() * qmat::phase_s().adjoint();
    }
    return qmat::pauli_i();
}

stabsim::CliffordCircuit random_circuit(size_t n, size_t depth, RngStream &rng) {
    stabsim::CliffordCircuit c(n);
    for (size_t k = 0; k < depth; k++) {
        size_t q = rng.below(n);
        if (rng.below(2) == 0) {
            c.add_h(q);
            c.add_noise1(q);
        } else {
            size_t r = (q + 1 + rng.below(n - 1)) % n;
            c.add_cnot(q, r);
            c.add_noise2(q, r);
        }
    }
    return c;
}

}  // namespace

OracleResult oracle_fidelity(uint64_t seed) {
    OracleResult res{"fidelity-oracles", true, json::object()};
    RngStream rng(seed);
    const double grid[3] = {0.0, 0.05, 0.1};
    constexpr int kReps = 20;
    constexpr size_t kTraj = 400;
    double worst_diff = 0;
    int worst_hits = kReps;
    json rows = json::array();
    for (size_t n : {2, 4, 6}) {
        for (auto kind : {stabsim::GhzKind::Global, stabsim::GhzKind::Local}) {
            stabsim::CliffordCircuit c = stabsim::ghz_circuit(n, kind);
            DensityMatrix ideal = DensityMatrix::from_pure(kind == stabsim::GhzKind::Global ? stabsim::ghz_state(n)
                                                                                            : stabsim::plus_state(n));
            for (double p1 : grid) {
                for (double p2 : grid) {
                    stabsim::NoiseModel noise(p1, p2);
                    double exact = stabsim::exact_fidelity(c, noise);
                    double dense = qmat::fidelity(stabsim::dense_noisy_state(c, noise), ideal);
                    double diff = std::abs(exact - dense);
                    worst_diff = std::max(worst_diff, diff);
                    int hits = 0;
                    for (int r = 0; r < kReps; r++) {
                        RngStream stream = rng.child(rows.size() * kReps + r);
                        stabsim::McEstimate mc = stabsim::mc_fidelity(c, noise, kTraj, stream);
                        hits += std::abs(mc.estimate - exact) <= 4 * mc.std_error;
                    }
                    worst_hits = std::min(worst_hits, hits);
                    rows.push_back({{"n", n},
                                    {"kind", kind == stabsim::GhzKind::Global ? "global" : "local"},
                                    {"p1", p1},
                                    {"p2", p2},
                                    {"exact", exact},
                                    {"dense_diff", diff},
                                    {"mc_within_4se", hits}});
                }
            }
        }
    }
    res.pass = worst_diff <= 1e-10 && worst_hits >= 19;
    res.details = {{"cases", rows.size()},
                   {"max_exact_vs_dense", worst_diff},
                   {"min_mc_hits_of_20", worst_hits},
                   {"tolerance", 1e-10},
                   {"rows", rows}};
    return res;
}

OracleResult oracle_stabilizer_vs_dense(uint64_t seed) {
    OracleResult res{"stabilizer-vs-dense", true, json::object()};
    RngStream rng(seed);
    double worst_expectation = 0;
    for (int trial = 0; trial < 30; trial++) {
        size_t n = 2 + trial % 4;
        stabsim::CliffordCircuit c = random_circuit(n, 20, rng);
        stabsim::Tableau t = stabsim::run_noiseless(c);
        DensityMatrix rho = stabsim::dense_noisy_state(c, stabsim::NoiseModel::noiseless());
        for (int k = 0; k < 20; k++) {
            std::vector<Pauli> ops(n);
            for (auto &p : ops) {
                p = static_cast<Pauli>(rng.below(4));
            }
            double tab = t.expectation(stabsim::PauliString::from_ops(ops));
            worst_expectation = std::max(worst_expectation, std::abs(tab - dense_expectation(rho, ops)));
        }
    }
    // Noisy measurement statistics: trajectories plus basis measurement
    // against the Born distribution of the exact channel.
    constexpr size_t kShots = 20000;
    double worst_z = 0;
    for (int trial = 0; trial < 6; trial++) {
        size_t n = 2 + trial % 2;
        stabsim::CliffordCircuit c = random_circuit(n, 8, rng);
        stabsim::NoiseModel noise(0.1, 0.15);
        std::vector<Basis> bases(n);
        std::vector<ComplexMatrix> rot;
        for (auto &b : bases) {
            b = static_cast<Basis>(rng.below(3));
            rot.push_back(basis_rotation(b));
        }
        std::vector<double> born = qmat::rotated_diagonal(stabsim::dense_noisy_state(c, noise).mat(), rot);
        std::vector<double> counts(born.size(), 0.0);
        for (size_t s = 0; s < kShots; s++) {
            RngStream stream = rng.child(1000000 + trial * kShots + s);
            RngStream traj = stream.child(0), meas = stream.child(1);
            std::vector<uint8_t> bits = stabsim::measure_in_bases(stabsim::run_trajectory(c, noise, traj), bases, meas);
            size_t idx = 0;
            for (size_t q = 0; q < n; q++) {
                idx = (idx << 1) | bits[q];
            }
            counts[idx] += 1;
        }
        for (size_t i = 0; i < born.size(); i++) {
            double f = counts[i] / kShots, p = born[i];
            double se = std::sqrt(std::max(p * (1 - p), 1e-12) / kShots);
            worst_z = std::max(worst_z, std::abs(f - p) / se);
        }
    }
    res.pass = worst_expectation <= 1e-10 && worst_z <= 5.0;
    res.details = {{"max_expectation_diff", worst_expectation},
                   {"max_outcome_z", worst_z},
                   {"expectation_tolerance", 1e-10},
                   {"z_limit", 5.0}};
    return res;
}

OracleResult oracle_shadow_unbiased(uint64_t seed) {
    OracleResult res{"shadow-unbiased", true, json::object()};
    RngStream rng(seed);
    constexpr size_t kSnapshots = 200000;
    constexpr size_t kStates = 5;
    double worst_entry = 0, worst_pauli = 0;
    size_t comparisons = 0;
    for (size_t st = 0; st < kStates; st++) {
        RngStream state_rng = rng.child(2 * st);
        DensityMatrix rho = qmat::random_density_matrix(4, state_rng);
        shadows::ShadowSet ss = shadows::collect_dense(rho, kSnapshots, rng.child(2 * st + 1));
        // Entry statistics over per-snapshot inverse snapshots.
        ComplexMatrix locals[3][2];
        for (int b = 0; b < 3; b++) {
            for (int bit = 0; bit < 2; bit++) {
                locals[b][bit] = shadows::local_inverse(static_cast<Basis>(b), static_cast<uint8_t>(bit));
            }
        }
        std::vector<double> sum(32, 0.0), sum2(32, 0.0);
        for (size_t m = 0; m < kSnapshots; m++) {
            ComplexMatrix snap = qmat::kron(locals[static_cast<int>(ss.basis(m, 0))][ss.bit(m, 0)],
                                            locals[static_cast<int>(ss.basis(m, 1))][ss.bit(m, 1)]);
            for (size_t e = 0; e < 16; e++) {
                double re = snap.entries()[e].real(), im = snap.entries()[e].imag();
                sum[2 * e] += re;
                sum2[2 * e] += re * re;
                sum[2 * e + 1] += im;
                sum2[2 * e + 1] += im * im;
            }
        }
        ComplexMatrix mean = shadows::shadow_state(ss);
        for (size_t e = 0; e < 16; e++) {
            for (int part = 0; part < 2; part++) {
                size_t k = 2 * e + part;
                double mu = sum[k] / kSnapshots;
                double se = std::sqrt(std::max(sum2[k] / kSnapshots - mu * mu, 0.0) / kSnapshots);
                double target = part == 0 ? rho.mat().entries()[e].real() : rho.mat().entries()[e].imag();
                double got = part == 0 ? mean.entries()[e].real() : mean.entries()[e].imag();
                double z = se > 0 ? std::abs(got - target) / se : (std::abs(got - target) <= 1e-12 ? 0.0 : 1e300);
                worst_entry = std::max(worst_entry, z);
                comparisons++;
            }
        }
        for (int a = 0; a < 4; a++) {
            for (int b = 0; b < 4; b++) {
                if (a == 0 && b == 0) {
                    continue;
                }
                std::vector<Pauli> ops = {static_cast<Pauli>(a), static_cast<Pauli>(b)};
                std::vector<double> v = shadows::pauli_snapshot_values(ss, spinsys::PauliTerm{1.0, ops});
                Aggregate agg = aggregate(v);
                double se = agg.std / std::sqrt(static_cast<double>(v.size()));
                double z = std::abs(agg.mean - dense_expectation(rho, ops)) / se;
                worst_pauli = std::max(worst_pauli, z);
                comparisons++;
            }
        }
    }
    res.pass = worst_entry <= 5.0 && worst_pauli <= 5.0;
    res.details = {{"states", kStates},
                   {"snapshots", kSnapshots},
                   {"comparisons", comparisons},
                   {"max_entry_z", worst_entry},
                   {"max_pauli_z", worst_pauli},
                   {"z_limit", 5.0}};
    return res;
}

OracleResult oracle_grad(uint64_t seed) {
    OracleResult res{"grad", true, json::object()};
    json rows = json::array();
    double worst = 0;
    struct Case {
        qsldata::Task task;
        size_t n;
        size_t width;
    };
    for (Case c : {Case{qsldata::Task::Qst, 2, 2}, Case{qsldata::Task::Qst, 3, 2}, Case{qsldata::Task::Dfe, 4, 10},
                   Case{qsldata::Task::Dfe, 6, 10}}) {
        gradnet::ModelConfig mc;
        mc.task = c.task;
        mc.n_qubits = c.n;
        mc.token_dim = c.width;
        gradnet::Model model(mc, seed);
        gradnet::GradCheckReport r = gradnet::grad_check(model, seed + c.n);
        worst = std::max(worst, r.max_rel_error);
        rows.push_back({{"task", qsldata::task_name(c.task)},
                        {"n_qubits", c.n},
                        {"params", r.num_params},
                        {"coordinates", r.coordinates},
                        {"max_rel_error", r.max_rel_error}});
    }
    res.pass = worst <= 1e-4;
    res.details = {{"max_rel_error", worst}, {"tolerance", 1e-4}, {"models", rows}};
    return res;
}

OracleResult oracle_bounds() {
    OracleResult res{"bounds", true, json::object()};
    // Direct evaluation of sum_i |alpha_i| sqrt(34 3^k_i / R) per term.
    auto direct = [](const spinsys::Hamiltonian &h, size_t m, size_t k) {
        double r = static_cast<double>(m / k), total = 0;
        for (const auto &t : h.terms()) {
            if (t.weight() > 0) {
                total += std::abs(t.coeff) * std::sqrt(34.0 * std::pow(3.0, t.weight()) / r);
            }
        }
        return total;
    };
    json rows = json::array();
    double worst = 0;
    auto check = [&](const std::string &name, const spinsys::Hamiltonian &h, size_t m) {
        double got = shadows::energy_bound(h, m, 5, 0.05), want = direct(h, m, 5);
        worst = std::max(worst, std::abs(got - want));
        rows.push_back({{"case", name}, {"m", m}, {"bound", got}, {"direct", want}});
    };
    check("tfim5", spinsys::build_tfim(5, 0.5, 1), 10000);
    check("tfim5", spinsys::build_tfim(5, 0.5, 1), 10);
    check("xxz5", spinsys::build_xxz_uniform(5, 3), 10000);
    shadows::PauliDecomposition bell = shadows::ghz_pauli_decomposition(2);
    double bell_bound = shadows::fidelity_bound(bell, 2000, 5, 0.05);
    double bell_direct = 0.25 * 3 * std::sqrt(34.0 * 9 / 400);
    worst = std::max(worst, std::abs(bell_bound - bell_direct));
    rows.push_back({{"case", "bell"}, {"m", 2000}, {"bound", bell_bound}, {"direct", bell_direct}});
    res.pass = worst <= 1e-12;
    res.details = {{"max_abs_diff", worst}, {"rows", rows}};
    return res;
}

OracleResult oracle_cholesky(uint64_t seed, size_t samples) {
    OracleResult res{"cholesky", true, json::object()};
    RngStream rng(seed);
    bool hermitian = true;
    double min_eig = 1e300, worst_trace = 0;
    for (size_t s = 0; s < samples; s++) {
        size_t d = s % 2 == 0 ? 4 : 8;
        gradnet::Mat raw(d * d, 2);
        for (Eigen::Index i = 0; i < raw.size(); i++) {
            raw.data()[i] = rng.normal();
        }
        gradnet::Tape tape;
        gradnet::Mat out = gradnet::cholesky_head(tape.constant(raw), 1, d).value();
        ComplexMatrix rho = gradnet::rows_state(out, 0, d);
        hermitian = hermitian && rho == rho.adjoint();
        min_eig = std::min(min_eig, qmat::herm_eig(rho).values.front());
        worst_trace = std::max(worst_trace, std::abs(rho.trace().real() - 1.0));
    }
    res.pass = hermitian && min_eig >= -1e-12 && worst_trace <= 1e-12;
    res.details = {{"samples", samples},
                   {"hermitian_exact", hermitian},
                   {"min_eigenvalue", min_eig},
                   {"max_trace_error", worst_trace}};
    return res;
}

std::vector<std::string> oracle_names() {
    return {"fidelity-oracles", "stabilizer-vs-dense", "shadow-unbiased", "grad", "bounds", "cholesky", "all"};
}

std::vector<OracleResult> run_oracle(const std::string &name) {
    if (name == "fidelity-oracles") {
        return {oracle_fidelity()};
    }
    if (name == "stabilizer-vs-dense") {
        return {oracle_stabilizer_vs_dense()};
    }
    if (name == "shadow-unbiased") {
        return {oracle_shadow_unbiased()};
    }
    if (name == "grad") {
        return {oracle_grad()};
    }
    if (name == "bounds") {
        return {oracle_bounds()};
    }
    if (name == "cholesky") {
        return {oracle_cholesky()};
    }
    if (name == "all") {
        return {oracle_fidelity(), oracle_stabilizer_vs_dense(), oracle_shadow_unbiased(),
                oracle_grad(),     oracle_bounds(),              oracle_cholesky()};
    }
    fail(ErrorKind::InvalidArgument, "unknown oracle check '" + name + "'");
}

}  // namespace shadownet::ctl
