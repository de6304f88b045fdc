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
#include <cmath>
#include <optional>

#include "shadownet/error.h"
#include "shadownet/parallel.h"
#include "shadownet/qsldata.h"

namespace shadownet::qsldata {

namespace {

constexpr double kMinGap = 1e-8;
constexpr int kMaxResample = 100;
constexpr double kMaxLabelStderr = 0.005;

spinsys::Hamiltonian build(Family f, size_t n, double coupling, double jx) {
    return f == Family::Tfim ? spinsys::build_tfim(n, coupling, jx) : spinsys::build_xxz_uniform(n, coupling);
}

// Rows of [Re vec(rho_j), Im vec(rho_j), p1, p2] restricted by the mask.
std::vector<double> dfe_tokens(const shadows::ShadowSet &ss, FeatureMask mask, double p1, double p2) {
    std::vector<double> out;
    for (const auto &local : shadows::local_snapshots(ss)) {
        if (mask != FeatureMask::NoiseOnly) {
            for (const auto &z : local.entries()) {
                out.push_back(z.real());
            }
            for (const auto &z : local.entries()) {
                out.push_back(z.imag());
            }
        }
        if (mask != FeatureMask::ShadowOnly) {
            out.push_back(p1);
            out.push_back(p2);
        }
    }
    return out;
}

}  // namespace

RngStream example_stream(uint64_t seed, Split split, size_t index) {
    return RngStream::keyed(seed, {static_cast<uint64_t>(split), static_cast<uint64_t>(index)});
}

spinsys::Hamiltonian QstExample::hamiltonian() const {
    return build(family, n_qubits, coupling, 1.0);
}

QstExample make_qst_example(const Manifest &m, Split split, size_t index) {
    require(m.task == Task::Qst, ErrorKind::TaskMismatch, "manifest is not a QST manifest");
    RngStream stream = example_stream(m.seed, split, index);
    Family family = m.sampling.family;
    if (family == Family::Mixed) {
        family = index % 2 == 0 ? Family::Tfim : Family::Xxz;
    }
    Range range = family == Family::Tfim ? m.sampling.jz : m.sampling.delta;
    RngStream coupling_stream = stream.child(0);
    for (int attempt = 0; attempt < kMaxResample; attempt++) {
        double coupling = coupling_stream.uniform(range.lo, range.hi);
        spinsys::Hamiltonian h = build(family, m.n_qubits, coupling, m.sampling.jx);
        spinsys::GroundState g = spinsys::ground_state(h);
        if (g.gap < kMinGap) {
            continue;
        }
        shadows::ShadowSet ss = shadows::collect_dense(g.state, m.m_shots, stream.child(1));
        qmat::ComplexMatrix est = shadows::shadow_state(ss);
        std::vector<double> feature;
        feature.reserve(2 * est.entries().size());
        for (const auto &z : est.entries()) {
            feature.push_back(z.real());
            feature.push_back(z.imag());
        }
        double energy_est = shadows::estimate_energy(ss, h, m.k_split);
        double bound = shadows::energy_bound(h, m.m_shots, m.k_split, m.delta);
        return QstExample{m.n_qubits, family, coupling,   std::move(feature), g.state.mat(), g.energy,
                          energy_est, bound,  g.gap,      std::move(ss)};
    }
    fail(ErrorKind::ResampleLimit, "no non-degenerate ground state after 100 coupling draws");
}

DfeExample make_dfe_example(const Manifest &m, Split split, size_t index) {
    require(m.task == Task::Dfe, ErrorKind::TaskMismatch, "manifest is not a DFE manifest");
    RngStream stream = example_stream(m.seed, split, index);
    RngStream params = stream.child(0);
    if (m.is_stateprep()) {
        double p = params.uniform(m.sampling.p.lo, m.sampling.p.hi);
        qmat::DensityMatrix rho = stabsim::stateprep_mixture(m.n_qubits, p);
        shadows::ShadowSet ss = shadows::collect_dense(rho, m.m_shots, stream.child(1));
        std::vector<double> tokens = dfe_tokens(ss, FeatureMask::ShadowOnly, 0, 0);
        return DfeExample{m.n_qubits, DfeKind::StatePrep, 8, std::move(tokens), 1 - p, 0.0, 0.0, 0.0, p,
                          std::move(ss)};
    }
    DfeKind kind = m.sampling.kind;
    if (kind == DfeKind::Mixed) {
        kind = index % 2 == 0 ? DfeKind::Global : DfeKind::Local;
    }
    double p1 = params.uniform(m.sampling.p1.lo, m.sampling.p1.hi);
    double p2 = params.uniform(m.sampling.p2.lo, m.sampling.p2.hi);
    stabsim::NoiseModel noise(p1, p2);
    auto circuit =
        stabsim::ghz_circuit(m.n_qubits, kind == DfeKind::Global ? stabsim::GhzKind::Global : stabsim::GhzKind::Local);
    shadows::ShadowSet ss = shadows::collect_stabilizer(circuit, noise, m.m_shots, stream.child(1));
    double label, stderr_label = 0;
    if (m.n_qubits <= stabsim::kMaxExactFidelityQubits) {
        label = stabsim::exact_fidelity(circuit, noise);
    } else {
        RngStream mc = stream.child(2);
        stabsim::McEstimate e = stabsim::mc_fidelity(circuit, noise, m.mc_trajectories, mc);
        if (e.std_error > kMaxLabelStderr) {
            RngStream again = stream.child(3);
            e = stabsim::mc_fidelity(circuit, noise, 4 * m.mc_trajectories, again);
        }
        label = std::clamp(e.estimate, 0.0, 1.0);
        stderr_label = e.std_error;
    }
    std::vector<double> tokens = dfe_tokens(ss, m.feature_mask, p1, p2);
    return DfeExample{m.n_qubits, kind,         token_dim(m.feature_mask), std::move(tokens), label, stderr_label,
                      p1,         p2,           0.0,                       std::move(ss)};
}

Dataset generate(const Manifest &m, int workers) {
    m.validate();
    Dataset d;
    d.manifest = m;
    for (Split split : {Split::Train, Split::Test}) {
        size_t count = m.count(split);
        int s = static_cast<int>(split);
        if (m.task == Task::Qst) {
            std::vector<std::optional<QstExample>> slots(count);
            parallel_for(count, workers, [&](size_t i) { slots[i] = make_qst_example(m, split, i); });
            for (auto &e : slots) {
                d.qst[s].push_back(std::move(*e));
            }
        } else {
            std::vector<std::optional<DfeExample>> slots(count);
            parallel_for(count, workers, [&](size_t i) { slots[i] = make_dfe_example(m, split, i); });
            for (auto &e : slots) {
                d.dfe[s].push_back(std::move(*e));
            }
        }
    }
    return d;
}

Dataset gen_qst(const Manifest &m, int workers) {
    require(m.task == Task::Qst, ErrorKind::TaskMismatch, "gen_qst needs a QST manifest");
    return generate(m, workers);
}

Dataset gen_dfe(const Manifest &m, int workers) {
    require(m.task == Task::Dfe && !m.is_stateprep(), ErrorKind::TaskMismatch, "gen_dfe needs a GHZ DFE manifest");
    return generate(m, workers);
}

Dataset gen_stateprep(const Manifest &m, int workers) {
    require(m.is_stateprep(), ErrorKind::TaskMismatch, "gen_stateprep needs a state-prep manifest");
    return generate(m, workers);
}

double qst_audit_violation_fraction(const Dataset &d) {
    size_t total = 0, bad = 0;
    for (const auto &split : d.qst) {
        for (const auto &e : split) {
            total++;
            bad += std::abs(e.shadow_energy_estimate - e.surrogate_energy) > e.shadow_energy_bound;
        }
    }
    return total ? static_cast<double>(bad) / static_cast<double>(total) : 0.0;
}

}  // namespace shadownet::qsldata
