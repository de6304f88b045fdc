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
#include <numeric>

#include "shadownet/gradnet/train.h"
#include "shadownet/rng.h"

namespace shadownet::gradnet {

namespace {

constexpr size_t kProbeBatch = 2;

struct Probe {
    Mat x;
    Mat labels;
};

Probe make_probe(const Model &model, RngStream rng) {
    const ModelConfig &c = model.config();
    Eigen::Index S = static_cast<Eigen::Index>(c.tokens()), B = static_cast<Eigen::Index>(kProbeBatch);
    Probe p;
    p.x.resize(S * B, static_cast<Eigen::Index>(c.token_dim));
    for (Eigen::Index i = 0; i < p.x.size(); i++) {
        p.x.data()[i] = rng.uniform(-1.0, 1.0);
    }
    if (c.task == qsldata::Task::Qst) {
        Eigen::Index d = Eigen::Index{1} << c.n_qubits;
        p.labels.resize(B * d, 2 * d);
        for (Eigen::Index b = 0; b < B; b++) {
            // Random full-rank state G G^dagger / Tr.
            qmat::ComplexMatrix g(static_cast<size_t>(d));
            for (auto &z : g.entries()) {
                z = qmat::cplx(rng.normal(), rng.normal());
            }
            qmat::ComplexMatrix rho = g * g.adjoint();
            double tr = rho.trace().real();
            for (auto &z : rho.entries()) {
                z /= tr;
            }
            p.labels.middleRows(b * d, d) = state_rows(rho);
        }
    } else {
        p.labels.resize(B, 1);
        for (Eigen::Index b = 0; b < B; b++) {
            p.labels(b, 0) = rng.uniform();
        }
    }
    return p;
}

double probe_loss(const Model &model, const Probe &p) {
    Tape tape;
    Tensor out = model.forward(tape, model.bind(tape, false), p.x, kProbeBatch);
    return squared_error(out, p.labels, 1.0 / kProbeBatch).value()(0, 0);
}

}  // namespace

GradCheckReport grad_check(Model &model, uint64_t seed, size_t coordinates, double h) {
    RngStream rng(seed);
    Probe probe = make_probe(model, rng.child(0));

    Tape tape;
    std::vector<Tensor> p = model.bind(tape);
    Tensor loss = squared_error(model.forward(tape, p, probe.x, kProbeBatch), probe.labels, 1.0 / kProbeBatch);
    tape.backward(loss);

    auto &params = model.params();
    std::vector<std::pair<size_t, Eigen::Index>> flat;
    for (size_t i = 0; i < params.size(); i++) {
        for (Eigen::Index k = 0; k < params[i].value.size(); k++) {
            flat.emplace_back(i, k);
        }
    }
    GradCheckReport report;
    report.num_params = flat.size();
    size_t picks = std::min(flat.size(), std::max<size_t>(coordinates, 200));
    RngStream pick = rng.child(1);
    for (size_t i = 0; i < picks; i++) {
        std::swap(flat[i], flat[i + pick.below(flat.size() - i)]);
    }
    for (size_t i = 0; i < picks; i++) {
        auto [pi, k] = flat[i];
        double analytic = p[pi].grad().data()[k];
        double &w = params[pi].value.data()[k];
        double saved = w;
        w = saved + h;
        double up = probe_loss(model, probe);
        w = saved - h;
        double down = probe_loss(model, probe);
        w = saved;
        double numeric = (up - down) / (2 * h);
        double scale = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
        double err = analytic == numeric ? 0.0 : std::abs(analytic - numeric) / scale;
        report.max_rel_error = std::max(report.max_rel_error, err);
    }
    report.coordinates = picks;
    return report;
}

}  // namespace shadownet::gradnet
