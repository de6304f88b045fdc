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

namespace shadownet::ctl {

namespace {

using gradnet::Mat;
using gradnet::Model;
using gradnet::Tape;

std::vector<qmat::ComplexMatrix> predict_states(const Model &model, const std::vector<qsldata::QstExample> &set) {
    size_t d = size_t{1} << model.config().n_qubits;
    std::vector<qmat::ComplexMatrix> out;
    for (size_t start = 0; start < set.size(); start += gradnet::kChunk) {
        size_t count = std::min(gradnet::kChunk, set.size() - start);
        std::vector<const std::vector<double> *> features;
        for (size_t i = 0; i < count; i++) {
            features.push_back(&set[start + i].feature);
        }
        Tape tape;
        Mat rows = model.forward(tape, model.bind(tape, false), model.input_batch(features), count).value();
        for (size_t i = 0; i < count; i++) {
            out.push_back(gradnet::rows_state(rows, i, d));
        }
    }
    return out;
}

std::vector<double> predict_fidelities(const Model &model, const std::vector<qsldata::DfeExample> &set) {
    std::vector<double> out;
    for (size_t start = 0; start < set.size(); start += gradnet::kChunk) {
        size_t count = std::min(gradnet::kChunk, set.size() - start);
        std::vector<const std::vector<double> *> features;
        for (size_t i = 0; i < count; i++) {
            features.push_back(&set[start + i].feature);
        }
        Tape tape;
        Mat y = model.forward(tape, model.bind(tape, false), model.input_batch(features), count).value();
        for (size_t i = 0; i < count; i++) {
            out.push_back(y(static_cast<Eigen::Index>(i), 0));
        }
    }
    return out;
}

void require_task(const Model &model, qsldata::Task task) {
    require(model.config().task == task, ErrorKind::TaskMismatch, "model task does not match the evaluation");
}

}  // namespace

Aggregate aggregate(const std::vector<double> &v) {
    Aggregate a;
    if (v.empty()) {
        return a;
    }
    double n = static_cast<double>(v.size());
    for (double x : v) {
        a.mean += x;
    }
    a.mean /= n;
    double ss = 0;
    for (double x : v) {
        ss += (x - a.mean) * (x - a.mean);
    }
    a.std = std::sqrt(ss / n);
    return a;
}

double energy_of(const qmat::ComplexMatrix &rho, const spinsys::Hamiltonian &h) {
    qmat::ComplexMatrix hm = spinsys::realize(h);
    require(hm.dim() == rho.dim(), ErrorKind::DimMismatch, "energy_of: dimensions differ");
    qmat::cplx tr = 0;
    for (size_t r = 0; r < rho.dim(); r++) {
        for (size_t c = 0; c < rho.dim(); c++) {
            tr += hm(r, c) * rho(c, r);
        }
    }
    return tr.real();
}

namespace {

QstEvaluation finish_qst(const std::vector<qmat::ComplexMatrix> &preds, const std::vector<qsldata::QstExample> &set) {
    QstEvaluation ev;
    std::vector<double> abs_e1;
    for (size_t i = 0; i < set.size(); i++) {
        const auto &e = set[i];
        qmat::DensityMatrix label(e.label);
        qmat::DensityMatrix pred(preds[i]);
        ev.fq.push_back(qmat::fidelity(label, pred));
        ev.e1.push_back(energy_of(preds[i], e.hamiltonian()) - e.surrogate_energy);
        abs_e1.push_back(std::abs(ev.e1.back()));
    }
    ev.fq_agg = aggregate(ev.fq);
    ev.e1_agg = aggregate(ev.e1);
    ev.abs_e1_agg = aggregate(abs_e1);
    return ev;
}

DfeEvaluation finish_dfe(std::vector<double> preds, const std::vector<qsldata::DfeExample> &set) {
    DfeEvaluation ev;
    for (size_t i = 0; i < set.size(); i++) {
        double diff = preds[i] - set[i].label;
        ev.e2.push_back(diff * diff);
    }
    ev.prediction = std::move(preds);
    ev.e2_agg = aggregate(ev.e2);
    return ev;
}

}  // namespace

QstEvaluation evaluate_qst(const StatePredictor &predict, const std::vector<qsldata::QstExample> &set) {
    std::vector<qmat::ComplexMatrix> preds;
    for (const auto &e : set) {
        preds.push_back(predict(e));
    }
    return finish_qst(preds, set);
}

QstEvaluation evaluate_qst(const Model &model, const std::vector<qsldata::QstExample> &set) {
    require_task(model, qsldata::Task::Qst);
    return finish_qst(predict_states(model, set), set);
}

DfeEvaluation evaluate_dfe(const FidelityPredictor &predict, const std::vector<qsldata::DfeExample> &set) {
    std::vector<double> preds;
    for (const auto &e : set) {
        preds.push_back(predict(e));
    }
    return finish_dfe(std::move(preds), set);
}

DfeEvaluation evaluate_dfe(const Model &model, const std::vector<qsldata::DfeExample> &set) {
    require_task(model, qsldata::Task::Dfe);
    return finish_dfe(predict_fidelities(model, set), set);
}

FaithReport faith_report(const Model &model, const qsldata::Dataset &data, qsldata::Split split, size_t k_split,
                         double delta) {
    require(model.config().task == data.manifest.task, ErrorKind::TaskMismatch,
            "model task differs from dataset task");
    int s = static_cast<int>(split);
    if (data.manifest.task == qsldata::Task::Qst) {
        std::vector<qmat::ComplexMatrix> preds = predict_states(model, data.qst[s]);
        size_t i = 0;
        return faith_report_qst([&](const qsldata::QstExample &) { return preds[i++]; }, data.qst[s], k_split, delta);
    }
    std::vector<double> preds = predict_fidelities(model, data.dfe[s]);
    size_t i = 0;
    return faith_report_dfe([&](const qsldata::DfeExample &) { return preds[i++]; }, data.dfe[s], k_split, delta);
}

}  // namespace shadownet::ctl
