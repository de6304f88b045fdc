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

#include <numeric>

#include "shadownet/error.h"
#include "shadownet/gradnet/train.h"
#include "shadownet/parallel.h"
#include "shadownet/rng.h"

namespace shadownet::gradnet {

namespace {

using qsldata::Dataset;
using qsldata::Split;
using qsldata::Task;

struct ChunkInput {
    Mat x;
    Mat labels;
};

ChunkInput chunk_input(const Model &model, const Dataset &data, Split split, const size_t *idx, size_t count) {
    int s = static_cast<int>(split);
    std::vector<const std::vector<double> *> features;
    ChunkInput in;
    if (data.manifest.task == Task::Qst) {
        size_t d = size_t{1} << model.config().n_qubits;
        Eigen::Index D = static_cast<Eigen::Index>(d);
        in.labels.resize(D * static_cast<Eigen::Index>(count), 2 * D);
        for (size_t i = 0; i < count; i++) {
            const auto &e = data.qst[s][idx[i]];
            features.push_back(&e.feature);
            in.labels.middleRows(static_cast<Eigen::Index>(i) * D, D) = state_rows(e.label);
        }
    } else {
        in.labels.resize(static_cast<Eigen::Index>(count), 1);
        for (size_t i = 0; i < count; i++) {
            const auto &e = data.dfe[s][idx[i]];
            features.push_back(&e.feature);
            in.labels(static_cast<Eigen::Index>(i), 0) = e.label;
        }
    }
    in.x = model.input_batch(features);
    return in;
}

void check_compatible(const Model &model, const Dataset &data) {
    const ModelConfig &c = model.config();
    require(c.task == data.manifest.task, ErrorKind::TaskMismatch, "model task differs from dataset task");
    require(c.n_qubits == data.manifest.n_qubits, ErrorKind::TaskMismatch, "model qubit count differs from dataset");
    size_t width = c.task == Task::Qst ? 2 : qsldata::token_dim(data.manifest.feature_mask);
    require(c.token_dim == width, ErrorKind::TaskMismatch, "model token width differs from dataset feature mask");
}

size_t chunks_of(size_t n) {
    return (n + kChunk - 1) / kChunk;
}

}  // namespace

BatchGrad batch_gradient(const Model &model, const Dataset &data, Split split, const std::vector<size_t> &indices,
                         int workers) {
    check_compatible(model, data);
    require(!indices.empty(), ErrorKind::InvalidArgument, "batch_gradient: empty batch");
    double inv = 1.0 / static_cast<double>(indices.size());
    size_t chunks = chunks_of(indices.size());
    std::vector<BatchGrad> parts(chunks);
    parallel_for(chunks, workers, [&](size_t c) {
        size_t start = c * kChunk, count = std::min(kChunk, indices.size() - start);
        ChunkInput in = chunk_input(model, data, split, indices.data() + start, count);
        Tape tape;
        std::vector<Tensor> p = model.bind(tape);
        Tensor out = model.forward(tape, p, in.x, count);
        Tensor loss = squared_error(out, in.labels, inv);
        tape.backward(loss);
        parts[c].loss = loss.value()(0, 0);
        for (const Tensor &t : p) {
            parts[c].grads.push_back(t.grad());
        }
    });
    BatchGrad total = std::move(parts[0]);
    for (size_t c = 1; c < chunks; c++) {
        total.loss += parts[c].loss;
        for (size_t i = 0; i < total.grads.size(); i++) {
            total.grads[i] += parts[c].grads[i];
        }
    }
    return total;
}

double mean_loss(const Model &model, const Dataset &data, Split split, int workers) {
    check_compatible(model, data);
    size_t n = data.size(split);
    require(n > 0, ErrorKind::InvalidArgument, "mean_loss: empty split");
    std::vector<size_t> idx(n);
    std::iota(idx.begin(), idx.end(), size_t{0});
    size_t chunks = chunks_of(n);
    std::vector<double> parts(chunks);
    parallel_for(chunks, workers, [&](size_t c) {
        size_t start = c * kChunk, count = std::min(kChunk, n - start);
        ChunkInput in = chunk_input(model, data, split, idx.data() + start, count);
        Tape tape;
        Tensor out = model.forward(tape, model.bind(tape, false), in.x, count);
        parts[c] = squared_error(out, in.labels, 1.0).value()(0, 0);
    });
    double sum = 0;
    for (double v : parts) {
        sum += v;
    }
    return sum / static_cast<double>(n);
}

std::vector<size_t> epoch_order(uint64_t seed, size_t epoch, size_t n) {
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t{0});
    RngStream rng = RngStream::keyed(seed, {0x73687566666c65ULL, epoch});
    for (size_t i = n; i > 1; i--) {
        std::swap(order[i - 1], order[rng.below(i)]);
    }
    return order;
}

void train(TrainState &state, const Dataset &data, const TrainConfig &cfg,
           const std::function<void(const EpochStats &, const TrainState &)> &on_epoch) {
    cfg.validate();
    check_compatible(state.model, data);
    size_t n = data.size(Split::Train);
    require(n > 0, ErrorKind::InvalidArgument, "train: empty training split");
    if (state.opt.m.empty()) {
        state.opt = AdamState::zeros(state.model);
    }
    bool has_test = data.size(Split::Test) > 0;
    for (size_t epoch = state.epoch + 1; epoch <= cfg.epochs; epoch++) {
        std::vector<size_t> order = epoch_order(cfg.seed, epoch, n);
        double loss_sum = 0;
        for (size_t start = 0; start < n; start += cfg.batch_size) {
            size_t count = std::min(cfg.batch_size, n - start);
            std::vector<size_t> batch(order.begin() + start, order.begin() + start + count);
            BatchGrad g = batch_gradient(state.model, data, Split::Train, batch, cfg.workers);
            loss_sum += g.loss * static_cast<double>(count);
            adamw_step(state.model.params(), g.grads, state.opt, cfg);
        }
        state.epoch = epoch;
        EpochStats stats{epoch, loss_sum / static_cast<double>(n), std::nullopt};
        if (has_test) {
            stats.test_loss = mean_loss(state.model, data, Split::Test, cfg.workers);
        }
        if (on_epoch) {
            on_epoch(stats, state);
        }
    }
}

}  // namespace shadownet::gradnet
