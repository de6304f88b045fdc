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

#ifndef SHADOWNET_GRADNET_TRAIN_H
#define SHADOWNET_GRADNET_TRAIN_H

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <vector>

#include "shadownet/gradnet/model.h"
#include "shadownet/qsldata.h"

namespace shadownet::gradnet {

struct TrainConfig {
    double lr = 2e-4;
    double beta1 = 0.9;
    double beta2 = 0.99;
    double eps = 1e-8;
    double weight_decay = 0.01;
    size_t epochs = 100;
    size_t batch_size = 32;
    uint64_t seed = 0;
    int workers = 1;
    /// Checkpoint period in epochs; the final epoch is always saved.
    size_t checkpoint_every = 50;

    /// Throws InvalidArgument on out-of-range values.
    void validate() const;
    json to_json() const;
    static TrainConfig from_json(const json &j);
};

struct AdamState {
    std::vector<Mat> m;
    std::vector<Mat> v;
    uint64_t step = 0;

    static AdamState zeros(const Model &model);
};

/// Decoupled weight decay w -= lr * wd * w, then the bias-corrected Adam
/// update w -= lr * mhat / (sqrt(vhat) + eps).
void adamw_step(std::vector<Param> &params, const std::vector<Mat> &grads, AdamState &state, const TrainConfig &cfg);

/// Mean loss and gradients of a set of examples, accumulated over fixed
/// chunks of kChunk examples in index order so the sum is identical for any
/// worker count.
constexpr size_t kChunk = 8;

struct BatchGrad {
    double loss = 0;
    std::vector<Mat> grads;
};

BatchGrad batch_gradient(const Model &model, const qsldata::Dataset &data, qsldata::Split split,
                         const std::vector<size_t> &indices, int workers);
double mean_loss(const Model &model, const qsldata::Dataset &data, qsldata::Split split, int workers);

struct EpochStats {
    size_t epoch;  // 1-based
    double train_loss;
    std::optional<double> test_loss;
};

struct TrainState {
    Model model;
    AdamState opt;
    size_t epoch = 0;
};

/// Example order of one epoch; a permutation keyed by (seed, epoch).
std::vector<size_t> epoch_order(uint64_t seed, size_t epoch, size_t n);

/// Runs epochs state.epoch + 1 .. cfg.epochs. on_epoch fires after every
/// epoch with the updated state.
void train(TrainState &state, const qsldata::Dataset &data, const TrainConfig &cfg,
           const std::function<void(const EpochStats &, const TrainState &)> &on_epoch = nullptr);

/// Checkpoint file: "QSLW", u32 version, u32 header length, JSON header
/// (model and train config, epoch, step, tensor shapes), f64 parameters,
/// Adam first and second moments, u32 CRC32 of everything before it.
constexpr uint32_t kCheckpointVersion = 1;
void save_checkpoint(const TrainState &state, const TrainConfig &cfg, const std::filesystem::path &path);
struct Checkpoint {
    TrainState state;
    TrainConfig train;
};
Checkpoint load_checkpoint(const std::filesystem::path &path);

struct GradCheckReport {
    double max_rel_error = 0;
    size_t coordinates = 0;
    size_t num_params = 0;
};

/// Central differences with step h on a random subsample of at least
/// min(200, P) parameter coordinates, against a seeded probe batch. The
/// relative error of one coordinate is |a - n| / max(|a|, |n|, 1e-8) and
/// exactly 0 when both vanish.
GradCheckReport grad_check(Model &model, uint64_t seed, size_t coordinates = 256, double h = 1e-5);

}  // namespace shadownet::gradnet

#endif
