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
#include <set>

#include "shadownet/error.h"
#include "shadownet/gradnet/train.h"

namespace shadownet::gradnet {

namespace {

void cfg_check(bool ok, const std::string &what) {
    require(ok, ErrorKind::InvalidArgument, "train config: " + what);
}

double get_real(const json &j, const char *key) {
    const json &v = j.at(key);
    if (!v.is_number()) {
        fail(ErrorKind::SchemaViolation, std::string("train config: ") + key + " must be a number");
    }
    return v.get<double>();
}

uint64_t get_count(const json &j, const char *key) {
    const json &v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
        fail(ErrorKind::SchemaViolation, std::string("train config: ") + key + " must be a non-negative integer");
    }
    return v.get<uint64_t>();
}

}  // namespace

void TrainConfig::validate() const {
    cfg_check(lr > 0 && std::isfinite(lr), "lr must be positive");
    cfg_check(beta1 > 0 && beta1 < 1, "beta1 must lie in (0, 1)");
    cfg_check(beta2 > 0 && beta2 < 1, "beta2 must lie in (0, 1)");
    cfg_check(eps > 0, "eps must be positive");
    cfg_check(weight_decay >= 0 && std::isfinite(weight_decay), "weight_decay must be non-negative");
    cfg_check(batch_size >= 1, "batch_size must be positive");
    cfg_check(workers >= 1, "workers must be positive");
    cfg_check(checkpoint_every >= 1, "checkpoint_every must be positive");
}

json TrainConfig::to_json() const {
    json j;
    j["lr"] = lr;
    j["beta1"] = beta1;
    j["beta2"] = beta2;
    j["eps"] = eps;
    j["weight_decay"] = weight_decay;
    j["epochs"] = epochs;
    j["batch_size"] = batch_size;
    j["seed"] = seed;
    j["checkpoint_every"] = checkpoint_every;
    return j;
}

TrainConfig TrainConfig::from_json(const json &j) {
    if (!j.is_object()) {
        fail(ErrorKind::SchemaViolation, "train config must be an object");
    }
    static const std::set<std::string> keys = {"lr",     "beta1",      "beta2", "eps", "weight_decay",
                                               "epochs", "batch_size", "seed",  "checkpoint_every"};
    for (const auto &[k, v] : j.items()) {
        if (!keys.count(k)) {
            fail(ErrorKind::SchemaViolation, "train config: unknown key '" + k + "'");
        }
    }
    TrainConfig c;
    if (j.contains("lr")) {
        c.lr = get_real(j, "lr");
    }
    if (j.contains("beta1")) {
        c.beta1 = get_real(j, "beta1");
    }
    if (j.contains("beta2")) {
        c.beta2 = get_real(j, "beta2");
    }
    if (j.contains("eps")) {
        c.eps = get_real(j, "eps");
    }
    if (j.contains("weight_decay")) {
        c.weight_decay = get_real(j, "weight_decay");
    }
    if (j.contains("epochs")) {
        c.epochs = get_count(j, "epochs");
    }
    if (j.contains("batch_size")) {
        c.batch_size = get_count(j, "batch_size");
    }
    if (j.contains("seed")) {
        c.seed = get_count(j, "seed");
    }
    if (j.contains("checkpoint_every")) {
        c.checkpoint_every = get_count(j, "checkpoint_every");
    }
    c.validate();
    return c;
}

AdamState AdamState::zeros(const Model &model) {
    AdamState s;
    for (const auto &p : model.params()) {
        s.m.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
        s.v.push_back(Mat::Zero(p.value.rows(), p.value.cols()));
    }
    return s;
}

void adamw_step(std::vector<Param> &params, const std::vector<Mat> &grads, AdamState &state, const TrainConfig &cfg) {
    require(grads.size() == params.size() && state.m.size() == params.size() && state.v.size() == params.size(),
            ErrorKind::ShapeMismatch, "adamw_step: parameter, gradient and state counts differ");
    state.step++;
    double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step));
    double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step));
    for (size_t i = 0; i < params.size(); i++) {
        Mat &w = params[i].value;
        require(grads[i].rows() == w.rows() && grads[i].cols() == w.cols() && state.m[i].rows() == w.rows() &&
                    state.m[i].cols() == w.cols(),
                ErrorKind::ShapeMismatch, "adamw_step: shape mismatch for " + params[i].name);
        w *= 1.0 - cfg.lr * cfg.weight_decay;
        state.m[i] = cfg.beta1 * state.m[i] + (1.0 - cfg.beta1) * grads[i];
        state.v[i] = cfg.beta2 * state.v[i] + (1.0 - cfg.beta2) * grads[i].cwiseProduct(grads[i]);
        w.array() -= cfg.lr * (state.m[i].array() / c1) / ((state.v[i].array() / c2).sqrt() + cfg.eps);
    }
}

}  // namespace shadownet::gradnet
