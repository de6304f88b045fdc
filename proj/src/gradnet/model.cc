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
#include "shadownet/gradnet/model.h"
#include "shadownet/rng.h"

namespace shadownet::gradnet {

namespace {

void param_check(bool ok, const std::string &what) {
    require(ok, ErrorKind::InvalidArgument, "model config: " + what);
}

size_t get_size(const json &j, const char *key) {
    const json &v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
        fail(ErrorKind::SchemaViolation, std::string("model config: ") + key + " must be a non-negative integer");
    }
    return v.get<size_t>();
}

// Glorot uniform with limit sqrt(6 / (rows + cols)).
Mat glorot(Eigen::Index rows, Eigen::Index cols, RngStream rng) {
    double limit = std::sqrt(6.0 / static_cast<double>(rows + cols));
    Mat m(rows, cols);
    for (Eigen::Index i = 0; i < m.size(); i++) {
        m.data()[i] = rng.uniform(-limit, limit);
    }
    return m;
}

}  // namespace

std::string activation_name(Activation a) {
    return a == Activation::Relu ? "relu" : "leaky_relu";
}

void ModelConfig::validate() const {
    param_check(n_qubits >= 1, "n_qubits must be positive");
    if (task == qsldata::Task::Qst) {
        param_check(token_dim == 2, "QST tokens have width 2");
        param_check(n_qubits <= 8, "QST models support at most 8 qubits");
    } else {
        param_check(token_dim == 10 || token_dim == 8 || token_dim == 2, "DFE token width must be 10, 8 or 2");
    }
    param_check(hidden >= 1 && ff_hidden >= 1, "widths must be positive");
    param_check(heads >= 1 && hidden % heads == 0, "hidden must be divisible by heads");
}

size_t ModelConfig::tokens() const {
    return task == qsldata::Task::Qst ? size_t{1} << (2 * n_qubits) : n_qubits;
}

json ModelConfig::to_json() const {
    json j;
    j["task"] = qsldata::task_name(task);
    j["n_qubits"] = n_qubits;
    j["token_dim"] = token_dim;
    j["hidden"] = hidden;
    j["blocks"] = blocks;
    j["heads"] = heads;
    j["ff_hidden"] = ff_hidden;
    j["activation"] = activation_name(activation);
    return j;
}

ModelConfig ModelConfig::from_json(const json &j) {
    if (!j.is_object()) {
        fail(ErrorKind::SchemaViolation, "model config must be an object");
    }
    static const std::set<std::string> keys = {"task",   "n_qubits", "token_dim", "hidden",
                                               "blocks", "heads",    "ff_hidden", "activation"};
    for (const auto &[k, v] : j.items()) {
        if (!keys.count(k)) {
            fail(ErrorKind::SchemaViolation, "model config: unknown key '" + k + "'");
        }
    }
    ModelConfig c;
    try {
        std::string task = j.at("task").get<std::string>();
        if (task == "qst") {
            c.task = qsldata::Task::Qst;
        } else if (task == "dfe") {
            c.task = qsldata::Task::Dfe;
        } else {
            fail(ErrorKind::SchemaViolation, "model config: task must be 'qst' or 'dfe'");
        }
        c.n_qubits = get_size(j, "n_qubits");
        c.token_dim = get_size(j, "token_dim");
        if (j.contains("hidden")) {
            c.hidden = get_size(j, "hidden");
        }
        if (j.contains("blocks")) {
            c.blocks = get_size(j, "blocks");
        }
        if (j.contains("heads")) {
            c.heads = get_size(j, "heads");
        }
        if (j.contains("ff_hidden")) {
            c.ff_hidden = get_size(j, "ff_hidden");
        }
        if (j.contains("activation")) {
            std::string a = j.at("activation").get<std::string>();
            if (a == "relu") {
                c.activation = Activation::Relu;
            } else if (a == "leaky_relu") {
                c.activation = Activation::LeakyRelu;
            } else {
                fail(ErrorKind::SchemaViolation, "model config: activation must be 'relu' or 'leaky_relu'");
            }
        }
    } catch (const json::exception &e) {
        fail(ErrorKind::SchemaViolation, std::string("model config: ") + e.what());
    }
    c.validate();
    return c;
}

ModelConfig ModelConfig::for_dataset(const qsldata::Manifest &m) {
    ModelConfig c;
    c.task = m.task;
    c.n_qubits = m.n_qubits;
    c.token_dim = m.task == qsldata::Task::Qst ? 2 : qsldata::token_dim(m.feature_mask);
    return c;
}

Model::Model(const ModelConfig &cfg, uint64_t seed) : cfg_(cfg) {
    cfg_.validate();
    Eigen::Index H = static_cast<Eigen::Index>(cfg_.hidden), F = static_cast<Eigen::Index>(cfg_.ff_hidden);
    Eigen::Index S = static_cast<Eigen::Index>(cfg_.tokens()), I = static_cast<Eigen::Index>(cfg_.token_dim);
    auto weight = [&](const std::string &name, Eigen::Index r, Eigen::Index c) {
        params_.push_back({name, glorot(r, c, RngStream::keyed(seed, {params_.size()}))});
    };
    auto fill = [&](const std::string &name, Eigen::Index c, double v) {
        params_.push_back({name, Mat::Constant(1, c, v)});
    };
    weight("in.w", I, H);
    fill("in.b", H, 0.0);
    if (cfg_.task == qsldata::Task::Qst) {
        weight("pos", S, H);
    }
    for (size_t l = 0; l < cfg_.blocks; l++) {
        std::string b = "block" + std::to_string(l) + ".";
        weight(b + "wq", H, H);
        weight(b + "wk", H, H);
        weight(b + "wv", H, H);
        weight(b + "wo", H, H);
        fill(b + "ln1.g", H, 1.0);
        fill(b + "ln1.b", H, 0.0);
        weight(b + "ff1.w", H, F);
        fill(b + "ff1.b", F, 0.0);
        weight(b + "ff2.w", F, H);
        fill(b + "ff2.b", H, 0.0);
        fill(b + "ln2.g", H, 1.0);
        fill(b + "ln2.b", H, 0.0);
    }
    if (cfg_.task == qsldata::Task::Qst) {
        weight("out.w", H, 2);
        fill("out.b", 2, 0.0);
    } else {
        weight("head.w", H, H);
        fill("head.b", H, 0.0);
        weight("out.w", H, 1);
        fill("out.b", 1, 0.0);
    }
}

size_t Model::num_params() const {
    size_t n = 0;
    for (const auto &p : params_) {
        n += static_cast<size_t>(p.value.size());
    }
    return n;
}

size_t Model::index(const std::string &name) const {
    for (size_t i = 0; i < params_.size(); i++) {
        if (params_[i].name == name) {
            return i;
        }
    }
    fail(ErrorKind::InvalidArgument, "model has no parameter " + name);
}

std::vector<Tensor> Model::bind(Tape &tape, bool requires_grad) const {
    std::vector<Tensor> out;
    out.reserve(params_.size());
    for (const auto &p : params_) {
        out.push_back(requires_grad ? tape.leaf(p.value) : tape.constant(p.value));
    }
    return out;
}

Tensor Model::activate(const Tensor &x) const {
    return cfg_.activation == Activation::Relu ? relu(x) : leaky_relu(x);
}

Tensor Model::block(const std::vector<Tensor> &p, size_t l, const Tensor &h, size_t batch) const {
    std::string b = "block" + std::to_string(l) + ".";
    auto P = [&](const char *name) { return p[index(b + name)]; };
    Tensor z = attention(matmul(h, P("wq")), matmul(h, P("wk")), matmul(h, P("wv")), batch, cfg_.heads);
    Tensor h1 = layer_norm(add(h, matmul(z, P("wo"))), P("ln1.g"), P("ln1.b"));
    Tensor f = activate(add_broadcast(matmul(h1, P("ff1.w")), P("ff1.b")));
    f = add_broadcast(matmul(f, P("ff2.w")), P("ff2.b"));
    return layer_norm(add(h1, f), P("ln2.g"), P("ln2.b"));
}

Tensor Model::forward(Tape &tape, const std::vector<Tensor> &p, const Mat &x, size_t batch) const {
    require(p.size() == params_.size(), ErrorKind::ShapeMismatch, "forward: parameter list does not match model");
    Eigen::Index S = static_cast<Eigen::Index>(cfg_.tokens());
    require(batch > 0 && x.rows() == S * static_cast<Eigen::Index>(batch) &&
                x.cols() == static_cast<Eigen::Index>(cfg_.token_dim),
            ErrorKind::ShapeMismatch, "forward: input must be (batch*tokens) x token_dim");
    auto P = [&](const char *name) { return p[index(name)]; };
    Tensor h = add_broadcast(matmul(tape.constant(x), P("in.w")), P("in.b"));
    if (cfg_.task == qsldata::Task::Qst) {
        h = add_broadcast(h, P("pos"));
    }
    for (size_t l = 0; l < cfg_.blocks; l++) {
        h = block(p, l, h, batch);
    }
    if (cfg_.task == qsldata::Task::Qst) {
        Tensor raw = add_broadcast(matmul(h, P("out.w")), P("out.b"));
        return cholesky_head(raw, batch, size_t{1} << cfg_.n_qubits);
    }
    Tensor g = activate(add_broadcast(matmul(h, P("head.w")), P("head.b")));
    return add_broadcast(matmul(mean_pool(g, batch), P("out.w")), P("out.b"));
}

Mat Model::input(const std::vector<double> &feature) const {
    return input_batch({&feature});
}

Mat Model::input_batch(const std::vector<const std::vector<double> *> &features) const {
    Eigen::Index S = static_cast<Eigen::Index>(cfg_.tokens()), C = static_cast<Eigen::Index>(cfg_.token_dim);
    Mat x(S * static_cast<Eigen::Index>(features.size()), C);
    for (size_t b = 0; b < features.size(); b++) {
        require(features[b]->size() == static_cast<size_t>(S * C), ErrorKind::ShapeMismatch,
                "feature length does not match the model");
        x.middleRows(b * S, S) = Eigen::Map<const Mat>(features[b]->data(), S, C);
    }
    return x;
}

qmat::ComplexMatrix Model::predict_state(const std::vector<double> &feature) const {
    require(cfg_.task == qsldata::Task::Qst, ErrorKind::TaskMismatch, "predict_state needs a QST model");
    Tape tape;
    Tensor out = forward(tape, bind(tape, false), input(feature), 1);
    return rows_state(out.value(), 0, size_t{1} << cfg_.n_qubits);
}

double Model::predict_fidelity(const std::vector<double> &feature) const {
    require(cfg_.task == qsldata::Task::Dfe, ErrorKind::TaskMismatch, "predict_fidelity needs a DFE model");
    Tape tape;
    return forward(tape, bind(tape, false), input(feature), 1).value()(0, 0);
}

bool Model::operator==(const Model &o) const {
    if (cfg_.to_json() != o.cfg_.to_json() || params_.size() != o.params_.size()) {
        return false;
    }
    for (size_t i = 0; i < params_.size(); i++) {
        if (params_[i].name != o.params_[i].name || params_[i].value != o.params_[i].value) {
            return false;
        }
    }
    return true;
}

Tensor loss_qst(const Tensor &pred, const Mat &labels, size_t batch) {
    return squared_error(pred, labels, 1.0 / static_cast<double>(batch));
}

Tensor loss_dfe(const Tensor &pred, const Mat &labels, size_t batch) {
    return squared_error(pred, labels, 1.0 / static_cast<double>(batch));
}

Mat state_rows(const qmat::ComplexMatrix &rho) {
    Eigen::Index d = static_cast<Eigen::Index>(rho.dim());
    Mat m(d, 2 * d);
    for (Eigen::Index i = 0; i < d; i++) {
        for (Eigen::Index j = 0; j < d; j++) {
            m(i, j) = rho(i, j).real();
            m(i, d + j) = rho(i, j).imag();
        }
    }
    return m;
}

qmat::ComplexMatrix rows_state(const Mat &rows, size_t example, size_t d) {
    qmat::ComplexMatrix rho(d);
    Eigen::Index D = static_cast<Eigen::Index>(d), base = static_cast<Eigen::Index>(example) * D;
    for (Eigen::Index i = 0; i < D; i++) {
        for (Eigen::Index j = 0; j < D; j++) {
            rho(i, j) = qmat::cplx(rows(base + i, j), rows(base + i, D + j));
        }
    }
    return rho;
}

}  // namespace shadownet::gradnet
