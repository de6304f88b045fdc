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

#ifndef SHADOWNET_GRADNET_MODEL_H
#define SHADOWNET_GRADNET_MODEL_H

#include <cstdint>
#include <string>
#include <vector>

#include "shadownet/gradnet/tape.h"
#include "shadownet/qmat.h"
#include "shadownet/qsldata.h"

namespace shadownet::gradnet {

using json = nlohmann::ordered_json;

enum class Activation : uint8_t { Relu = 0, LeakyRelu = 1 };

std::string activation_name(Activation a);

struct ModelConfig {
    qsldata::Task task = qsldata::Task::Qst;
    size_t n_qubits = 3;
    /// 2 for QST; 10, 8 or 2 for DFE.
    size_t token_dim = 2;
    size_t hidden = 32;
    size_t blocks = 3;
    size_t heads = 1;
    size_t ff_hidden = 64;
    Activation activation = Activation::Relu;

    /// Throws InvalidArgument on bad dimensions.
    void validate() const;
    /// Tokens per example: 4^n for QST, n for DFE.
    size_t tokens() const;
    json to_json() const;
    /// Strict parse; unknown keys are SchemaViolation.
    static ModelConfig from_json(const json &j);
    static ModelConfig for_dataset(const qsldata::Manifest &m);
};

struct Param {
    std::string name;
    Mat value;
};

/// QST: FC(2 -> hidden) + learned position embedding, L attention blocks,
/// FC(hidden -> 2), cholesky_head. DFE: FC(token_dim -> hidden), L blocks,
/// FC(hidden -> hidden) + activation, mean pool, FC(hidden -> 1).
/// Blocks are post-norm: LN(x + MSA(x)), then LN(y + FF(y)).
class Model {
   public:
    Model(const ModelConfig &cfg, uint64_t seed);

    const ModelConfig &config() const {
        return cfg_;
    }
    std::vector<Param> &params() {
        return params_;
    }
    const std::vector<Param> &params() const {
        return params_;
    }
    size_t num_params() const;

    /// Parameters as tape leaves (or constants when requires_grad is false).
    std::vector<Tensor> bind(Tape &tape, bool requires_grad = true) const;
    /// x is (batch * tokens) x token_dim. QST returns (batch*d) x 2d [Re | Im]
    /// density matrices, DFE a batch x 1 column.
    Tensor forward(Tape &tape, const std::vector<Tensor> &p, const Mat &x, size_t batch) const;

    /// Row-major feature of one example as a tokens x token_dim matrix.
    Mat input(const std::vector<double> &feature) const;
    Mat input_batch(const std::vector<const std::vector<double> *> &features) const;

    qmat::ComplexMatrix predict_state(const std::vector<double> &feature) const;
    double predict_fidelity(const std::vector<double> &feature) const;

    bool operator==(const Model &o) const;

   private:
    size_t index(const std::string &name) const;
    Tensor block(const std::vector<Tensor> &p, size_t l, const Tensor &h, size_t batch) const;
    Tensor activate(const Tensor &x) const;

    ModelConfig cfg_;
    std::vector<Param> params_;
};

/// ||pred - label||_F^2 summed over the batch and scaled by 1/batch.
/// labels is (batch*d) x 2d in the cholesky_head layout.
Tensor loss_qst(const Tensor &pred, const Mat &labels, size_t batch);
/// |pred - label|^2 averaged over the batch; labels is batch x 1.
Tensor loss_dfe(const Tensor &pred, const Mat &labels, size_t batch);

/// Label in the cholesky_head output layout.
Mat state_rows(const qmat::ComplexMatrix &rho);
qmat::ComplexMatrix rows_state(const Mat &rows, size_t example, size_t d);

}  // namespace shadownet::gradnet

#endif
