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

#ifndef SHADOWNET_GRADNET_TAPE_H
#define SHADOWNET_GRADNET_TAPE_H

#include <Eigen/Dense>
#include <cstddef>
#include <deque>
#include <functional>
#include <vector>

namespace shadownet::gradnet {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

class Tape;

/// Handle to a node on a tape. Batched tensors stack the tokens of every
/// example along the rows: example b owns rows [b*S, (b+1)*S).
class Tensor {
   public:
    Tensor() = default;

    const Mat &value() const;
    const Mat &grad() const;
    Eigen::Index rows() const {
        return value().rows();
    }
    Eigen::Index cols() const {
        return value().cols();
    }
    Tape *tape() const {
        return tape_;
    }
    int id() const {
        return id_;
    }
    bool requires_grad() const;

   private:
    friend class Tape;
    Tensor(Tape *tape, int id) : tape_(tape), id_(id) {
    }
    Tape *tape_ = nullptr;
    int id_ = -1;
};

class Tape {
   public:
    Tape() = default;
    Tape(const Tape &) = delete;
    Tape &operator=(const Tape &) = delete;

    Tensor constant(Mat value);
    Tensor leaf(Mat value);

    /// Records a node. `backward` runs once during the reverse sweep when the
    /// node lies on a gradient path; it reads grad(self) and accumulates into
    /// the parents through accumulate().
    Tensor push(Mat value, const std::vector<Tensor> &parents, std::function<void(int self)> backward);

    /// Seeds d(loss)/d(loss) = 1 for a 1x1 loss and sweeps in reverse.
    void backward(const Tensor &loss);

    const Mat &value(int id) const {
        return nodes_[id].value;
    }
    /// Zero matrix if nothing has flowed into the node.
    const Mat &grad(int id);
    /// grad(id) += g, allocating on first use; no-op for constants.
    void accumulate(int id, const Mat &g);
    Mat &grad_ref(int id);
    bool requires_grad(int id) const {
        return nodes_[id].requires_grad;
    }
    size_t size() const {
        return nodes_.size();
    }

   private:
    struct Node {
        Mat value;
        Mat grad;
        bool requires_grad = false;
        bool has_grad = false;
        std::function<void(int)> backward;
    };
    std::deque<Node> nodes_;
};

// Primitives. Shape errors raise ShapeMismatch.
Tensor add(const Tensor &a, const Tensor &b);
Tensor sub(const Tensor &a, const Tensor &b);
/// a + b with b's rows repeated down a; b.rows() must divide a.rows().
Tensor add_broadcast(const Tensor &a, const Tensor &b);
Tensor scale(const Tensor &a, double s);
Tensor matmul(const Tensor &a, const Tensor &b);
Tensor transpose(const Tensor &a);
Tensor softmax_rows(const Tensor &a);
/// Per-row normalization with learnable 1xC gamma and beta, eps 1e-5.
Tensor layer_norm(const Tensor &a, const Tensor &gamma, const Tensor &beta);
constexpr double kLayerNormEps = 1e-5;
Tensor relu(const Tensor &a);
constexpr double kLeakySlope = 0.01;
Tensor leaky_relu(const Tensor &a);
/// Mean over the token rows of each of `groups` equal row blocks.
Tensor mean_pool(const Tensor &a, size_t groups);
Tensor concat_cols(const std::vector<Tensor> &parts);
Tensor slice_cols(const Tensor &a, Eigen::Index start, Eigen::Index len);
Tensor concat_rows(const std::vector<Tensor> &parts);
Tensor slice_rows(const Tensor &a, Eigen::Index start, Eigen::Index len);
/// scale * sum((a - target)^2) as a 1x1 tensor.
Tensor squared_error(const Tensor &a, const Mat &target, double scale);

/// Scaled dot-product attention on `batch` examples with `heads` heads.
/// q, k, v are (batch*S) x p; each head uses a p/heads column slice and
/// scores q k^T / sqrt(p/heads).
Tensor attention(const Tensor &q, const Tensor &k, const Tensor &v, size_t batch, size_t heads);

/// Maps (batch*d*d) x 2 raw planes, token s = i*d + j holding entry (i, j),
/// to (batch*d) x 2d density matrices [Re | Im] = T T^dagger / Tr(T T^dagger)
/// with T lower triangular, real diagonal. Strictly upper raw entries and
/// imaginary diagonal entries are ignored. Tr = 0 raises DegenerateFactor.
Tensor cholesky_head(const Tensor &raw, size_t batch, size_t d);

}  // namespace shadownet::gradnet

#endif
