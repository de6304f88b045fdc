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

#include <cassert>

#include "shadownet/error.h"
#include "shadownet/gradnet/tape.h"

namespace shadownet::gradnet {

const Mat &Tensor::value() const {
    return tape_->value(id_);
}

const Mat &Tensor::grad() const {
    return tape_->grad(id_);
}

bool Tensor::requires_grad() const {
    return tape_->requires_grad(id_);
}

Tensor Tape::constant(Mat value) {
    nodes_.push_back(Node{std::move(value), Mat(), false, false, nullptr});
    return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

Tensor Tape::leaf(Mat value) {
    nodes_.push_back(Node{std::move(value), Mat(), true, false, nullptr});
    return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

Tensor Tape::push(Mat value, const std::vector<Tensor> &parents, std::function<void(int)> backward) {
    assert(value.allFinite());
    bool needs = false;
    for (const Tensor &p : parents) {
        if (p.tape() != this) {
            fail(ErrorKind::InvalidArgument, "tensor belongs to a different tape");
        }
        needs = needs || nodes_[p.id()].requires_grad;
    }
    nodes_.push_back(Node{std::move(value), Mat(), needs, false, needs ? std::move(backward) : nullptr});
    return Tensor(this, static_cast<int>(nodes_.size()) - 1);
}

const Mat &Tape::grad(int id) {
    return grad_ref(id);
}

Mat &Tape::grad_ref(int id) {
    Node &n = nodes_[id];
    if (!n.has_grad) {
        n.grad = Mat::Zero(n.value.rows(), n.value.cols());
        n.has_grad = true;
    }
    return n.grad;
}

void Tape::accumulate(int id, const Mat &g) {
    Node &n = nodes_[id];
    if (!n.requires_grad) {
        return;
    }
    if (!n.has_grad) {
        n.grad = g;
        n.has_grad = true;
    } else {
        n.grad += g;
    }
}

void Tape::backward(const Tensor &loss) {
    if (loss.tape() != this || loss.rows() != 1 || loss.cols() != 1) {
        fail(ErrorKind::ShapeMismatch, "backward needs a 1x1 loss on this tape");
    }
    accumulate(loss.id(), Mat::Ones(1, 1));
    for (int i = static_cast<int>(nodes_.size()) - 1; i >= 0; i--) {
        Node &n = nodes_[i];
        if (n.backward && n.has_grad) {
            n.backward(i);
            assert(n.grad.allFinite());
        }
    }
}

}  // namespace shadownet::gradnet
