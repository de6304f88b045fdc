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
#include <string>

#include "shadownet/error.h"
#include "shadownet/gradnet/tape.h"

namespace shadownet::gradnet {

namespace {

void shape_check(bool ok, const char *what) {
    if (!ok) {
        fail(ErrorKind::ShapeMismatch, what);
    }
}

bool same_shape(const Tensor &a, const Tensor &b) {
    return a.rows() == b.rows() && a.cols() == b.cols();
}

Tape *tape_of(const Tensor &a) {
    shape_check(a.tape() != nullptr, "tensor is not attached to a tape");
    return a.tape();
}

// Row-wise softmax with the max subtracted for stability.
void softmax_in_place(Mat &m) {
    for (Eigen::Index r = 0; r < m.rows(); r++) {
        auto row = m.row(r);
        row.array() -= row.maxCoeff();
        row = row.array().exp().matrix();
        row /= row.sum();
    }
}

// dx = y * (dy - rowsum(dy * y)).
Mat softmax_backward(const Mat &y, const Mat &dy) {
    Mat dx = y.cwiseProduct(dy);
    Eigen::VectorXd s = dx.rowwise().sum();
    dx -= s.asDiagonal() * y;
    return dx;
}

}  // namespace

Tensor add(const Tensor &a, const Tensor &b) {
    shape_check(same_shape(a, b), "add: shapes differ");
    Tape *t = tape_of(a);
    int ia = a.id(), ib = b.id();
    return t->push(a.value() + b.value(), {a, b}, [t, ia, ib](int s) {
        t->accumulate(ia, t->grad(s));
        t->accumulate(ib, t->grad(s));
    });
}

Tensor sub(const Tensor &a, const Tensor &b) {
    shape_check(same_shape(a, b), "sub: shapes differ");
    Tape *t = tape_of(a);
    int ia = a.id(), ib = b.id();
    return t->push(a.value() - b.value(), {a, b}, [t, ia, ib](int s) {
        t->accumulate(ia, t->grad(s));
        t->accumulate(ib, -t->grad(s));
    });
}

Tensor add_broadcast(const Tensor &a, const Tensor &b) {
    shape_check(b.cols() == a.cols() && b.rows() > 0 && a.rows() % b.rows() == 0,
                "add_broadcast: incompatible shapes");
    Tape *t = tape_of(a);
    Eigen::Index br = b.rows(), blocks = a.rows() / br;
    Mat out = a.value();
    for (Eigen::Index k = 0; k < blocks; k++) {
        out.middleRows(k * br, br) += b.value();
    }
    int ia = a.id(), ib = b.id();
    return t->push(std::move(out), {a, b}, [t, ia, ib, br, blocks](int s) {
        const Mat &g = t->grad(s);
        t->accumulate(ia, g);
        if (t->requires_grad(ib)) {
            Mat gb = Mat::Zero(br, g.cols());
            for (Eigen::Index k = 0; k < blocks; k++) {
                gb += g.middleRows(k * br, br);
            }
            t->accumulate(ib, gb);
        }
    });
}

Tensor scale(const Tensor &a, double c) {
    Tape *t = tape_of(a);
    int ia = a.id();
    return t->push(a.value() * c, {a}, [t, ia, c](int s) { t->accumulate(ia, t->grad(s) * c); });
}

Tensor matmul(const Tensor &a, const Tensor &b) {
    shape_check(a.cols() == b.rows(), "matmul: inner dimensions differ");
    Tape *t = tape_of(a);
    Mat out(a.rows(), b.cols());
    out.noalias() = a.value() * b.value();
    int ia = a.id(), ib = b.id();
    return t->push(std::move(out), {a, b}, [t, ia, ib](int s) {
        const Mat &g = t->grad(s);
        if (t->requires_grad(ia)) {
            Mat ga(g.rows(), t->value(ib).rows());
            ga.noalias() = g * t->value(ib).transpose();
            t->accumulate(ia, ga);
        }
        if (t->requires_grad(ib)) {
            Mat gb(t->value(ia).cols(), g.cols());
            gb.noalias() = t->value(ia).transpose() * g;
            t->accumulate(ib, gb);
        }
    });
}

Tensor transpose(const Tensor &a) {
    Tape *t = tape_of(a);
    int ia = a.id();
    return t->push(a.value().transpose(), {a}, [t, ia](int s) { t->accumulate(ia, t->grad(s).transpose()); });
}

Tensor softmax_rows(const Tensor &a) {
    Tape *t = tape_of(a);
    Mat out = a.value();
    softmax_in_place(out);
    int ia = a.id();
    return t->push(std::move(out), {a}, [t, ia](int s) { t->accumulate(ia, softmax_backward(t->value(s), t->grad(s))); });
}

Tensor layer_norm(const Tensor &a, const Tensor &gamma, const Tensor &beta) {
    shape_check(gamma.rows() == 1 && beta.rows() == 1 && gamma.cols() == a.cols() && beta.cols() == a.cols(),
                "layer_norm: gamma and beta must be 1 x cols");
    Tape *t = tape_of(a);
    const Mat &x = a.value();
    Eigen::Index n = x.rows(), c = x.cols();
    Mat xhat(n, c);
    Eigen::VectorXd inv(n);
    for (Eigen::Index r = 0; r < n; r++) {
        double mu = x.row(r).mean();
        auto centered = x.row(r).array() - mu;
        double var = centered.square().mean();
        inv(r) = 1.0 / std::sqrt(var + kLayerNormEps);
        xhat.row(r) = (centered * inv(r)).matrix();
    }
    Mat out = xhat;
    for (Eigen::Index r = 0; r < n; r++) {
        out.row(r) = out.row(r).cwiseProduct(gamma.value()) + beta.value();
    }
    int ia = a.id(), ig = gamma.id(), ib = beta.id();
    return t->push(std::move(out), {a, gamma, beta},
                   [t, ia, ig, ib, xhat = std::move(xhat), inv = std::move(inv)](int s) {
                       const Mat &g = t->grad(s);
                       if (t->requires_grad(ig)) {
                           t->accumulate(ig, g.cwiseProduct(xhat).colwise().sum());
                       }
                       if (t->requires_grad(ib)) {
                           t->accumulate(ib, g.colwise().sum());
                       }
                       if (t->requires_grad(ia)) {
                           const Mat &gm = t->value(ig);
                           Mat gx(g.rows(), g.cols());
                           for (Eigen::Index r = 0; r < g.rows(); r++) {
                               Eigen::RowVectorXd d = g.row(r).cwiseProduct(gm);
                               double m1 = d.mean();
                               double m2 = d.cwiseProduct(xhat.row(r)).mean();
                               gx.row(r) = inv(r) * (d.array() - m1 - xhat.row(r).array() * m2).matrix();
                           }
                           t->accumulate(ia, gx);
                       }
                   });
}

Tensor relu(const Tensor &a) {
    Tape *t = tape_of(a);
    int ia = a.id();
    return t->push(a.value().cwiseMax(0.0), {a}, [t, ia](int s) {
        t->accumulate(ia, (t->value(ia).array() > 0).select(t->grad(s), 0.0));
    });
}

Tensor leaky_relu(const Tensor &a) {
    Tape *t = tape_of(a);
    int ia = a.id();
    Mat out = (a.value().array() > 0).select(a.value(), a.value() * kLeakySlope);
    return t->push(std::move(out), {a}, [t, ia](int s) {
        const Mat &g = t->grad(s);
        t->accumulate(ia, (t->value(ia).array() > 0).select(g, g * kLeakySlope));
    });
}

Tensor mean_pool(const Tensor &a, size_t groups) {
    Eigen::Index gcount = static_cast<Eigen::Index>(groups);
    shape_check(gcount > 0 && a.rows() % gcount == 0, "mean_pool: rows not divisible by groups");
    Tape *t = tape_of(a);
    Eigen::Index per = a.rows() / gcount;
    Mat out(gcount, a.cols());
    for (Eigen::Index k = 0; k < gcount; k++) {
        out.row(k) = a.value().middleRows(k * per, per).colwise().mean();
    }
    int ia = a.id();
    return t->push(std::move(out), {a}, [t, ia, per, gcount](int s) {
        const Mat &g = t->grad(s);
        Mat ga(per * gcount, g.cols());
        for (Eigen::Index k = 0; k < gcount; k++) {
            ga.middleRows(k * per, per).rowwise() = g.row(k) / static_cast<double>(per);
        }
        t->accumulate(ia, ga);
    });
}

Tensor concat_cols(const std::vector<Tensor> &parts) {
    shape_check(!parts.empty(), "concat_cols: no inputs");
    Tape *t = tape_of(parts[0]);
    Eigen::Index rows = parts[0].rows(), cols = 0;
    for (const auto &p : parts) {
        shape_check(p.rows() == rows, "concat_cols: row counts differ");
        cols += p.cols();
    }
    Mat out(rows, cols);
    std::vector<std::pair<int, Eigen::Index>> spans;
    Eigen::Index at = 0;
    for (const auto &p : parts) {
        out.middleCols(at, p.cols()) = p.value();
        spans.emplace_back(p.id(), at);
        at += p.cols();
    }
    return t->push(std::move(out), parts, [t, spans](int s) {
        const Mat &g = t->grad(s);
        for (auto [id, start] : spans) {
            t->accumulate(id, g.middleCols(start, t->value(id).cols()));
        }
    });
}

Tensor slice_cols(const Tensor &a, Eigen::Index start, Eigen::Index len) {
    shape_check(start >= 0 && len >= 0 && start + len <= a.cols(), "slice_cols: range out of bounds");
    Tape *t = tape_of(a);
    int ia = a.id();
    return t->push(a.value().middleCols(start, len), {a}, [t, ia, start, len](int s) {
        if (t->requires_grad(ia)) {
            t->grad_ref(ia).middleCols(start, len) += t->grad(s);
        }
    });
}

Tensor concat_rows(const std::vector<Tensor> &parts) {
    shape_check(!parts.empty(), "concat_rows: no inputs");
    Tape *t = tape_of(parts[0]);
    Eigen::Index cols = parts[0].cols(), rows = 0;
    for (const auto &p : parts) {
        shape_check(p.cols() == cols, "concat_rows: column counts differ");
        rows += p.rows();
    }
    Mat out(rows, cols);
    std::vector<std::pair<int, Eigen::Index>> spans;
    Eigen::Index at = 0;
    for (const auto &p : parts) {
        out.middleRows(at, p.rows()) = p.value();
        spans.emplace_back(p.id(), at);
        at += p.rows();
    }
    return t->push(std::move(out), parts, [t, spans](int s) {
        const Mat &g = t->grad(s);
        for (auto [id, start] : spans) {
            t->accumulate(id, g.middleRows(start, t->value(id).rows()));
        }
    });
}

Tensor slice_rows(const Tensor &a, Eigen::Index start, Eigen::Index len) {
    shape_check(start >= 0 && len >= 0 && start + len <= a.rows(), "slice_rows: range out of bounds");
    Tape *t = tape_of(a);
    int ia = a.id();
    return t->push(a.value().middleRows(start, len), {a}, [t, ia, start, len](int s) {
        if (t->requires_grad(ia)) {
            t->grad_ref(ia).middleRows(start, len) += t->grad(s);
        }
    });
}

Tensor squared_error(const Tensor &a, const Mat &target, double c) {
    shape_check(a.rows() == target.rows() && a.cols() == target.cols(), "squared_error: shapes differ");
    Tape *t = tape_of(a);
    Mat diff = a.value() - target;
    Mat out(1, 1);
    out(0, 0) = c * diff.squaredNorm();
    int ia = a.id();
    return t->push(std::move(out), {a}, [t, ia, c, diff = std::move(diff)](int s) {
        t->accumulate(ia, diff * (2.0 * c * t->grad(s)(0, 0)));
    });
}

Tensor attention(const Tensor &q, const Tensor &k, const Tensor &v, size_t batch, size_t heads) {
    shape_check(same_shape(q, k) && same_shape(q, v), "attention: q, k, v shapes differ");
    Eigen::Index b_count = static_cast<Eigen::Index>(batch), h_count = static_cast<Eigen::Index>(heads);
    shape_check(b_count > 0 && q.rows() % b_count == 0, "attention: rows not divisible by batch");
    shape_check(h_count > 0 && q.cols() % h_count == 0, "attention: width not divisible by heads");
    Tape *t = tape_of(q);
    Eigen::Index S = q.rows() / b_count, dh = q.cols() / h_count;
    double inv = 1.0 / std::sqrt(static_cast<double>(dh));
    std::vector<Mat> weights(batch * heads);
    Mat out(q.rows(), q.cols());
    for (Eigen::Index b = 0; b < b_count; b++) {
        for (Eigen::Index h = 0; h < h_count; h++) {
            Mat &w = weights[b * h_count + h];
            w.resize(S, S);
            w.noalias() = q.value().block(b * S, h * dh, S, dh) * k.value().block(b * S, h * dh, S, dh).transpose();
            w *= inv;
            softmax_in_place(w);
            out.block(b * S, h * dh, S, dh).noalias() = w * v.value().block(b * S, h * dh, S, dh);
        }
    }
    int iq = q.id(), ik = k.id(), iv = v.id();
    return t->push(std::move(out), {q, k, v},
                   [t, iq, ik, iv, b_count, h_count, S, dh, inv, weights = std::move(weights)](int s) {
                       const Mat &g = t->grad(s);
                       const Mat &qv = t->value(iq), &kv = t->value(ik), &vv = t->value(iv);
                       Mat gq(qv.rows(), qv.cols()), gk(kv.rows(), kv.cols()), gv(vv.rows(), vv.cols());
                       Mat dw(S, S);
                       for (Eigen::Index b = 0; b < b_count; b++) {
                           for (Eigen::Index h = 0; h < h_count; h++) {
                               const Mat &w = weights[b * h_count + h];
                               auto gb = g.block(b * S, h * dh, S, dh);
                               gv.block(b * S, h * dh, S, dh).noalias() = w.transpose() * gb;
                               dw.noalias() = gb * vv.block(b * S, h * dh, S, dh).transpose();
                               Mat ds = softmax_backward(w, dw) * inv;
                               gq.block(b * S, h * dh, S, dh).noalias() = ds * kv.block(b * S, h * dh, S, dh);
                               gk.block(b * S, h * dh, S, dh).noalias() = ds.transpose() * qv.block(b * S, h * dh, S, dh);
                           }
                       }
                       t->accumulate(iq, gq);
                       t->accumulate(ik, gk);
                       t->accumulate(iv, gv);
                   });
}

Tensor cholesky_head(const Tensor &raw, size_t batch, size_t d) {
    Eigen::Index D = static_cast<Eigen::Index>(d), B = static_cast<Eigen::Index>(batch);
    shape_check(D > 0 && B > 0 && raw.cols() == 2 && raw.rows() == B * D * D,
                "cholesky_head: raw must be (batch*d*d) x 2");
    Tape *t = tape_of(raw);
    const Mat &x = raw.value();
    Mat out(B * D, 2 * D);
    std::vector<double> traces(batch);
    for (Eigen::Index b = 0; b < B; b++) {
        Mat tr = Mat::Zero(D, D), ti = Mat::Zero(D, D);
        for (Eigen::Index i = 0; i < D; i++) {
            for (Eigen::Index j = 0; j <= i; j++) {
                Eigen::Index row = b * D * D + i * D + j;
                tr(i, j) = x(row, 0);
                ti(i, j) = i == j ? 0.0 : x(row, 1);
            }
        }
        double trace = tr.squaredNorm() + ti.squaredNorm();
        if (!(trace > 0)) {
            fail(ErrorKind::DegenerateFactor, "cholesky_head: lower-triangular factor is zero");
        }
        traces[b] = trace;
        auto re = out.block(b * D, 0, D, D);
        auto im = out.block(b * D, D, D, D);
        // Lower triangle from explicit sums, mirrored so the output is exactly Hermitian.
        for (Eigen::Index i = 0; i < D; i++) {
            for (Eigen::Index j = 0; j <= i; j++) {
                double a = 0, c = 0;
                for (Eigen::Index m = 0; m <= j; m++) {
                    a += tr(i, m) * tr(j, m) + ti(i, m) * ti(j, m);
                    c += ti(i, m) * tr(j, m) - tr(i, m) * ti(j, m);
                }
                re(i, j) = re(j, i) = a / trace;
                im(i, j) = c / trace;
                im(j, i) = -c / trace;
            }
            im(i, i) = 0.0;
        }
    }
    int ir = raw.id();
    return t->push(std::move(out), {raw}, [t, ir, B, D, traces = std::move(traces)](int s) {
        const Mat &g = t->grad(s);
        const Mat &rho = t->value(s);
        const Mat &x = t->value(ir);
        Mat gx = Mat::Zero(x.rows(), 2);
        for (Eigen::Index b = 0; b < B; b++) {
            Mat tr = Mat::Zero(D, D), ti = Mat::Zero(D, D);
            for (Eigen::Index i = 0; i < D; i++) {
                for (Eigen::Index j = 0; j <= i; j++) {
                    Eigen::Index row = b * D * D + i * D + j;
                    tr(i, j) = x(row, 0);
                    ti(i, j) = i == j ? 0.0 : x(row, 1);
                }
            }
            double trace = traces[b];
            Mat gre = g.block(b * D, 0, D, D), gim = g.block(b * D, D, D, D);
            double inner = gre.cwiseProduct(rho.block(b * D, 0, D, D)).sum() +
                           gim.cwiseProduct(rho.block(b * D, D, D, D)).sum();
            double dt = -inner / trace;
            Mat hs = (gre + gre.transpose()) / trace;
            Mat ka = (gim - gim.transpose()) / trace;
            Mat dtr = hs * tr - ka * ti + 2.0 * dt * tr;
            Mat dti = hs * ti + ka * tr + 2.0 * dt * ti;
            for (Eigen::Index i = 0; i < D; i++) {
                for (Eigen::Index j = 0; j <= i; j++) {
                    Eigen::Index row = b * D * D + i * D + j;
                    gx(row, 0) = dtr(i, j);
                    gx(row, 1) = i == j ? 0.0 : dti(i, j);
                }
            }
        }
        t->accumulate(ir, gx);
    });
}

}  // namespace shadownet::gradnet
