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
#include <functional>

#include "gtest/gtest.h"
#include "shadownet/error.h"
#include "shadownet/gradnet/model.h"
#include "shadownet/gradnet/tape.h"
#include "shadownet/gradnet/train.h"
#include "shadownet/rng.h"

using namespace shadownet;
using namespace shadownet::gradnet;

namespace {

Mat random_mat(Eigen::Index r, Eigen::Index c, RngStream &rng) {
    Mat m(r, c);
    for (Eigen::Index i = 0; i < m.size(); i++) {
        m.data()[i] = rng.uniform(-1.0, 1.0);
    }
    return m;
}

ErrorKind kind_of(const std::function<void()> &f) {
    try {
        f();
    } catch (const Error &e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error raised";
    return ErrorKind::InvalidArgument;
}

using Fn = std::function<Tensor(Tape &, const std::vector<Tensor> &)>;

// Loss 0.5 * ||f(inputs) - target||^2 with a fixed random target.
double fd_max_rel_error(const Fn &f, std::vector<Mat> inputs, uint64_t seed, double h = 1e-5) {
    RngStream rng(seed);
    Mat target;
    {
        Tape t;
        std::vector<Tensor> in;
        for (const auto &m : inputs) {
            in.push_back(t.constant(m));
        }
        Tensor out = f(t, in);
        target = random_mat(out.rows(), out.cols(), rng);
    }
    auto loss_at = [&](const std::vector<Mat> &x) {
        Tape t;
        std::vector<Tensor> in;
        for (const auto &m : x) {
            in.push_back(t.constant(m));
        }
        return squared_error(f(t, in), target, 0.5).value()(0, 0);
    };
    Tape t;
    std::vector<Tensor> in;
    for (const auto &m : inputs) {
        in.push_back(t.leaf(m));
    }
    t.backward(squared_error(f(t, in), target, 0.5));
    double worst = 0;
    for (size_t a = 0; a < inputs.size(); a++) {
        Mat g = in[a].grad();
        for (Eigen::Index k = 0; k < inputs[a].size(); k++) {
            double saved = inputs[a].data()[k];
            inputs[a].data()[k] = saved + h;
            double up = loss_at(inputs);
            inputs[a].data()[k] = saved - h;
            double down = loss_at(inputs);
            inputs[a].data()[k] = saved;
            double num = (up - down) / (2 * h), an = g.data()[k];
            double scale = std::max({std::abs(an), std::abs(num), 1e-8});
            worst = std::max(worst, an == num ? 0.0 : std::abs(an - num) / scale);
        }
    }
    return worst;
}

}  // namespace

TEST(Primitives, SoftmaxOfZerosIsUniform) {
    Tape t;
    Tensor s = softmax_rows(t.constant(Mat::Zero(1, 2)));
    EXPECT_DOUBLE_EQ(s.value()(0, 0), 0.5);
    EXPECT_DOUBLE_EQ(s.value()(0, 1), 0.5);
}

TEST(Primitives, SoftmaxRowsSumToOne) {
    RngStream rng(1);
    Tape t;
    Tensor s = softmax_rows(t.constant(random_mat(20, 7, rng) * 30.0));
    for (Eigen::Index r = 0; r < 20; r++) {
        EXPECT_NEAR(s.value().row(r).sum(), 1.0, 1e-12);
    }
}

TEST(Primitives, LayerNormOfConstantTokenIsZero) {
    Tape t;
    Tensor y = layer_norm(t.constant(Mat::Constant(2, 5, 3.7)), t.constant(Mat::Ones(1, 5)), t.constant(Mat::Zero(1, 5)));
    EXPECT_EQ(y.value().cwiseAbs().maxCoeff(), 0.0);
}

TEST(Primitives, ForwardValues) {
    Tape t;
    Mat a(2, 2), b(2, 2);
    a << 1, -2, 3, 4;
    b << 0.5, 1, -1, 2;
    Tensor ta = t.constant(a), tb = t.constant(b);
    EXPECT_EQ(add(ta, tb).value(), a + b);
    EXPECT_EQ(sub(ta, tb).value(), a - b);
    EXPECT_EQ(scale(ta, 3).value(), a * 3);
    EXPECT_EQ(matmul(ta, tb).value(), a * b);
    EXPECT_EQ(transpose(ta).value(), Mat(a.transpose()));
    EXPECT_EQ(relu(ta).value()(0, 1), 0.0);
    EXPECT_DOUBLE_EQ(leaky_relu(ta).value()(0, 1), -0.02);
    Mat pooled = mean_pool(ta, 1).value();
    EXPECT_DOUBLE_EQ(pooled(0, 0), 2.0);
    EXPECT_DOUBLE_EQ(pooled(0, 1), 1.0);
    Mat cat = concat_cols({ta, tb}).value();
    EXPECT_EQ(cat.cols(), 4);
    EXPECT_EQ(slice_cols(concat_cols({ta, tb}), 2, 2).value(), b);
    EXPECT_EQ(slice_rows(concat_rows({ta, tb}), 2, 2).value(), b);
    Mat bias(1, 2);
    bias << 10, 20;
    EXPECT_DOUBLE_EQ(add_broadcast(ta, t.constant(bias)).value()(1, 1), 24.0);
    EXPECT_DOUBLE_EQ(squared_error(ta, b, 0.5).value()(0, 0), 0.5 * (a - b).squaredNorm());
}

TEST(Primitives, ShapeMismatch) {
    Tape t;
    Tensor a = t.constant(Mat::Zero(2, 3)), b = t.constant(Mat::Zero(3, 2));
    EXPECT_EQ(kind_of([&] { add(a, b); }), ErrorKind::ShapeMismatch);
    EXPECT_EQ(kind_of([&] { matmul(a, a); }), ErrorKind::ShapeMismatch);
    EXPECT_EQ(kind_of([&] { mean_pool(a, 3); }), ErrorKind::ShapeMismatch);
    EXPECT_EQ(kind_of([&] { slice_cols(a, 2, 2); }), ErrorKind::ShapeMismatch);
}

TEST(Primitives, GradientsMatchFiniteDifferences) {
    RngStream rng(7);
    Mat a = random_mat(4, 3, rng), b = random_mat(4, 3, rng), c = random_mat(3, 5, rng);
    Mat bias = random_mat(1, 3, rng), g = random_mat(1, 3, rng), be = random_mat(1, 3, rng);
    // Keep ReLU inputs away from the kink.
    Mat away = a;
    for (Eigen::Index i = 0; i < away.size(); i++) {
        away.data()[i] += away.data()[i] > 0 ? 0.1 : -0.1;
    }
    struct Case {
        const char *name;
        Fn f;
        std::vector<Mat> in;
    };
    std::vector<Case> cases = {
        {"add", [](Tape &, const std::vector<Tensor> &x) { return add(x[0], x[1]); }, {a, b}},
        {"sub", [](Tape &, const std::vector<Tensor> &x) { return sub(x[0], x[1]); }, {a, b}},
        {"add_broadcast", [](Tape &, const std::vector<Tensor> &x) { return add_broadcast(x[0], x[1]); }, {a, bias}},
        {"scale", [](Tape &, const std::vector<Tensor> &x) { return scale(x[0], -1.7); }, {a}},
        {"matmul", [](Tape &, const std::vector<Tensor> &x) { return matmul(x[0], x[1]); }, {a, c}},
        {"transpose", [](Tape &, const std::vector<Tensor> &x) { return transpose(x[0]); }, {a}},
        {"softmax", [](Tape &, const std::vector<Tensor> &x) { return softmax_rows(x[0]); }, {a * 2.0}},
        {"layer_norm", [](Tape &, const std::vector<Tensor> &x) { return layer_norm(x[0], x[1], x[2]); }, {a, g, be}},
        {"relu", [](Tape &, const std::vector<Tensor> &x) { return relu(x[0]); }, {away}},
        {"leaky_relu", [](Tape &, const std::vector<Tensor> &x) { return leaky_relu(x[0]); }, {away}},
        {"mean_pool", [](Tape &, const std::vector<Tensor> &x) { return mean_pool(x[0], 2); }, {a}},
        {"concat_cols", [](Tape &, const std::vector<Tensor> &x) { return concat_cols({x[0], x[1]}); }, {a, b}},
        {"slice_cols", [](Tape &, const std::vector<Tensor> &x) { return slice_cols(x[0], 1, 2); }, {a}},
        {"concat_rows", [](Tape &, const std::vector<Tensor> &x) { return concat_rows({x[0], x[1]}); }, {a, b}},
        {"slice_rows", [](Tape &, const std::vector<Tensor> &x) { return slice_rows(x[0], 1, 2); }, {a}},
        {"squared_error",
         [b](Tape &, const std::vector<Tensor> &x) { return squared_error(x[0], b, 0.3); },
         {a}},
    };
    for (size_t i = 0; i < cases.size(); i++) {
        EXPECT_LE(fd_max_rel_error(cases[i].f, cases[i].in, 100 + i), 1e-4) << cases[i].name;
    }
}

TEST(Attention, ZeroQueryKeyGivesMeanOfValues) {
    RngStream rng(3);
    Tape t;
    Mat v = random_mat(10, 4, rng);
    Tensor z = attention(t.constant(Mat::Zero(10, 4)), t.constant(Mat::Zero(10, 4)), t.constant(v), 2, 2);
    for (int b = 0; b < 2; b++) {
        Eigen::RowVectorXd mean = v.middleRows(5 * b, 5).colwise().mean();
        for (int s = 0; s < 5; s++) {
            EXPECT_LT((z.value().row(5 * b + s) - mean).cwiseAbs().maxCoeff(), 1e-15);
        }
    }
}

TEST(Attention, SingleTokenReturnsValue) {
    RngStream rng(4);
    Tape t;
    Mat q = random_mat(3, 4, rng), k = random_mat(3, 4, rng), v = random_mat(3, 4, rng);
    Tensor z = attention(t.constant(q), t.constant(k), t.constant(v), 3, 1);
    EXPECT_EQ(z.value(), v);
}

TEST(Attention, MatchesComposedPrimitives) {
    RngStream rng(5);
    Mat q = random_mat(12, 6, rng), k = random_mat(12, 6, rng), v = random_mat(12, 6, rng);
    size_t batch = 2, heads = 3;
    Fn fused = [&](Tape &, const std::vector<Tensor> &x) { return attention(x[0], x[1], x[2], batch, heads); };
    Fn composed = [&](Tape &, const std::vector<Tensor> &x) {
        std::vector<Tensor> rows;
        for (int b = 0; b < 2; b++) {
            std::vector<Tensor> cols;
            for (int h = 0; h < 3; h++) {
                Tensor qb = slice_cols(slice_rows(x[0], 6 * b, 6), 2 * h, 2);
                Tensor kb = slice_cols(slice_rows(x[1], 6 * b, 6), 2 * h, 2);
                Tensor vb = slice_cols(slice_rows(x[2], 6 * b, 6), 2 * h, 2);
                Tensor w = softmax_rows(scale(matmul(qb, transpose(kb)), 1.0 / std::sqrt(2.0)));
                cols.push_back(matmul(w, vb));
            }
            rows.push_back(concat_cols(cols));
        }
        return concat_rows(rows);
    };
    Tape t;
    std::vector<Tensor> in = {t.constant(q), t.constant(k), t.constant(v)};
    EXPECT_LT((fused(t, in).value() - composed(t, in).value()).cwiseAbs().maxCoeff(), 1e-14);
    EXPECT_LE(fd_max_rel_error(fused, {q, k, v}, 9), 1e-4);
}

TEST(Attention, ConvexCombinationOfValues) {
    RngStream rng(6);
    Tape t;
    Mat q = random_mat(8, 2, rng), k = random_mat(8, 2, rng), v = random_mat(8, 2, rng);
    Tensor z = attention(t.constant(q * 3.0), t.constant(k * 3.0), t.constant(v), 1, 1);
    for (Eigen::Index c = 0; c < 2; c++) {
        EXPECT_GE(z.value().col(c).minCoeff(), v.col(c).minCoeff() - 1e-15);
        EXPECT_LE(z.value().col(c).maxCoeff(), v.col(c).maxCoeff() + 1e-15);
    }
}

TEST(Cholesky, IdentityGivesMaximallyMixed) {
    size_t d = 4;
    Mat raw = Mat::Zero(d * d, 2);
    for (size_t i = 0; i < d; i++) {
        raw(i * d + i, 0) = 1.0;
    }
    Tape t;
    Mat out = cholesky_head(t.constant(raw), 1, d).value();
    Mat expect = Mat::Zero(d, 2 * d);
    expect.leftCols(d) = Mat::Identity(d, d) / 4.0;
    EXPECT_EQ(out, expect);
}

TEST(Cholesky, BasisInjectionGivesProjector) {
    size_t d = 4;
    Mat raw = Mat::Zero(d * d, 2);
    raw(0, 0) = 2.5;
    raw(d * d - 1, 1) = 9.0;  // imaginary diagonal is ignored
    raw(1, 0) = 7.0;          // strictly upper is ignored
    Tape t;
    Mat out = cholesky_head(t.constant(raw), 1, d).value();
    Mat expect = Mat::Zero(d, 2 * d);
    expect(0, 0) = 1.0;
    EXPECT_EQ(out, expect);
}

TEST(Cholesky, RandomOutputsArePhysical) {
    RngStream rng(8);
    size_t d = 8;
    for (int trial = 0; trial < 50; trial++) {
        Tape t;
        Mat out = cholesky_head(t.constant(random_mat(3 * d * d, 2, rng)), 3, d).value();
        for (size_t b = 0; b < 3; b++) {
            qmat::ComplexMatrix rho = rows_state(out, b, d);
            EXPECT_TRUE(rho == rho.adjoint());
            EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
            auto eig = qmat::herm_eig(rho);
            EXPECT_GE(eig.values.front(), -1e-12);
        }
    }
}

TEST(Cholesky, GradientMatchesFiniteDifferences) {
    RngStream rng(10);
    Mat raw = random_mat(2 * 16, 2, rng);
    Fn f = [](Tape &, const std::vector<Tensor> &x) { return cholesky_head(x[0], 2, 4); };
    EXPECT_LE(fd_max_rel_error(f, {raw}, 11), 1e-4);
}

TEST(Cholesky, ZeroFactorIsDegenerate) {
    Mat raw = Mat::Zero(4, 2);
    raw(1, 0) = 3.0;  // upper triangle only
    raw(0, 1) = 1.0;  // imaginary diagonal only
    Tape t;
    EXPECT_EQ(kind_of([&] { cholesky_head(t.constant(raw), 1, 2); }), ErrorKind::DegenerateFactor);
}

namespace {

ModelConfig qst_config(size_t n) {
    ModelConfig c;
    c.task = qsldata::Task::Qst;
    c.n_qubits = n;
    c.token_dim = 2;
    return c;
}

ModelConfig dfe_config(size_t n, size_t width = 10) {
    ModelConfig c;
    c.task = qsldata::Task::Dfe;
    c.n_qubits = n;
    c.token_dim = width;
    return c;
}

}  // namespace

TEST(Model, QstShapeContract) {
    Model m(qst_config(3), 1);
    std::vector<double> feature(64 * 2, 0.1);
    qmat::ComplexMatrix rho = m.predict_state(feature);
    EXPECT_EQ(rho.dim(), 8u);
    EXPECT_NEAR(rho.trace().real(), 1.0, 1e-12);
}

TEST(Model, DfeShapeContract) {
    Model m(dfe_config(10), 1);
    std::vector<double> feature(10 * 10, 0.1);
    double y = m.predict_fidelity(feature);
    EXPECT_TRUE(std::isfinite(y));
    EXPECT_EQ(kind_of([&] { m.predict_fidelity(std::vector<double>(10 * 8)); }), ErrorKind::ShapeMismatch);
}

TEST(Model, SeedDeterminesParameters) {
    EXPECT_TRUE(Model(qst_config(2), 5) == Model(qst_config(2), 5));
    EXPECT_FALSE(Model(qst_config(2), 5) == Model(qst_config(2), 6));
}

TEST(Model, ConfigValidationAndJson) {
    ModelConfig c = dfe_config(4);
    c.heads = 3;
    EXPECT_EQ(kind_of([&] { c.validate(); }), ErrorKind::InvalidArgument);
    c.heads = 4;
    EXPECT_EQ(ModelConfig::from_json(c.to_json()).to_json(), c.to_json());
    json j = c.to_json();
    j["dropout"] = 0.1;
    EXPECT_EQ(kind_of([&] { ModelConfig::from_json(j); }), ErrorKind::SchemaViolation);
}

TEST(Model, BatchedForwardMatchesSingle) {
    Model m(dfe_config(4), 2);
    RngStream rng(3);
    std::vector<double> f1(40), f2(40);
    for (size_t i = 0; i < 40; i++) {
        f1[i] = rng.uniform();
        f2[i] = rng.uniform();
    }
    Tape t;
    Mat out = m.forward(t, m.bind(t, false), m.input_batch({&f1, &f2}), 2).value();
    EXPECT_NEAR(out(0, 0), m.predict_fidelity(f1), 1e-13);
    EXPECT_NEAR(out(1, 0), m.predict_fidelity(f2), 1e-13);
}

TEST(Loss, Values) {
    Tape t;
    qmat::ComplexMatrix half = qmat::ComplexMatrix::diagonal({0.5, 0.5});
    qmat::ComplexMatrix zero = qmat::ComplexMatrix::diagonal({1.0, 0.0});
    EXPECT_DOUBLE_EQ(loss_qst(t.constant(state_rows(half)), state_rows(zero), 1).value()(0, 0), 0.5);
    EXPECT_EQ(loss_qst(t.constant(state_rows(zero)), state_rows(zero), 1).value()(0, 0), 0.0);
    Mat y(2, 1), p(2, 1);
    y << 1.0, 0.0;
    p << 0.5, 0.0;
    EXPECT_DOUBLE_EQ(loss_dfe(t.constant(p), y, 2).value()(0, 0), 0.125);
    RngStream rng(1);
    Mat target = random_mat(2, 4, rng);
    Fn f = [&](Tape &, const std::vector<Tensor> &x) { return loss_qst(x[0], target, 1); };
    EXPECT_LE(fd_max_rel_error(f, {random_mat(2, 4, rng)}, 2), 1e-4);
}

TEST(AdamW, FirstStepIsUnitNormalized) {
    std::vector<Param> p = {{"w", Mat::Zero(1, 1)}};
    AdamState s;
    s.m = {Mat::Zero(1, 1)};
    s.v = {Mat::Zero(1, 1)};
    TrainConfig cfg;
    cfg.weight_decay = 0;
    adamw_step(p, {Mat::Ones(1, 1)}, s, cfg);
    EXPECT_DOUBLE_EQ(p[0].value(0, 0), -cfg.lr / (1 + cfg.eps));
    EXPECT_EQ(s.step, 1u);
}

TEST(AdamW, ZeroGradientZeroDecayIsNoop) {
    RngStream rng(2);
    Mat w = random_mat(3, 3, rng);
    std::vector<Param> p = {{"w", w}};
    AdamState s;
    s.m = {Mat::Zero(3, 3)};
    s.v = {Mat::Zero(3, 3)};
    TrainConfig cfg;
    cfg.weight_decay = 0;
    for (int i = 0; i < 5; i++) {
        adamw_step(p, {Mat::Zero(3, 3)}, s, cfg);
    }
    EXPECT_EQ(p[0].value, w);
}

TEST(AdamW, MatchesScalarRecurrence) {
    TrainConfig cfg;
    cfg.lr = 0.01;
    cfg.weight_decay = 0.1;
    std::vector<Param> p = {{"w", Mat::Constant(1, 1, 0.7)}};
    AdamState s;
    s.m = {Mat::Zero(1, 1)};
    s.v = {Mat::Zero(1, 1)};
    double w = 0.7, m = 0, v = 0;
    for (int t = 1; t <= 10; t++) {
        double g = std::sin(t) + 0.3 * w;
        adamw_step(p, {Mat::Constant(1, 1, std::sin(t) + 0.3 * p[0].value(0, 0))}, s, cfg);
        w -= cfg.lr * cfg.weight_decay * w;
        m = 0.9 * m + 0.1 * g;
        v = 0.99 * v + 0.01 * g * g;
        double mhat = m / (1 - std::pow(0.9, t)), vhat = v / (1 - std::pow(0.99, t));
        w -= cfg.lr * mhat / (std::sqrt(vhat) + 1e-8);
        EXPECT_NEAR(p[0].value(0, 0), w, 1e-12);
    }
}

TEST(AdamW, ShapeMismatch) {
    std::vector<Param> p = {{"w", Mat::Zero(2, 2)}};
    AdamState s;
    s.m = {Mat::Zero(2, 2)};
    s.v = {Mat::Zero(2, 2)};
    EXPECT_EQ(kind_of([&] { adamw_step(p, {Mat::Zero(1, 2)}, s, TrainConfig{}); }), ErrorKind::ShapeMismatch);
}

namespace {

qsldata::Dataset toy_qst(size_t n_train, size_t n_test) {
    qsldata::Manifest m;
    m.task = qsldata::Task::Qst;
    m.n_qubits = 2;
    m.n_train = n_train;
    m.n_test = n_test;
    m.m_shots = 200;
    m.seed = 4;
    m.validate();
    return qsldata::generate(m);
}

qsldata::Dataset toy_dfe(size_t n_train, size_t n_test) {
    qsldata::Manifest m;
    m.task = qsldata::Task::Dfe;
    m.n_qubits = 4;
    m.n_train = n_train;
    m.n_test = n_test;
    m.m_shots = 100;
    m.seed = 4;
    m.validate();
    return qsldata::generate(m);
}

}  // namespace

TEST(Train, ToyQstLossDecreases) {
    qsldata::Dataset d = toy_qst(2, 0);
    ModelConfig mc = ModelConfig::for_dataset(d.manifest);
    mc.blocks = 1;
    TrainConfig cfg;
    cfg.epochs = 200;
    cfg.seed = 3;
    TrainState st{Model(mc, cfg.seed), AdamState{}, 0};
    double initial = mean_loss(st.model, d, qsldata::Split::Train, 1);
    std::vector<double> curve;
    train(st, d, cfg, [&](const EpochStats &e, const TrainState &) { curve.push_back(e.train_loss); });
    ASSERT_EQ(curve.size(), 200u);
    EXPECT_LT(mean_loss(st.model, d, qsldata::Split::Train, 1), initial);
    EXPECT_LT(curve.back(), curve.front());
}

TEST(Train, BitwiseDeterministicAcrossRunsAndWorkers) {
    qsldata::Dataset d = toy_dfe(20, 4);
    ModelConfig mc = ModelConfig::for_dataset(d.manifest);
    TrainConfig cfg;
    cfg.epochs = 5;
    cfg.batch_size = 16;
    cfg.seed = 9;
    auto run = [&](int workers) {
        TrainConfig c = cfg;
        c.workers = workers;
        TrainState st{Model(mc, c.seed), AdamState{}, 0};
        std::vector<double> curve;
        train(st, d, c, [&](const EpochStats &e, const TrainState &) {
            curve.push_back(e.train_loss);
            curve.push_back(*e.test_loss);
        });
        return std::make_pair(curve, st.model);
    };
    auto a = run(1), b = run(1), c = run(3);
    EXPECT_EQ(a.first, b.first);
    EXPECT_EQ(a.first, c.first);
    EXPECT_TRUE(a.second == c.second);
}

TEST(Train, ResumeMatchesUninterrupted) {
    qsldata::Dataset d = toy_dfe(12, 0);
    ModelConfig mc = ModelConfig::for_dataset(d.manifest);
    TrainConfig cfg;
    cfg.epochs = 6;
    cfg.batch_size = 5;
    TrainState full{Model(mc, 1), AdamState{}, 0};
    train(full, d, cfg);

    TrainConfig half = cfg;
    half.epochs = 3;
    TrainState part{Model(mc, 1), AdamState{}, 0};
    train(part, d, half);
    auto path = std::filesystem::temp_directory_path() / "gradnet_test_resume.qslw";
    save_checkpoint(part, half, path);
    Checkpoint ck = load_checkpoint(path);
    EXPECT_EQ(ck.state.epoch, 3u);
    train(ck.state, d, cfg);
    EXPECT_TRUE(ck.state.model == full.model);
    EXPECT_EQ(ck.state.opt.step, full.opt.step);
}

TEST(Train, TaskMismatch) {
    qsldata::Dataset d = toy_dfe(2, 0);
    TrainState st{Model(qst_config(2), 0), AdamState{}, 0};
    EXPECT_EQ(kind_of([&] { train(st, d, TrainConfig{}); }), ErrorKind::TaskMismatch);
}

TEST(Checkpoint, RoundTripAndCorruption) {
    TrainState st{Model(dfe_config(4), 3), AdamState{}, 7};
    st.opt = AdamState::zeros(st.model);
    st.opt.step = 42;
    st.opt.m[0](0, 0) = 0.25;
    TrainConfig cfg;
    cfg.epochs = 9;
    auto path = std::filesystem::temp_directory_path() / "gradnet_test_ck.qslw";
    save_checkpoint(st, cfg, path);
    Checkpoint ck = load_checkpoint(path);
    EXPECT_TRUE(ck.state.model == st.model);
    EXPECT_EQ(ck.state.opt.step, 42u);
    EXPECT_EQ(ck.state.opt.m[0](0, 0), 0.25);
    EXPECT_EQ(ck.state.epoch, 7u);
    EXPECT_EQ(ck.train.epochs, 9u);
    auto bytes = qsldata::read_file(path);
    bytes[bytes.size() / 2] ^= 0x10;
    qsldata::write_file(path, bytes);
    EXPECT_EQ(kind_of([&] { load_checkpoint(path); }), ErrorKind::ChecksumMismatch);
}

TEST(GradCheck, QstTwoQubits) {
    Model m(qst_config(2), 1);
    GradCheckReport r = grad_check(m, 5);
    EXPECT_GE(r.coordinates, 200u);
    EXPECT_LE(r.max_rel_error, 1e-4);
}

TEST(GradCheck, DfeFourQubits) {
    Model m(dfe_config(4), 1);
    GradCheckReport r = grad_check(m, 5);
    EXPECT_GE(r.coordinates, 200u);
    EXPECT_LE(r.max_rel_error, 1e-4);
}

TEST(GradCheck, LeavesParametersUntouched) {
    Model m(dfe_config(4), 1);
    Model copy = m;
    grad_check(m, 6);
    EXPECT_TRUE(m == copy);
}
