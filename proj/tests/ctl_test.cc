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

#include "shadownet/ctl.h"

#include <cmath>
#include <fstream>
#include <sstream>

#include "gtest/gtest.h"
#include "shadownet/error.h"

using namespace shadownet;
using namespace shadownet::ctl;
namespace fs = std::filesystem;

namespace {

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() /
                ("shadownet_ctl_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "_" +
                 ::testing::UnitTest::GetInstance()->current_test_info()->name());
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    const fs::path &path() const {
        return path_;
    }

private:
    fs::path path_;
};

int cli(std::vector<std::string> args) {
    args.insert(args.begin(), "shadowctl");
    std::vector<char *> argv;
    for (auto &a : args) {
        argv.push_back(a.data());
    }
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

std::string slurp(const fs::path &p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

size_t line_count(const fs::path &p) {
    std::string s = slurp(p);
    return static_cast<size_t>(std::count(s.begin(), s.end(), '\n'));
}

qsldata::Manifest toy_qst() {
    qsldata::Manifest m;
    m.task = qsldata::Task::Qst;
    m.n_qubits = 2;
    m.n_train = 12;
    m.n_test = 6;
    m.m_shots = 300;
    m.seed = 11;
    m.validate();
    return m;
}

qsldata::Manifest toy_dfe(qsldata::DfeKind kind = qsldata::DfeKind::Mixed) {
    qsldata::Manifest m;
    m.task = qsldata::Task::Dfe;
    m.n_qubits = 3;
    m.n_train = 12;
    m.n_test = 6;
    m.m_shots = 200;
    m.seed = 12;
    m.sampling.kind = kind;
    m.mc_trajectories = 200;
    m.validate();
    return m;
}

json toy_run(size_t epochs = 4, size_t every = 2) {
    return {{"model", {{"hidden", 8}, {"blocks", 1}, {"ff_hidden", 8}}},
            {"train", {{"epochs", epochs}, {"batch_size", 4}, {"checkpoint_every", every}, {"lr", 1e-3}}}};
}

void write_text(const fs::path &p, const std::string &s) {
    std::ofstream out(p, std::ios::binary);
    out << s;
}

}  // namespace

TEST(Faith, InclusiveBoundary) {
    FaithVerdict v = judge(1.0, 0.5, 0.5);
    EXPECT_EQ(v.verdict, Verdict::Faithful);
    EXPECT_EQ(v.reported_value, 1.0);
    FaithVerdict w = judge(1.0, 0.5, 0.4999);
    EXPECT_EQ(w.verdict, Verdict::Unfaithful);
    EXPECT_EQ(w.reported_value, 0.5);
    FaithVerdict u = indeterminate(0.3, 2.0);
    EXPECT_EQ(u.verdict, Verdict::Indeterminate);
    EXPECT_EQ(u.reported_value, 0.3);
    EXPECT_EQ(verdict_name(Verdict::Unfaithful), "unfaithful");
}

TEST(Faith, ReportCountsAndFraction) {
    qsldata::Dataset d = qsldata::generate(toy_qst());
    const auto &test = d.qst[1];
    // The shadow state itself sits within the bound of its own estimate in
    // energy only by chance, so use a far-off constant prediction.
    FaithReport far = faith_report_qst(
        [](const qsldata::QstExample &e) {
            qmat::ComplexMatrix z(e.label.dim());
            z(0, 0) = 1;
            return z;
        },
        test, 5, 0.05);
    EXPECT_EQ(far.faithful + far.unfaithful + far.indeterminate, test.size());
    FaithReport exact = faith_report_qst([](const qsldata::QstExample &e) { return e.label; }, test, 5, 0.05);
    EXPECT_EQ(exact.verdicts.size(), test.size());
    EXPECT_EQ(exact.unfaithful, 0u);
    EXPECT_DOUBLE_EQ(exact.faithful_fraction(), 1.0);
    for (size_t i = 0; i < far.verdicts.size(); i++) {
        const FaithVerdict &v = far.verdicts[i];
        EXPECT_EQ(v.shadow_estimate, test[i].shadow_energy_estimate);
        if (!v.faithful()) {
            EXPECT_EQ(v.reported_value, v.shadow_estimate);
        }
    }
    json j = far.to_json();
    EXPECT_EQ(j.at("faithful").get<size_t>(), far.faithful);
}

TEST(Faith, DfeBeyondDecompositionLimitIsIndeterminate) {
    qsldata::DfeExample e = qsldata::make_dfe_example(toy_dfe(), qsldata::Split::Test, 0);
    e.n_qubits = 30;
    FaithReport r = faith_report_dfe([](const qsldata::DfeExample &) { return 0.5; }, {e}, 5, 0.05);
    ASSERT_EQ(r.verdicts.size(), 1u);
    EXPECT_EQ(r.verdicts[0].verdict, Verdict::Indeterminate);
    EXPECT_TRUE(std::isnan(r.faithful_fraction()));
}

TEST(Evaluate, LabelPredictorIsPerfect) {
    qsldata::Dataset d = qsldata::generate(toy_qst());
    QstEvaluation ev = evaluate_qst([](const qsldata::QstExample &e) { return e.label; }, d.qst[1]);
    ASSERT_EQ(ev.fq.size(), d.qst[1].size());
    for (size_t i = 0; i < ev.fq.size(); i++) {
        EXPECT_NEAR(ev.fq[i], 1.0, 1e-9);
        EXPECT_NEAR(ev.e1[i], 0.0, 1e-9);
    }
    EXPECT_NEAR(ev.fq_agg.mean, 1.0, 1e-9);
}

TEST(Evaluate, MaximallyMixedPredictor) {
    qsldata::Dataset d = qsldata::generate(toy_qst());
    QstEvaluation ev = evaluate_qst(
        [](const qsldata::QstExample &e) { return qmat::DensityMatrix::maximally_mixed(e.label.dim()).mat(); },
        d.qst[1]);
    for (size_t i = 0; i < ev.fq.size(); i++) {
        const auto &e = d.qst[1][i];
        // A pure label against I/d; Tr(H) / d for the energy.
        EXPECT_NEAR(ev.fq[i], 0.25, 1e-9);
        double trace = spinsys::realize(e.hamiltonian()).trace().real() / 4;
        EXPECT_NEAR(ev.e1[i], trace - e.surrogate_energy, 1e-9);
    }
}

TEST(Evaluate, ConstantFidelityPredictor) {
    qsldata::Manifest m = toy_dfe(qsldata::DfeKind::Local);
    m.sampling.p1 = {0.0, 0.0};
    m.sampling.p2 = {0.0, 0.0};
    qsldata::Dataset d = qsldata::generate(m);
    DfeEvaluation ev = evaluate_dfe([](const qsldata::DfeExample &) { return 0.5; }, d.dfe[1]);
    for (double e : ev.e2) {
        EXPECT_DOUBLE_EQ(e, 0.25);
    }
    EXPECT_DOUBLE_EQ(ev.e2_agg.mean, 0.25);
    EXPECT_DOUBLE_EQ(ev.e2_agg.std, 0.0);
}

TEST(Evaluate, AggregateIsPopulation) {
    Aggregate a = aggregate({1.0, 3.0});
    EXPECT_DOUBLE_EQ(a.mean, 2.0);
    EXPECT_DOUBLE_EQ(a.std, 1.0);
}

TEST(Config, RunConfigIsStrict) {
    EXPECT_NO_THROW(RunConfig::from_json(toy_run()));
    EXPECT_THROW(RunConfig::from_json({{"optimizer", "sgd"}}), Error);
    EXPECT_THROW(RunConfig::from_json({{"model", {{"depth", 3}}}}), Error);
    EXPECT_THROW(RunConfig::from_json({{"train", {{"batch", 3}}}}), Error);
    try {
        RunConfig::from_json({{"train", {{"learning_rate", 1}}}});
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::SchemaViolation);
    }
}

TEST(Config, ModelOverridesApply) {
    RunConfig rc = RunConfig::from_json({{"model", {{"hidden", 16}, {"activation", "leaky_relu"}}}});
    gradnet::ModelConfig mc = rc.model_for(toy_qst());
    EXPECT_EQ(mc.hidden, 16u);
    EXPECT_EQ(mc.activation, gradnet::Activation::LeakyRelu);
    EXPECT_EQ(mc.n_qubits, 2u);
    EXPECT_EQ(mc.blocks, 3u);
}

TEST(Config, ManifestTaskComesFromCommand) {
    json c = {{"n_qubits", 4}, {"n_train", 8}};
    EXPECT_EQ(manifest_from_config(c, "dfe").task, qsldata::Task::Dfe);
    qsldata::Manifest sp = manifest_from_config(c, "stateprep");
    EXPECT_TRUE(sp.is_stateprep());
    EXPECT_EQ(sp.m_shots, 100u);
    json bad = c;
    bad["task"] = "qst";
    try {
        manifest_from_config(bad, "dfe");
        FAIL();
    } catch (const Error &e) {
        EXPECT_EQ(e.kind(), ErrorKind::TaskMismatch);
    }
    EXPECT_THROW(manifest_from_config(c, "vqe"), Error);
}

TEST(Cli, UsageAndConfigErrors) {
    TempDir tmp;
    EXPECT_EQ(cli({}), 2);
    EXPECT_EQ(cli({"frobnicate"}), 2);
    EXPECT_EQ(cli({"--help"}), 0);
    EXPECT_EQ(cli({"oracle", "--check", "nope"}), 2);
    fs::path cfg = tmp.path() / "big.json";
    write_json(cfg, {{"n_qubits", 9}, {"n_train", 4}});
    EXPECT_EQ(cli({"gen-data", "--task", "qst", "--config", cfg.string(), "--out", (tmp.path() / "d").string()}), 2);
    EXPECT_FALSE(fs::exists(tmp.path() / "d" / "train.qsld"));
    EXPECT_EQ(cli({"gen-data", "--task", "qst", "--config", (tmp.path() / "missing.json").string(), "--out",
                   (tmp.path() / "d").string()}),
              3);
    EXPECT_EQ(cli({"eval", "--run", (tmp.path() / "norun").string()}), 3);
}

TEST(Cli, OracleChecksRun) {
    EXPECT_EQ(cli({"oracle", "--check", "bounds"}), 0);
    EXPECT_EQ(cli({"oracle", "--check", "cholesky"}), 0);
}

TEST(Cli, TrainWritesRunFilesAndResumes) {
    TempDir tmp;
    fs::path data = tmp.path() / "data", run = tmp.path() / "run", cfg = tmp.path() / "run.json";
    qsldata::save(qsldata::generate(toy_qst()), data);
    write_json(cfg, toy_run(4, 2));
    ASSERT_EQ(cli({"train", "--data", data.string(), "--config", cfg.string(), "--out", run.string()}), 0);
    for (const char *f : {"config.json", "metrics.csv", "checkpoint.qslw", "summary.json", "timings.json"}) {
        EXPECT_TRUE(fs::exists(run / f)) << f;
    }
    EXPECT_EQ(line_count(run / "metrics.csv"), 5u);
    EXPECT_EQ(slurp(run / "metrics.csv").substr(0, metrics_header().size()), metrics_header());
    json summary = read_json(run / "summary.json");
    EXPECT_EQ(summary.at("epochs").get<size_t>(), 4u);
    EXPECT_EQ(summary.at("test").at("count").get<size_t>(), 6u);

    std::string metrics = slurp(run / "metrics.csv");
    TrainOutcome again = run_training(data, toy_run(4, 2), run, true, 1);
    EXPECT_TRUE(again.already_complete);
    EXPECT_EQ(slurp(run / "metrics.csv"), metrics);

    EXPECT_EQ(cli({"eval", "--run", run.string()}), 0);
    summary["train_loss"] = summary.at("train_loss").get<double>() + 1e-3;
    write_json(run / "summary.json", summary);
    EXPECT_EQ(cli({"eval", "--run", run.string()}), 1);
}

TEST(Cli, ResumeAfterInterruptionMatchesUninterrupted) {
    TempDir tmp;
    fs::path data = tmp.path() / "data";
    qsldata::Dataset d = qsldata::generate(toy_dfe());
    qsldata::save(d, data);
    json cfg = toy_run(6, 2);
    run_training(data, cfg, tmp.path() / "full", false, 1);
    std::string full = slurp(tmp.path() / "full" / "metrics.csv");

    // Interrupted after epoch 3 with the last checkpoint at epoch 2.
    fs::path part = tmp.path() / "part";
    fs::create_directories(part);
    RunConfig rc = RunConfig::from_json(cfg);
    gradnet::ModelConfig mc = rc.model_for(d.manifest);
    gradnet::TrainState st{gradnet::Model(mc, rc.train.seed), gradnet::AdamState{}, 0};
    struct Stop {};
    try {
        gradnet::train(st, d, rc.train, [&](const gradnet::EpochStats &e, const gradnet::TrainState &s) {
            if (e.epoch == 2) {
                gradnet::save_checkpoint(s, rc.train, part / "checkpoint.qslw");
                throw Stop{};
            }
        });
    } catch (const Stop &) {
    }
    size_t cut = 0;
    for (int lines = 0; lines < 4; lines++) {
        cut = full.find('\n', cut) + 1;
    }
    write_text(part / "metrics.csv", full.substr(0, cut) + "3,garbage\n");
    TrainOutcome out = run_training(data, cfg, part, true, 1);
    EXPECT_FALSE(out.already_complete);
    EXPECT_EQ(out.epochs_run, 4u);
    EXPECT_EQ(slurp(part / "metrics.csv"), full);
    EXPECT_EQ(slurp(part / "checkpoint.qslw"), slurp(tmp.path() / "full" / "checkpoint.qslw"));
}

TEST(Cli, ResumeRejectsDifferentConfig) {
    TempDir tmp;
    fs::path data = tmp.path() / "data";
    qsldata::save(qsldata::generate(toy_qst()), data);
    run_training(data, toy_run(2, 1), tmp.path() / "run", false, 1);
    json other = toy_run(2, 1);
    other["train"]["lr"] = 5e-4;
    EXPECT_THROW(run_training(data, other, tmp.path() / "run", true, 1), Error);
}

TEST(Cli, GenDataAndTrainAreDeterministic) {
    TempDir tmp;
    fs::path cfg = tmp.path() / "d.json", run_cfg = tmp.path() / "r.json";
    write_json(cfg, {{"n_qubits", 3}, {"n_train", 8}, {"n_test", 4}, {"m_shots", 100}, {"seed", 5},
                     {"mc_trajectories", 100}});
    write_json(run_cfg, toy_run(3, 3));
    for (const char *tag : {"a", "b"}) {
        fs::path d = tmp.path() / (std::string("data_") + tag), r = tmp.path() / (std::string("run_") + tag);
        std::string workers = tag[0] == 'a' ? "1" : "3";
        ASSERT_EQ(cli({"gen-data", "--task", "dfe", "--config", cfg.string(), "--out", d.string(), "--workers",
                       workers}),
                  0);
        ASSERT_EQ(cli({"train", "--data", d.string(), "--config", run_cfg.string(), "--out", r.string(),
                       "--workers", workers}),
                  0);
    }
    for (const char *f : {"manifest.json", "train.qsld", "test.qsld"}) {
        EXPECT_EQ(slurp(tmp.path() / "data_a" / f), slurp(tmp.path() / "data_b" / f)) << f;
    }
    for (const char *f : {"metrics.csv", "checkpoint.qslw", "config.json"}) {
        EXPECT_EQ(slurp(tmp.path() / "run_a" / f), slurp(tmp.path() / "run_b" / f)) << f;
    }
    json sa = read_json(tmp.path() / "run_a" / "summary.json"), sb = read_json(tmp.path() / "run_b" / "summary.json");
    sa["dataset"].erase("path");
    sb["dataset"].erase("path");
    EXPECT_EQ(sa.dump(), sb.dump());
}

TEST(Cli, FaithCommandWritesReport) {
    TempDir tmp;
    fs::path data = tmp.path() / "data", run = tmp.path() / "run";
    qsldata::save(qsldata::generate(toy_qst()), data);
    run_training(data, toy_run(2, 2), run, false, 1);
    ASSERT_EQ(cli({"faith", "--run", run.string(), "--k-split", "5", "--delta", "0.05"}), 0);
    json j = read_json(run / "faith.json");
    EXPECT_EQ(j.at("faithful").get<size_t>() + j.at("unfaithful").get<size_t>() +
                  j.at("indeterminate").get<size_t>(),
              6u);
}
