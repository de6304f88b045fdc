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

#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "shadownet/ctl.h"
#include "shadownet/error.h"

namespace shadownet::ctl {

namespace fs = std::filesystem;
using gradnet::Checkpoint;
using gradnet::Model;
using gradnet::TrainState;
using qsldata::Split;
using qsldata::Task;

namespace {

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string run_id(const json &manifest, const json &config) {
    std::string text = manifest.dump() + "\n" + config.dump();
    char buf[16];
    std::snprintf(buf, sizeof buf, "%08" PRIx32,
                  qsldata::crc32(reinterpret_cast<const uint8_t *>(text.data()), text.size()));
    return buf;
}

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

// Keeps the header and the rows of epochs <= last.
void truncate_metrics(const fs::path &path, size_t last) {
    std::ifstream in(path);
    require(in.good(), ErrorKind::Io, "cannot read " + path.string());
    std::string line, out;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            out += line + "\n";
            header = false;
            continue;
        }
        if (line.empty()) {
            continue;
        }
        size_t epoch = std::stoull(line.substr(0, line.find(',')));
        if (epoch <= last) {
            out += line + "\n";
        }
    }
    in.close();
    qsldata::write_file(path, std::vector<uint8_t>(out.begin(), out.end()));
}

void save_checkpoint_atomic(const TrainState &st, const gradnet::TrainConfig &cfg, const fs::path &path) {
    fs::path tmp = path;
    tmp += ".tmp";
    gradnet::save_checkpoint(st, cfg, tmp);
    std::error_code ec;
    fs::rename(tmp, path, ec);
    require(!ec, ErrorKind::Io, "cannot replace " + path.string() + ": " + ec.message());
}

std::string metrics_row(const gradnet::EpochStats &e, const Model &model, const qsldata::Dataset &data) {
    std::string row = std::to_string(e.epoch) + "," + fmt(e.train_loss) + ",";
    row += e.test_loss ? fmt(*e.test_loss) : "";
    row += ",";
    if (data.size(Split::Test) == 0) {
        return row + ",,";
    }
    if (data.manifest.task == Task::Qst) {
        QstEvaluation ev = evaluate_qst(model, data.qst[1]);
        return row + fmt(ev.fq_agg.mean) + "," + fmt(ev.e1_agg.mean) + ",";
    }
    DfeEvaluation ev = evaluate_dfe(model, data.dfe[1]);
    return row + ",," + fmt(ev.e2_agg.mean);
}

}  // namespace

std::string metrics_header() {
    return "epoch,train_loss,test_loss,test_fq_mean,test_e1_mean,test_e2_mean";
}

json summarize(const Model &model, const qsldata::Dataset &data, const json &run_config, const fs::path &data_dir,
               size_t epochs) {
    json manifest = data.manifest.to_json();
    json s;
    s["run_id"] = run_id(manifest, run_config);
    s["task"] = qsldata::task_name(data.manifest.task);
    s["dataset"] = {{"path", fs::absolute(data_dir).lexically_normal().string()}, {"manifest", manifest}};
    s["config"] = run_config;
    s["epochs"] = epochs;
    s["train_loss"] = gradnet::mean_loss(model, data, Split::Train, 1);
    if (data.size(Split::Test) == 0) {
        s["test"] = nullptr;
        return s;
    }
    json t;
    t["count"] = data.size(Split::Test);
    t["loss"] = gradnet::mean_loss(model, data, Split::Test, 1);
    if (data.manifest.task == Task::Qst) {
        QstEvaluation ev = evaluate_qst(model, data.qst[1]);
        t["fq_mean"] = ev.fq_agg.mean;
        t["fq_std"] = ev.fq_agg.std;
        t["e1_mean"] = ev.e1_agg.mean;
        t["e1_std"] = ev.e1_agg.std;
        t["abs_e1_mean"] = ev.abs_e1_agg.mean;
        t["abs_e1_std"] = ev.abs_e1_agg.std;
        std::vector<double> bounds;
        for (const auto &e : data.qst[1]) {
            bounds.push_back(e.shadow_energy_bound);
        }
        t["shadow_bound_mean"] = aggregate(bounds).mean;
    } else {
        DfeEvaluation ev = evaluate_dfe(model, data.dfe[1]);
        t["e2_mean"] = ev.e2_agg.mean;
        t["e2_std"] = ev.e2_agg.std;
    }
    FaithReport fr = faith_report(model, data, Split::Test, data.manifest.k_split, data.manifest.delta);
    t["faith"] = {{"k_split", fr.k_split},
                  {"delta", fr.delta},
                  {"faithful", fr.faithful},
                  {"unfaithful", fr.unfaithful},
                  {"indeterminate", fr.indeterminate},
                  {"faithful_fraction", number_or_null(fr.faithful_fraction())}};
    s["test"] = t;
    return s;
}

TrainOutcome run_training(const fs::path &data_dir, const json &config, const fs::path &run_dir, bool resume,
                          int workers) {
    auto started = std::chrono::steady_clock::now();
    qsldata::Dataset data = qsldata::load(data_dir);
    RunConfig rc = RunConfig::from_json(config);
    rc.train.workers = workers;
    rc.train.validate();
    gradnet::ModelConfig mc = rc.model_for(data.manifest);
    json resolved = {{"model", mc.to_json()}, {"train", rc.train.to_json()}};

    std::error_code ec;
    fs::create_directories(run_dir, ec);
    require(!ec, ErrorKind::Io, "cannot create " + run_dir.string() + ": " + ec.message());
    fs::path ck_path = run_dir / "checkpoint.qslw", metrics_path = run_dir / "metrics.csv";

    TrainOutcome outcome;
    TrainState state{Model(mc, rc.train.seed), gradnet::AdamState{}, 0};
    if (resume && fs::exists(ck_path)) {
        Checkpoint ck = gradnet::load_checkpoint(ck_path);
        require(ck.state.model.config().to_json() == mc.to_json() && ck.train.to_json() == rc.train.to_json(),
                ErrorKind::InvalidArgument, "checkpoint was written with a different configuration");
        state = std::move(ck.state);
        if (state.epoch >= rc.train.epochs) {
            outcome.already_complete = true;
            if (fs::exists(run_dir / "summary.json")) {
                outcome.summary = read_json(run_dir / "summary.json");
            }
            return outcome;
        }
        truncate_metrics(metrics_path, state.epoch);
    } else {
        write_json(run_dir / "config.json", resolved);
        std::string header = metrics_header() + "\n";
        qsldata::write_file(metrics_path, std::vector<uint8_t>(header.begin(), header.end()));
    }

    std::ofstream metrics(metrics_path, std::ios::app);
    require(metrics.good(), ErrorKind::Io, "cannot append to " + metrics_path.string());
    size_t first = state.epoch;
    gradnet::train(state, data, rc.train, [&](const gradnet::EpochStats &e, const TrainState &st) {
        metrics << metrics_row(e, st.model, data) << "\n";
        metrics.flush();
        require(metrics.good(), ErrorKind::Io, "write failed on " + metrics_path.string());
        if (e.epoch % rc.train.checkpoint_every == 0 || e.epoch == rc.train.epochs) {
            save_checkpoint_atomic(st, rc.train, ck_path);
        }
    });
    if (state.epoch == first) {
        save_checkpoint_atomic(state, rc.train, ck_path);
    }
    outcome.epochs_run = state.epoch - first;
    outcome.summary = summarize(state.model, data, resolved, data_dir, state.epoch);
    write_json(run_dir / "summary.json", outcome.summary);
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    write_json(run_dir / "timings.json", {{"wall_seconds", seconds}, {"epochs_run", outcome.epochs_run}});
    return outcome;
}

int exit_code_for(ErrorKind kind) {
    return kind == ErrorKind::Io || kind == ErrorKind::ChecksumMismatch ? 3 : 2;
}

namespace {

// Numbers within 1e-9 (relative above 1), everything else exactly.
void compare_json(const json &a, const json &b, const std::string &where, std::vector<std::string> &diffs) {
    if (a.is_number() && b.is_number()) {
        double x = a.get<double>(), y = b.get<double>();
        if (!(std::abs(x - y) <= 1e-9 * std::max(1.0, std::abs(x)))) {
            diffs.push_back(where + ": " + fmt(x) + " vs " + fmt(y));
        }
        return;
    }
    if (a.is_object() && b.is_object()) {
        for (const auto &[k, v] : a.items()) {
            if (!b.contains(k)) {
                diffs.push_back(where + "." + k + ": missing");
            } else {
                compare_json(v, b.at(k), where + "." + k, diffs);
            }
        }
        for (const auto &[k, v] : b.items()) {
            if (!a.contains(k)) {
                diffs.push_back(where + "." + k + ": unexpected");
            }
        }
        return;
    }
    if (a.is_array() && b.is_array() && a.size() == b.size()) {
        for (size_t i = 0; i < a.size(); i++) {
            compare_json(a[i], b[i], where + "[" + std::to_string(i) + "]", diffs);
        }
        return;
    }
    if (a != b) {
        diffs.push_back(where + ": " + a.dump() + " vs " + b.dump());
    }
}

int cmd_gen_data(const std::string &task, const fs::path &config, const fs::path &out, int workers,
                 std::optional<uint64_t> seed) {
    json cfg = read_json(config);
    if (seed) {
        cfg["seed"] = *seed;
    }
    qsldata::Manifest m = manifest_from_config(cfg, task);
    qsldata::Dataset d = qsldata::generate(m, workers);
    qsldata::save(d, out);
    std::cout << "gen-data: task=" << task << " n_qubits=" << m.n_qubits << " train=" << d.size(Split::Train)
              << " test=" << d.size(Split::Test) << " m_shots=" << m.m_shots;
    if (m.task == Task::Qst) {
        std::cout << " audit_violation=" << qsldata::qst_audit_violation_fraction(d);
    }
    std::cout << " -> " << out.string() << "\n";
    return 0;
}

int cmd_train(const fs::path &data, const fs::path &config, const fs::path &out, bool resume, int workers,
              std::optional<uint64_t> seed) {
    json cfg = read_json(config);
    if (seed) {
        if (!cfg.contains("train")) {
            cfg["train"] = json::object();
        }
        cfg["train"]["seed"] = *seed;
    }
    TrainOutcome o = run_training(data, cfg, out, resume, workers);
    if (o.already_complete) {
        std::cout << "train: run in " << out.string() << " is already complete; nothing to do\n";
        return 0;
    }
    std::cout << "train: " << o.epochs_run << " epochs, train_loss=" << o.summary["train_loss"].get<double>();
    if (!o.summary["test"].is_null()) {
        std::cout << " test_loss=" << o.summary["test"]["loss"].get<double>();
    }
    std::cout << " -> " << out.string() << "\n";
    return 0;
}

struct LoadedRun {
    Checkpoint ck;
    qsldata::Dataset data;
    fs::path data_dir;
    json summary;
    json config;
};

LoadedRun load_run(const fs::path &run, const std::string &data_override) {
    json summary = read_json(run / "summary.json");
    json config = read_json(run / "config.json");
    fs::path data_dir = data_override.empty() ? fs::path(summary.at("dataset").at("path").get<std::string>())
                                              : fs::path(data_override);
    return LoadedRun{gradnet::load_checkpoint(run / "checkpoint.qslw"), qsldata::load(data_dir), data_dir, summary,
                     config};
}

int cmd_eval(const fs::path &run, const std::string &data_override) {
    LoadedRun r = load_run(run, data_override);
    json fresh = summarize(r.ck.state.model, r.data, r.config, r.data_dir, r.ck.state.epoch);
    json stored = r.summary;
    if (!data_override.empty()) {
        fresh["dataset"]["path"] = stored["dataset"]["path"];
    }
    std::vector<std::string> diffs;
    compare_json(stored, fresh, "summary", diffs);
    if (!diffs.empty()) {
        std::cout << "eval: summary.json does not match the recomputed summary\n";
        for (const auto &d : diffs) {
            std::cout << "  " << d << "\n";
        }
        return 1;
    }
    std::cout << "eval: summary.json matches the recomputed summary (" << run.string() << ")\n";
    return 0;
}

int cmd_faith(const fs::path &run, const std::string &data_override, size_t k_split, double delta,
              const std::string &out) {
    LoadedRun r = load_run(run, data_override);
    FaithReport fr = faith_report(r.ck.state.model, r.data, Split::Test, k_split, delta);
    fs::path path = out.empty() ? run / "faith.json" : fs::path(out);
    write_json(path, fr.to_json());
    std::cout << "faith: faithful=" << fr.faithful << " unfaithful=" << fr.unfaithful
              << " indeterminate=" << fr.indeterminate << " -> " << path.string() << "\n";
    return 0;
}

int cmd_oracle(const std::string &name) {
    auto names = oracle_names();
    if (std::find(names.begin(), names.end(), name) == names.end()) {
        std::cerr << "oracle: unknown check '" << name << "'; valid names:";
        for (const auto &n : names) {
            std::cerr << " " << n;
        }
        std::cerr << "\n";
        return 2;
    }
    bool ok = true;
    for (const OracleResult &r : run_oracle(name)) {
        json j = {{"check", r.name}, {"pass", r.pass}, {"details", r.details}};
        std::cout << j.dump() << "\n";
        ok = ok && r.pass;
    }
    return ok ? 0 : 1;
}

}  // namespace

int run_cli(int argc, char **argv) {
    CLI::App app{"shadowctl: shadow-network datasets, training, evaluation and oracle checks"};
    app.require_subcommand(1);

    std::string task, config, out, data, run, check, faith_out;
    int workers = 1;
    uint64_t seed_value = 0;
    bool resume = false;
    size_t k_split = 5;
    double delta = 0.05;

    CLI::App *gen = app.add_subcommand("gen-data", "Generate a QST, DFE or state-prep dataset");
    gen->add_option("--task", task, "qst, dfe or stateprep")->required()->check(CLI::IsMember({"qst", "dfe", "stateprep"}));
    gen->add_option("--config", config, "JSON data config")->required();
    gen->add_option("--out", out, "Output dataset directory")->required();
    gen->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    CLI::Option *gen_seed = gen->add_option("--seed", seed_value, "Override the master seed");

    CLI::App *tr = app.add_subcommand("train", "Train a model on a dataset");
    tr->add_option("--data", data, "Dataset directory")->required();
    tr->add_option("--config", config, "JSON run config")->required();
    tr->add_option("--out", out, "Run directory")->required();
    tr->add_flag("--resume", resume, "Continue from the run directory's checkpoint");
    tr->add_option("--workers", workers, "Worker threads")->check(CLI::PositiveNumber);
    CLI::Option *tr_seed = tr->add_option("--seed", seed_value, "Override the training seed");

    CLI::App *ev = app.add_subcommand("eval", "Recompute summary.json and compare with the stored one");
    ev->add_option("--run", run, "Run directory")->required();
    ev->add_option("--data", data, "Dataset directory (defaults to the one recorded in the run)");

    CLI::App *fa = app.add_subcommand("faith", "Faithfulness report of a run's test predictions");
    fa->add_option("--run", run, "Run directory")->required();
    fa->add_option("--data", data, "Dataset directory (defaults to the one recorded in the run)");
    fa->add_option("--k-split", k_split, "Median-of-means groups K")->required()->check(CLI::PositiveNumber);
    fa->add_option("--delta", delta, "Failure probability")->required();
    fa->add_option("--out", faith_out, "Output path (defaults to RUN/faith.json)");

    CLI::App *orc = app.add_subcommand("oracle", "Run named oracle self-checks");
    orc->add_option("--check", check, "Check name")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gen->parsed()) {
            return cmd_gen_data(task, config, out, workers,
                                gen_seed->count() ? std::optional<uint64_t>(seed_value) : std::nullopt);
        }
        if (tr->parsed()) {
            return cmd_train(data, config, out, resume, workers,
                             tr_seed->count() ? std::optional<uint64_t>(seed_value) : std::nullopt);
        }
        if (ev->parsed()) {
            return cmd_eval(run, data);
        }
        if (fa->parsed()) {
            return cmd_faith(run, data, k_split, delta, faith_out);
        }
        return cmd_oracle(check);
    } catch (const Error &e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_code_for(e.kind());
    } catch (const std::exception &e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace shadownet::ctl
