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

#ifndef SHADOWNET_CTL_H
#define SHADOWNET_CTL_H

#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "shadownet/error.h"
#include "shadownet/gradnet/model.h"
#include "shadownet/gradnet/train.h"
#include "shadownet/qsldata.h"

namespace shadownet::ctl {

using json = nlohmann::ordered_json;

struct Aggregate {
    double mean = 0;
    double std = 0;  // population
};

Aggregate aggregate(const std::vector<double> &v);

struct QstEvaluation {
    std::vector<double> fq;
    std::vector<double> e1;  // Tr(H pred) - surrogate energy
    Aggregate fq_agg;
    Aggregate e1_agg;
    Aggregate abs_e1_agg;
};

struct DfeEvaluation {
    std::vector<double> prediction;
    std::vector<double> e2;
    Aggregate e2_agg;
};

using StatePredictor = std::function<qmat::ComplexMatrix(const qsldata::QstExample &)>;
using FidelityPredictor = std::function<double(const qsldata::DfeExample &)>;

QstEvaluation evaluate_qst(const StatePredictor &predict, const std::vector<qsldata::QstExample> &set);
QstEvaluation evaluate_qst(const gradnet::Model &model, const std::vector<qsldata::QstExample> &set);
DfeEvaluation evaluate_dfe(const FidelityPredictor &predict, const std::vector<qsldata::DfeExample> &set);
DfeEvaluation evaluate_dfe(const gradnet::Model &model, const std::vector<qsldata::DfeExample> &set);

/// Tr(H rho) for a dense Hamiltonian.
double energy_of(const qmat::ComplexMatrix &rho, const spinsys::Hamiltonian &h);

enum class Verdict : uint8_t { Faithful, Unfaithful, Indeterminate };
std::string verdict_name(Verdict v);

struct FaithVerdict {
    double prediction;
    double shadow_estimate;
    double bound;
    Verdict verdict;
    double reported_value;

    bool faithful() const {
        return verdict == Verdict::Faithful;
    }
};

/// Faithful iff |prediction - estimate| <= bound (inclusive); the reported
/// value falls back to the estimate otherwise.
FaithVerdict judge(double prediction, double estimate, double bound);
/// No usable estimate: reports the prediction with the attached bound.
FaithVerdict indeterminate(double prediction, double bound);

struct FaithReport {
    std::vector<FaithVerdict> verdicts;
    size_t faithful = 0;
    size_t unfaithful = 0;
    size_t indeterminate = 0;
    size_t k_split = 0;
    double delta = 0;

    /// Faithful over examples with a determinate verdict.
    double faithful_fraction() const;
    /// Unfaithful verdicts whose reported value is the shadow estimate.
    size_t fallbacks() const {
        return unfaithful;
    }
    json to_json() const;
};

/// QST: energy prediction Tr(H pred) against estimate_energy and
/// energy_bound. DFE: fidelity prediction against estimate_fidelity_mom and
/// fidelity_bound on the Pauli decomposition of the ideal target (GHZ for
/// Global and StatePrep, |+>^n for Local); Indeterminate beyond 24 qubits.
FaithReport faith_report(const gradnet::Model &model, const qsldata::Dataset &data, qsldata::Split split,
                         size_t k_split, double delta);
FaithReport faith_report_qst(const StatePredictor &predict, const std::vector<qsldata::QstExample> &set,
                             size_t k_split, double delta);
FaithReport faith_report_dfe(const FidelityPredictor &predict, const std::vector<qsldata::DfeExample> &set,
                             size_t k_split, double delta);

/// Training run configuration: {"model": {...}, "train": {...}}. Model keys
/// override the dataset-derived architecture (hidden, blocks, heads,
/// ff_hidden, activation); unknown keys are SchemaViolation.
struct RunConfig {
    json model_overrides = json::object();
    gradnet::TrainConfig train;

    static RunConfig from_json(const json &j);
    json to_json() const;
    gradnet::ModelConfig model_for(const qsldata::Manifest &m) const;
};

json read_json(const std::filesystem::path &path);
void write_json(const std::filesystem::path &path, const json &j);

/// Manifest from a gen-data config: manifest keys with task taken from the
/// command (a differing "task" key is TaskMismatch). "stateprep" selects the
/// state-prep DFE variant.
qsldata::Manifest manifest_from_config(const json &config, const std::string &task);

/// Deterministic run summary recomputed by `eval`.
json summarize(const gradnet::Model &model, const qsldata::Dataset &data, const json &run_config,
               const std::filesystem::path &data_dir, size_t epochs);

/// Trains into run_dir: config.json, metrics.csv, checkpoint.qslw,
/// summary.json, timings.json.
struct TrainOutcome {
    bool already_complete = false;
    size_t epochs_run = 0;
    json summary;
};
TrainOutcome run_training(const std::filesystem::path &data_dir, const json &config,
                          const std::filesystem::path &run_dir, bool resume, int workers);

std::string metrics_header();

struct OracleResult {
    std::string name;
    bool pass = false;
    json details;
};

std::vector<std::string> oracle_names();
/// Throws InvalidArgument for an unknown name; "all" runs every check.
std::vector<OracleResult> run_oracle(const std::string &name);

OracleResult oracle_fidelity(uint64_t seed = 1);
OracleResult oracle_stabilizer_vs_dense(uint64_t seed = 2);
OracleResult oracle_shadow_unbiased(uint64_t seed = 3);
OracleResult oracle_grad(uint64_t seed = 4);
OracleResult oracle_bounds();
OracleResult oracle_cholesky(uint64_t seed = 6, size_t samples = 10000);

/// Exit codes: 0 success, 1 check failure, 2 usage or config error, 3 I/O.
int exit_code_for(ErrorKind kind);
int run_cli(int argc, char **argv);

}  // namespace shadownet::ctl

#endif
