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

#ifndef SHADOWNET_QSLDATA_H
#define SHADOWNET_QSLDATA_H

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"
#include "shadownet/qmat.h"
#include "shadownet/shadows.h"

namespace shadownet::qsldata {

using json = nlohmann::ordered_json;

constexpr uint32_t kFormatVersion = 1;

enum class Task : uint32_t { Qst = 0, Dfe = 1 };
enum class Split : uint32_t { Train = 0, Test = 1 };
enum class Family : uint8_t { Tfim = 0, Xxz = 1, Mixed = 2 };
enum class DfeKind : uint8_t { Global = 0, Local = 1, Mixed = 2, StatePrep = 3 };
enum class FeatureMask : uint8_t { Full = 0, NoiseOnly = 1, ShadowOnly = 2 };

std::string task_name(Task t);
std::string family_name(Family f);
std::string kind_name(DfeKind k);
std::string mask_name(FeatureMask m);

struct Range {
    double lo;
    double hi;
};

struct Sampling {
    // QST
    Family family = Family::Tfim;
    Range jz{-0.5, 0.5};
    double jx = 1.0;
    Range delta{-3.0, 3.0};
    // DFE
    DfeKind kind = DfeKind::Mixed;
    Range p1{1e-4, 1e-2};
    Range p2{1e-4, 0.1};
    Range p{0.1, 0.9};
};

struct Manifest {
    uint32_t format_version = kFormatVersion;
    Task task = Task::Qst;
    size_t n_qubits = 3;
    size_t n_train = 0;
    size_t n_test = 0;
    size_t m_shots = 0;
    uint64_t seed = 0;
    Sampling sampling;
    FeatureMask feature_mask = FeatureMask::Full;
    size_t k_split = 5;
    double delta = 0.05;
    size_t mc_trajectories = 4000;

    /// Throws SchemaViolation / TooLarge / InvalidArgument on bad values.
    void validate() const;
    json to_json() const;
    /// Strict parse: unknown keys and wrong types are SchemaViolation, a
    /// format_version other than 1 is VersionMismatch. Optional keys take
    /// task defaults (m_shots 10^4 QST, 2000 DFE, 100 state-prep; n_test =
    /// n_train / 4).
    static Manifest from_json(const json &j);

    size_t count(Split s) const {
        return s == Split::Train ? n_train : n_test;
    }
    bool is_stateprep() const {
        return task == Task::Dfe && sampling.kind == DfeKind::StatePrep;
    }
};

/// Token width of a DFE feature row under a mask: 10, 2 or 8.
size_t token_dim(FeatureMask mask);

struct QstExample {
    size_t n_qubits;
    Family family;  // Tfim or Xxz
    double coupling;
    /// d^2 tokens (row-major entries of the shadow state), each (re, im).
    std::vector<double> feature;
    qmat::ComplexMatrix label;
    double surrogate_energy;
    double shadow_energy_estimate;
    double shadow_energy_bound;
    double gap;
    shadows::ShadowSet shadows;

    spinsys::Hamiltonian hamiltonian() const;
    bool operator==(const QstExample &) const = default;
};

struct DfeExample {
    size_t n_qubits;
    DfeKind kind;  // Global, Local or StatePrep
    size_t token_dim;
    /// n_qubits rows of token_dim values.
    std::vector<double> feature;
    double label;
    double label_stderr;
    double p1;
    double p2;
    double p;
    shadows::ShadowSet shadows;

    bool operator==(const DfeExample &) const = default;
};

struct Dataset {
    Manifest manifest;
    std::vector<QstExample> qst[2];
    std::vector<DfeExample> dfe[2];

    size_t size(Split s) const {
        return manifest.task == Task::Qst ? qst[static_cast<int>(s)].size() : dfe[static_cast<int>(s)].size();
    }
};

/// Stream for one example; train and test use different keys.
RngStream example_stream(uint64_t seed, Split split, size_t index);

QstExample make_qst_example(const Manifest &m, Split split, size_t index);
DfeExample make_dfe_example(const Manifest &m, Split split, size_t index);

/// Builds every example of both splits on `workers` threads.
Dataset generate(const Manifest &m, int workers = 1);
Dataset gen_qst(const Manifest &m, int workers = 1);
Dataset gen_dfe(const Manifest &m, int workers = 1);
Dataset gen_stateprep(const Manifest &m, int workers = 1);

/// Fraction of QST examples whose shadow energy estimate misses the
/// surrogate by more than the bound.
double qst_audit_violation_fraction(const Dataset &d);

/// Directory with manifest.json, train.qsld and test.qsld.
void save(const Dataset &d, const std::filesystem::path &dir);
Dataset load(const std::filesystem::path &dir);

/// QSLD file image for one split.
std::vector<uint8_t> encode_split(const Dataset &d, Split s);
void decode_split(Dataset &d, Split s, const std::vector<uint8_t> &bytes);

uint32_t crc32(const uint8_t *data, size_t n);

std::vector<uint8_t> read_file(const std::filesystem::path &p);
void write_file(const std::filesystem::path &p, const std::vector<uint8_t> &bytes);

}  // namespace shadownet::qsldata

#endif
