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

#include <set>
#include <string>

#include "shadownet/error.h"
#include "shadownet/qsldata.h"

namespace shadownet::qsldata {

namespace {

[[noreturn]] void schema(const std::string &what) {
    fail(ErrorKind::SchemaViolation, "manifest: " + what);
}

void allow_only(const json &j, const std::set<std::string> &keys, const std::string &where) {
    if (!j.is_object()) {
        schema(where + " must be an object");
    }
    for (const auto &[k, v] : j.items()) {
        if (!keys.count(k)) {
            schema("unknown key '" + k + "' in " + where);
        }
    }
}

size_t get_count(const json &j, const char *key) {
    const json &v = j.at(key);
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0)) {
        schema(std::string(key) + " must be a non-negative integer");
    }
    return v.get<size_t>();
}

double get_real(const json &j, const char *key) {
    const json &v = j.at(key);
    if (!v.is_number()) {
        schema(std::string(key) + " must be a number");
    }
    return v.get<double>();
}

Range get_range(const json &j, const char *key) {
    const json &v = j.at(key);
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
        schema(std::string(key) + " must be a [lo, hi] pair");
    }
    return {v[0].get<double>(), v[1].get<double>()};
}

std::string get_string(const json &j, const char *key) {
    const json &v = j.at(key);
    if (!v.is_string()) {
        schema(std::string(key) + " must be a string");
    }
    return v.get<std::string>();
}

json range_json(Range r) {
    return json::array({r.lo, r.hi});
}

void check_range(Range r, double lo, double hi, const char *what) {
    require(r.lo <= r.hi && r.lo >= lo && r.hi <= hi, ErrorKind::SchemaViolation,
            std::string("manifest: ") + what + " range must be ordered and inside [" + std::to_string(lo) + ", " +
                std::to_string(hi) + "]");
}

}  // namespace

std::string task_name(Task t) {
    return t == Task::Qst ? "qst" : "dfe";
}

std::string family_name(Family f) {
    switch (f) {
        case Family::Tfim:
            return "tfim";
        case Family::Xxz:
            return "xxz";
        default:
            return "mixed";
    }
}

std::string kind_name(DfeKind k) {
    switch (k) {
        case DfeKind::Global:
            return "global";
        case DfeKind::Local:
            return "local";
        case DfeKind::Mixed:
            return "mixed";
        default:
            return "stateprep";
    }
}

std::string mask_name(FeatureMask m) {
    switch (m) {
        case FeatureMask::Full:
            return "full";
        case FeatureMask::NoiseOnly:
            return "noise_only";
        default:
            return "shadow_only";
    }
}

size_t token_dim(FeatureMask mask) {
    switch (mask) {
        case FeatureMask::Full:
            return 10;
        case FeatureMask::NoiseOnly:
            return 2;
        default:
            return 8;
    }
}

void Manifest::validate() const {
    require(format_version == kFormatVersion, ErrorKind::VersionMismatch,
            "unsupported format_version " + std::to_string(format_version));
    require(n_qubits >= 1, ErrorKind::SchemaViolation, "manifest: n_qubits must be positive");
    if (task == Task::Qst || is_stateprep()) {
        require(n_qubits >= 2, ErrorKind::SchemaViolation, "manifest: this task needs n_qubits >= 2");
        require(n_qubits <= shadows::kMaxDenseQubits, ErrorKind::TooLarge,
                "manifest: dense simulation is limited to 8 qubits, got " + std::to_string(n_qubits));
    }
    require(n_train >= 1, ErrorKind::SchemaViolation, "manifest: n_train must be positive");
    require(k_split >= 1 && k_split <= m_shots, ErrorKind::SchemaViolation,
            "manifest: need 1 <= k_split <= m_shots");
    require(delta > 0 && delta < 1, ErrorKind::SchemaViolation, "manifest: delta must lie in (0, 1)");
    require(mc_trajectories >= 100, ErrorKind::SchemaViolation, "manifest: mc_trajectories must be >= 100");
    if (task == Task::Qst) {
        require(sampling.jz.lo <= sampling.jz.hi && sampling.delta.lo <= sampling.delta.hi,
                ErrorKind::SchemaViolation, "manifest: coupling ranges must be ordered");
        require(feature_mask == FeatureMask::Full, ErrorKind::SchemaViolation,
                "manifest: feature masks apply to DFE datasets only");
    } else {
        check_range(sampling.p1, 0, 1, "p1");
        check_range(sampling.p2, 0, 1, "p2");
        check_range(sampling.p, 0, 1, "p");
        if (is_stateprep()) {
            require(feature_mask == FeatureMask::ShadowOnly, ErrorKind::SchemaViolation,
                    "manifest: state-prep datasets carry shadow features only (feature_mask shadow_only)");
        }
    }
}

json Manifest::to_json() const {
    json j;
    j["format_version"] = format_version;
    j["task"] = task_name(task);
    j["n_qubits"] = n_qubits;
    j["n_train"] = n_train;
    j["n_test"] = n_test;
    j["m_shots"] = m_shots;
    j["seed"] = seed;
    json s;
    if (task == Task::Qst) {
        s["family"] = family_name(sampling.family);
        s["jz_range"] = range_json(sampling.jz);
        s["jx"] = sampling.jx;
        s["delta_range"] = range_json(sampling.delta);
    } else {
        s["kind"] = kind_name(sampling.kind);
        s["p1_range"] = range_json(sampling.p1);
        s["p2_range"] = range_json(sampling.p2);
        s["p_range"] = range_json(sampling.p);
    }
    j["sampling"] = s;
    j["feature_mask"] = mask_name(feature_mask);
    j["k_split"] = k_split;
    j["delta"] = delta;
    j["mc_trajectories"] = mc_trajectories;
    return j;
}

Manifest Manifest::from_json(const json &j) {
    allow_only(j,
               {"format_version", "task", "n_qubits", "n_train", "n_test", "m_shots", "seed", "sampling",
                "feature_mask", "k_split", "delta", "mc_trajectories"},
               "manifest");
    Manifest m;
    try {
        if (j.contains("format_version")) {
            m.format_version = static_cast<uint32_t>(get_count(j, "format_version"));
            require(m.format_version == kFormatVersion, ErrorKind::VersionMismatch,
                    "unsupported format_version " + std::to_string(m.format_version));
        }
        std::string task = get_string(j, "task");
        if (task == "qst") {
            m.task = Task::Qst;
        } else if (task == "dfe") {
            m.task = Task::Dfe;
        } else {
            schema("task must be 'qst' or 'dfe'");
        }
        m.n_qubits = get_count(j, "n_qubits");
        m.n_train = get_count(j, "n_train");
        m.n_test = j.contains("n_test") ? get_count(j, "n_test") : m.n_train / 4;
        if (j.contains("seed")) {
            m.seed = get_count(j, "seed");
        }
        if (j.contains("sampling")) {
            const json &s = j.at("sampling");
            if (m.task == Task::Qst) {
                allow_only(s, {"family", "jz_range", "jx", "delta_range"}, "sampling");
                if (s.contains("family")) {
                    std::string f = get_string(s, "family");
                    if (f == "tfim") {
                        m.sampling.family = Family::Tfim;
                    } else if (f == "xxz") {
                        m.sampling.family = Family::Xxz;
                    } else if (f == "mixed") {
                        m.sampling.family = Family::Mixed;
                    } else {
                        schema("family must be tfim, xxz or mixed");
                    }
                }
                if (s.contains("jz_range")) {
                    m.sampling.jz = get_range(s, "jz_range");
                }
                if (s.contains("jx")) {
                    m.sampling.jx = get_real(s, "jx");
                }
                if (s.contains("delta_range")) {
                    m.sampling.delta = get_range(s, "delta_range");
                }
            } else {
                allow_only(s, {"kind", "p1_range", "p2_range", "p_range"}, "sampling");
                if (s.contains("kind")) {
                    std::string k = get_string(s, "kind");
                    if (k == "global") {
                        m.sampling.kind = DfeKind::Global;
                    } else if (k == "local") {
                        m.sampling.kind = DfeKind::Local;
                    } else if (k == "mixed") {
                        m.sampling.kind = DfeKind::Mixed;
                    } else if (k == "stateprep") {
                        m.sampling.kind = DfeKind::StatePrep;
                    } else {
                        schema("kind must be global, local, mixed or stateprep");
                    }
                }
                if (s.contains("p1_range")) {
                    m.sampling.p1 = get_range(s, "p1_range");
                }
                if (s.contains("p2_range")) {
                    m.sampling.p2 = get_range(s, "p2_range");
                }
                if (s.contains("p_range")) {
                    m.sampling.p = get_range(s, "p_range");
                }
            }
        }
        m.feature_mask = m.is_stateprep() ? FeatureMask::ShadowOnly : FeatureMask::Full;
        if (j.contains("feature_mask")) {
            std::string f = get_string(j, "feature_mask");
            if (f == "full") {
                m.feature_mask = FeatureMask::Full;
            } else if (f == "noise_only") {
                m.feature_mask = FeatureMask::NoiseOnly;
            } else if (f == "shadow_only") {
                m.feature_mask = FeatureMask::ShadowOnly;
            } else {
                schema("feature_mask must be full, noise_only or shadow_only");
            }
        }
        size_t default_m = m.task == Task::Qst ? 10000 : (m.is_stateprep() ? 100 : 2000);
        m.m_shots = j.contains("m_shots") ? get_count(j, "m_shots") : default_m;
        if (j.contains("k_split")) {
            m.k_split = get_count(j, "k_split");
        }
        if (j.contains("delta")) {
            m.delta = get_real(j, "delta");
        }
        if (j.contains("mc_trajectories")) {
            m.mc_trajectories = get_count(j, "mc_trajectories");
        }
    } catch (const json::exception &e) {
        schema(e.what());
    }
    m.validate();
    return m;
}

}  // namespace shadownet::qsldata
