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

#include "shadownet/ctl.h"
#include "shadownet/error.h"

namespace shadownet::ctl {

namespace {

const std::set<std::string> kModelOverrides = {"hidden", "blocks", "heads", "ff_hidden", "activation"};

void schema(const std::string &what) {
    fail(ErrorKind::SchemaViolation, what);
}

}  // namespace

RunConfig RunConfig::from_json(const json &j) {
    if (!j.is_object()) {
        schema("run config must be a JSON object");
    }
    RunConfig c;
    for (const auto &[k, v] : j.items()) {
        if (k != "model" && k != "train") {
            schema("run config: unknown key '" + k + "'");
        }
    }
    if (j.contains("model")) {
        const json &m = j.at("model");
        if (!m.is_object()) {
            schema("run config: model must be an object");
        }
        for (const auto &[k, v] : m.items()) {
            if (!kModelOverrides.count(k)) {
                schema("run config: unknown model key '" + k + "'");
            }
        }
        c.model_overrides = m;
    }
    if (j.contains("train")) {
        c.train = gradnet::TrainConfig::from_json(j.at("train"));
    }
    return c;
}

json RunConfig::to_json() const {
    json j;
    j["model"] = model_overrides;
    j["train"] = train.to_json();
    return j;
}

gradnet::ModelConfig RunConfig::model_for(const qsldata::Manifest &m) const {
    json base = gradnet::ModelConfig::for_dataset(m).to_json();
    for (const auto &[k, v] : model_overrides.items()) {
        base[k] = v;
    }
    return gradnet::ModelConfig::from_json(base);
}

json read_json(const std::filesystem::path &path) {
    std::vector<uint8_t> bytes = qsldata::read_file(path);
    json j = json::parse(bytes.begin(), bytes.end(), nullptr, false);
    if (j.is_discarded()) {
        schema(path.string() + " is not valid JSON");
    }
    return j;
}

void write_json(const std::filesystem::path &path, const json &j) {
    std::string text = j.dump(2) + "\n";
    qsldata::write_file(path, std::vector<uint8_t>(text.begin(), text.end()));
}

qsldata::Manifest manifest_from_config(const json &config, const std::string &task) {
    require(task == "qst" || task == "dfe" || task == "stateprep", ErrorKind::InvalidArgument,
            "task must be qst, dfe or stateprep");
    if (!config.is_object()) {
        schema("data config must be a JSON object");
    }
    json j = config;
    std::string stored = task == "qst" ? "qst" : "dfe";
    if (j.contains("task")) {
        require(j.at("task").is_string() && j.at("task").get<std::string>() == stored, ErrorKind::TaskMismatch,
                "config task differs from --task " + task);
    }
    j["task"] = stored;
    if (!j.contains("format_version")) {
        j["format_version"] = qsldata::kFormatVersion;
    }
    bool stateprep_kind = j.contains("sampling") && j["sampling"].is_object() && j["sampling"].contains("kind") &&
                          j["sampling"]["kind"] == "stateprep";
    if (task == "stateprep") {
        if (!j.contains("sampling")) {
            j["sampling"] = json::object();
        }
        if (j["sampling"].is_object() && !j["sampling"].contains("kind")) {
            j["sampling"]["kind"] = "stateprep";
            stateprep_kind = true;
        }
        require(stateprep_kind, ErrorKind::TaskMismatch, "--task stateprep needs sampling kind 'stateprep'");
    } else {
        require(!stateprep_kind, ErrorKind::TaskMismatch, "sampling kind 'stateprep' needs --task stateprep");
    }
    return qsldata::Manifest::from_json(j);
}

}  // namespace shadownet::ctl
