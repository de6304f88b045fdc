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

#include <cstring>

#include "shadownet/bytes.h"
#include "shadownet/error.h"
#include "shadownet/gradnet/train.h"

namespace shadownet::gradnet {

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'L', 'W'};

void write_mat(ByteWriter &w, const Mat &m) {
    for (Eigen::Index i = 0; i < m.size(); i++) {
        w.f64(m.data()[i]);
    }
}

void read_mat(ByteReader &r, Mat &m) {
    for (Eigen::Index i = 0; i < m.size(); i++) {
        m.data()[i] = r.f64();
    }
}

}  // namespace

void save_checkpoint(const TrainState &state, const TrainConfig &cfg, const std::filesystem::path &path) {
    const auto &params = state.model.params();
    require(state.opt.m.size() == params.size() && state.opt.v.size() == params.size(), ErrorKind::ShapeMismatch,
            "checkpoint: optimizer state does not match the model");
    json header;
    header["model"] = state.model.config().to_json();
    header["train"] = cfg.to_json();
    header["epoch"] = state.epoch;
    header["step"] = state.opt.step;
    json shapes = json::array();
    for (const auto &p : params) {
        shapes.push_back({{"name", p.name}, {"rows", p.value.rows()}, {"cols", p.value.cols()}});
    }
    header["params"] = shapes;
    std::string text = header.dump();

    ByteWriter w;
    w.bytes(kMagic, 4);
    w.u32(kCheckpointVersion);
    w.u32(static_cast<uint32_t>(text.size()));
    w.bytes(text.data(), text.size());
    for (const auto &p : params) {
        write_mat(w, p.value);
    }
    for (const auto &m : state.opt.m) {
        write_mat(w, m);
    }
    for (const auto &v : state.opt.v) {
        write_mat(w, v);
    }
    w.u32(qsldata::crc32(w.data().data(), w.data().size()));
    qsldata::write_file(path, w.take());
}

Checkpoint load_checkpoint(const std::filesystem::path &path) {
    std::vector<uint8_t> bytes = qsldata::read_file(path);
    require(bytes.size() >= 16, ErrorKind::SchemaViolation, "checkpoint truncated");
    ByteReader r(bytes.data(), bytes.size() - 4);
    require(std::memcmp(r.bytes(4), kMagic, 4) == 0, ErrorKind::SchemaViolation, "not a QSLW checkpoint");
    uint32_t version = r.u32();
    require(version == kCheckpointVersion, ErrorKind::VersionMismatch,
            "unsupported checkpoint version " + std::to_string(version));
    uint32_t stored = ByteReader(bytes.data() + bytes.size() - 4, 4).u32();
    require(stored == qsldata::crc32(bytes.data(), bytes.size() - 4), ErrorKind::ChecksumMismatch,
            "checkpoint checksum mismatch");
    uint32_t len = r.u32();
    require(len <= r.remaining(), ErrorKind::SchemaViolation, "checkpoint header truncated");
    const uint8_t *text = r.bytes(len);
    json header = json::parse(text, text + len, nullptr, false);
    require(!header.is_discarded() && header.is_object(), ErrorKind::SchemaViolation, "checkpoint header is not JSON");
    try {
        ModelConfig mc = ModelConfig::from_json(header.at("model"));
        TrainConfig tc = TrainConfig::from_json(header.at("train"));
        Model model(mc, 0);
        const json &shapes = header.at("params");
        auto &params = model.params();
        require(shapes.is_array() && shapes.size() == params.size(), ErrorKind::SchemaViolation,
                "checkpoint parameter list does not match its model config");
        for (size_t i = 0; i < params.size(); i++) {
            require(shapes[i].at("name").get<std::string>() == params[i].name &&
                        shapes[i].at("rows").get<Eigen::Index>() == params[i].value.rows() &&
                        shapes[i].at("cols").get<Eigen::Index>() == params[i].value.cols(),
                    ErrorKind::SchemaViolation, "checkpoint shape mismatch for " + params[i].name);
        }
        AdamState opt = AdamState::zeros(model);
        opt.step = header.at("step").get<uint64_t>();
        for (auto &p : params) {
            read_mat(r, p.value);
        }
        for (auto &m : opt.m) {
            read_mat(r, m);
        }
        for (auto &v : opt.v) {
            read_mat(r, v);
        }
        require(r.done(), ErrorKind::SchemaViolation, "trailing bytes in checkpoint");
        size_t epoch = header.at("epoch").get<size_t>();
        return Checkpoint{TrainState{std::move(model), std::move(opt), epoch}, tc};
    } catch (const json::exception &e) {
        fail(ErrorKind::SchemaViolation, std::string("checkpoint header: ") + e.what());
    }
}

}  // namespace shadownet::gradnet
