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
#include <string>

#include "shadownet/error.h"
#include "shadownet/qsldata.h"

namespace shadownet::qsldata {

namespace {

constexpr char kMagic[4] = {'Q', 'S', 'L', 'D'};

const char *split_file(Split s) {
    return s == Split::Train ? "train.qsld" : "test.qsld";
}

void write_doubles(ByteWriter &w, const std::vector<double> &v) {
    w.u64(v.size());
    for (double x : v) {
        w.f64(x);
    }
}

std::vector<double> read_doubles(ByteReader &r) {
    uint64_t n = r.u64();
    require(n <= r.remaining() / 8, ErrorKind::SchemaViolation, "record truncated");
    std::vector<double> v(n);
    for (auto &x : v) {
        x = r.f64();
    }
    return v;
}

std::vector<uint8_t> encode(const QstExample &e) {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(e.n_qubits));
    w.u8(static_cast<uint8_t>(e.family));
    w.f64(e.coupling);
    w.f64(e.surrogate_energy);
    w.f64(e.shadow_energy_estimate);
    w.f64(e.shadow_energy_bound);
    w.f64(e.gap);
    write_doubles(w, e.feature);
    w.u64(e.label.dim());
    for (const auto &z : e.label.entries()) {
        w.f64(z.real());
        w.f64(z.imag());
    }
    e.shadows.write(w);
    return w.take();
}

std::vector<uint8_t> encode(const DfeExample &e) {
    ByteWriter w;
    w.u32(static_cast<uint32_t>(e.n_qubits));
    w.u8(static_cast<uint8_t>(e.kind));
    w.u32(static_cast<uint32_t>(e.token_dim));
    w.f64(e.label);
    w.f64(e.label_stderr);
    w.f64(e.p1);
    w.f64(e.p2);
    w.f64(e.p);
    write_doubles(w, e.feature);
    e.shadows.write(w);
    return w.take();
}

QstExample decode_qst(ByteReader &r, const Manifest &m) {
    size_t n = r.u32();
    require(n == m.n_qubits, ErrorKind::SchemaViolation, "record qubit count differs from manifest");
    uint8_t family = r.u8();
    require(family <= 1, ErrorKind::SchemaViolation, "bad family tag");
    double coupling = r.f64();
    double surrogate = r.f64();
    double estimate = r.f64();
    double bound = r.f64();
    double gap = r.f64();
    std::vector<double> feature = read_doubles(r);
    size_t dim = size_t{1} << n;
    require(feature.size() == 2 * dim * dim, ErrorKind::SchemaViolation, "QST feature has wrong size");
    uint64_t label_dim = r.u64();
    require(label_dim == dim, ErrorKind::SchemaViolation, "QST label has wrong dimension");
    std::vector<qmat::cplx> entries(dim * dim);
    for (auto &z : entries) {
        double re = r.f64();
        double im = r.f64();
        z = qmat::cplx(re, im);
    }
    shadows::ShadowSet ss = shadows::ShadowSet::read(r);
    require(ss.n() == n, ErrorKind::SchemaViolation, "shadow qubit count differs from manifest");
    return QstExample{n,        static_cast<Family>(family), coupling, std::move(feature),
                      qmat::ComplexMatrix(dim, std::move(entries)), surrogate, estimate, bound, gap, std::move(ss)};
}

DfeExample decode_dfe(ByteReader &r, const Manifest &m) {
    size_t n = r.u32();
    require(n == m.n_qubits, ErrorKind::SchemaViolation, "record qubit count differs from manifest");
    uint8_t kind = r.u8();
    require(kind <= 3 && kind != static_cast<uint8_t>(DfeKind::Mixed), ErrorKind::SchemaViolation, "bad kind tag");
    size_t dim = r.u32();
    require(dim == token_dim(m.feature_mask), ErrorKind::SchemaViolation, "token width differs from feature mask");
    double label = r.f64();
    double stderr_label = r.f64();
    double p1 = r.f64();
    double p2 = r.f64();
    double p = r.f64();
    std::vector<double> feature = read_doubles(r);
    require(feature.size() == n * dim, ErrorKind::SchemaViolation, "DFE feature has wrong size");
    shadows::ShadowSet ss = shadows::ShadowSet::read(r);
    require(ss.n() == n, ErrorKind::SchemaViolation, "shadow qubit count differs from manifest");
    return DfeExample{n, static_cast<DfeKind>(kind), dim, std::move(feature), label, stderr_label, p1, p2, p,
                      std::move(ss)};
}

}  // namespace

std::vector<uint8_t> encode_split(const Dataset &d, Split s) {
    ByteWriter w;
    w.bytes(kMagic, 4);
    w.u32(kFormatVersion);
    w.u32(static_cast<uint32_t>(d.manifest.task));
    w.u32(static_cast<uint32_t>(s));
    w.u64(d.size(s));
    auto record = [&](const std::vector<uint8_t> &payload) {
        w.u64(payload.size());
        w.bytes(payload.data(), payload.size());
        w.u32(crc32(payload.data(), payload.size()));
    };
    int i = static_cast<int>(s);
    if (d.manifest.task == Task::Qst) {
        for (const auto &e : d.qst[i]) {
            record(encode(e));
        }
    } else {
        for (const auto &e : d.dfe[i]) {
            record(encode(e));
        }
    }
    return w.take();
}

void decode_split(Dataset &d, Split s, const std::vector<uint8_t> &bytes) {
    ByteReader r(bytes);
    const uint8_t *magic = r.bytes(4);
    require(std::memcmp(magic, kMagic, 4) == 0, ErrorKind::SchemaViolation, "not a QSLD file");
    uint32_t version = r.u32();
    require(version == kFormatVersion, ErrorKind::VersionMismatch, "unsupported QSLD version " + std::to_string(version));
    uint32_t task = r.u32();
    require(task == static_cast<uint32_t>(d.manifest.task), ErrorKind::TaskMismatch,
            "QSLD task differs from manifest task");
    uint32_t split = r.u32();
    require(split == static_cast<uint32_t>(s), ErrorKind::SchemaViolation, "QSLD split tag mismatch");
    uint64_t count = r.u64();
    require(count == d.manifest.count(s), ErrorKind::SchemaViolation,
            "record count " + std::to_string(count) + " differs from manifest");
    int i = static_cast<int>(s);
    d.qst[i].clear();
    d.dfe[i].clear();
    for (uint64_t k = 0; k < count; k++) {
        uint64_t len = r.u64();
        require(len <= r.remaining(), ErrorKind::SchemaViolation, "record truncated");
        const uint8_t *payload = r.bytes(len);
        uint32_t crc = r.u32();
        require(crc == crc32(payload, len), ErrorKind::ChecksumMismatch,
                "checksum mismatch in record " + std::to_string(k));
        ByteReader pr(payload, len);
        if (d.manifest.task == Task::Qst) {
            d.qst[i].push_back(decode_qst(pr, d.manifest));
        } else {
            d.dfe[i].push_back(decode_dfe(pr, d.manifest));
        }
        require(pr.done(), ErrorKind::SchemaViolation, "trailing bytes in record");
    }
    require(r.done(), ErrorKind::SchemaViolation, "trailing bytes after last record");
}

void save(const Dataset &d, const std::filesystem::path &dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    require(!ec, ErrorKind::Io, "cannot create " + dir.string() + ": " + ec.message());
    std::string text = d.manifest.to_json().dump(2) + "\n";
    write_file(dir / "manifest.json", std::vector<uint8_t>(text.begin(), text.end()));
    for (Split s : {Split::Train, Split::Test}) {
        write_file(dir / split_file(s), encode_split(d, s));
    }
}

Dataset load(const std::filesystem::path &dir) {
    std::vector<uint8_t> text = read_file(dir / "manifest.json");
    json j = json::parse(text.begin(), text.end(), nullptr, false);
    require(!j.is_discarded(), ErrorKind::SchemaViolation, "manifest.json is not valid JSON");
    Dataset d;
    d.manifest = Manifest::from_json(j);
    require(j.contains("format_version"), ErrorKind::SchemaViolation, "manifest.json lacks format_version");
    for (Split s : {Split::Train, Split::Test}) {
        decode_split(d, s, read_file(dir / split_file(s)));
    }
    return d;
}

}  // namespace shadownet::qsldata
