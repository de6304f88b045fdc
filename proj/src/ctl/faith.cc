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
#include <limits>
#include <map>

#include "shadownet/ctl.h"
#include "shadownet/error.h"
#include "shadownet/shadows.h"

namespace shadownet::ctl {

namespace {

json number_or_null(double v) {
    return std::isfinite(v) ? json(v) : json(nullptr);
}

void tally(FaithReport &r, const FaithVerdict &v) {
    switch (v.verdict) {
        case Verdict::Faithful:
            r.faithful++;
            break;
        case Verdict::Unfaithful:
            r.unfaithful++;
            break;
        case Verdict::Indeterminate:
            r.indeterminate++;
            break;
    }
    r.verdicts.push_back(v);
}

void require_shadows(const shadows::ShadowSet &ss, size_t k_split) {
    require(ss.m() > 0, ErrorKind::MissingShadows, "example has no shadow records");
    require(k_split >= 1 && k_split <= ss.m(), ErrorKind::InvalidArgument, "k_split must lie in [1, M]");
}

}  // namespace

std::string verdict_name(Verdict v) {
    switch (v) {
        case Verdict::Faithful:
            return "faithful";
        case Verdict::Unfaithful:
            return "unfaithful";
        case Verdict::Indeterminate:
            return "indeterminate";
    }
    return "?";
}

FaithVerdict judge(double prediction, double estimate, double bound) {
    bool ok = std::abs(prediction - estimate) <= bound;
    return FaithVerdict{prediction, estimate, bound, ok ? Verdict::Faithful : Verdict::Unfaithful,
                        ok ? prediction : estimate};
}

FaithVerdict indeterminate(double prediction, double bound) {
    return FaithVerdict{prediction, std::numeric_limits<double>::quiet_NaN(), bound, Verdict::Indeterminate,
                        prediction};
}

double FaithReport::faithful_fraction() const {
    size_t determinate = faithful + unfaithful;
    if (determinate == 0) {
        return std::numeric_limits<double>::quiet_NaN();
    }
    return static_cast<double>(faithful) / static_cast<double>(determinate);
}

json FaithReport::to_json() const {
    json j;
    j["k_split"] = k_split;
    j["delta"] = delta;
    j["count"] = verdicts.size();
    j["faithful"] = faithful;
    j["unfaithful"] = unfaithful;
    j["indeterminate"] = indeterminate;
    j["faithful_fraction"] = number_or_null(faithful_fraction());
    j["fallbacks"] = fallbacks();
    json rows = json::array();
    for (const auto &v : verdicts) {
        rows.push_back({{"prediction", v.prediction},
                        {"shadow_estimate", number_or_null(v.shadow_estimate)},
                        {"bound", v.bound},
                        {"verdict", verdict_name(v.verdict)},
                        {"reported_value", v.reported_value}});
    }
    j["verdicts"] = rows;
    return j;
}

FaithReport faith_report_qst(const StatePredictor &predict, const std::vector<qsldata::QstExample> &set,
                             size_t k_split, double delta) {
    FaithReport r;
    r.k_split = k_split;
    r.delta = delta;
    for (const auto &e : set) {
        require_shadows(e.shadows, k_split);
        spinsys::Hamiltonian h = e.hamiltonian();
        double prediction = energy_of(predict(e), h);
        double estimate = shadows::estimate_energy(e.shadows, h, k_split);
        double bound = shadows::energy_bound(h, e.shadows.m(), k_split, delta);
        tally(r, judge(prediction, estimate, bound));
    }
    return r;
}

FaithReport faith_report_dfe(const FidelityPredictor &predict, const std::vector<qsldata::DfeExample> &set,
                             size_t k_split, double delta) {
    FaithReport r;
    r.k_split = k_split;
    r.delta = delta;
    std::map<std::pair<size_t, bool>, shadows::PauliDecomposition> targets;
    for (const auto &e : set) {
        require_shadows(e.shadows, k_split);
        double prediction = predict(e);
        size_t n = e.n_qubits;
        if (n > shadows::kMaxDecompositionQubits) {
            tally(r, indeterminate(prediction, shadows::ghz_closed_form_bound(n, e.shadows.m(), k_split, delta)));
            continue;
        }
        bool plus = e.kind == qsldata::DfeKind::Local;
        auto key = std::make_pair(n, plus);
        auto it = targets.find(key);
        if (it == targets.end()) {
            it = targets.emplace(key, plus ? shadows::plus_pauli_decomposition(n) : shadows::ghz_pauli_decomposition(n))
                     .first;
        }
        double estimate = shadows::estimate_fidelity_mom(e.shadows, it->second, k_split);
        double bound = shadows::fidelity_bound(it->second, e.shadows.m(), k_split, delta);
        tally(r, judge(prediction, estimate, bound));
    }
    return r;
}

}  // namespace shadownet::ctl
