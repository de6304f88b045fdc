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

#include "shadownet/error.h"
#include "shadownet/shadows.h"

namespace shadownet::shadows {

BoundSpec BoundSpec::make(size_t m, size_t k_split, double delta) {
    require(k_split >= 1, ErrorKind::InvalidArgument, "k_split must be positive");
    require(k_split <= m, ErrorKind::InvalidArgument, "k_split exceeds the number of snapshots");
    require(delta > 0 && delta < 1, ErrorKind::InvalidArgument, "delta must lie in (0, 1)");
    return {k_split, delta, m / k_split};
}

namespace {

double term_bound(double coeff, int locality, size_t r) {
    if (locality == 0) {
        return 0;
    }
    return std::abs(coeff) * std::sqrt(34.0 * std::pow(3.0, locality) / static_cast<double>(r));
}

}  // namespace

double energy_bound(const spinsys::Hamiltonian &h, size_t m, size_t k_split, double delta) {
    BoundSpec spec = BoundSpec::make(m, k_split, delta);
    double e = 0;
    for (const auto &t : h.terms()) {
        e += term_bound(t.coeff, t.weight(), spec.r);
    }
    return e;
}

double fidelity_bound(std::span<const BoundTerm> terms, size_t m, size_t k_split, double delta) {
    BoundSpec spec = BoundSpec::make(m, k_split, delta);
    double e = 0;
    for (const auto &t : terms) {
        e += term_bound(t.gamma, t.locality, spec.r);
    }
    return e;
}

double fidelity_bound(std::span<const WeightedPauli> d, size_t m, size_t k_split, double delta) {
    std::vector<BoundTerm> terms;
    terms.reserve(d.size());
    for (const auto &w : d) {
        terms.push_back({w.gamma * w.term.coeff, w.term.weight()});
    }
    return fidelity_bound(terms, m, k_split, delta);
}

double ghz_closed_form_bound(size_t n, size_t m, size_t k_split, double delta) {
    BoundSpec spec = BoundSpec::make(m, k_split, delta);
    return 2 * std::sqrt(34.0 * std::pow(3.0, static_cast<double>(n)) / static_cast<double>(spec.r));
}

}  // namespace shadownet::shadows
