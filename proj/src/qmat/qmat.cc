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

#include "shadownet/qmat.h"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>

#include "shadownet/error.h"

namespace shadownet::qmat {

namespace {

using EigenRowMatrix = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

Eigen::Map<const EigenRowMatrix> view(const ComplexMatrix &m) {
    auto d = static_cast<Eigen::Index>(m.dim());
    return {m.entries().data(), d, d};
}

ComplexMatrix from_eigen(const EigenRowMatrix &m) {
    ComplexMatrix out(static_cast<size_t>(m.rows()));
    Eigen::Map<EigenRowMatrix>(out.entries().data(), m.rows(), m.cols()) = m;
    return out;
}

void require_same_dim(const ComplexMatrix &a, const ComplexMatrix &b, const char *where) {
    require(a.dim() == b.dim(), ErrorKind::DimMismatch,
            std::string(where) + ": " + std::to_string(a.dim()) + " vs " + std::to_string(b.dim()));
}

}  // namespace

ComplexMatrix::ComplexMatrix(size_t dim) : dim_(dim), data_(dim * dim) {
}

ComplexMatrix::ComplexMatrix(size_t dim, std::vector<cplx> entries) : dim_(dim), data_(std::move(entries)) {
    require(data_.size() == dim_ * dim_, ErrorKind::LengthMismatch,
            "matrix of dim " + std::to_string(dim_) + " needs " + std::to_string(dim_ * dim_) + " entries");
    require(is_finite(), ErrorKind::InvalidArgument, "matrix entries must be finite");
}

ComplexMatrix ComplexMatrix::identity(size_t dim) {
    ComplexMatrix m(dim);
    for (size_t i = 0; i < dim; i++) {
        m(i, i) = 1.0;
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::span<const cplx> diag) {
    ComplexMatrix m(diag.size());
    for (size_t i = 0; i < diag.size(); i++) {
        m(i, i) = diag[i];
    }
    return m;
}

ComplexMatrix ComplexMatrix::diagonal(std::initializer_list<double> diag) {
    std::vector<cplx> d(diag.begin(), diag.end());
    return diagonal(std::span<const cplx>(d));
}

ComplexMatrix ComplexMatrix::adjoint() const {
    ComplexMatrix out(dim_);
    for (size_t r = 0; r < dim_; r++) {
        for (size_t c = 0; c < dim_; c++) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

cplx ComplexMatrix::trace() const {
    cplx t = 0;
    for (size_t i = 0; i < dim_; i++) {
        t += (*this)(i, i);
    }
    return t;
}

bool ComplexMatrix::is_hermitian(double tol) const {
    for (size_t r = 0; r < dim_; r++) {
        for (size_t c = r; c < dim_; c++) {
            if (std::abs((*this)(r, c) - std::conj((*this)(c, r))) > tol) {
                return false;
            }
        }
    }
    return true;
}

bool ComplexMatrix::is_finite() const {
    return std::all_of(data_.begin(), data_.end(),
                       [](const cplx &z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

double ComplexMatrix::max_abs_diff(const ComplexMatrix &other) const {
    require_same_dim(*this, other, "max_abs_diff");
    double m = 0;
    for (size_t i = 0; i < data_.size(); i++) {
        m = std::max(m, std::abs(data_[i] - other.data_[i]));
    }
    return m;
}

double ComplexMatrix::norm_sq() const {
    double s = 0;
    for (const auto &z : data_) {
        s += std::norm(z);
    }
    return s;
}

ComplexMatrix &ComplexMatrix::operator+=(const ComplexMatrix &rhs) {
    require_same_dim(*this, rhs, "operator+");
    for (size_t i = 0; i < data_.size(); i++) {
        data_[i] += rhs.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator-=(const ComplexMatrix &rhs) {
    require_same_dim(*this, rhs, "operator-");
    for (size_t i = 0; i < data_.size(); i++) {
        data_[i] -= rhs.data_[i];
    }
    return *this;
}

ComplexMatrix &ComplexMatrix::operator*=(cplx s) {
    for (auto &z : data_) {
        z *= s;
    }
    return *this;
}

ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b) {
    require_same_dim(a, b, "operator*");
    return from_eigen(view(a) * view(b));
}

PureState::PureState(std::vector<cplx> amplitudes) : amps_(std::move(amplitudes)) {
    double n = 0;
    for (const auto &a : amps_) {
        n += std::norm(a);
    }
    require(!amps_.empty() && std::abs(n - 1.0) <= 1e-12, ErrorKind::InvalidArgument,
            "pure state must have unit norm");
}

PureState PureState::basis(size_t dim, size_t index) {
    require(index < dim, ErrorKind::IndexOutOfRange, "basis index out of range");
    std::vector<cplx> a(dim);
    a[index] = 1.0;
    return PureState(std::move(a));
}

ComplexMatrix PureState::projector() const {
    size_t d = amps_.size();
    ComplexMatrix m(d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            m(r, c) = amps_[r] * std::conj(amps_[c]);
        }
    }
    return m;
}

DensityMatrix::DensityMatrix(ComplexMatrix mat) : mat_(std::move(mat)) {
    require(mat_.dim() > 0, ErrorKind::InvalidArgument, "density matrix must be non-empty");
    require(mat_.is_hermitian(kHermitianTol), ErrorKind::NotHermitian, "density matrix is not Hermitian");
    require(std::abs(mat_.trace() - cplx(1.0)) <= kTraceTol, ErrorKind::InvalidArgument,
            "density matrix trace must be 1");
    auto eig = herm_eig(mat_);
    require(eig.values.front() >= -kEigenTol, ErrorKind::InvalidArgument,
            "density matrix has eigenvalue " + std::to_string(eig.values.front()));
}

DensityMatrix DensityMatrix::from_pure(const PureState &psi) {
    return DensityMatrix(psi.projector(), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(size_t dim) {
    return DensityMatrix(ComplexMatrix::identity(dim) * cplx(1.0 / static_cast<double>(dim)), Unchecked{});
}

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    size_t da = a.dim();
    size_t db = b.dim();
    ComplexMatrix out(da * db);
    for (size_t ar = 0; ar < da; ar++) {
        for (size_t ac = 0; ac < da; ac++) {
            cplx s = a(ar, ac);
            if (s == cplx(0)) {
                continue;
            }
            for (size_t br = 0; br < db; br++) {
                for (size_t bc = 0; bc < db; bc++) {
                    out(ar * db + br, ac * db + bc) = s * b(br, bc);
                }
            }
        }
    }
    return out;
}

ComplexMatrix kron_all(std::span<const ComplexMatrix> factors) {
    require(!factors.empty(), ErrorKind::InvalidArgument, "kron_all needs at least one factor");
    ComplexMatrix out = factors[0];
    for (size_t i = 1; i < factors.size(); i++) {
        out = kron(out, factors[i]);
    }
    return out;
}

EigenSystem herm_eig(const ComplexMatrix &a) {
    require(a.dim() > 0, ErrorKind::InvalidArgument, "herm_eig of empty matrix");
    require(a.is_hermitian(1e-8), ErrorKind::NotHermitian, "herm_eig input is not Hermitian");
    Eigen::MatrixXcd m = view(a);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(m);
    require(solver.info() == Eigen::Success, ErrorKind::InvalidArgument, "eigensolver did not converge");
    EigenSystem out;
    const auto &vals = solver.eigenvalues();
    out.values.assign(vals.data(), vals.data() + vals.size());
    out.vectors = from_eigen(solver.eigenvectors());
    return out;
}

namespace {

ComplexMatrix sqrt_from_eig(const EigenSystem &eig) {
    size_t d = eig.values.size();
    const auto &v = eig.vectors;
    std::vector<double> s(d);
    for (size_t k = 0; k < d; k++) {
        s[k] = std::sqrt(std::max(eig.values[k], 0.0));
    }
    ComplexMatrix out(d);
    for (size_t r = 0; r < d; r++) {
        for (size_t c = r; c < d; c++) {
            cplx acc = 0;
            for (size_t k = 0; k < d; k++) {
                acc += v(r, k) * s[k] * std::conj(v(c, k));
            }
            out(r, c) = acc;
            out(c, r) = std::conj(acc);
        }
        out(r, r) = out(r, r).real();
    }
    return out;
}

double pure_overlap(const EigenSystem &eig, const DensityMatrix &other) {
    size_t d = eig.values.size();
    size_t top = d - 1;
    cplx acc = 0;
    const auto &m = other.mat();
    for (size_t r = 0; r < d; r++) {
        cplx row = 0;
        for (size_t c = 0; c < d; c++) {
            row += m(r, c) * eig.vectors(c, top);
        }
        acc += std::conj(eig.vectors(r, top)) * row;
    }
    return acc.real();
}

}  // namespace

ComplexMatrix psd_sqrt(const DensityMatrix &a) {
    return sqrt_from_eig(herm_eig(a.mat()));
}

double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma) {
    require_same_dim(rho.mat(), sigma.mat(), "fidelity");
    // A numerically pure argument gives F = <psi|other|psi>, which avoids the
    // sqrt(roundoff) error that rank deficiency introduces into the general path.
    constexpr double kPureTol = 1e-13;
    auto eig_rho = herm_eig(rho.mat());
    double f;
    if (eig_rho.values.back() >= 1.0 - kPureTol) {
        f = pure_overlap(eig_rho, sigma);
    } else {
        auto eig_sigma = herm_eig(sigma.mat());
        if (eig_sigma.values.back() >= 1.0 - kPureTol) {
            f = pure_overlap(eig_sigma, rho);
        } else {
            ComplexMatrix root = sqrt_from_eig(eig_rho);
            ComplexMatrix inner = root * sigma.mat() * root;
            ComplexMatrix sym = (inner + inner.adjoint()) * cplx(0.5);
            auto eig = herm_eig(sym);
            double t = 0;
            for (double l : eig.values) {
                t += std::sqrt(std::max(l, 0.0));
            }
            f = t * t;
        }
    }
    return std::clamp(f, 0.0, 1.0);
}

double expectation(const DensityMatrix &rho, const ComplexMatrix &obs) {
    require_same_dim(rho.mat(), obs, "expectation");
    require(obs.is_hermitian(1e-10), ErrorKind::NotHermitian, "observable is not Hermitian");
    size_t d = obs.dim();
    cplx acc = 0;
    const auto &m = rho.mat();
    for (size_t r = 0; r < d; r++) {
        for (size_t c = 0; c < d; c++) {
            acc += m(r, c) * obs(c, r);
        }
    }
    return acc.real();
}

ComplexMatrix pauli_i() {
    return ComplexMatrix::identity(2);
}

ComplexMatrix pauli_x() {
    return ComplexMatrix(2, {0, 1, 1, 0});
}

ComplexMatrix pauli_y() {
    return ComplexMatrix(2, {0, cplx(0, -1), cplx(0, 1), 0});
}

ComplexMatrix pauli_z() {
    return ComplexMatrix(2, {1, 0, 0, -1});
}

ComplexMatrix hadamard() {
    double s = 1.0 / std::sqrt(2.0);
    return ComplexMatrix(2, {s, s, s, -s});
}

ComplexMatrix phase_s() {
    return ComplexMatrix(2, {1, 0, 0, cplx(0, 1)});
}

void apply_1q(ComplexMatrix &rho, size_t n_qubits, size_t qubit, const ComplexMatrix &u) {
    require(u.dim() == 2, ErrorKind::DimMismatch, "apply_1q needs a 2x2 unitary");
    require(qubit < n_qubits, ErrorKind::IndexOutOfRange, "apply_1q qubit out of range");
    size_t d = rho.dim();
    require(d == (size_t{1} << n_qubits), ErrorKind::DimMismatch, "apply_1q register size mismatch");
    size_t mask = size_t{1} << (n_qubits - 1 - qubit);
    cplx u00 = u(0, 0), u01 = u(0, 1), u10 = u(1, 0), u11 = u(1, 1);
    for (size_t r0 = 0; r0 < d; r0++) {
        if (r0 & mask) {
            continue;
        }
        size_t r1 = r0 | mask;
        for (size_t c = 0; c < d; c++) {
            cplx a = rho(r0, c);
            cplx b = rho(r1, c);
            rho(r0, c) = u00 * a + u01 * b;
            rho(r1, c) = u10 * a + u11 * b;
        }
    }
    for (size_t r = 0; r < d; r++) {
        for (size_t c0 = 0; c0 < d; c0++) {
            if (c0 & mask) {
                continue;
            }
            size_t c1 = c0 | mask;
            cplx a = rho(r, c0);
            cplx b = rho(r, c1);
            rho(r, c0) = a * std::conj(u00) + b * std::conj(u01);
            rho(r, c1) = a * std::conj(u10) + b * std::conj(u11);
        }
    }
}

std::vector<double> rotated_diagonal(const ComplexMatrix &rho, std::span<const ComplexMatrix> per_qubit) {
    size_t n = per_qubit.size();
    require(rho.dim() == (size_t{1} << n), ErrorKind::DimMismatch, "rotated_diagonal register size mismatch");
    ComplexMatrix work = rho;
    for (size_t q = 0; q < n; q++) {
        apply_1q(work, n, q, per_qubit[q]);
    }
    std::vector<double> diag(rho.dim());
    for (size_t i = 0; i < diag.size(); i++) {
        diag[i] = std::max(work(i, i).real(), 0.0);
    }
    return diag;
}

ComplexMatrix random_hermitian(size_t dim, RngStream &rng) {
    ComplexMatrix m(dim);
    for (size_t r = 0; r < dim; r++) {
        m(r, r) = rng.normal();
        for (size_t c = r + 1; c < dim; c++) {
            cplx z(rng.normal(), rng.normal());
            m(r, c) = z;
            m(c, r) = std::conj(z);
        }
    }
    return m;
}

DensityMatrix random_density_matrix(size_t dim, RngStream &rng, size_t rank) {
    if (rank == 0) {
        rank = dim;
    }
    std::vector<cplx> g(dim * rank);
    for (auto &z : g) {
        z = cplx(rng.normal(), rng.normal());
    }
    ComplexMatrix m(dim);
    for (size_t r = 0; r < dim; r++) {
        for (size_t c = r; c < dim; c++) {
            cplx acc = 0;
            for (size_t k = 0; k < rank; k++) {
                acc += g[r * rank + k] * std::conj(g[c * rank + k]);
            }
            m(r, c) = acc;
            m(c, r) = std::conj(acc);
        }
        m(r, r) = m(r, r).real();
    }
    double t = m.trace().real();
    m *= cplx(1.0 / t);
    return DensityMatrix(std::move(m));
}

}  // namespace shadownet::qmat
