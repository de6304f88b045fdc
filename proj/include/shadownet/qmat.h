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

#ifndef SHADOWNET_QMAT_H
#define SHADOWNET_QMAT_H

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "shadownet/rng.h"

namespace shadownet::qmat {

using cplx = std::complex<double>;

/// Square complex matrix stored row-major.
class ComplexMatrix {
   public:
    ComplexMatrix() = default;
    explicit ComplexMatrix(size_t dim);
    ComplexMatrix(size_t dim, std::vector<cplx> entries);

    static ComplexMatrix identity(size_t dim);
    static ComplexMatrix diagonal(std::span<const cplx> diag);
    static ComplexMatrix diagonal(std::initializer_list<double> diag);

    size_t dim() const {
        return dim_;
    }
    const std::vector<cplx> &entries() const {
        return data_;
    }
    std::vector<cplx> &entries() {
        return data_;
    }

    cplx &operator()(size_t r, size_t c) {
        return data_[r * dim_ + c];
    }
    const cplx &operator()(size_t r, size_t c) const {
        return data_[r * dim_ + c];
    }

    ComplexMatrix adjoint() const;
    cplx trace() const;
    bool is_hermitian(double tol) const;
    bool is_finite() const;
    double max_abs_diff(const ComplexMatrix &other) const;
    /// Frobenius norm squared.
    double norm_sq() const;

    ComplexMatrix &operator+=(const ComplexMatrix &rhs);
    ComplexMatrix &operator-=(const ComplexMatrix &rhs);
    ComplexMatrix &operator*=(cplx s);

    friend ComplexMatrix operator+(ComplexMatrix a, const ComplexMatrix &b) {
        return a += b;
    }
    friend ComplexMatrix operator-(ComplexMatrix a, const ComplexMatrix &b) {
        return a -= b;
    }
    friend ComplexMatrix operator*(ComplexMatrix a, cplx s) {
        return a *= s;
    }
    friend ComplexMatrix operator*(cplx s, ComplexMatrix a) {
        return a *= s;
    }
    friend ComplexMatrix operator*(const ComplexMatrix &a, const ComplexMatrix &b);

    bool operator==(const ComplexMatrix &other) const = default;

   private:
    size_t dim_ = 0;
    std::vector<cplx> data_;
};

/// Normalized state vector.
class PureState {
   public:
    explicit PureState(std::vector<cplx> amplitudes);
    static PureState basis(size_t dim, size_t index);

    size_t dim() const {
        return amps_.size();
    }
    const std::vector<cplx> &amplitudes() const {
        return amps_;
    }
    ComplexMatrix projector() const;

   private:
    std::vector<cplx> amps_;
};

/// Hermitian, positive semidefinite, unit-trace matrix.
class DensityMatrix {
   public:
    static constexpr double kHermitianTol = 1e-10;
    static constexpr double kEigenTol = 1e-9;
    static constexpr double kTraceTol = 1e-10;

    /// Validates the invariants; throws NotHermitian / InvalidArgument.
    explicit DensityMatrix(ComplexMatrix mat);
    static DensityMatrix from_pure(const PureState &psi);
    static DensityMatrix maximally_mixed(size_t dim);

    size_t dim() const {
        return mat_.dim();
    }
    const ComplexMatrix &mat() const {
        return mat_;
    }

   private:
    struct Unchecked {};
    DensityMatrix(ComplexMatrix mat, Unchecked) : mat_(std::move(mat)) {
    }
    ComplexMatrix mat_;
};

struct EigenSystem {
    std::vector<double> values;  // ascending
    ComplexMatrix vectors;       // column k is the eigenvector of values[k]
};

ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b);
ComplexMatrix kron_all(std::span<const ComplexMatrix> factors);

EigenSystem herm_eig(const ComplexMatrix &a);

ComplexMatrix psd_sqrt(const DensityMatrix &a);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2, clamped to [0, 1].
double fidelity(const DensityMatrix &rho, const DensityMatrix &sigma);

/// Re Tr(rho obs) for Hermitian obs.
double expectation(const DensityMatrix &rho, const ComplexMatrix &obs);

// Single-qubit matrices.
ComplexMatrix pauli_i();
ComplexMatrix pauli_x();
ComplexMatrix pauli_y();
ComplexMatrix pauli_z();
ComplexMatrix hadamard();
ComplexMatrix phase_s();

/// rho <- U rho U^dagger with U acting on `qubit` of an n-qubit register.
/// Qubit 0 is the most significant index bit (leftmost kron factor).
void apply_1q(ComplexMatrix &rho, size_t n_qubits, size_t qubit, const ComplexMatrix &u);

/// Diagonal of U rho U^dagger for U = kron of per-qubit 2x2 unitaries.
std::vector<double> rotated_diagonal(const ComplexMatrix &rho, std::span<const ComplexMatrix> per_qubit);

ComplexMatrix random_hermitian(size_t dim, RngStream &rng);
/// Random density matrix G G^dagger / Tr from a complex Gaussian dim x rank G.
DensityMatrix random_density_matrix(size_t dim, RngStream &rng, size_t rank = 0);

}  // namespace shadownet::qmat

#endif
