// Copyright 2026 The lindtopo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <utility>

#include "lindtopo/types.hpp"

namespace lindtopo {

/// (M_0, M_pi) and the Z2 index nu = M_0 * M_pi.
struct PfaffianSignPair {
    int M0 = 1;
    int Mpi = 1;
    int nu = 1;

    friend bool operator==(const PfaffianSignPair&, const PfaffianSignPair&) = default;
};

namespace detail {

template <typename Derived>
real antisymmetry_defect(const Eigen::MatrixBase<Derived>& A) {
    return (A + A.transpose()).cwiseAbs().maxCoeff();
}

}  // namespace detail

/// Pfaffian of an even-dimensional antisymmetric matrix.
///
/// Parlett-Reid reduction to tridiagonal form: at step k the largest entry of
/// column k below the diagonal is swapped into row k+1 (each swap flips the
/// sign), then rows and columns k+2.. are cleared with a skew-symmetric rank-2
/// update. Pf(A) is the signed product of the pivots A(k, k+1).
template <typename Scalar>
Scalar pfaffian(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> A) {
    const Eigen::Index n = A.rows();
    detail::require(n == A.cols(), "pfaffian: matrix must be square");
    detail::require(n % 2 == 0, "pfaffian: odd dimension");
    if (n == 0) return Scalar(1);
    const real scale = std::max<real>(1.0, A.cwiseAbs().maxCoeff());
    detail::require(detail::antisymmetry_defect(A) < 1e-10 * scale, "pfaffian: matrix is not antisymmetric");

    using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
    Scalar result(1);
    for (Eigen::Index k = 0; k + 1 < n; k += 2) {
        Eigen::Index offset = 0;
        A.col(k).tail(n - k - 1).cwiseAbs().maxCoeff(&offset);
        const Eigen::Index kp = k + 1 + offset;
        if (kp != k + 1) {
            A.row(k + 1).swap(A.row(kp));
            A.col(k + 1).swap(A.col(kp));
            result = -result;
        }
        if (A(k + 1, k) == Scalar(0)) return Scalar(0);
        result *= A(k, k + 1);
        const Eigen::Index rest = n - k - 2;
        if (rest > 0) {
            const Vec tau = A.row(k).tail(rest).transpose() / A(k, k + 1);
            const Vec pivot_col = A.col(k + 1).tail(rest);
            A.bottomRightCorner(rest, rest).noalias() += tau * pivot_col.transpose();
            A.bottomRightCorner(rest, rest).noalias() -= pivot_col * tau.transpose();
        }
    }
    return result;
}

template <typename Derived>
auto pfaffian(const Eigen::MatrixBase<Derived>& A) {
    using Scalar = typename Derived::Scalar;
    return pfaffian<Scalar>(Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>(A));
}

/// M_{k_s} = sgn(-i Pf Delta(k_s)) = sgn(Re(-i Delta_01)).
///
/// Since Pf[i Delta(k_s)] = i Delta_01 for a 2x2 block, this is
/// -sgn(Pf[i Delta(k_s)]); with the steady-state value 2y/h0 and h0 < 0 it
/// reduces to sgn(y_{k_s}).
inline int m_sign(const BlochBlock& delta) {
    const Matrix2c& D = delta.data;
    const real scale = std::max<real>(1.0, D.cwiseAbs().maxCoeff());
    detail::require((D - D.adjoint()).cwiseAbs().maxCoeff() < 1e-10 * scale, "m_sign: block is not Hermitian");
    detail::require(detail::antisymmetry_defect(D) < 1e-10 * scale, "m_sign: block is not antisymmetric");
    const complex pf = D(0, 1);
    if (std::abs(pf) < 1e-12) detail::throw_physics("Pfaffian at topological boundary");
    const real value = (complex(0.0, -1.0) * pf).real();
    return value > 0.0 ? 1 : -1;
}

inline int z2_invariant(int M0, int Mpi) {
    detail::require((M0 == 1 || M0 == -1) && (Mpi == 1 || Mpi == -1), "z2_invariant: signs must be +-1");
    return M0 * Mpi;
}

inline PfaffianSignPair make_sign_pair(int M0, int Mpi) { return {M0, Mpi, z2_invariant(M0, Mpi)}; }

}  // namespace lindtopo
