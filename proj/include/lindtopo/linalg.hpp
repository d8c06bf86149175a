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

// Dense solvers for the linear matrix equations that define steady states.

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>

#include "lindtopo/types.hpp"

namespace lindtopo {

/// Solves A X + X B = C through the Kronecker form (I (x) A + B^T (x) I) vec X = vec C.
/// O(n^6); meant for 2x2 Bloch blocks and for cross-checking the Schur solver.
/// Throws PhysicsError when the operator is numerically singular.
inline MatrixXc solve_sylvester_kronecker(const MatrixXc& A, const MatrixXc& B, const MatrixXc& C,
                                          real singular_tol = 1e-12) {
    const Eigen::Index n = A.rows();
    const Eigen::Index m = B.rows();
    detail::require(A.cols() == n && B.cols() == m && C.rows() == n && C.cols() == m,
                    "solve_sylvester_kronecker: shape mismatch");
    MatrixXc L = MatrixXc::Zero(n * m, n * m);
    for (Eigen::Index j = 0; j < m; ++j) {
        L.block(j * n, j * n, n, n) += A;
        for (Eigen::Index i = 0; i < m; ++i)
            L.block(j * n, i * n, n, n).diagonal().array() += B(i, j);
    }
    Eigen::JacobiSVD<MatrixXc> svd(L, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) <= singular_tol * std::max<real>(1.0, sv(0)))
        detail::throw_physics("no unique steady state: singular vectorized operator");
    const VectorXc rhs = Eigen::Map<const VectorXc>(C.data(), C.size());
    const VectorXc x = svd.solve(rhs);
    return Eigen::Map<const MatrixXc>(x.data(), n, m);
}

/// Bartels-Stewart solver for A X + X A^dagger = C.
///
/// With the complex Schur form A = U T U^dagger the equation becomes
/// T Z + Z T^dagger = U^dagger C U. T^dagger is lower triangular, so the columns
/// of Z are recovered from last to first by one triangular solve each.
/// Throws PhysicsError when lambda_i + conj(lambda_j) vanishes for some pair of
/// eigenvalues of A (an undamped mode).
inline MatrixXc solve_lyapunov(const MatrixXc& A, const MatrixXc& C, real singular_tol = 1e-11) {
    const Eigen::Index n = A.rows();
    detail::require(A.cols() == n && C.rows() == n && C.cols() == n, "solve_lyapunov: shape mismatch");
    Eigen::ComplexSchur<MatrixXc> schur(A);
    detail::require(schur.info() == Eigen::Success, "solve_lyapunov: Schur decomposition failed");
    const MatrixXc& T = schur.matrixT();
    const MatrixXc& U = schur.matrixU();

    const VectorXc lambda = T.diagonal();
    const real scale = std::max<real>(1.0, lambda.cwiseAbs().maxCoeff());
    real min_gap = std::numeric_limits<real>::infinity();
    for (Eigen::Index i = 0; i < n; ++i)
        min_gap = std::min(min_gap, 2.0 * std::abs(lambda(i).real()));
    // lambda_i + conj(lambda_j) = 0 requires both real parts to vanish.
    if (min_gap <= singular_tol * scale) detail::throw_physics("no unique steady state: undamped mode");

    MatrixXc Z = U.adjoint() * C * U;
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        const Eigen::Index tail = n - j - 1;
        if (tail > 0) Z.col(j).noalias() -= Z.rightCols(tail) * T.row(j).tail(tail).adjoint();
        const complex shift = std::conj(T(j, j));
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            complex acc = Z(i, j);
            const Eigen::Index after = n - i - 1;
            if (after > 0) acc -= (T.row(i).tail(after).transpose().cwiseProduct(Z.col(j).tail(after))).sum();
            Z(i, j) = acc / (T(i, i) + shift);
        }
    }
    return U * Z * U.adjoint();
}

/// Real-input convenience wrapper: A X + X A^T = C for real A and C.
inline MatrixXr solve_lyapunov(const MatrixXr& A, const MatrixXr& C, real singular_tol = 1e-11) {
    const MatrixXc X = solve_lyapunov(MatrixXc(A.cast<complex>()), MatrixXc(C.cast<complex>()), singular_tol);
    return X.real();
}

/// How solve_lyapunov_antisymmetric treats undamped coordinates, i.e. Schur
/// pairs with lambda_i + conj(lambda_j) = 0.
enum class UndampedPolicy {
    /// Only a simple zero eigenvalue is allowed: its kernel v v^T is symmetric,
    /// so the antisymmetric solution is still unique. Anything else throws.
    RequireUnique,
    /// Every undamped coordinate keeps the value zero. This is the long-time
    /// limit of dX/dt = A X + X A^T - C started from X = 0.
    FreezeAtZero,
};

/// Antisymmetric solution of A X + X A^T = C for real A and antisymmetric C.
/// Undamped coordinates are set to zero and the result antisymmetrized; whether
/// C is consistent with them is left to the caller's residual check.
inline MatrixXr solve_lyapunov_antisymmetric(const MatrixXr& A, const MatrixXr& C,
                                             UndampedPolicy policy = UndampedPolicy::RequireUnique,
                                             real singular_tol = 1e-11) {
    const Eigen::Index n = A.rows();
    detail::require(A.cols() == n && C.rows() == n && C.cols() == n, "solve_lyapunov_antisymmetric: shape mismatch");
    Eigen::ComplexSchur<MatrixXc> schur(MatrixXc(A.cast<complex>()));
    detail::require(schur.info() == Eigen::Success, "solve_lyapunov_antisymmetric: Schur decomposition failed");
    const MatrixXc& T = schur.matrixT();
    const MatrixXc& U = schur.matrixU();
    const VectorXc lambda = T.diagonal();
    const real tol = singular_tol * std::max<real>(1.0, lambda.cwiseAbs().maxCoeff());

    if (policy == UndampedPolicy::RequireUnique)
        for (Eigen::Index i = 0; i < n; ++i)
            for (Eigen::Index j = 0; j < n; ++j)
                if (std::abs(lambda(i) + std::conj(lambda(j))) <= tol && (i != j || std::abs(lambda(i)) > tol))
                    detail::throw_physics("no unique steady state: undamped mode");

    MatrixXc Z = U.adjoint() * C.cast<complex>() * U;
    for (Eigen::Index j = n - 1; j >= 0; --j) {
        const Eigen::Index tail = n - j - 1;
        if (tail > 0) Z.col(j).noalias() -= Z.rightCols(tail) * T.row(j).tail(tail).adjoint();
        const complex shift = std::conj(T(j, j));
        for (Eigen::Index i = n - 1; i >= 0; --i) {
            complex acc = Z(i, j);
            const Eigen::Index after = n - i - 1;
            if (after > 0) acc -= (T.row(i).tail(after).transpose().cwiseProduct(Z.col(j).tail(after))).sum();
            const complex pivot = T(i, i) + shift;
            Z(i, j) = std::abs(pivot) <= tol ? complex(0.0) : acc / pivot;
        }
    }
    const MatrixXr X = (U * Z * U.adjoint()).real();
    return 0.5 * (X - X.transpose());
}

}  // namespace lindtopo
