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

// Static matrices of the quadratic Lindbladian in the Majorana basis
// w_{m,0}, w_{m,1} with c_m = (w_{m,0} + i w_{m,1}) / sqrt(2):
//
//   H = sum_{pq} K_pq w_p w_q,      L_mu = sum_p C_{mu,p} w_p,
//   M_pq = sum_mu C_{mu,p} C*_{mu,q},  X = (M + M^T)/2,  Y = (M - M^T)/2,
//   H_eff = 2 (K - i X).
//
// Majorana index p = 2m + s. Bloch blocks use A(k)_{ss'} = sum_d A_{(0,s),(d,s')} e^{-ikd}.

#include <cmath>
#include <string>

#include "lindtopo/types.hpp"

namespace lindtopo {

struct DissipationMatrices {
    MatrixXc M;
    MatrixXc X;
    MatrixXc Y;
};

namespace detail {

inline const real inv_sqrt2 = 1.0 / std::sqrt(2.0);

// Majorana expansion of c_m (dagger = false) or c+_m (dagger = true).
inline VectorXc fermion_in_majoranas(int N, int m, bool dagger) {
    VectorXc v = VectorXc::Zero(2 * N);
    v(majorana_index(m, 0)) = inv_sqrt2;
    v(majorana_index(m, 1)) = complex(0.0, dagger ? -inv_sqrt2 : inv_sqrt2);
    return v;
}

// Accumulates alpha (x . w)(y . w) into T, with H = sum T_pq w_p w_q.
inline void add_bilinear(MatrixXc& T, complex alpha, const VectorXc& x, const VectorXc& y) {
    T.noalias() += alpha * x * y.transpose();
}

inline int bond_count(int N, Boundary b) { return b == Boundary::Periodic ? N : N - 1; }

inline real scale_of(const MatrixXc& A) { return std::max<real>(1.0, A.cwiseAbs().maxCoeff()); }

}  // namespace detail

/// Real-space Hamiltonian matrix K (2N x 2N) of the Kitaev chain. Hermitian
/// and antisymmetric, hence purely imaginary.
inline MatrixXc build_kitaev_K(const HamiltonianSpec& spec) {
    spec.validate();
    const int N = spec.N;
    MatrixXc T = MatrixXc::Zero(2 * N, 2 * N);
    auto c = [N](int m) { return detail::fermion_in_majoranas(N, m, false); };
    auto cd = [N](int m) { return detail::fermion_in_majoranas(N, m, true); };

    for (int n = 0; n < detail::bond_count(N, spec.boundary); ++n) {
        const int m = (n + 1) % N;
        detail::add_bilinear(T, -spec.J, cd(n), c(m));
        detail::add_bilinear(T, -spec.J, cd(m), c(n));
        detail::add_bilinear(T, spec.delta, c(n), c(m));
        detail::add_bilinear(T, spec.delta, cd(m), cd(n));
    }
    for (int n = 0; n < N; ++n) detail::add_bilinear(T, -spec.mu, cd(n), c(n));

    // w_p w_q = -w_q w_p + delta_pq: only the antisymmetric part survives up to a constant.
    MatrixXc K = 0.5 * (T - T.transpose());
    return K;
}

/// Majorana coefficients of one jump operator: entries on site n (c0) and site n+1 (c1).
struct BondCoefficients {
    Vector2c c0;
    Vector2c c1;
};

inline BondCoefficients bond_coefficients(const DissipatorSpec& d) {
    const real r = detail::inv_sqrt2;
    const complex i(0.0, 1.0);
    BondCoefficients b;
    b.c0 << (d.u1 + d.v1) * r, i * (d.u1 - d.v1) * r;
    b.c1 << (d.u2 + d.v2) * r, i * (d.u2 - d.v2) * r;
    return b;
}

/// Coupling matrix C, one row per jump operator (row n acts on sites n, n+1).
///
/// `wrap_weight` scales the part of the last operator that reaches back to
/// site 0. Periodic chains use 1. Open chains use 0: the last row keeps only
/// its on-site part u1 c_{N-1} + v1 c+_{N-1}, so that generic parameters damp
/// every Majorana mode.
inline MatrixXc majorana_coefficients(const DissipatorSpec& spec, real wrap_weight) {
    spec.validate();
    const int N = spec.N;
    const auto b = bond_coefficients(spec);
    MatrixXc C = MatrixXc::Zero(N, 2 * N);
    for (int n = 0; n < N; ++n) {
        const int m = (n + 1) % N;
        const real w = (m == 0) ? wrap_weight : 1.0;
        for (int s = 0; s < 2; ++s) {
            C(n, majorana_index(n, s)) += b.c0(s);
            C(n, majorana_index(m, s)) += w * b.c1(s);
        }
    }
    return C;
}

inline MatrixXc majorana_coefficients(const DissipatorSpec& spec) {
    return majorana_coefficients(spec, spec.boundary == Boundary::Periodic ? 1.0 : 0.0);
}

inline DissipationMatrices build_MXY(const MatrixXc& C) {
    DissipationMatrices out;
    out.M = C.transpose() * C.conjugate();
    out.X = 0.5 * (out.M + out.M.transpose());
    out.Y = 0.5 * (out.M - out.M.transpose());
    return out;
}

inline DissipationMatrices build_MXY(const DissipatorSpec& spec) {
    return build_MXY(majorana_coefficients(spec));
}

inline MatrixXc effective_hamiltonian(const MatrixXc& K, const MatrixXc& X) {
    detail::require(K.rows() == X.rows() && K.cols() == X.cols(), "effective_hamiltonian: shape mismatch");
    return 2.0 * (K - complex(0.0, 1.0) * X);
}

inline Matrix2c effective_hamiltonian(const BlochBlock& K, const BlochBlock& X) {
    return 2.0 * (K.data - complex(0.0, 1.0) * X.data);
}

/// True when A_{(m,s),(m+d,s')} depends only on d (indices mod N).
inline bool is_translation_invariant(const MatrixXc& A, real tol = 1e-10) {
    const Eigen::Index n = A.rows();
    if (n != A.cols() || n % 2 != 0) return false;
    const Eigen::Index N = n / 2;
    const real t = tol * detail::scale_of(A);
    for (Eigen::Index m = 1; m < N; ++m)
        for (Eigen::Index d = 0; d < N; ++d)
            for (int s = 0; s < 2; ++s)
                for (int sp = 0; sp < 2; ++sp) {
                    const complex ref = A(majorana_index(0, s), majorana_index(d, sp));
                    const complex got = A(majorana_index(m, s), majorana_index((m + d) % N, sp));
                    if (std::abs(got - ref) > t) return false;
                }
    return true;
}

/// Returns true when k = 2 pi j / N for an integer j.
inline bool on_momentum_grid(real k, int N, real tol = 1e-9) {
    const real j = k * N / (2.0 * pi);
    return std::abs(j - std::round(j)) < tol;
}

/// 2x2 Bloch block of a translation-invariant real-space matrix.
inline BlochBlock bloch_block(const MatrixXc& A, real k, Boundary boundary) {
    if (boundary != Boundary::Periodic)
        detail::throw_invalid("Bloch transform requires periodic boundary");
    detail::require(A.rows() == A.cols() && A.rows() % 2 == 0 && A.rows() >= 4,
                    "bloch_block: expected a square 2N x 2N matrix with N >= 2");
    const int N = static_cast<int>(A.rows() / 2);
    detail::require(on_momentum_grid(k, N), "bloch_block: k is not on the grid 2 pi j / N");
    detail::require(is_translation_invariant(A), "bloch_block: matrix is not translation invariant");

    BlochBlock out;
    out.k = k;
    for (int d = 0; d < N; ++d) {
        const complex phase = std::exp(complex(0.0, -k * d));
        for (int s = 0; s < 2; ++s)
            for (int sp = 0; sp < 2; ++sp)
                out.data(s, sp) += A(majorana_index(0, s), majorana_index(d, sp)) * phase;
    }
    return out;
}

/// K(k) of the Kitaev chain at any momentum, read off a four-site ring
/// (couplings reach one neighbour on each side).
inline BlochBlock kitaev_bloch(HamiltonianSpec h, real k) {
    h.N = 4;
    h.boundary = Boundary::Periodic;
    const MatrixXc K = build_kitaev_K(h);
    BlochBlock out;
    out.k = k;
    for (int d : {-1, 0, 1}) {
        const complex phase = std::exp(complex(0.0, -k * d));
        out.data += K.block(0, 2 * ((d + 4) % 4), 2, 2) * phase;
    }
    return out;
}

/// Bloch blocks of M, X and Y obtained directly from the jump-operator
/// coefficients: M(k) = c(k) c(k)^dagger with c(k) = c0 + c1 e^{ik}.
struct DissipatorBloch {
    BlochBlock M;
    BlochBlock X;
    BlochBlock Y;
};

inline DissipatorBloch dissipator_bloch(const DissipatorSpec& d, real k) {
    const auto b = bond_coefficients(d);
    auto m_of = [&b](real q) -> Matrix2c {
        const Vector2c ck = b.c0 + b.c1 * std::exp(complex(0.0, q));
        return ck * ck.adjoint();
    };
    const Matrix2c Mk = m_of(k);
    const Matrix2c Mmk_T = m_of(-k).transpose();
    DissipatorBloch out;
    out.M = {k, Mk};
    out.X = {k, 0.5 * (Mk + Mmk_T)};
    out.Y = {k, 0.5 * (Mk - Mmk_T)};
    return out;
}

/// Damping coefficient h0(k) = -(1/2) sum_s [|c_s(k)|^2 + |c_s(-k)|^2], never positive.
inline real h0_from_coefficients(const DissipatorSpec& d, real k) {
    const auto b = bond_coefficients(d);
    const Vector2c cp = b.c0 + b.c1 * std::exp(complex(0.0, k));
    const Vector2c cm = b.c0 + b.c1 * std::exp(complex(0.0, -k));
    return -0.5 * (cp.squaredNorm() + cm.squaredNorm());
}

/// The dissipator polynomial
///   |u1|^2 + |u2|^2 + 2 Re(u1 u2*) cos k - (|v1|^2 + |v2|^2 + 2 Re(v1 v2*) cos k).
/// With the normalisation of M used here it equals 2 * y_scalar(Y(k)) at k = 0, pi.
inline real y_polynomial(const DissipatorSpec& d, real k) {
    const real ck = std::cos(k);
    const real u = std::norm(d.u1) + std::norm(d.u2) + 2.0 * std::real(d.u2 * std::conj(d.u1)) * ck;
    const real v = std::norm(d.v1) + std::norm(d.v2) + 2.0 * std::real(d.v2 * std::conj(d.v1)) * ck;
    return u - v;
}

/// Components of H_eff(k_s) = 2[K - iX] = hy sigma_y + i(h0 I + hx sigma_x + hz sigma_z).
inline HVector h_components(const BlochBlock& K, const BlochBlock& X) {
    constexpr real tol = 1e-12;
    const complex h0 = -X.data.trace();
    const complex hx = -(X.data * pauli::x()).trace();
    const complex hy = (K.data * pauli::y()).trace();
    const complex hz = -(X.data * pauli::z()).trace();
    const real scale = std::max<real>({1.0, K.data.cwiseAbs().maxCoeff(), X.data.cwiseAbs().maxCoeff()});
    for (complex h : {h0, hx, hy, hz})
        if (std::abs(h.imag()) > tol * scale) detail::throw_invalid("not a high-symmetry block");

    HVector v{h0.real(), hx.real(), hy.real(), hz.real()};
    const Matrix2c lhs = effective_hamiltonian(K, X);
    const Matrix2c rhs = v.hy * pauli::y() +
                         complex(0.0, 1.0) * (v.h0 * pauli::identity() + v.hx * pauli::x() + v.hz * pauli::z());
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-10 * scale) detail::throw_invalid("not a high-symmetry block");
    return v;
}

/// y with Y(k_s) = y sigma_y.
inline real y_scalar(const BlochBlock& Y) {
    const complex y = 0.5 * (Y.data * pauli::y()).trace();
    const real scale = std::max<real>(1.0, Y.data.cwiseAbs().maxCoeff());
    const Matrix2c residual = Y.data - y.real() * pauli::y();
    if (std::abs(y.imag()) > 1e-12 * scale || residual.cwiseAbs().maxCoeff() > 1e-12 * scale)
        detail::throw_invalid("Y block not proportional to sigma_y");
    return y.real();
}

}  // namespace lindtopo
