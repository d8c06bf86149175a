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

// Independent reference implementations used only by the tests.
//
// The many-body oracle works in the 2^N-dimensional Fock space with
// Jordan-Wigner fermions: it builds the Hamiltonian and jump operators
// directly from c and c^dagger, integrates the full Lindblad equation for the
// density matrix and measures Delta_pq = Tr rho [w_p, w_q]. Nothing in it goes
// through Majorana coefficient matrices.

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lindtopo/types.hpp"

namespace oracle {

using lindtopo::complex;
using lindtopo::MatrixXc;
using lindtopo::real;

struct Fock {
    int N = 0;
    std::vector<MatrixXc> c;  // annihilation operators
    MatrixXc I;

    MatrixXc cd(int m) const { return c[m].adjoint(); }

    /// Majorana operators in the convention c = (w0 + i w1)/sqrt(2).
    MatrixXc w(int m, int s) const {
        const real r = 1.0 / std::sqrt(2.0);
        return s == 0 ? MatrixXc(r * (c[m] + cd(m))) : MatrixXc(complex(0.0, -r) * (c[m] - cd(m)));
    }
};

inline Fock make_fock(int N) {
    const int dim = 1 << N;
    Fock f;
    f.N = N;
    f.I = MatrixXc::Identity(dim, dim);
    for (int m = 0; m < N; ++m) {
        MatrixXc a = MatrixXc::Zero(dim, dim);
        for (int state = 0; state < dim; ++state) {
            if (!(state >> m & 1)) continue;
            int parity = 0;
            for (int j = 0; j < m; ++j) parity += state >> j & 1;
            a(state & ~(1 << m), state) = (parity % 2) ? -1.0 : 1.0;
        }
        f.c.push_back(a);
    }
    return f;
}

inline MatrixXc kitaev_hamiltonian(const Fock& f, const lindtopo::HamiltonianSpec& h) {
    const int N = f.N;
    MatrixXc H = MatrixXc::Zero(f.I.rows(), f.I.cols());
    const int bonds = h.boundary == lindtopo::Boundary::Periodic ? N : N - 1;
    for (int n = 0; n < bonds; ++n) {
        const int m = (n + 1) % N;
        const MatrixXc hop = -h.J * f.cd(n) * f.c[m] + h.delta * f.c[n] * f.c[m];
        H += hop + hop.adjoint();
    }
    for (int n = 0; n < N; ++n) H -= h.mu * f.cd(n) * f.c[n];
    return H;
}

/// L_n = u1 c_n + v1 c_n^dagger + u2 c_{n+1} + v2 c_{n+1}^dagger; under open
/// boundaries the last operator keeps only its on-site part.
inline std::vector<MatrixXc> jump_operators(const Fock& f, const lindtopo::DissipatorSpec& d, real wrap = -1.0) {
    const int N = f.N;
    if (wrap < 0.0) wrap = d.boundary == lindtopo::Boundary::Periodic ? 1.0 : 0.0;
    std::vector<MatrixXc> Ls;
    for (int n = 0; n < N; ++n) {
        const int m = (n + 1) % N;
        const real w = m == 0 ? wrap : 1.0;
        Ls.push_back(d.u1 * f.c[n] + d.v1 * f.cd(n) + w * (d.u2 * f.c[m] + d.v2 * f.cd(m)));
    }
    return Ls;
}

inline MatrixXc lindblad_rhs(const MatrixXc& H, const std::vector<MatrixXc>& Ls, const MatrixXc& rho) {
    MatrixXc out = complex(0.0, -1.0) * (H * rho - rho * H);
    for (const MatrixXc& L : Ls) {
        const MatrixXc LdL = L.adjoint() * L;
        out += 2.0 * L * rho * L.adjoint() - LdL * rho - rho * LdL;
    }
    return out;
}

inline MatrixXc evolve_rho(const MatrixXc& H, const std::vector<MatrixXc>& Ls, MatrixXc rho, real t, int steps) {
    const real h = t / steps;
    for (int n = 0; n < steps; ++n) {
        const MatrixXc k1 = lindblad_rhs(H, Ls, rho);
        const MatrixXc k2 = lindblad_rhs(H, Ls, rho + 0.5 * h * k1);
        const MatrixXc k3 = lindblad_rhs(H, Ls, rho + 0.5 * h * k2);
        const MatrixXc k4 = lindblad_rhs(H, Ls, rho + h * k3);
        rho += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return rho;
}

/// Null vector of the Lindblad superoperator, normalized to unit trace.
inline MatrixXc steady_rho(const MatrixXc& H, const std::vector<MatrixXc>& Ls) {
    const auto dim = H.rows();
    const MatrixXc I = MatrixXc::Identity(dim, dim);
    auto kron = [](const MatrixXc& A, const MatrixXc& B) {
        MatrixXc out(A.rows() * B.rows(), A.cols() * B.cols());
        for (Eigen::Index i = 0; i < A.rows(); ++i)
            for (Eigen::Index j = 0; j < A.cols(); ++j) out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
        return out;
    };
    // vec(A rho B) = (B^T kron A) vec(rho), column-major vec.
    MatrixXc S = complex(0.0, -1.0) * (kron(I, H) - kron(H.transpose(), I));
    for (const MatrixXc& L : Ls) {
        const MatrixXc LdL = L.adjoint() * L;
        S += 2.0 * kron(L.conjugate(), L) - kron(I, LdL) - kron(LdL.transpose(), I);
    }
    Eigen::JacobiSVD<MatrixXc> svd(S, Eigen::ComputeFullV);
    const Eigen::VectorXcd v = svd.matrixV().col(S.cols() - 1);
    MatrixXc rho = Eigen::Map<const MatrixXc>(v.data(), dim, dim);
    rho /= rho.trace();
    return 0.5 * (rho + rho.adjoint());
}

/// Delta_pq = Tr rho [w_p, w_q].
inline MatrixXc correlation(const Fock& f, const MatrixXc& rho) {
    const int n = 2 * f.N;
    std::vector<MatrixXc> w;
    for (int p = 0; p < n; ++p) w.push_back(f.w(p / 2, p % 2));
    MatrixXc D(n, n);
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) D(p, q) = (rho * (w[p] * w[q] - w[q] * w[p])).trace();
    return D;
}

/// sum_pq K_pq w_p w_q as a many-body operator.
inline MatrixXc majorana_quadratic(const Fock& f, const MatrixXc& K) {
    MatrixXc out = MatrixXc::Zero(f.I.rows(), f.I.cols());
    for (int p = 0; p < 2 * f.N; ++p)
        for (int q = 0; q < 2 * f.N; ++q)
            if (K(p, q) != complex(0.0)) out += K(p, q) * f.w(p / 2, p % 2) * f.w(q / 2, q % 2);
    return out;
}

/// (1/N) sum_{m,n} A_{(m,s),(n,s')} e^{ikm} e^{-ikn}.
inline lindtopo::Matrix2c fourier_double_sum(const MatrixXc& A, real k) {
    const auto N = A.rows() / 2;
    lindtopo::Matrix2c out = lindtopo::Matrix2c::Zero();
    for (Eigen::Index m = 0; m < N; ++m)
        for (Eigen::Index n = 0; n < N; ++n)
            out += A.block(2 * m, 2 * n, 2, 2) * std::exp(complex(0.0, k * static_cast<real>(m - n)));
    return out / static_cast<real>(N);
}

/// Pfaffian by expansion along the first row; exponential, for small matrices.
inline complex pfaffian_expansion(const MatrixXc& A) {
    const auto n = A.rows();
    if (n == 0) return 1.0;
    if (n % 2) return 0.0;
    complex sum = 0.0;
    for (Eigen::Index j = 1; j < n; ++j) {
        std::vector<Eigen::Index> keep;
        for (Eigen::Index i = 1; i < n; ++i)
            if (i != j) keep.push_back(i);
        MatrixXc minor(n - 2, n - 2);
        for (std::size_t a = 0; a < keep.size(); ++a)
            for (std::size_t b = 0; b < keep.size(); ++b) minor(a, b) = A(keep[a], keep[b]);
        sum += ((j % 2) ? 1.0 : -1.0) * A(0, j) * pfaffian_expansion(minor);
    }
    return sum;
}

struct Rng {
    std::mt19937_64 gen;
    explicit Rng(std::uint64_t seed) : gen(seed) {}
    real uniform(real a, real b) { return std::uniform_real_distribution<real>(a, b)(gen); }
    complex cuniform(real a, real b) { return {uniform(a, b), uniform(a, b)}; }

    lindtopo::HamiltonianSpec hamiltonian(int N = 2, lindtopo::Boundary b = lindtopo::Boundary::Periodic) {
        return {uniform(-3, 3), uniform(-3, 3), uniform(-3, 3), N, b};
    }
    lindtopo::DissipatorSpec dissipator(int N = 2, lindtopo::Boundary b = lindtopo::Boundary::Periodic,
                                        bool complex_amplitudes = false) {
        lindtopo::DissipatorSpec d;
        if (complex_amplitudes) {
            d.u1 = cuniform(-2, 2), d.u2 = cuniform(-2, 2), d.v1 = cuniform(-2, 2), d.v2 = cuniform(-2, 2);
        } else {
            d.u1 = uniform(-3, 3), d.u2 = uniform(-3, 3), d.v1 = uniform(-3, 3), d.v2 = uniform(-3, 3);
        }
        d.N = N;
        d.boundary = b;
        return d;
    }
    MatrixXc antisymmetric(int n, bool complex_entries) {
        MatrixXc A = MatrixXc::Zero(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                A(i, j) = complex_entries ? cuniform(-1, 1) : complex(uniform(-1, 1), 0.0);
                A(j, i) = -A(i, j);
            }
        return A;
    }
};

inline lindtopo::DissipatorSpec spec(real u1, real u2, real v1, real v2, int N = 2,
                                     lindtopo::Boundary b = lindtopo::Boundary::Periodic) {
    lindtopo::DissipatorSpec d;
    d.u1 = u1, d.u2 = u2, d.v1 = v1, d.v2 = v2, d.N = N, d.boundary = b;
    return d;
}

}  // namespace oracle
