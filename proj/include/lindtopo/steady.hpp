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

// Steady states of the quadratic Lindbladian: Bloch-block solvers at a single
// momentum, the closed-form Pfaffian at k = 0, pi, phase-diagram sweeps and
// the real-space steady state.

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "lindtopo/linalg.hpp"
#include "lindtopo/model.hpp"
#include "lindtopo/parallel.hpp"
#include "lindtopo/pfaffian.hpp"
#include "lindtopo/types.hpp"

namespace lindtopo {

/// Biorthonormal eigensystem of a 2x2 effective Hamiltonian.
/// Index 0 is "+" (larger real part, ties broken by larger imaginary part).
struct SpectralDecomposition {
    std::array<complex, 2> lambda{};
    std::array<Vector2c, 2> psi{};  // right eigenvectors, unit norm, first nonzero entry real positive
    std::array<Vector2c, 2> chi{};  // left eigenvectors, <chi_m|psi_n> = delta_mn

    complex lambda_plus() const { return lambda[0]; }
    complex lambda_minus() const { return lambda[1]; }

    Matrix2c reconstruct() const {
        Matrix2c H = Matrix2c::Zero();
        for (int m = 0; m < 2; ++m) H += lambda[m] * psi[m] * chi[m].adjoint();
        return H;
    }
};

inline SpectralDecomposition spectral_decomposition(const Matrix2c& H) {
    Eigen::ComplexEigenSolver<Matrix2c> es(H);
    detail::require(es.info() == Eigen::Success, "spectral_decomposition: eigensolver failed");
    const real scale = std::max<real>(1.0, H.cwiseAbs().maxCoeff());
    auto l = es.eigenvalues();
    Matrix2c V = es.eigenvectors();

    const real tie = 1e-12 * scale;
    bool swap = l(1).real() > l(0).real() + tie ||
                (std::abs(l(1).real() - l(0).real()) <= tie && l(1).imag() > l(0).imag());
    if (swap) {
        std::swap(l(0), l(1));
        V.col(0).swap(V.col(1));
    }
    if (std::abs(l(0) - l(1)) < 1e-10 * scale)
        detail::throw_physics("exceptional point or degenerate spectrum: spectral formula degenerate; use direct solve");

    SpectralDecomposition d;
    for (int m = 0; m < 2; ++m) {
        Vector2c v = V.col(m).normalized();
        const int lead = std::abs(v(0)) > 1e-12 ? 0 : 1;
        v *= std::conj(v(lead)) / std::abs(v(lead));
        V.col(m) = v;
        d.lambda[m] = l(m);
        d.psi[m] = v;
    }
    Eigen::FullPivLU<Matrix2c> lu(V);
    if (!lu.isInvertible() || std::abs(lu.determinant()) < 1e-10)
        detail::throw_physics("exceptional point: H_eff is not diagonalizable");
    const Matrix2c W = lu.inverse();
    for (int m = 0; m < 2; ++m) d.chi[m] = W.row(m).adjoint();
    return d;
}

enum class PTPhase { Preserved, Broken, Boundary };

struct PTRegime {
    PTPhase phase = PTPhase::Boundary;
    complex E{0.0};
};

inline PTRegime pt_regime(const HVector& h) {
    const real disc = h.discriminant();
    const real tol = 1e-12 * std::max<real>(1.0, h.hx * h.hx + h.hy * h.hy + h.hz * h.hz);
    PTRegime r;
    r.E = h.E();
    r.phase = disc > tol ? PTPhase::Preserved : (disc < -tol ? PTPhase::Broken : PTPhase::Boundary);
    return r;
}

/// f_{mn} = <chi_m|sigma_y|chi_n> <psi_n|sigma_y|psi_m>; index 0 is "+".
struct OverlapFactors {
    complex f_pp{0.0};
    complex f_pm{0.0};
    complex f_mp{0.0};
    complex f_mm{0.0};

    complex operator()(int m, int n) const {
        return m == 0 ? (n == 0 ? f_pp : f_pm) : (n == 0 ? f_mp : f_mm);
    }
};

inline OverlapFactors overlap_factors(const SpectralDecomposition& d) {
    const Matrix2c H = d.reconstruct();
    const real scale = std::max<real>(1.0, H.cwiseAbs().maxCoeff());
    if ((H.conjugate() + H).cwiseAbs().maxCoeff() > 1e-10 * scale)
        detail::throw_invalid("overlap_factors: H_eff is not at a high-symmetry momentum (H* != -H)");
    const Matrix2c sy = pauli::y();
    auto f = [&](int m, int n) {
        const complex left = d.chi[m].dot(sy * d.chi[n]);
        const complex right = d.psi[n].dot(sy * d.psi[m]);
        return left * right;
    };
    return {f(0, 0), f(0, 1), f(1, 0), f(1, 1)};
}

namespace detail {
inline real block_scale(const Matrix2c& a, const Matrix2c& b) {
    return std::max<real>({1.0, a.cwiseAbs().maxCoeff(), b.cwiseAbs().maxCoeff()});
}
}  // namespace detail

/// Unique solution of H_eff D - D H_eff^dagger = 4 i Y by a 4x4 vectorized solve.
inline BlochBlock steady_bloch_direct(const Matrix2c& Heff, const BlochBlock& Y) {
    const complex four_i(0.0, 4.0);
    MatrixXc D;
    try {
        D = solve_sylvester_kronecker(Heff, -Heff.adjoint(), four_i * Y.data);
    } catch (const PhysicsError&) {
        detail::throw_physics("no unique steady state: undamped mode at k = " + std::to_string(Y.k));
    }
    Matrix2c Ds = D;
    const Matrix2c residual = Heff * Ds - Ds * Heff.adjoint() - four_i * Y.data;
    const real scale = detail::block_scale(Heff, Y.data);
    if (residual.cwiseAbs().maxCoeff() > 1e-10 * scale)
        detail::throw_physics("steady_bloch_direct: ill-conditioned steady-state solve");
    return {Y.k, 0.5 * (Ds + Ds.adjoint())};
}

inline BlochBlock steady_bloch_direct(const BlochBlock& Heff, const BlochBlock& Y) {
    return steady_bloch_direct(Heff.data, Y);
}

/// D_s = 4i sum_{mn} <chi_m|Y|chi_n> / (lambda_m - lambda_n*) |psi_m><psi_n|.
inline BlochBlock steady_bloch_spectral(const SpectralDecomposition& d, const BlochBlock& Y) {
    Matrix2c D = Matrix2c::Zero();
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
            const complex denom = d.lambda[m] - std::conj(d.lambda[n]);
            if (std::abs(denom) < 1e-10) detail::throw_physics("spectral formula degenerate; use direct solve");
            const complex coeff = d.chi[m].dot(Y.data * d.chi[n]) / denom;
            D += coeff * d.psi[m] * d.psi[n].adjoint();
        }
    return {Y.k, complex(0.0, 4.0) * D};
}

/// Pf[i D_s(k_s)] = sum_{mn} 2 i y f_{mn} / (lambda_m - lambda_n*).
inline real steady_pf_overlap(const SpectralDecomposition& d, real y) {
    const OverlapFactors f = overlap_factors(d);
    complex sum{0.0};
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) {
            const complex fmn = f(m, n);
            if (std::abs(fmn) < 1e-14) continue;
            sum += complex(0.0, 2.0) * y * fmn / (d.lambda[m] - std::conj(d.lambda[n]));
        }
    return sum.real();
}

/// Pf[i D_s(k_s)] = 2 y / h0, the same expression in both PT regimes.
inline real steady_pf_closed(real y, real h0) {
    if (h0 == 0.0) detail::throw_physics("undamped high-symmetry mode: h0 = 0");
    if (h0 > 0.0) detail::throw_invalid("steady_pf_closed: h0 must be negative");
    return 2.0 * y / h0;
}

/// Pf[i D] = Tr[D sigma_y] / 2 of a high-symmetry block.
inline real pf_of_block(const BlochBlock& D) { return (0.5 * (D.data * pauli::y()).trace()).real(); }

/// Everything computed along the steady-state pipeline at one of k = 0, pi.
struct HighSymmetryPoint {
    real k = 0.0;
    real y = 0.0;
    HVector h;
    PTRegime regime;
    BlochBlock delta;
    real pf = 0.0;
};

/// Full pipeline at k_s: Bloch blocks, H_eff, direct steady-state solve, Pf.
inline HighSymmetryPoint steady_high_symmetry(const DissipatorSpec& d, const HamiltonianSpec& h, real ks) {
    detail::require(BlochBlock{ks}.high_symmetry(), "steady_high_symmetry: k must be 0 or pi");
    const DissipatorBloch db = dissipator_bloch(d, ks);
    const BlochBlock K = kitaev_bloch(h, ks);
    HighSymmetryPoint p;
    p.k = ks;
    p.h = h_components(K, db.X);
    p.y = y_scalar(db.Y);
    p.regime = pt_regime(p.h);
    p.delta = steady_bloch_direct(effective_hamiltonian(K, db.X), db.Y);
    p.pf = pf_of_block(p.delta);
    return p;
}

namespace detail {
inline real amplitude_scale(const DissipatorSpec& d) {
    return std::max<real>(1.0, std::norm(d.u1) + std::norm(d.u2) + std::norm(d.v1) + std::norm(d.v2));
}

inline int sign_of_y(const DissipatorSpec& d, real ks, const char* label) {
    const real y = y_scalar(dissipator_bloch(d, ks).Y);
    if (std::abs(y) <= 1e-12 * amplitude_scale(d))
        throw_physics(std::string("dissipator on a phase boundary: y vanishes at k = ") + label);
    return y > 0.0 ? 1 : -1;
}
}  // namespace detail

/// (M_0, M_pi) = (sgn y(0), sgn y(pi)); independent of the Hamiltonian.
inline PfaffianSignPair steady_nu(const DissipatorSpec& d) {
    d.validate();
    return make_sign_pair(detail::sign_of_y(d, 0.0, "0"), detail::sign_of_y(d, pi, "pi"));
}

struct PhaseGrid {
    real u1_min = -5.0;
    real u1_max = 5.0;
    int u1_points = 201;
    real u2_min = -5.0;
    real u2_max = 5.0;
    int u2_points = 201;
    real v2_over_v1 = -2.0;
    real v1 = 1.0;

    void validate() const {
        detail::require(v1 != 0.0, "PhaseGrid: v1 must be nonzero");
        detail::require(u1_points >= 1 && u2_points >= 1, "PhaseGrid: point counts must be positive");
    }
    real u1_at(int i) const { return u1_points == 1 ? u1_min : u1_min + (u1_max - u1_min) * i / (u1_points - 1); }
    real u2_at(int j) const { return u2_points == 1 ? u2_min : u2_min + (u2_max - u2_min) * j / (u2_points - 1); }
};

struct PhaseCell {
    real u1_over_v1 = 0.0;
    real u2_over_v1 = 0.0;
    PfaffianSignPair signs;
    bool boundary = false;  // a Pfaffian at k = 0 or pi vanishes; signs are meaningless
};

struct PhaseDiagram {
    PhaseGrid grid;
    std::vector<PhaseCell> cells;  // u1 index major: cells[i * u2_points + j]

    const PhaseCell& at(int i, int j) const { return cells[static_cast<std::size_t>(i) * grid.u2_points + j]; }
};

/// Classifies every grid cell through the steady-state pipeline under the
/// given Hamiltonian. Cells on a transition line are flagged, not fatal.
inline PhaseDiagram phase_diagram(const PhaseGrid& grid, const HamiltonianSpec& h = {}, unsigned threads = 1) {
    grid.validate();
    PhaseDiagram out;
    out.grid = grid;
    out.cells.resize(static_cast<std::size_t>(grid.u1_points) * grid.u2_points);
    parallel_for(out.cells.size(), threads, [&](std::size_t idx) {
        const int i = static_cast<int>(idx / grid.u2_points);
        const int j = static_cast<int>(idx % grid.u2_points);
        PhaseCell& cell = out.cells[idx];
        cell.u1_over_v1 = grid.u1_at(i);
        cell.u2_over_v1 = grid.u2_at(j);
        DissipatorSpec d;
        d.u1 = cell.u1_over_v1 * grid.v1;
        d.u2 = cell.u2_over_v1 * grid.v1;
        d.v1 = grid.v1;
        d.v2 = grid.v2_over_v1 * grid.v1;
        try {
            const int M0 = m_sign(steady_high_symmetry(d, h, 0.0).delta);
            const int Mpi = m_sign(steady_high_symmetry(d, h, pi).delta);
            cell.signs = make_sign_pair(M0, Mpi);
        } catch (const PhysicsError&) {
            cell.boundary = true;
            cell.signs = {0, 0, 0};
        }
    });
    return out;
}

namespace detail {

inline void require_matching(const HamiltonianSpec& h, const DissipatorSpec& d) {
    require(h.N == d.N, "steady_realspace: Hamiltonian and dissipator site counts differ");
    require(h.boundary == d.boundary, "steady_realspace: Hamiltonian and dissipator boundaries differ");
}

inline CorrelationMatrix solve_realspace_steady(const MatrixXc& K, const DissipationMatrices& mxy, Boundary b,
                                                UndampedPolicy policy = UndampedPolicy::RequireUnique) {
    // Delta = iA, Y = iB, K = i Kr: W A + A W^T = 4B with W = 2(Kr - X).
    const MatrixXr W = 2.0 * (K.imag() - mxy.X.real());
    const MatrixXr B = mxy.Y.imag();
    MatrixXr A;
    try {
        A = solve_lyapunov_antisymmetric(W, MatrixXr(4.0 * B), policy);
    } catch (const PhysicsError&) {
        throw_physics(b == Boundary::Open ? "no unique steady state: undamped mode under OBC"
                                          : "no unique steady state: undamped mode");
    }
    CorrelationMatrix out = CorrelationMatrix::from_real_form(A, b);

    const MatrixXc H = effective_hamiltonian(K, mxy.X);
    const MatrixXc residual = H * out.data - out.data * H.adjoint() - complex(0.0, 4.0) * mxy.Y;
    const real scale = std::max<real>(1.0, H.cwiseAbs().maxCoeff());
    if (residual.cwiseAbs().maxCoeff() > 1e-8 * scale)
        throw_physics("steady_realspace: ill-conditioned steady-state solve (residual " +
                      std::to_string(residual.cwiseAbs().maxCoeff()) + ")");
    return out;
}

}  // namespace detail

/// Real-space steady state: the unique Delta with H_eff Delta - Delta H_eff^dagger = 4iY.
/// A single undamped Majorana mode (an open chain with u1 = v1 and H = 0) is
/// allowed, since the antisymmetric solution stays unique; it leaves that
/// mode uncorrelated.
inline CorrelationMatrix steady_realspace(const HamiltonianSpec& h, const DissipatorSpec& d) {
    h.validate();
    d.validate();
    detail::require_matching(h, d);
    return detail::solve_realspace_steady(build_kitaev_K(h), build_MXY(majorana_coefficients(d)), d.boundary);
}

/// State reached at long times from the maximally mixed state (Delta = 0).
/// Equals steady_realspace when that is unique. Undamped correlations, and
/// ones whose damping is below the solver tolerance (the exponentially weak
/// edge modes of long open chains), stay at zero instead of raising.
inline CorrelationMatrix relaxed_realspace(const HamiltonianSpec& h, const DissipatorSpec& d) {
    h.validate();
    d.validate();
    detail::require_matching(h, d);
    return detail::solve_realspace_steady(build_kitaev_K(h), build_MXY(majorana_coefficients(d)), d.boundary,
                                          UndampedPolicy::FreezeAtZero);
}

}  // namespace lindtopo
