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

// Real-space correlation-matrix dynamics and entanglement spectra.
//
// Every matrix of the problem is real up to a factor i: K = i Kr, Y = i B and
// Delta = i A with Kr, B, A real antisymmetric and X real symmetric. The
// equation of motion dDelta/dt = -i(H_eff Delta - Delta H_eff^dagger) - 4Y then
// reads dA/dt = W A + A W^T - 4B with W = 2(Kr - X), which is what is integrated.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <queue>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCore>

#include "lindtopo/model.hpp"
#include "lindtopo/parallel.hpp"
#include "lindtopo/types.hpp"

namespace lindtopo {

/// Real generator (W, B) of the correlation-matrix dynamics.
struct RealspaceGenerator {
    MatrixXr W;
    MatrixXr B;
    Boundary boundary = Boundary::Periodic;
    /// W has O(1) entries per row (bonds are nearest-neighbour), so products use a sparse copy.
    Eigen::SparseMatrix<real, Eigen::RowMajor> W_sparse;

    RealspaceGenerator() = default;
    RealspaceGenerator(MatrixXr w, MatrixXr b, Boundary bc) : W(std::move(w)), B(std::move(b)), boundary(bc) {
        detail::require(W.rows() == W.cols() && B.rows() == W.rows() && B.cols() == W.cols(),
                        "RealspaceGenerator: W and B must be square and of equal size");
        W_sparse = W.sparseView();
    }

    static RealspaceGenerator from_matrices(const MatrixXc& K, const MatrixXc& X, const MatrixXc& Y, Boundary b) {
        const Eigen::Index n = K.rows();
        detail::require(n % 2 == 0 && K.cols() == n && X.rows() == n && X.cols() == n && Y.rows() == n &&
                            Y.cols() == n,
                        "RealspaceGenerator: K, X, Y must share one 2N x 2N shape");
        const real scale = std::max<real>({1.0, K.cwiseAbs().maxCoeff(), X.cwiseAbs().maxCoeff(),
                                           Y.cwiseAbs().maxCoeff()});
        detail::require(K.real().cwiseAbs().maxCoeff() < 1e-12 * scale, "RealspaceGenerator: K is not purely imaginary");
        detail::require(X.imag().cwiseAbs().maxCoeff() < 1e-12 * scale, "RealspaceGenerator: X is not real");
        detail::require(Y.real().cwiseAbs().maxCoeff() < 1e-12 * scale, "RealspaceGenerator: Y is not purely imaginary");
        return RealspaceGenerator(2.0 * (K.imag() - X.real()), Y.imag(), b);
    }

    static RealspaceGenerator from_specs(const HamiltonianSpec& h, const DissipatorSpec& d) {
        detail::require(h.N == d.N && h.boundary == d.boundary, "RealspaceGenerator: specs disagree on N or boundary");
        const DissipationMatrices mxy = build_MXY(majorana_coefficients(d));
        return from_matrices(build_kitaev_K(h), mxy.X, mxy.Y, d.boundary);
    }

    MatrixXr rhs(const MatrixXr& A) const {
        const MatrixXr P = W_sparse * A;  // A W^T = -(W A)^T for antisymmetric A
        return P - P.transpose() - 4.0 * B;
    }
};

struct RealspaceTrajectory {
    std::vector<real> times;
    std::vector<CorrelationMatrix> states;
};

struct EvolveOptions {
    real dt = 1e-3;
    /// Allowed growth of the antisymmetry defect of A per unit time before aborting.
    real invariant_tol = 1e-8;
};

namespace detail {

inline real max_row_sum(const MatrixXr& W) { return W.cwiseAbs().rowwise().sum().maxCoeff(); }

inline void check_correlation(const CorrelationMatrix& d, const char* who) {
    const real scale = std::max<real>(1.0, d.data.cwiseAbs().maxCoeff());
    require((d.data - d.data.adjoint()).cwiseAbs().maxCoeff() < 1e-9 * scale, std::string(who) + ": Delta is not Hermitian");
    require((d.data + d.data.transpose()).cwiseAbs().maxCoeff() < 1e-9 * scale,
            std::string(who) + ": Delta is not antisymmetric");
}

}  // namespace detail

/// Integrates the correlation matrix with classical RK4 and records it at each
/// of `sample_times` (ascending, >= 0); steps are shortened to land on them
/// exactly. The step is capped at 1 / (2 |W|_inf) for stability.
inline RealspaceTrajectory evolve_delta(const CorrelationMatrix& delta0, const RealspaceGenerator& gen,
                                        const std::vector<real>& sample_times, const EvolveOptions& opt = {}) {
    detail::require(delta0.data.rows() == gen.W.rows(), "evolve_delta: dimension mismatch");
    detail::require(delta0.boundary == gen.boundary, "evolve_delta: boundary mismatch");
    detail::require(opt.dt > 0.0, "evolve_delta: dt must be positive");
    detail::require(std::is_sorted(sample_times.begin(), sample_times.end()) &&
                        (sample_times.empty() || sample_times.front() >= 0.0),
                    "evolve_delta: sample times must be ascending and non-negative");
    detail::check_correlation(delta0, "evolve_delta");

    const real h_max = std::min(opt.dt, 1.0 / (2.0 * std::max<real>(detail::max_row_sum(gen.W), 1e-300)));
    MatrixXr A = delta0.real_form();
    A = 0.5 * (A - A.transpose()).eval();
    real t = 0.0;
    real defect_budget = 0.0;
    RealspaceTrajectory out;
    out.times.reserve(sample_times.size());
    out.states.reserve(sample_times.size());

    for (real target : sample_times) {
        while (t < target - 1e-14 * std::max<real>(1.0, target)) {
            const real h = std::min(h_max, target - t);
            const MatrixXr k1 = gen.rhs(A);
            const MatrixXr k2 = gen.rhs(A + 0.5 * h * k1);
            const MatrixXr k3 = gen.rhs(A + 0.5 * h * k2);
            const MatrixXr k4 = gen.rhs(A + h * k3);
            A += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            const real defect = (A + A.transpose()).cwiseAbs().maxCoeff();
            A = 0.5 * (A - A.transpose()).eval();
            t += h;
            defect_budget += opt.invariant_tol * h;
            if (!A.allFinite() || defect > defect_budget + 1e-13)
                detail::throw_physics("evolve_delta: correlation-matrix invariants violated at t = " + std::to_string(t) +
                                      " (antisymmetry defect " + std::to_string(defect) + ")");
        }
        t = std::max(t, target);
        out.times.push_back(target);
        out.states.push_back(CorrelationMatrix::from_real_form(A, delta0.boundary));
    }
    return out;
}

/// Uniform output grid t = 0, dt, ..., t_max.
inline RealspaceTrajectory evolve_delta(const CorrelationMatrix& delta0, const MatrixXc& K, const MatrixXc& X,
                                        const MatrixXc& Y, real t_max, real dt) {
    detail::require(t_max >= 0.0 && dt > 0.0, "evolve_delta: need t_max >= 0 and dt > 0");
    std::vector<real> times;
    const auto steps = static_cast<long>(std::floor(t_max / dt + 1e-9));
    for (long n = 0; n <= steps; ++n) times.push_back(n * dt);
    EvolveOptions opt;
    opt.dt = dt;
    return evolve_delta(delta0, RealspaceGenerator::from_matrices(K, X, Y, delta0.boundary), times, opt);
}

/// Single-particle entanglement spectrum: the 2N eigenvalues of Delta, ascending.
inline VectorXr spes(const CorrelationMatrix& delta) {
    detail::check_correlation(delta, "spes");
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(delta.data, Eigen::EigenvaluesOnly);
    detail::require(es.info() == Eigen::Success, "spes: eigensolver failed");
    return es.eigenvalues();
}

struct SpesTrace {
    std::vector<real> times;
    std::vector<VectorXr> spectra;
};

/// Spectra of every snapshot; snapshots are independent and solved in parallel.
inline SpesTrace spes_trace(const RealspaceTrajectory& traj, unsigned threads = 1) {
    SpesTrace out;
    out.times = traj.times;
    out.spectra.resize(traj.states.size());
    parallel_for(traj.states.size(), threads, [&](std::size_t i) { out.spectra[i] = spes(traj.states[i]); });
    return out;
}

/// Principal submatrix of Delta on sites [first, first + count): the reduced
/// state of that interval.
inline CorrelationMatrix restrict_to_sites(const CorrelationMatrix& delta, int first, int count) {
    detail::require(first >= 0 && count >= 1 && first + count <= delta.sites(), "restrict_to_sites: bad site range");
    return {delta.data.block(2 * first, 2 * first, 2 * count, 2 * count), Boundary::Open};
}

struct ManyBodyLevels {
    /// Nonnegative representative epsilon_i of each +-pair, in the order of `occupations` entries.
    std::vector<real> epsilon;
    /// Xi values, non-increasing.
    std::vector<real> xi;
    /// e_i per level: 0 -> factor (1 + eps_i)/2, 1 -> factor (1 - eps_i)/2.
    std::vector<std::vector<std::uint8_t>> occupations;
};

namespace detail {

inline std::vector<real> pair_representatives(const VectorXr& spectrum) {
    const Eigen::Index n = spectrum.size();
    require(n % 2 == 0, "many_body_levels: spectrum size must be even");
    VectorXr s = spectrum;
    std::sort(s.data(), s.data() + n);
    for (Eigen::Index i = 0; i < n; ++i) {
        if (std::abs(s(i)) > 1.0 + 1e-9) throw_physics("unphysical single-particle spectrum: |epsilon| > 1");
        require(std::abs(s(i) + s(n - 1 - i)) < 1e-9, "many_body_levels: spectrum is not symmetric about zero");
    }
    std::vector<real> reps(static_cast<std::size_t>(n / 2));
    for (Eigen::Index i = 0; i < n / 2; ++i) reps[i] = std::clamp(0.5 * (s(n / 2 + i) - s(n / 2 - 1 - i)), 0.0, 1.0);
    return reps;
}

}  // namespace detail

/// The M largest many-body levels Xi_e = prod_i (1 + (-1)^{e_i} eps_i) / 2.
///
/// Flipping e_i multiplies Xi by r_i = (1 - eps_i)/(1 + eps_i) <= 1. With the r_i
/// sorted in decreasing order, flip sets are generated best-first from a heap:
/// each set spawns "append the next index" and "move the last index one
/// further", both no larger than their parent, so levels come out in
/// non-increasing order after visiting only O(M) sets.
inline ManyBodyLevels many_body_levels(const VectorXr& spectrum, std::size_t M) {
    ManyBodyLevels out;
    out.epsilon = detail::pair_representatives(spectrum);
    const std::size_t N = out.epsilon.size();
    if (M == 0) return out;

    std::vector<std::size_t> order(N);
    std::vector<real> r(N);
    for (std::size_t i = 0; i < N; ++i) order[i] = i;
    auto ratio = [&](std::size_t i) { return (1.0 - out.epsilon[i]) / (1.0 + out.epsilon[i]); };
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return ratio(a) > ratio(b); });
    for (std::size_t i = 0; i < N; ++i) r[i] = ratio(order[i]);

    real base = 1.0;
    for (real e : out.epsilon) base *= 0.5 * (1.0 + e);

    struct Node {
        std::size_t parent;  // node index of the set without the last flip; npos for the empty set
        std::size_t last;    // position (in `order`) of the last flip
    };
    constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();
    struct Entry {
        real value;
        real prefix;  // value of the set without its last flip
        std::size_t parent;
        std::size_t last;
        bool operator<(const Entry& o) const { return value < o.value; }
    };

    std::vector<Node> nodes;
    auto emit = [&](real value, std::size_t node) {
        std::vector<std::uint8_t> e(N, 0);
        for (std::size_t n = node; n != npos; n = nodes[n].parent) e[order[nodes[n].last]] = 1;
        out.xi.push_back(value);
        out.occupations.push_back(std::move(e));
    };

    out.xi.push_back(base);
    out.occupations.emplace_back(N, 0);
    std::priority_queue<Entry> heap;
    if (N > 0) heap.push({base * r[0], base, npos, 0});
    while (out.xi.size() < M && !heap.empty()) {
        const Entry top = heap.top();
        heap.pop();
        nodes.push_back({top.parent, top.last});
        const std::size_t id = nodes.size() - 1;
        emit(top.value, id);
        if (top.last + 1 < N) {
            heap.push({top.value * r[top.last + 1], top.value, id, top.last + 1});
            heap.push({top.prefix * r[top.last + 1], top.prefix, top.parent, top.last + 1});
        }
    }
    return out;
}

/// Modular matrix G with Delta = tanh(iG/4), i.e. G = -4i artanh(Delta).
inline MatrixXr g_from_delta(const CorrelationMatrix& delta) {
    detail::check_correlation(delta, "g_from_delta");
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(delta.data);
    detail::require(es.info() == Eigen::Success, "g_from_delta: eigensolver failed");
    const VectorXr eps = es.eigenvalues();
    if (eps.cwiseAbs().maxCoeff() >= 1.0 - 1e-12) detail::throw_physics("modular Hamiltonian divergent (pure mode)");
    const VectorXc atanh = eps.unaryExpr([](real e) { return std::atanh(e); }).cast<complex>();
    const MatrixXc V = es.eigenvectors();
    const MatrixXc G = complex(0.0, -4.0) * V * atanh.asDiagonal() * V.adjoint();
    MatrixXr Gr = G.real();
    return 0.5 * (Gr - Gr.transpose());
}

/// Delta = tanh(iG/4) for a real antisymmetric G.
inline CorrelationMatrix delta_from_g(const MatrixXr& G, Boundary b) {
    const MatrixXc iG4 = complex(0.0, 0.25) * G.cast<complex>();
    Eigen::SelfAdjointEigenSolver<MatrixXc> es(iG4);
    const VectorXc t = es.eigenvalues().unaryExpr([](real x) { return std::tanh(x); }).cast<complex>();
    const MatrixXc D = es.eigenvectors() * t.asDiagonal() * es.eigenvectors().adjoint();
    return {0.5 * (D + D.adjoint()), b};
}

struct ZeroModeSample {
    real t = 0.0;
    real min_abs = 0.0;     // smallest |epsilon|
    real second_abs = 0.0;  // next distinct pair
    real gap_ratio = 0.0;   // second_abs / min_abs (infinite for an exact zero)
};

inline std::vector<ZeroModeSample> zero_mode_diagnostics(const SpesTrace& trace) {
    std::vector<ZeroModeSample> out;
    out.reserve(trace.times.size());
    for (std::size_t i = 0; i < trace.times.size(); ++i) {
        const std::vector<real> reps = detail::pair_representatives(trace.spectra[i]);
        std::vector<real> sorted = reps;
        std::sort(sorted.begin(), sorted.end());
        ZeroModeSample s;
        s.t = trace.times[i];
        s.min_abs = sorted.empty() ? 0.0 : sorted[0];
        s.second_abs = sorted.size() > 1 ? sorted[1] : s.min_abs;
        s.gap_ratio = s.min_abs > 0.0 ? s.second_abs / s.min_abs : std::numeric_limits<real>::infinity();
        out.push_back(s);
    }
    return out;
}

}  // namespace lindtopo
