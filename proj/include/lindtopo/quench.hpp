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

// Dissipative quench: the state starts in the steady state of one Lindbladian
// and evolves under another. At k = 0, pi the Pfaffian relaxes as a single
// exponential,
//   Pf(t) = e^{2 h0_f t} (Pf_i - Pf_f) + Pf_f,   Pf = 2y/h0,
// so it crosses zero at most once.

#include <array>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "lindtopo/model.hpp"
#include "lindtopo/pfaffian.hpp"
#include "lindtopo/steady.hpp"
#include "lindtopo/types.hpp"

namespace lindtopo {

struct QuenchPlan {
    DissipatorSpec initial;
    DissipatorSpec final;
    HamiltonianSpec hamiltonian_initial;
    HamiltonianSpec hamiltonian_final;
    real t_max = 1.0;
    real dt = 1e-3;

    void validate() const {
        detail::require(t_max > 0.0, "QuenchPlan: t_max must be positive");
        detail::require(dt > 0.0, "QuenchPlan: dt must be positive");
        initial.validate();
        final.validate();
    }
};

/// y and h0 of one dissipator at k_s.
struct DissipatorPoint {
    real y = 0.0;
    real h0 = 0.0;

    real pf() const { return steady_pf_closed(y, h0); }
};

inline DissipatorPoint dissipator_point(const DissipatorSpec& d, real ks) {
    const DissipatorBloch b = dissipator_bloch(d, ks);
    DissipatorPoint p{y_scalar(b.Y), -b.X.data.trace().real()};
    if (p.h0 >= -1e-12 * detail::amplitude_scale(d))
        detail::throw_physics("undamped mode at k = " + std::to_string(ks));
    return p;
}

/// Pf[i Delta(k_s, t)] after the quench.
inline real pf_trajectory(real ks, const QuenchPlan& plan, real t) {
    const DissipatorPoint i = dissipator_point(plan.initial, ks);
    const DissipatorPoint f = dissipator_point(plan.final, ks);
    const real pf_i = i.pf();
    const real pf_f = f.pf();
    return std::exp(2.0 * f.h0 * t) * (pf_i - pf_f) + pf_f;
}

struct KsTransition {
    real ks = 0.0;
    bool exists = false;
    std::optional<real> t_p;
    int M_initial = 1;
    int M_final = 1;
};

struct NuTrace {
    std::vector<real> times;
    std::vector<real> pf0;
    std::vector<real> pfpi;
    std::vector<int> nu;  // 0 marks a sample within 1e-12 of a zero crossing
};

struct TransitionReport {
    std::array<KsTransition, 2> points;  // k = 0, k = pi
    int count = 0;
    NuTrace nu_trace;
};

namespace detail {

inline int sign_at(const DissipatorPoint& p, real ks, const DissipatorSpec& d, const char* which) {
    if (std::abs(p.y) <= 1e-12 * amplitude_scale(d))
        throw_physics(std::string("sign-boundary ") + which + " dissipator: y vanishes at k = " +
                      (ks == 0.0 ? "0" : "pi"));
    // M = sgn(-i Pf Delta) = -sgn(2y/h0) = sgn(y) for h0 < 0.
    return p.y > 0.0 ? 1 : -1;
}

inline int nu_sample(real pf0, real pfpi) {
    if (std::abs(pf0) < 1e-12 || std::abs(pfpi) < 1e-12) return 0;
    return (pf0 > 0.0) == (pfpi > 0.0) ? 1 : -1;
}

}  // namespace detail

/// Samples Pf(0, t), Pf(pi, t) and nu(t) on t = 0, dt, ..., t_max.
inline NuTrace nu_trajectory(const QuenchPlan& plan) {
    plan.validate();
    const std::array<real, 2> ks{0.0, pi};
    std::array<DissipatorPoint, 2> pi_{}, pf_{};
    for (int s = 0; s < 2; ++s) {
        pi_[s] = dissipator_point(plan.initial, ks[s]);
        pf_[s] = dissipator_point(plan.final, ks[s]);
    }
    NuTrace out;
    const auto steps = static_cast<long>(std::floor(plan.t_max / plan.dt + 1e-9));
    for (long n = 0; n <= steps; ++n) {
        const real t = n * plan.dt;
        std::array<real, 2> v{};
        for (int s = 0; s < 2; ++s) {
            const real a = pi_[s].pf();
            const real b = pf_[s].pf();
            v[s] = std::exp(2.0 * pf_[s].h0 * t) * (a - b) + b;
        }
        out.times.push_back(t);
        out.pf0.push_back(v[0]);
        out.pfpi.push_back(v[1]);
        out.nu.push_back(detail::nu_sample(v[0], v[1]));
    }
    return out;
}

/// Number of sign changes of nu between nonzero samples.
inline int count_flips(const std::vector<int>& nu) {
    int flips = 0;
    int last = 0;
    for (int v : nu) {
        if (v == 0) continue;
        if (last != 0 && v != last) ++flips;
        last = v;
    }
    return flips;
}

/// Zero crossing of Pf(k_s, t):
///   t_p = log[(y_f/h_f) / ((y_f/h_f) - (y_i/h_i))] / (2 h_f),
/// a positive root existing exactly when the log argument lies in (0, 1),
/// i.e. when y_i and y_f have opposite signs.
inline TransitionReport critical_times(const QuenchPlan& plan) {
    plan.validate();
    TransitionReport report;
    const std::array<real, 2> ks{0.0, pi};
    for (int s = 0; s < 2; ++s) {
        const DissipatorPoint i = dissipator_point(plan.initial, ks[s]);
        const DissipatorPoint f = dissipator_point(plan.final, ks[s]);
        KsTransition& tr = report.points[s];
        tr.ks = ks[s];
        tr.M_initial = detail::sign_at(i, ks[s], plan.initial, "initial");
        tr.M_final = detail::sign_at(f, ks[s], plan.final, "final");
        const real ratio_f = f.y / f.h0;
        const real ratio_i = i.y / i.h0;
        const real arg = ratio_f / (ratio_f - ratio_i);
        if (tr.M_initial != tr.M_final && arg > 0.0 && arg < 1.0) {
            tr.exists = true;
            tr.t_p = std::log(arg) / (2.0 * f.h0);
            ++report.count;
        }
    }
    report.nu_trace = nu_trajectory(plan);
    return report;
}

struct BlochTrajectory {
    std::vector<real> times;
    std::vector<BlochBlock> deltas;
};

namespace detail {

inline Matrix2c bloch_rhs(const Matrix2c& H, const Matrix2c& Y, const Matrix2c& D) {
    return complex(0.0, -1.0) * (H * D - D * H.adjoint()) - 4.0 * Y;
}

inline Matrix2c rk4_step(const Matrix2c& H, const Matrix2c& Y, const Matrix2c& D, real h) {
    const Matrix2c k1 = bloch_rhs(H, Y, D);
    const Matrix2c k2 = bloch_rhs(H, Y, D + 0.5 * h * k1);
    const Matrix2c k3 = bloch_rhs(H, Y, D + 0.5 * h * k2);
    const Matrix2c k4 = bloch_rhs(H, Y, D + h * k3);
    return D + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

inline Matrix2c reproject(const Matrix2c& D, bool high_symmetry) {
    Matrix2c out = 0.5 * (D + D.adjoint());
    if (high_symmetry) out = 0.5 * (out - out.transpose()).eval();
    return out;
}

// Largest |lambda_m - conj(lambda_n)| over the eigenvalues of H: the fastest
// rate of the linear map D -> -i(H D - D H^dagger).
inline real bloch_rate(const Matrix2c& H) {
    const auto l = Eigen::ComplexEigenSolver<Matrix2c>(H, false).eigenvalues();
    real r = 0.0;
    for (int m = 0; m < 2; ++m)
        for (int n = 0; n < 2; ++n) r = std::max(r, std::abs(l(m) - std::conj(l(n))));
    return r;
}

inline void check_rk4_step(real rate, real dt) {
    // RK4 is stable for |h lambda| up to about 2.78 on the negative real axis.
    if (rate * dt > 2.5)
        throw_invalid("step-size instability: dt = " + std::to_string(dt) + " too large for rate " +
                      std::to_string(rate) + "; use a smaller dt");
}

}  // namespace detail

/// Integrates dD/dt = -i(H_eff D - D H_eff^dagger) - 4Y with classical fixed-step
/// RK4. After each step D is made Hermitian again, and antisymmetric at k = 0, pi.
inline BlochTrajectory evolve_bloch_ode(const BlochBlock& Heff, const BlochBlock& Y, const BlochBlock& delta0,
                                        real t_max, real dt) {
    detail::require(t_max >= 0.0 && dt > 0.0, "evolve_bloch_ode: need t_max >= 0 and dt > 0");
    detail::check_rk4_step(detail::bloch_rate(Heff.data), dt);
    const bool hs = delta0.high_symmetry();
    BlochTrajectory out;
    Matrix2c D = delta0.data;
    real t = 0.0;
    out.times.push_back(t);
    out.deltas.push_back({delta0.k, D});
    const real bound = 10.0 * std::max<real>(1.0, D.norm()) + 1e3;
    const auto steps = static_cast<long>(std::ceil(t_max / dt - 1e-9));
    for (long n = 0; n < steps; ++n) {
        const real h = std::min(dt, t_max - t);
        D = detail::reproject(detail::rk4_step(Heff.data, Y.data, D, h), hs);
        t = (n + 1 == steps) ? t_max : t + h;
        if (!D.allFinite() || D.norm() > bound)
            detail::throw_invalid("step-size instability detected (norm growth); use a smaller dt");
        out.times.push_back(t);
        out.deltas.push_back({delta0.k, D});
    }
    return out;
}

/// Bloch-block inputs of a quench at k_s: the post-quench H_eff and Y and the
/// pre-quench steady state.
struct QuenchBlocks {
    BlochBlock heff_final;
    BlochBlock y_final;
    BlochBlock delta_initial;
};

inline QuenchBlocks quench_blocks(const QuenchPlan& plan, real k) {
    const DissipatorBloch di = dissipator_bloch(plan.initial, k);
    const DissipatorBloch df = dissipator_bloch(plan.final, k);
    const Matrix2c Hi = effective_hamiltonian(kitaev_bloch(plan.hamiltonian_initial, k), di.X);
    const Matrix2c Hf = effective_hamiltonian(kitaev_bloch(plan.hamiltonian_final, k), df.X);
    return {{k, Hf}, df.Y, steady_bloch_direct(Hi, di.Y)};
}

/// First zero crossing of Pf[i D(t)] along the RK4 trajectory at k = 0 or pi,
/// refined by bisection over single RK4 steps from the bracketing sample.
/// Used to cross-check the closed-form critical time.
inline std::optional<real> ode_pf_crossing(const BlochBlock& Heff, const BlochBlock& Y, const BlochBlock& delta0,
                                           real t_max, real dt) {
    detail::require(delta0.high_symmetry(), "ode_pf_crossing: needs k = 0 or pi");
    const BlochTrajectory tr = evolve_bloch_ode(Heff, Y, delta0, t_max, dt);
    for (std::size_t n = 1; n < tr.times.size(); ++n) {
        const real a = pf_of_block(tr.deltas[n - 1]);
        const real b = pf_of_block(tr.deltas[n]);
        if (a == 0.0) return tr.times[n - 1];
        if ((a > 0.0) == (b > 0.0)) continue;
        const Matrix2c& left = tr.deltas[n - 1].data;
        real lo = 0.0;
        real hi = tr.times[n] - tr.times[n - 1];
        for (int it = 0; it < 200 && hi - lo > 1e-15 * std::max<real>(1.0, tr.times[n]); ++it) {
            const real mid = 0.5 * (lo + hi);
            const real v = pf_of_block({delta0.k, detail::rk4_step(Heff.data, Y.data, left, mid)});
            if ((v > 0.0) == (a > 0.0)) lo = mid;
            else hi = mid;
        }
        return tr.times[n - 1] + 0.5 * (lo + hi);
    }
    return std::nullopt;
}

}  // namespace lindtopo
