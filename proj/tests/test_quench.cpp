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


#include <gtest/gtest.h>

#include <Eigen/Eigenvalues>

#include "lindtopo/quench.hpp"
#include "oracles.hpp"

namespace {

using namespace lindtopo;

QuenchPlan plan_for(const DissipatorSpec& i, const DissipatorSpec& f, real t_max = 0.5, real dt = 1e-3) {
    QuenchPlan p;
    p.initial = i;
    p.final = f;
    p.t_max = t_max;
    p.dt = dt;
    return p;
}

const DissipatorSpec kFig2Initial = oracle::spec(3, 3, 1, -2);
const DissipatorSpec kFig3Initial = oracle::spec(1, -1, 1, -2);
const DissipatorSpec kFinal = oracle::spec(2.5, -1, 1, -2);

// Closed form evaluated by hand from (y, h0) of both dissipators.
real t_cross(real yi, real hi, real yf, real hf) {
    const real pfi = 2 * yi / hi, pff = 2 * yf / hf;
    return std::log(-pff / (pfi - pff)) / (2 * hf);
}

real ode_pf(const QuenchPlan& plan, real ks, real t, real dt) {
    const QuenchBlocks b = quench_blocks(plan, ks);
    const BlochTrajectory tr = evolve_bloch_ode(b.heff_final, b.y_final, b.delta_initial, t, dt);
    return pf_of_block(tr.deltas.back());
}

TEST(PfTrajectory, EndpointsAndConstantCase) {
    const QuenchPlan p = plan_for(kFig3Initial, kFinal);
    const DissipatorPoint i = dissipator_point(kFig3Initial, 0.0);
    const DissipatorPoint f = dissipator_point(kFinal, 0.0);
    EXPECT_NEAR(pf_trajectory(0.0, p, 0.0), 2 * i.y / i.h0, 1e-15);
    EXPECT_NEAR(pf_trajectory(0.0, p, 50.0), 2 * f.y / f.h0, 1e-12);
    const QuenchPlan same = plan_for(kFinal, kFinal);
    for (real t : {0.0, 0.1, 0.7}) EXPECT_NEAR(pf_trajectory(pi, same, t), pf_trajectory(pi, same, 0.0), 1e-15);
}

TEST(PfTrajectory, MatchesOdeFig3) {
    const QuenchPlan p = plan_for(kFig3Initial, kFinal);
    EXPECT_NEAR(pf_trajectory(0.0, p, 0.5), ode_pf(p, 0.0, 0.5, 1e-3), 1e-8);
    EXPECT_NEAR(pf_trajectory(pi, p, 0.5), ode_pf(p, pi, 0.5, 1e-3), 1e-8);
}

TEST(PfTrajectory, MatchesOdeOnRandomPlans) {
    oracle::Rng rng(51);
    int done = 0;
    while (done < 50) {
        QuenchPlan p = plan_for(rng.dissipator(), rng.dissipator());
        p.hamiltonian_initial = rng.hamiltonian();
        p.hamiltonian_final = rng.hamiltonian();
        const real ks = done % 2 ? pi : 0.0;
        const DissipatorPoint f = dissipator_point(p.final, ks);
        if (std::abs(f.h0) < 0.05) continue;  // keeps 5/|h0| within a short integration
        const QuenchBlocks b = quench_blocks(p, ks);
        const real dt = std::min(1e-3, 0.02 / detail::bloch_rate(b.heff_final.data));
        const real t_end = 5.0 / std::abs(f.h0);
        const BlochTrajectory tr = evolve_bloch_ode(b.heff_final, b.y_final, b.delta_initial, t_end, dt);
        const std::size_t stride = std::max<std::size_t>(1, tr.times.size() / 20);
        for (std::size_t n = 0; n < tr.times.size(); n += stride)
            ASSERT_NEAR(pf_of_block(tr.deltas[n]), pf_trajectory(ks, p, tr.times[n]), 1e-8) << "plan " << done;
        ++done;
    }
}

TEST(PfTrajectory, UndampedModeThrows) {
    // u1 = u2 and v1 = v2: every jump operator vanishes at k = pi.
    const QuenchPlan p = plan_for(kFig3Initial, oracle::spec(1, 1, 1, 1));
    EXPECT_THROW(pf_trajectory(pi, p, 0.1), PhysicsError);
    EXPECT_NO_THROW(pf_trajectory(0.0, p, 0.1));
}

TEST(CriticalTimes, Fig2SingleFlipAtPi) {
    const TransitionReport r = critical_times(plan_for(kFig2Initial, kFinal));
    EXPECT_EQ(r.count, 1);
    EXPECT_FALSE(r.points[0].exists);
    ASSERT_TRUE(r.points[1].exists);
    EXPECT_NEAR(*r.points[1].t_p, t_cross(-4.5, -9, 1.625, -21.25), 1e-14);
    EXPECT_NEAR(*r.points[1].t_p, 0.0475, 5e-5);
    EXPECT_EQ(r.points[1].M_initial, -1);
    EXPECT_EQ(r.points[1].M_final, 1);
}

TEST(CriticalTimes, Fig3TwoFlips) {
    const TransitionReport r = critical_times(plan_for(kFig3Initial, kFinal));
    EXPECT_EQ(r.count, 2);
    ASSERT_TRUE(r.points[0].t_p && r.points[1].t_p);
    EXPECT_NEAR(*r.points[1].t_p, 0.0296, 5e-5);
    EXPECT_NEAR(*r.points[0].t_p, 0.1971, 5e-5);
}

TEST(CriticalTimes, IdenticalDissipatorsNoTransition) {
    const TransitionReport r = critical_times(plan_for(kFinal, kFinal));
    EXPECT_EQ(r.count, 0);
    EXPECT_FALSE(r.points[0].t_p.has_value());
    EXPECT_FALSE(r.points[1].t_p.has_value());
}

TEST(CriticalTimes, OdeCrossingMatchesClosedForm) {
    for (const DissipatorSpec& init : {kFig2Initial, kFig3Initial}) {
        const QuenchPlan p = plan_for(init, kFinal);
        const TransitionReport r = critical_times(p);
        for (const KsTransition& tr : r.points) {
            const QuenchBlocks b = quench_blocks(p, tr.ks);
            const auto t = ode_pf_crossing(b.heff_final, b.y_final, b.delta_initial, 0.5, 1e-3);
            ASSERT_EQ(t.has_value(), tr.exists);
            if (t) {
                EXPECT_LT(std::abs(*t - *tr.t_p) / *tr.t_p, 1e-6);
            }
        }
    }
}

TEST(CriticalTimes, ExistenceSweep) {
    // Final dissipator fixed, initial (u1, u2) swept over a 41 x 41 grid.
    int positive = 0;
    for (int i = 0; i < 41; ++i)
        for (int j = 0; j < 41; ++j) {
            const DissipatorSpec init = oracle::spec(-5.05 + 0.25 * i, -5.1 + 0.25 * j, 1, -2);
            const TransitionReport r = critical_times(plan_for(init, kFinal));
            for (int s = 0; s < 2; ++s) {
                const real ks = s ? pi : 0.0;
                const real yi = y_scalar(dissipator_bloch(init, ks).Y);
                const real yf = y_scalar(dissipator_bloch(kFinal, ks).Y);
                const bool opposite = (yi > 0) != (yf > 0);
                ASSERT_EQ(r.points[s].exists, opposite) << i << "," << j << " ks=" << ks;
                if (opposite) {
                    ++positive;
                    EXPECT_GT(*r.points[s].t_p, 0.0);
                    QuenchPlan p = plan_for(init, kFinal);
                    EXPECT_NEAR(pf_trajectory(ks, p, *r.points[s].t_p), 0.0, 1e-12);
                }
            }
        }
    EXPECT_GT(positive, 100);
}

TEST(CriticalTimes, BoundaryDissipatorThrowsNamingMomentum) {
    try {
        critical_times(plan_for(oracle::spec(0.5, -1.5, 1, -2), kFinal));
        FAIL() << "expected PhysicsError";
    } catch (const PhysicsError& e) {
        EXPECT_NE(std::string(e.what()).find("k = 0"), std::string::npos) << e.what();
    }
}

TEST(CriticalTimes, InvalidPlanRejected) {
    EXPECT_THROW(critical_times(plan_for(kFinal, kFinal, -1.0)), InvalidArgument);
    EXPECT_THROW(critical_times(plan_for(kFinal, kFinal, 1.0, 0.0)), InvalidArgument);
    EXPECT_THROW(critical_times(plan_for(oracle::spec(0, 0, 0, 0), kFinal)), PhysicsError);
}

TEST(CriticalTimes, HamiltonianDoesNotMoveTransitions) {
    oracle::Rng rng(52);
    const QuenchPlan base = plan_for(kFig3Initial, kFinal);
    const TransitionReport r = critical_times(base);
    for (int trial = 0; trial < 10; ++trial) {
        QuenchPlan p = base;
        p.hamiltonian_initial = rng.hamiltonian();
        p.hamiltonian_final = rng.hamiltonian();
        for (const KsTransition& tr : r.points) {
            const QuenchBlocks b = quench_blocks(p, tr.ks);
            const auto t = ode_pf_crossing(b.heff_final, b.y_final, b.delta_initial, 0.5, 2e-4);
            ASSERT_TRUE(t.has_value());
            EXPECT_LT(std::abs(*t - *tr.t_p), 1e-8);
        }
    }
}

TEST(NuTrajectory, Fig2SingleFlip) {
    const NuTrace tr = nu_trajectory(plan_for(kFig2Initial, kFinal, 0.5, 1e-3));
    EXPECT_EQ(tr.nu.front(), -1);
    EXPECT_EQ(tr.nu.back(), 1);
    EXPECT_EQ(count_flips(tr.nu), 1);
}

TEST(NuTrajectory, Fig3DoubleFlipWithinOneStep) {
    const QuenchPlan p = plan_for(kFig3Initial, kFinal, 0.5, 1e-3);
    const NuTrace tr = nu_trajectory(p);
    const TransitionReport r = critical_times(p);
    EXPECT_EQ(tr.nu.front(), 1);
    EXPECT_EQ(tr.nu.back(), 1);
    EXPECT_EQ(count_flips(tr.nu), 2);
    std::vector<real> flips;
    for (std::size_t n = 1; n < tr.nu.size(); ++n)
        if (tr.nu[n] != tr.nu[n - 1] && tr.nu[n] != 0) flips.push_back(tr.times[n]);
    ASSERT_EQ(flips.size(), 2u);
    EXPECT_LE(std::abs(flips[0] - *r.points[1].t_p), p.dt);
    EXPECT_LE(std::abs(flips[1] - *r.points[0].t_p), p.dt);
    for (std::size_t n = 0; n < tr.times.size(); ++n)
        if (tr.times[n] > *r.points[1].t_p + p.dt && tr.times[n] < *r.points[0].t_p - p.dt) {
            ASSERT_EQ(tr.nu[n], -1);
        }
}

TEST(NuTrajectory, ConstantForIdenticalSpecs) {
    const NuTrace tr = nu_trajectory(plan_for(kFig2Initial, kFig2Initial, 0.2, 1e-2));
    for (int v : tr.nu) EXPECT_EQ(v, -1);
    EXPECT_EQ(tr.times.size(), 21u);
}

TEST(NuTrajectory, ZeroSamplesAreFlaggedNotCounted) {
    EXPECT_EQ(count_flips({1, 1, 0, -1, -1, 0, 1}), 2);
    EXPECT_EQ(count_flips({1, 0, 1}), 0);
    EXPECT_EQ(count_flips({}), 0);
}

TEST(BlochOde, SteadyInputIsFixedPoint) {
    const QuenchPlan p = plan_for(kFinal, kFinal);
    for (real k : {0.0, 1.3, pi}) {
        const QuenchBlocks b = quench_blocks(p, k);
        const BlochTrajectory tr = evolve_bloch_ode(b.heff_final, b.y_final, b.delta_initial, 1.0, 1e-3);
        EXPECT_LT((tr.deltas.back().data - b.delta_initial.data).cwiseAbs().maxCoeff(), 1e-9);
    }
}

TEST(BlochOde, UnitaryChannelIsIsospectral) {
    const BlochBlock H{0.4, Matrix2c(0.7 * pauli::x() + 0.2 * pauli::z() - 0.3 * pauli::y())};
    const BlochBlock Y{0.4, Matrix2c::Zero()};
    const BlochBlock D0{0.4, Matrix2c(0.5 * pauli::z() + 0.1 * pauli::y())};
    const BlochTrajectory tr = evolve_bloch_ode(H, Y, D0, 3.0, 1e-3);
    const auto ev0 = Eigen::SelfAdjointEigenSolver<Matrix2c>(D0.data).eigenvalues();
    const auto ev1 = Eigen::SelfAdjointEigenSolver<Matrix2c>(tr.deltas.back().data).eigenvalues();
    EXPECT_LT((ev0 - ev1).cwiseAbs().maxCoeff(), 1e-10);
}

TEST(BlochOde, InvariantsPreservedAndConvergesToSteady) {
    const QuenchPlan p = plan_for(kFig3Initial, kFinal);
    const QuenchBlocks b = quench_blocks(p, 0.0);
    const BlochTrajectory tr = evolve_bloch_ode(b.heff_final, b.y_final, b.delta_initial, 5.0, 1e-3);
    for (const BlochBlock& D : tr.deltas) {
        ASSERT_LT((D.data - D.data.adjoint()).cwiseAbs().maxCoeff(), 1e-12);
        ASSERT_LT((D.data + D.data.transpose()).cwiseAbs().maxCoeff(), 1e-12);
    }
    const BlochBlock target = steady_bloch_direct(b.heff_final, b.y_final);
    EXPECT_LT((tr.deltas.back().data - target.data).cwiseAbs().maxCoeff(), 1e-9);
}

TEST(BlochOde, TooLargeStepRejected) {
    const QuenchBlocks b = quench_blocks(plan_for(kFig3Initial, kFinal), pi);
    EXPECT_THROW(evolve_bloch_ode(b.heff_final, b.y_final, b.delta_initial, 1.0, 0.5), InvalidArgument);
}

}  // namespace
