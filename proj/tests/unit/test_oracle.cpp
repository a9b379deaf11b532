// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include <gtest/gtest.h>

#include <cmath>
#include <set>
#include <sstream>

#include "errors.hpp"
#include "generators.hpp"
#include "oracle.hpp"
#include "perf.hpp"

using namespace mmbeam;

namespace {

SweepSchedule schedule_for(const SystemParams& p, int eta, double stretch)
{
    return build_schedule(p, stretch * min_uth(p, eta), eta);
}

}  // namespace

TEST(DeriveSeed, DistinctAndStable)
{
    std::set<std::uint64_t> seen;
    for (std::uint64_t i = 0; i < 1000; ++i)
    {
        seen.insert(derive_seed(7, i));
    }
    EXPECT_EQ(seen.size(), 1000u);
    EXPECT_EQ(derive_seed(7, 3), derive_seed(7, 3));
    EXPECT_NE(derive_seed(7, 3), derive_seed(8, 3));
}

TEST(SimulateCycle, FirstBeamSeesUserAtItsCentre)
{
    SystemParams p;
    auto s = schedule_for(p, 3, 5.0);
    SpeedProcess proc;
    proc.kind = SpeedKind::constant_extreme;
    auto r = simulate_cycle(p, s, proc, s.intervals[0].center());
    EXPECT_EQ(r.detected_beam, 1);
    EXPECT_TRUE(r.covered);
    EXPECT_TRUE(r.final_width_ok);
    EXPECT_EQ(r.true_positions.size(), static_cast<std::size_t>(3 * steps_per_slot + 1));
}

TEST(SimulateCycle, RejectsStartOutsideInterval)
{
    SystemParams p;
    auto s = schedule_for(p, 2, 2.0);
    SpeedProcess proc;
    EXPECT_THROW(simulate_cycle(p, s, proc, -1e-9), DomainError);
    EXPECT_THROW(simulate_cycle(p, s, proc, s.u_th * 1.01), DomainError);
}

TEST(SimulateCycle, SpeedsStayInsideBounds)
{
    SystemParams p;
    auto s = schedule_for(p, 4, 3.0);
    double const step = p.delta_s / steps_per_slot;
    for (auto kind : {SpeedKind::constant_extreme, SpeedKind::piecewise_uniform, SpeedKind::bang_bang})
    {
        for (std::uint64_t seed = 0; seed < 50; ++seed)
        {
            SpeedProcess proc{kind, seed, 0.3 * p.delta_s};
            auto r = simulate_cycle(p, s, proc, 0.5 * s.u_th);
            for (std::size_t k = 1; k < r.true_positions.size(); ++k)
            {
                double const v = (r.true_positions[k] - r.true_positions[k - 1]) / step;
                EXPECT_LE(std::abs(v), 0.5 * p.phi * (1.0 + 1e-9));
            }
        }
    }
}

TEST(SimulateCycle, BitIdenticalForSameSeed)
{
    SystemParams p;
    auto s = schedule_for(p, 3, 2.0);
    SpeedProcess proc{SpeedKind::bang_bang, 99, 0.7 * p.delta_s};
    auto a = simulate_cycle(p, s, proc, 0.3 * s.u_th);
    auto b = simulate_cycle(p, s, proc, 0.3 * s.u_th);
    EXPECT_EQ(a.true_positions, b.true_positions);
    EXPECT_EQ(a.detected_beam, b.detected_beam);
}

TEST(MonteCarlo, FullCoverageAndWindow)
{
    SystemParams p;
    for (int eta : {2, 3, 4, 6})
    {
        for (double stretch : {1.0, 1.7, 10.0})
        {
            auto s = schedule_for(p, eta, stretch);
            auto r = monte_carlo_cycles(p, s, 20000, 5, 2);
            EXPECT_EQ(r.trajectories, 20000u);
            EXPECT_EQ(r.uncovered, 0u) << eta << " " << stretch;
            EXPECT_EQ(r.window_violations, 0u) << eta << " " << stretch;
            EXPECT_LE(r.worst_span_excess(), 1e-9);
        }
    }
}

// Bang-bang walkers pinned at the interval edges realize the extreme final
// positions, so the observed spread of beams that saw many walkers approaches
// u_comm.
TEST(MonteCarlo, SpreadApproachesUComm)
{
    SystemParams p;
    auto s = schedule_for(p, 3, 20.0);
    auto r = monte_carlo_cycles(p, s, 100000, 9, 2);
    for (int i = 0; i < 3; ++i)
    {
        ASSERT_GT(r.beam_hits[i], 1000u);
        double const spread = r.beam_max[i] - r.beam_min[i];
        EXPECT_GT(spread, 0.9 * s.u_comm) << i;
        EXPECT_LE(spread, s.u_comm * (1.0 + 1e-9)) << i;
    }
}

TEST(MonteCarlo, IndependentOfThreadCount)
{
    SystemParams p;
    auto s = schedule_for(p, 3, 2.0);
    auto a = monte_carlo_cycles(p, s, 3001, 17, 1);
    auto b = monte_carlo_cycles(p, s, 3001, 17, 4);
    EXPECT_EQ(a.beam_hits, b.beam_hits);
    EXPECT_EQ(a.beam_min, b.beam_min);
    EXPECT_EQ(a.beam_max, b.beam_max);
    EXPECT_EQ(a.uncovered, b.uncovered);
}

TEST(Quadrature, MatchesClosedFormOnExample)
{
    SystemParams p;
    p.phi = 10.0;
    double const rho = 1.25 / (p.d * snr_gamma(p));
    EXPECT_LE(gen::rel(integrate_rate_numeric(p, 2, 1.0, rho), avg_rate_closed(p, 2, 1.0, rho)), 1e-8);
    EXPECT_LE(gen::rel(integrate_power_numeric(p, 2, 1.0, rho), avg_power_closed(p, 2, 1.0, rho)), 1e-8);
}

TEST(Quadrature, ZeroAtFloor)
{
    SystemParams p;
    double const u_th = 1e3 * p.slot_growth();
    double const floor = rho_floor(p, 3, u_th);
    EXPECT_NEAR(integrate_rate_numeric(p, 3, u_th, floor), 0.0, 1e-6);
    EXPECT_NEAR(integrate_power_numeric(p, 3, u_th, floor), 0.0, 1e-18);
}

TEST(Quadrature, SelfConverged)
{
    SystemParams p;
    double const u_th = 50.0 * p.slot_growth();
    double const rho = 3.0 * rho_floor(p, 4, u_th);
    double const a = integrate_rate_numeric(p, 4, u_th, rho, 1e-9);
    double const b = integrate_rate_numeric(p, 4, u_th, rho, 1e-12);
    EXPECT_LE(gen::rel(a, b), 1e-9);
}

TEST(QuadratureProperty, MatchesClosedFormBothBranches)
{
    gen::for_all(100, 51, [](gen::Gen& g, int i) {
        auto p = g.params();
        int const eta = g.integer(2, 8);
        double const u_th = min_uth(p, eta) * g.log_uniform(1.0, 1e3);
        double const floor = rho_floor(p, eta, u_th);
        double const top = u_th / (p.d * snr_gamma(p));
        double const rho = i % 2 == 0 ? g.uniform(floor, top) : top * g.log_uniform(1.0, 50.0);
        double const rc = avg_rate_closed(p, eta, u_th, rho);
        double const pc = avg_power_closed(p, eta, u_th, rho);
        EXPECT_LE(gen::rel(integrate_rate_numeric(p, eta, u_th, rho), rc), 1e-7);
        EXPECT_LE(gen::rel(integrate_power_numeric(p, eta, u_th, rho), pc), 1e-7);
    });
}

TEST(Jensen, WaterfillingNeverBeaten)
{
    SystemParams p;
    double const u_th = 30.0 * p.slot_growth();
    double const rho = 2.0 * rho_floor(p, 3, u_th);
    auto r = jensen_check(p, 3, u_th, rho, 1000, 3);
    EXPECT_EQ(r.n_profiles, 1000u);
    EXPECT_EQ(r.n_violations, 0u);
    EXPECT_LE(r.worst_excess, jensen_tolerance);
    EXPECT_LE(r.best_rate, r.waterfilling_rate + jensen_tolerance);
    EXPECT_LE(r.self_residual, 1e-6);  // midpoint grid, one kink
    EXPECT_GT(r.budget, 0.0);
}

TEST(Jensen, ConstantProfileBelowWaterfilling)
{
    // Independent check on a grid of widths: a flat allocation of the same
    // mean power against water-filling.
    int const n = jensen_grid_points;
    double const u0 = 1.0, u1 = 3.0, level = 2.5;
    double wf_rate = 0.0, wf_power = 0.0;
    for (int k = 0; k < n; ++k)
    {
        double const u = u0 + (u1 - u0) * (k + 0.5) / n;
        double const x = std::max(0.0, level - u);
        wf_power += x / n;
        wf_rate += std::log1p(x / u) / n;
    }
    double flat = 0.0;
    for (int k = 0; k < n; ++k)
    {
        double const u = u0 + (u1 - u0) * (k + 0.5) / n;
        flat += std::log1p(wf_power / u) / n;
    }
    EXPECT_LT(flat, wf_rate);
}

TEST(JensenProperty, AnySeed)
{
    gen::for_all(20, 52, [](gen::Gen& g, int) {
        auto p = g.params();
        int const eta = g.integer(2, 6);
        double const u_th = min_uth(p, eta) * g.log_uniform(1.1, 100.0);
        double const rho = rho_floor(p, eta, u_th) * g.log_uniform(1.01, 50.0);
        auto r = jensen_check(p, eta, u_th, rho, 200, g.integer(0, 1 << 30));
        EXPECT_EQ(r.n_violations, 0u);
    });
}

TEST(Verification, DefaultRunPasses)
{
    SystemParams p;
    VerifyOptions o;
    o.trajectories = 2000;
    o.jensen_profiles = 200;
    auto rows = run_verification(p, o);
    ASSERT_FALSE(rows.empty());
    for (auto const& r : rows)
    {
        EXPECT_GT(r.n_cases, 0u) << r.check_name;
        EXPECT_EQ(r.n_failures, 0u) << r.check_name << " worst " << r.worst_residual;
    }
}

TEST(Verification, FaultInjectionFails)
{
    SystemParams p;
    VerifyOptions o;
    o.trajectories = 500;
    o.jensen_profiles = 50;
    o.perturb_closed_form = 1e-3;
    auto rows = run_verification(p, o);
    std::size_t failures = 0;
    for (auto const& r : rows)
    {
        failures += r.n_failures;
    }
    EXPECT_GT(failures, 0u);
}

TEST(Verification, CsvSchema)
{
    std::vector<CheckResult> rows{{"a", 3, 1, 0.5}, {"b", 10, 0, 1.0 / 3.0}};
    std::ostringstream os;
    write_report_csv(os, rows);
    EXPECT_EQ(os.str(), "check_name,n_cases,n_failures,worst_residual\n"
                        "a,3,1,0.5\n"
                        "b,10,0,0.333333333333\n");
}
