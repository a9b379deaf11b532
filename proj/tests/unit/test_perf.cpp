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
#include <numbers>

#include "errors.hpp"
#include "generators.hpp"
#include "perf.hpp"

using namespace mmbeam;

namespace {

// Reference averages from the antiderivative in the width variable. With
// c = d gamma rho the rate integrand is W log2(max(1, c/u)) and the power
// integrand (rho - u/(d gamma))^+, for u running from u_comm to u_th at
// speed phi; the sweep contributes nothing.
struct Reference
{
    double rate;
    double power;
};

Reference by_antiderivative(const SystemParams& p, int eta, double u_th, double rho)
{
    double const g = p.lambda * p.lambda * p.xi / (8.0 * std::numbers::pi * p.d * p.d * p.n0 * p.w_tot);
    double const c = p.d * g * rho;
    double const growth = p.delta_s * p.phi;
    double const e = eta;
    double const uc = u_th / e + e * growth - growth * (e - 1.0) * (e - 2.0) / (2.0 * e);
    double const t = e * p.delta_s + (u_th - uc) / p.phi;
    double const a = uc;
    double const b = std::min(c, u_th);
    if (b <= a)
    {
        return {0.0, 0.0};
    }
    auto prim = [c](double u) { return u * (std::log(c) - std::log(u) + 1.0); };
    double const rate = p.w_tot / std::numbers::ln2 * (prim(b) - prim(a)) / (p.phi * t);
    double const power = (rho * (b - a) - (b * b - a * a) / (2.0 * p.d * g)) / (p.phi * t);
    return {rate, power};
}

SystemParams slow_scenario()
{
    SystemParams p;
    p.phi = 10.0;
    return p;
}

}  // namespace

TEST(SnrGamma, TableOneValue)
{
    // Each factor from the carrier frequency, dBm noise figure and geometry.
    double const lambda = 3e8 / 60e9;
    double const n0 = 1e-3 * std::pow(10.0, -17.4);
    double const g = lambda * lambda / (8.0 * std::numbers::pi * 100.0 * n0 * 1.76e9);
    SystemParams p;
    double const ours = snr_gamma(p);
    EXPECT_LE(gen::rel(ours, g), 1e-12);
    EXPECT_NEAR(ours, 1419.67, 0.01);
}

TEST(SnrGamma, Scaling)
{
    SystemParams p;
    double const g = snr_gamma(p);
    SystemParams q = p;
    q.d *= 2.0;
    EXPECT_NEAR(snr_gamma(q), g / 4.0, 1e-12 * g);
    q = p;
    q.xi = 0.5;
    EXPECT_NEAR(snr_gamma(q), g / 2.0, 1e-12 * g);
}

TEST(InstantaneousRate, Examples)
{
    SystemParams p;
    double const g = snr_gamma(p);
    EXPECT_DOUBLE_EQ(instantaneous_rate(p, 0.0, 0.1), 0.0);
    EXPECT_NEAR(instantaneous_rate(p, 0.1 / g, 0.1), p.w_tot, 1e-6);
    EXPECT_NEAR(instantaneous_rate(p, 0.3 / g, 0.1), 2.0 * p.w_tot, 1e-6);
    EXPECT_THROW(instantaneous_rate(p, 1.0, 0.0), DomainError);
    EXPECT_THROW(instantaneous_rate(p, 1.0, -0.1), DomainError);
}

TEST(Waterfilling, Examples)
{
    double const d = 10.0, g = 1000.0, u = 0.5;
    EXPECT_DOUBLE_EQ(waterfilling_power(u / (d * g), u, d, g), 0.0);
    EXPECT_DOUBLE_EQ(waterfilling_power(0.0, u, d, g), 0.0);
    EXPECT_NEAR(waterfilling_power(2.0 * u / (d * g), u, d, g), u / (d * g), 1e-20);
}

TEST(PowerProfile, NonincreasingAndZeroAtFloor)
{
    SystemParams p;
    double const u_th = 1e3 * p.slot_growth();
    auto prof = power_profile(p, 3, u_th, 2.0 * rho_floor(p, 3, u_th));
    double prev = prof.power_at(prof.t_start);
    for (int k = 1; k <= 100; ++k)
    {
        double const t = prof.t_start + (prof.t_end - prof.t_start) * k / 100.0;
        double const now = prof.power_at(t);
        EXPECT_LE(now, prev);
        prev = now;
    }
    auto flat = power_profile(p, 3, u_th, rho_floor(p, 3, u_th));
    EXPECT_NEAR(flat.power_at(flat.t_start), 0.0, 1e-18);
}

TEST(AvgClosed, SlowScenarioExample)
{
    auto p = slow_scenario();
    double const g = snr_gamma(p);
    double const rho = 1.25 / (p.d * g);
    auto ref = by_antiderivative(p, 2, 1.0, rho);
    EXPECT_LE(gen::rel(avg_rate_closed(p, 2, 1.0, rho), ref.rate), 1e-8);
    EXPECT_LE(gen::rel(avg_power_closed(p, 2, 1.0, rho), ref.power), 1e-8);
}

TEST(AvgClosed, ZeroAtFloor)
{
    auto p = slow_scenario();
    double const floor = rho_floor(p, 2, 1.0);
    EXPECT_NEAR(avg_rate_closed(p, 2, 1.0, floor), 0.0, 1e-6 * p.w_tot * 1e-9);
    EXPECT_NEAR(avg_power_closed(p, 2, 1.0, floor), 0.0, 1e-20);
}

TEST(AvgClosed, RejectsInfeasibleInput)
{
    auto p = slow_scenario();
    EXPECT_THROW(avg_rate_closed(p, 2, 0.5 * min_uth(p, 2), 1.0), DomainError);
    EXPECT_THROW(avg_power_closed(p, 2, 1.0, 0.5 * rho_floor(p, 2, 1.0)), DomainError);
    EXPECT_THROW(avg_rate_closed(p, 1, 1.0, 1.0), DomainError);
}

TEST(AvgClosed, ContinuousAcrossIndicator)
{
    auto p = slow_scenario();
    double const g = snr_gamma(p);
    double const u_th = 1.0;
    double const at = u_th / (p.d * g);
    double const below = std::nextafter(at, 0.0);
    EXPECT_LE(gen::rel(avg_rate_closed(p, 3, u_th, at), avg_rate_closed(p, 3, u_th, below)), 1e-12);
    EXPECT_LE(gen::rel(avg_power_closed(p, 3, u_th, at), avg_power_closed(p, 3, u_th, below)), 1e-12);
}

TEST(AvgClosedProperty, MatchesAntiderivative)
{
    gen::for_all(400, 21, [](gen::Gen& g, int i) {
        auto p = g.params();
        int const eta = g.integer(2, 8);
        double const u_th = min_uth(p, eta) * g.log_uniform(1.0, 1e3);
        double const floor = rho_floor(p, eta, u_th);
        double const top = u_th / (p.d * snr_gamma(p));
        // alternate between the two indicator branches
        double const rho = i % 2 == 0 ? g.uniform(floor, std::max(floor, top))
                                      : top * g.log_uniform(1.0, 100.0);
        auto ref = by_antiderivative(p, eta, u_th, rho);
        double const r = avg_rate_closed(p, eta, u_th, rho);
        double const pw = avg_power_closed(p, eta, u_th, rho);
        EXPECT_LE(std::abs(r - ref.rate), 1e-9 * std::max(ref.rate, 1e-6 * p.w_tot));
        EXPECT_LE(std::abs(pw - ref.power), 1e-9 * std::max(ref.power, p.p_max * 1e-6));
        EXPECT_GE(r, 0.0);
        EXPECT_GE(pw, 0.0);
    });
}

TEST(Normalized, UCommHat)
{
    EXPECT_DOUBLE_EQ(u_comm_hat(4.0, 2), 4.0);
    EXPECT_DOUBLE_EQ(u_comm_hat(8.0, 2), 6.0);
    EXPECT_NEAR(u_comm_hat(1e12, 5) / 1e12, 0.2, 1e-10);
    EXPECT_THROW(u_comm_hat(8.0, 1), DomainError);
}

TEST(Normalized, UpsilonMin)
{
    EXPECT_DOUBLE_EQ(upsilon_min(2), 4.0);
    EXPECT_DOUBLE_EQ(upsilon_min(3), 4.0);
    EXPECT_DOUBLE_EQ(upsilon_min(5), 6.0);
}

TEST(Normalized, RateExample)
{
    double const want = 0.25 * (2.0 * (1.0 + std::log(1.25)) - 6.0 * std::log(4.0 / 3.0));
    EXPECT_NEAR(r_hat(2, 8.0, 0.25), want, 1e-14);
    EXPECT_NEAR(r_hat(2, 8.0, 0.25), 0.18005, 1e-5);
}

TEST(Normalized, PowerExamples)
{
    EXPECT_NEAR(p_hat(2, 8.0, 0.25), 1.5, 1e-14);
    EXPECT_NEAR(p_hat(2, 8.0, 0.0), 0.5, 1e-14);
}

TEST(Normalized, ZeroAtPowerEdge)
{
    for (int eta : {2, 3, 6})
    {
        double const ups = 3.0 * upsilon_min(eta);
        double const z = zeta_floor(ups, eta);
        EXPECT_NEAR(r_hat(eta, ups, z), 0.0, 1e-13);
        EXPECT_NEAR(p_hat(eta, ups, z), 0.0, 1e-13);
    }
}

TEST(Normalized, RejectsOutsideFeasibleSet)
{
    EXPECT_THROW(r_hat(2, 3.0, 1.0), DomainError);
    EXPECT_THROW(p_hat(2, 8.0, -0.5), DomainError);  // floor is -0.25
    EXPECT_THROW(r_hat(1, 8.0, 0.0), DomainError);
}

TEST(Normalized, ContinuousAtZetaZero)
{
    for (int eta = 2; eta <= 8; ++eta)
    {
        double const ups = 2.0 * upsilon_min(eta) + 1.0;
        double const tiny = -1e-300;
        EXPECT_LE(gen::rel(r_hat(eta, ups, 0.0), r_hat(eta, ups, tiny)), 1e-12);
        EXPECT_LE(gen::rel(p_hat(eta, ups, 0.0), p_hat(eta, ups, tiny)), 1e-12);
    }
}

TEST(NormalizedProperty, IncreasingInZeta)
{
    gen::for_all(300, 22, [](gen::Gen& g, int) {
        int const eta = g.integer(2, 12);
        double const ups = upsilon_min(eta) * g.log_uniform(1.0 + 1e-6, 1e4);
        double const z1 = g.log_uniform(1e-6, 1e3);
        double const z2 = z1 * g.log_uniform(1.0 + 1e-6, 10.0);
        EXPECT_LT(r_hat(eta, ups, z1), r_hat(eta, ups, z2));
        EXPECT_LT(p_hat(eta, ups, z1), p_hat(eta, ups, z2));
        EXPECT_LT(r_hat(eta, ups, 0.0), r_hat(eta, ups, z1));
    });
}

// The normalized metrics equal the physical ones rescaled, for any scenario.
TEST(NormalizedProperty, MatchesPhysicalOnBothBranches)
{
    gen::for_all(400, 23, [](gen::Gen& g, int) {
        auto p = g.params();
        int const eta = g.integer(2, 10);
        double const ups = upsilon_min(eta) * g.log_uniform(1.0, 1e3);
        double const z = g.uniform(zeta_floor(ups, eta), 2.0);
        NormalizedDesign nd{eta, ups, z, true};
        auto phys = denormalize(p, nd);
        auto ref = by_antiderivative(p, eta, phys.u_th, phys.rho);
        double const scale_r = std::numbers::ln2 / p.w_tot;
        double const scale_p = p.d * snr_gamma(p) / (p.delta_s * p.phi);
        double const rh = r_hat(eta, ups, z);
        double const ph = p_hat(eta, ups, z);
        EXPECT_LE(std::abs(rh - scale_r * ref.rate), 1e-9 * std::max(rh, 1e-6));
        EXPECT_LE(std::abs(ph - scale_p * ref.power), 1e-9 * std::max(ph, 1e-6));

        auto c = evaluate_cycle(p, eta, phys.u_th, phys.rho);
        EXPECT_LE(std::abs(c.r_hat - rh), 1e-9 * std::max(rh, 1e-6));
        EXPECT_LE(std::abs(c.p_hat - ph), 1e-9 * std::max(ph, 1e-6));
    });
}

TEST(Normalize, Examples)
{
    SystemParams p;
    p.delta_s = 1e-5;
    p.phi = 10.0;
    auto n = normalize(p, 1.0, 0.0, 2);
    EXPECT_NEAR(n.upsilon, 1e4, 1e-8);
    double const rho = p.slot_growth() * 5.0 / (p.d * snr_gamma(p));
    EXPECT_NEAR(normalize(p, p.slot_growth() * 5.0, rho, 2).zeta, 0.0, 1e-14);
    EXPECT_THROW(normalize(p, 1.0, 1.0, 1), DomainError);
}

TEST(NormalizeProperty, RoundTrip)
{
    gen::for_all(1000, 24, [](gen::Gen& g, int) {
        auto p = g.params();
        int const eta = g.integer(2, 20);
        double const u_th = p.slot_growth() * g.log_uniform(1.0, 1e6);
        // rho tied to u_th keeps 1 + zeta well away from rounding to 1
        double const rho = u_th * g.log_uniform(0.1, 100.0) / (p.d * snr_gamma(p));
        auto n = normalize(p, u_th, rho, eta);
        auto back = denormalize(p, n);
        EXPECT_LE(gen::rel(back.u_th, u_th), 1e-12);
        EXPECT_LE(gen::rel(back.rho, rho), 1e-12);
    });
}

TEST(PHatMax, MatchesDefinition)
{
    SystemParams p;
    EXPECT_LE(gen::rel(p_hat_max(p), p.d * snr_gamma(p) * p.p_max / p.slot_growth()), 1e-15);
}
