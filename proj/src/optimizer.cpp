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

#include "optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace mmbeam {

namespace {

constexpr double slack = 1e-12;

void require_budget(double p_hat_max)
{
    if (!(p_hat_max > 0.0) || !std::isfinite(p_hat_max))
    {
        throw DomainError("normalized power budget must be finite and > 0");
    }
}

// Budget an eta >= 5 needs before upsilon_max reaches upsilon_min.
double eta_threshold(double eta)
{
    double const a = eta * eta - 5.0 * eta + 2.0;
    return 0.5 * a * a / (eta * eta - 4.0 * eta + 2.0);
}

}  // namespace

double upsilon_max(int eta, double p_hat_max)
{
    require_budget(p_hat_max);
    double const e = eta;
    // P (1 + sqrt(1 + 2 eta / P)) rewritten so tiny budgets do not overflow.
    double const extra = p_hat_max + std::sqrt(p_hat_max * p_hat_max + 2.0 * e * p_hat_max);
    return shrinkage_bound(eta) + e / (e - 1.0) * extra;
}

FeasibilityBounds feasibility(int eta, double p_hat_max)
{
    FeasibilityBounds b;
    b.eta = eta;
    b.upsilon_min = upsilon_min(eta);
    b.upsilon_max = upsilon_max(eta, p_hat_max);
    b.feasible = b.upsilon_min <= b.upsilon_max;
    return b;
}

int eta_max(double p_hat_max)
{
    require_budget(p_hat_max);
    int eta = 4;
    while (eta_threshold(eta + 1.0) <= p_hat_max)
    {
        ++eta;
        if (eta > eta_search_cap)
        {
            throw DomainError("eta_max exceeds the search cap; budget too large");
        }
    }
    return eta;
}

double zeta_of(double upsilon, int eta, double p_hat_max)
{
    require_budget(p_hat_max);
    double const uc = u_comm_hat(upsilon, eta);
    if (!(upsilon > uc))
    {
        throw SingularError("zeta_of: upsilon must exceed u_comm_hat(upsilon, eta)");
    }
    double const vmax = upsilon_max(eta, p_hat_max);
    if (upsilon > vmax * (1.0 + slack))
    {
        std::ostringstream msg;
        msg << "zeta_of: upsilon = " << upsilon << " exceeds upsilon_max = " << vmax
            << "; the budget cannot be met";
        throw InfeasibleError(msg.str());
    }
    double const e = eta;
    double const scale = (e - 1.0) * (upsilon + 0.5 * e - 1.0) / (e * upsilon * (upsilon - uc));
    double const zeta = scale * (p_hat_max - detail::p_hat_unchecked(eta, upsilon, 0.0));
    return std::max(0.0, zeta);
}

double f_eta(double upsilon, int eta, double p_hat_max)
{
    double const lo = shrinkage_bound(eta);
    double const hi = upsilon_max(eta, p_hat_max);
    if (!(upsilon > lo) || upsilon > hi * (1.0 + slack))
    {
        std::ostringstream msg;
        msg << "f_eta: upsilon = " << upsilon << " outside (" << lo << ", " << hi << "]";
        throw DomainError(msg.str());
    }
    double const e = eta;
    double const z = zeta_of(upsilon, eta, p_hat_max);
    double const uc = u_comm_hat(upsilon, eta);
    double const b = (e - 1.0) * (upsilon + 0.5 * e - 1.0);

    return -(upsilon - uc) / (upsilon * (1.0 + z)) * (b + 2.0 * e) / (2.0 * e)
           - b / (e * (1.0 + z)) * z
           + e * std::log1p(z)
           + (0.5 * e + 1.0) * std::log(upsilon / uc);
}

UpsilonSolution solve_upsilon(int eta, double p_hat_max, const BisectionOptions& opts)
{
    if (eta < 2)
    {
        throw DomainError("eta must be >= 2");
    }
    if (!(opts.tol > 0.0))
    {
        throw DomainError("bisection tolerance must be > 0");
    }
    if (eta > eta_max(p_hat_max))
    {
        std::ostringstream msg;
        msg << "eta = " << eta << " is infeasible for normalized budget " << p_hat_max;
        throw InfeasibleError(msg.str());
    }

    UpsilonSolution s;
    s.eta = eta;
    double lo = shrinkage_bound(eta) * (1.0 + opts.nudge);
    double hi = upsilon_max(eta, p_hat_max);

    if (!(hi > lo))
    {
        s.root = hi;
        s.degenerate = true;
    }
    else
    {
        // zeta only blows up within about p_hat_max of the pole, so small
        // budgets need the lower edge pulled in further.
        double nudge = opts.nudge;
        double f_lo = f_eta(lo, eta, p_hat_max);
        while (!(f_lo > 0.0) && nudge > 1e-15)
        {
            nudge *= 0.1;
            lo = shrinkage_bound(eta) * (1.0 + nudge);
            f_lo = f_eta(lo, eta, p_hat_max);
        }
        double const f_hi = f_eta(hi, eta, p_hat_max);
        if (!(f_lo > 0.0))
        {
            throw InternalError("f_eta is not positive at the lower bracket edge");
        }
        if (!(f_hi < 0.0))
        {
            // f_eta(upsilon_max) is negative of second order in the budget, so
            // it can round to zero once the bracket has all but collapsed.
            if (hi - lo <= 1e-6 * hi)
            {
                s.root = hi;
                s.degenerate = true;
            }
            else
            {
                throw InternalError("f_eta is not negative at upsilon_max");
            }
        }
        else
        {
            while (hi - lo > opts.tol * lo && s.iterations < opts.max_iterations)
            {
                double const mid = 0.5 * (lo + hi);
                if (f_eta(mid, eta, p_hat_max) > 0.0)
                {
                    lo = mid;
                }
                else
                {
                    hi = mid;
                }
                ++s.iterations;
            }
            s.root = 0.5 * (lo + hi);
        }
    }

    double const clamp = nonnegative_beam_bound(eta);
    s.clamped = clamp > s.root;
    s.upsilon = std::max(clamp, s.root);
    return s;
}

double bisect_upsilon(int eta, double p_hat_max, double tol)
{
    BisectionOptions opts;
    opts.tol = tol;
    return solve_upsilon(eta, p_hat_max, opts).upsilon;
}

NormalizedOptimum optimize_normalized(double p_hat_max, const BisectionOptions& opts)
{
    int const top = eta_max(p_hat_max);
    NormalizedOptimum best;
    best.r_hat = -1.0;
    best.per_eta.reserve(top - 1);

    for (int eta = 2; eta <= top; ++eta)
    {
        UpsilonSolution const sol = solve_upsilon(eta, p_hat_max, opts);
        EtaCandidate c;
        c.eta = eta;
        c.upsilon = sol.upsilon;
        c.zeta = zeta_of(sol.upsilon, eta, p_hat_max);
        c.r_hat = r_hat(eta, c.upsilon, c.zeta);
        best.per_eta.push_back(c);

        // Strict comparison: ties go to the smaller eta.
        if (c.r_hat > best.r_hat)
        {
            best.eta = eta;
            best.upsilon = c.upsilon;
            best.zeta = c.zeta;
            best.r_hat = c.r_hat;
            best.degenerate = sol.degenerate;
        }
    }
    best.p_hat = p_hat(best.eta, best.upsilon, best.zeta);
    return best;
}

OptimalDesign optimize(const SystemParams& params, const BisectionOptions& opts)
{
    params.validate();
    double const budget = p_hat_max(params);
    NormalizedOptimum n = optimize_normalized(budget, opts);

    NormalizedDesign nd;
    nd.eta = n.eta;
    nd.upsilon = n.upsilon;
    nd.zeta = n.zeta;
    PhysicalDesign const phys = denormalize(params, nd);

    OptimalDesign out;
    out.eta_star = n.eta;
    out.upsilon_star = n.upsilon;
    out.zeta_star = n.zeta;
    out.u_th_star = phys.u_th;
    out.rho_star = phys.rho;
    out.r_bar_star = avg_rate_closed(params, n.eta, phys.u_th, phys.rho);
    out.p_bar_star = avg_power_closed(params, n.eta, phys.u_th, phys.rho);
    out.t_cycle = cycle_duration(params, phys.u_th, n.eta);
    out.spectral_efficiency = out.r_bar_star / params.w_tot;
    out.p_hat_max = budget;
    out.degenerate = n.degenerate;
    out.per_eta = std::move(n.per_eta);
    return out;
}

}  // namespace mmbeam
