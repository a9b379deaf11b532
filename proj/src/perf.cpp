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

#include "perf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "errors.hpp"

namespace mmbeam {

namespace {

constexpr double slack = 1e-12;

void require_feasible_cycle(const SystemParams& params, int eta, double u_th, double rho)
{
    params.validate();
    if (eta < 2)
    {
        throw DomainError("eta must be >= 2");
    }
    if (!(u_th >= min_uth(params, eta) * (1.0 - slack)))
    {
        std::ostringstream msg;
        msg << "u_th = " << u_th << " m is below min_uth = " << min_uth(params, eta)
            << " m for eta = " << eta;
        throw DomainError(msg.str());
    }
    double const floor = rho_floor(params, eta, u_th);
    if (!(rho >= floor * (1.0 - slack)))
    {
        std::ostringstream msg;
        msg << "water level rho = " << rho << " is below u_comm/(d gamma) = " << floor;
        throw DomainError(msg.str());
    }
}

void require_in_feasible_set(int eta, double upsilon, double zeta)
{
    if (eta < 2)
    {
        throw DomainError("eta must be >= 2");
    }
    if (!(upsilon >= upsilon_min(eta) * (1.0 - slack)))
    {
        throw DomainError("upsilon below upsilon_min(eta)");
    }
    if (!(zeta >= zeta_floor(upsilon, eta) - slack))
    {
        throw DomainError("zeta below the zero-power edge of the feasible set");
    }
}

// s - log(1 + s), accurate for small |s| where the difference cancels.
double minus_log1p(double s)
{
    if (std::abs(s) < 0.1)
    {
        double term = s;
        double sum = 0.0;
        for (int k = 2; k < 40; ++k)
        {
            term *= -s;
            double const next = term / k;
            sum -= next;
            if (std::abs(next) <= 1e-18 * std::abs(sum))
            {
                break;
            }
        }
        return sum;
    }
    return s - std::log1p(s);
}

// Integral of ln(level / u) over u in [lo, min(level, hi)], as a sum of
// nonnegative terms.
double log_ratio_integral(double level, double lo, double hi)
{
    if (level < hi)
    {
        return lo * minus_log1p((level - lo) / lo);
    }
    return (hi - lo) * std::log(level / hi) + lo * minus_log1p((hi - lo) / lo);
}

}  // namespace

double snr_gamma(const SystemParams& params)
{
    params.validate();
    return params.lambda * params.lambda * params.xi
           / (8.0 * std::numbers::pi * params.d * params.d * params.n0 * params.w_tot);
}

double instantaneous_rate(const SystemParams& params, double p_t, double omega_t)
{
    if (!(omega_t > 0.0))
    {
        throw DomainError("instantaneous_rate: beamwidth must be > 0");
    }
    if (p_t < 0.0)
    {
        throw DomainError("instantaneous_rate: power must be >= 0");
    }
    return params.w_tot * std::log2(1.0 + snr_gamma(params) * p_t / omega_t);
}

double waterfilling_power(double rho, double u_t, double d, double gamma)
{
    return std::max(0.0, rho - u_t / (d * gamma));
}

double rho_floor(const SystemParams& params, int eta, double u_th)
{
    return u_comm_of(params, u_th, eta) / (params.d * snr_gamma(params));
}

PowerProfile power_profile(const SystemParams& params, int eta, double u_th, double rho)
{
    require_feasible_cycle(params, eta, u_th, rho);
    PowerProfile p;
    p.rho = rho;
    p.t_start = eta * params.delta_s;
    p.t_end = cycle_duration(params, u_th, eta);
    p.u_start = u_comm_of(params, u_th, eta);
    p.phi = params.phi;
    p.d = params.d;
    p.gamma = snr_gamma(params);
    return p;
}

double avg_rate_closed(const SystemParams& params, int eta, double u_th, double rho)
{
    require_feasible_cycle(params, eta, u_th, rho);
    double const gamma = snr_gamma(params);
    double const level = params.d * gamma * rho;  // d gamma rho [m]
    double const uc = u_comm_of(params, u_th, eta);
    double const t = cycle_duration(params, u_th, eta);

    // Closed form of the rate integral, grouped so that no two large terms
    // cancel; the water level below u_th switches power off part way.
    double const bracket = log_ratio_integral(level, uc, u_th);
    double const r = params.w_tot / (std::numbers::ln2 * params.phi * t) * bracket;
    return std::max(0.0, r);
}

double avg_power_closed(const SystemParams& params, int eta, double u_th, double rho)
{
    require_feasible_cycle(params, eta, u_th, rho);
    double const gamma = snr_gamma(params);
    double const level = params.d * gamma * rho;
    double const uc = u_comm_of(params, u_th, eta);
    double const t = cycle_duration(params, u_th, eta);
    double const denom = 2.0 * params.d * params.phi * gamma * t;

    // Below u_th the two pieces of the closed form sum to (level - u_comm)^2.
    double const p = level < u_th
                         ? (level - uc) * (level - uc) / denom
                         : (u_th - uc) * ((level - u_th) + (level - uc)) / denom;
    return std::max(0.0, p);
}

CyclePerformance evaluate_cycle(const SystemParams& params, int eta, double u_th, double rho)
{
    CyclePerformance c;
    c.r_bar = avg_rate_closed(params, eta, u_th, rho);
    c.p_bar = avg_power_closed(params, eta, u_th, rho);
    c.r_hat = std::numbers::ln2 * c.r_bar / params.w_tot;
    c.p_hat = params.d * snr_gamma(params) / params.slot_growth() * c.p_bar;
    return c;
}

double u_comm_hat(double upsilon, int eta)
{
    if (eta < 2)
    {
        throw DomainError("eta must be >= 2");
    }
    double const e = eta;
    return upsilon / e + 0.5 * e + 1.5 - 1.0 / e;
}

double upsilon_min(int eta)
{
    return std::max(shrinkage_bound(eta), nonnegative_beam_bound(eta));
}

double zeta_floor(double upsilon, int eta)
{
    return u_comm_hat(upsilon, eta) / upsilon - 1.0;
}

namespace detail {

double r_hat_unchecked(int eta, double upsilon, double zeta)
{
    double const e = eta;
    double const uc = u_comm_hat(upsilon, eta);
    // Same grouping as the physical form, with level = upsilon (1 + zeta).
    double bracket = 0.0;
    if (zeta < 0.0)
    {
        bracket = uc * minus_log1p((upsilon * zeta + (upsilon - uc)) / uc);
    }
    else
    {
        bracket = (upsilon - uc) * std::log1p(zeta) + uc * minus_log1p((upsilon - uc) / uc);
    }
    return e / (e - 1.0) / (upsilon + 0.5 * e - 1.0) * bracket;
}

double p_hat_unchecked(int eta, double upsilon, double zeta)
{
    double const e = eta;
    double const uc = u_comm_hat(upsilon, eta);
    double const denom = 2.0 * (e - 1.0) * (upsilon + 0.5 * e - 1.0);
    if (zeta < 0.0)
    {
        double const above = upsilon * zeta + (upsilon - uc);  // level - u_comm_hat
        return e * above * above / denom;
    }
    return e * (upsilon - uc) * (2.0 * upsilon * zeta + (upsilon - uc)) / denom;
}

}  // namespace detail

double r_hat(int eta, double upsilon, double zeta)
{
    require_in_feasible_set(eta, upsilon, zeta);
    return std::max(0.0, detail::r_hat_unchecked(eta, upsilon, zeta));
}

double p_hat(int eta, double upsilon, double zeta)
{
    require_in_feasible_set(eta, upsilon, zeta);
    return std::max(0.0, detail::p_hat_unchecked(eta, upsilon, zeta));
}

double p_hat_max(const SystemParams& params)
{
    return params.d * snr_gamma(params) / params.slot_growth() * params.p_max;
}

NormalizedDesign normalize(const SystemParams& params, double u_th, double rho, int eta)
{
    params.validate();
    if (eta < 2)
    {
        throw DomainError("eta must be >= 2");
    }
    NormalizedDesign n;
    n.eta = eta;
    n.upsilon = u_th / params.slot_growth();
    n.zeta = params.d * snr_gamma(params) * rho / u_th - 1.0;
    n.feasible = n.upsilon >= upsilon_min(eta) * (1.0 - slack)
                 && n.zeta >= zeta_floor(n.upsilon, eta) - slack;
    return n;
}

PhysicalDesign denormalize(const SystemParams& params, const NormalizedDesign& design)
{
    params.validate();
    PhysicalDesign p;
    p.u_th = params.slot_growth() * design.upsilon;
    p.rho = p.u_th * (1.0 + design.zeta) / (params.d * snr_gamma(params));
    return p;
}

}  // namespace mmbeam
