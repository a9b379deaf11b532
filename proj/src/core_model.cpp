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

#include "core_model.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "errors.hpp"

namespace mmbeam {

namespace {

// Relative slack when comparing u_th against its lower bound, so that a value
// produced by denormalizing upsilon_min is accepted.
constexpr double bound_slack = 1e-12;

void require_positive(double value, const char* name)
{
    if (!(value > 0.0) || !std::isfinite(value))
    {
        throw DomainError(std::string(name) + " must be finite and > 0");
    }
}

void require_eta(int eta)
{
    if (eta < 2)
    {
        throw DomainError("number of sweeping beams must be >= 2, got "
                          + std::to_string(eta));
    }
}

}  // namespace

void SystemParams::validate() const
{
    require_positive(w_tot, "w_tot");
    require_positive(lambda, "lambda");
    require_positive(n0, "n0");
    require_positive(delta_s, "delta_s");
    require_positive(d, "d");
    require_positive(xi, "xi");
    require_positive(phi, "phi");
    require_positive(p_max, "p_max");
    if (xi > 1.0)
    {
        throw DomainError("xi must lie in (0, 1]");
    }
    if (v_drift != 0.0)
    {
        throw DomainError("v_drift must be 0; steer a known drift out before "
                          "building the cycle");
    }
}

UncertaintyInterval UncertaintyInterval::grown(double phi, double dt) const
{
    return {center, uncertainty_after(width, phi, dt)};
}

double uncertainty_after(double u0, double phi, double dt)
{
    if (u0 < 0.0 || phi < 0.0 || dt < 0.0)
    {
        throw DomainError("uncertainty_after: inputs must be nonnegative");
    }
    return u0 + phi * dt;
}

double shrinkage_bound(int eta)
{
    require_eta(eta);
    double const e = eta;
    return (e * e / 2.0 + 1.5 * e - 1.0) / (e - 1.0);
}

double nonnegative_beam_bound(int eta)
{
    require_eta(eta);
    double const e = eta;
    return 0.5 * (e - 1.0) * (e - 2.0);
}

double min_uth(const SystemParams& params, int eta)
{
    return params.slot_growth()
           * std::max(shrinkage_bound(eta), nonnegative_beam_bound(eta));
}

double u_comm_of(const SystemParams& params, double u_th, int eta)
{
    require_eta(eta);
    double const e = eta;
    double const g = params.slot_growth();
    return u_th / e + e * g - g * (e - 1.0) * (e - 2.0) / (2.0 * e);
}

double cycle_duration(const SystemParams& params, double u_th, int eta)
{
    require_eta(eta);
    double const e = eta;
    return (e - 1.0) * u_th / (params.phi * e)
           + 0.5 * params.delta_s * (e - 1.0) * (e - 2.0) / e;
}

SweepSchedule build_schedule(const SystemParams& params, double u_th, int eta)
{
    params.validate();
    require_eta(eta);

    double const g = params.slot_growth();
    double const shrink = g * shrinkage_bound(eta);
    double const nonneg = g * nonnegative_beam_bound(eta);
    if (u_th < std::max(shrink, nonneg) * (1.0 - bound_slack))
    {
        std::ostringstream msg;
        bool const beams_violated = u_th < nonneg * (1.0 - bound_slack);
        bool const beams_binding = beams_violated && nonneg >= shrink;
        msg << "u_th = " << u_th << " m is below the sweep-trigger bound "
            << std::max(shrink, nonneg) << " m for eta = " << eta << " ("
            << (beams_binding ? "first beamwidth would be negative"
                              : "sweep would not shrink the uncertainty")
            << ")";
        throw InfeasibleError(msg.str(),
                              beams_binding ? UthBound::nonnegative_beams
                                            : UthBound::shrinkage);
    }

    double const e = eta;
    double const step = g / params.d;
    double const omega1 = u_th / (params.d * e)
                          - (e - 1.0) * (e - 2.0) / (2.0 * e) * step;

    SweepSchedule s;
    s.eta = eta;
    s.u_th = u_th;
    s.omegas.reserve(eta);
    s.intervals.reserve(eta);

    double covered = 0.0;  // d * sum of previous beamwidths
    for (int i = 0; i < eta; ++i)
    {
        double const omega = std::max(0.0, omega1 + i * step);
        double const backoff = i * g / 2.0;
        s.omegas.push_back(omega);
        s.intervals.push_back(
            {covered - backoff, covered + params.d * omega - backoff});
        covered += params.d * omega;
    }
    s.u_comm = u_comm_of(params, u_th, eta);
    s.t_cycle = cycle_duration(params, u_th, eta);
    return s;
}

std::vector<std::string> validate_small_angle(const SystemParams& params,
                                              double u_th,
                                              double threshold)
{
    if (!(u_th > 0.0))
    {
        throw DomainError("validate_small_angle: u_th must be > 0");
    }
    std::vector<std::string> warnings;
    double const angle = u_th / params.d;
    if (angle > threshold)
    {
        std::ostringstream msg;
        msg << "beamwidth u_th/d = " << angle << " rad exceeds " << threshold
            << " rad; the small-angle approximation 2*atan(x/2) ~ x is off by "
            << 100.0 * (1.0 - 2.0 * std::atan(angle / 2.0) / angle) << "%";
        warnings.push_back(msg.str());
    }
    return warnings;
}

}  // namespace mmbeam
