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
//
// Link budget, water-filling power allocation and the closed-form cycle
// averages, in physical units and in the dimensionless (eta, upsilon, zeta)
// coordinates:
//
//   upsilon = u_th / (delta_s * phi)
//   zeta    = d * gamma * rho / (delta_s * phi * upsilon) - 1
//
// In those coordinates the normalized rate ln(2) * R / W_tot and normalized
// power d * gamma * P / (delta_s * phi) depend on nothing else.

#pragma once

#include "core_model.hpp"

namespace mmbeam {

/// SNR scaling per unit power: lambda^2 xi / (8 pi d^2 N0 W_tot).
double snr_gamma(const SystemParams& params);

/// W_tot * log2(1 + gamma * p_t / omega_t).
double instantaneous_rate(const SystemParams& params, double p_t, double omega_t);

/// (rho - u_t / (d gamma))^+
double waterfilling_power(double rho, double u_t, double d, double gamma);

/// Water-filling allocation over the communication phase of one cycle.
struct PowerProfile
{
    double rho = 0.0;
    double t_start = 0.0;  // eta * delta_s
    double t_end = 0.0;    // T
    double u_start = 0.0;  // u_comm
    double phi = 0.0;
    double d = 0.0;
    double gamma = 0.0;

    double width_at(double t) const { return u_start + phi * (t - t_start); }
    double power_at(double t) const
    {
        return waterfilling_power(rho, width_at(t), d, gamma);
    }
};

PowerProfile power_profile(const SystemParams& params, int eta, double u_th, double rho);

/// Smallest admissible water level for a cycle: u_comm / (d gamma).
double rho_floor(const SystemParams& params, int eta, double u_th);

/// Time-average rate over one cycle [bit/s].
double avg_rate_closed(const SystemParams& params, int eta, double u_th, double rho);

/// Time-average transmit power over one cycle.
double avg_power_closed(const SystemParams& params, int eta, double u_th, double rho);

struct CyclePerformance
{
    double r_bar = 0.0;
    double p_bar = 0.0;
    double r_hat = 0.0;
    double p_hat = 0.0;
};

CyclePerformance evaluate_cycle(const SystemParams& params, int eta, double u_th, double rho);

struct NormalizedDesign
{
    int eta = 2;
    double upsilon = 0.0;
    double zeta = 0.0;
    bool feasible = false;  // (upsilon, zeta) in F_eta
};

struct PhysicalDesign
{
    double u_th = 0.0;
    double rho = 0.0;
};

/// u_comm / (delta_s * phi) as a function of upsilon.
double u_comm_hat(double upsilon, int eta);

/// Lower edge of F_eta in upsilon.
double upsilon_min(int eta);

/// Lower edge of F_eta in zeta at a given upsilon (zero power at that edge).
double zeta_floor(double upsilon, int eta);

/// Normalized rate. Throws DomainError outside F_eta.
double r_hat(int eta, double upsilon, double zeta);

/// Normalized power. Throws DomainError outside F_eta.
double p_hat(int eta, double upsilon, double zeta);

/// Normalized power budget d * gamma * p_max / (delta_s * phi).
double p_hat_max(const SystemParams& params);

NormalizedDesign normalize(const SystemParams& params, double u_th, double rho, int eta);
PhysicalDesign denormalize(const SystemParams& params, const NormalizedDesign& design);

namespace detail {

// Formula bodies without the F_eta check. Valid for upsilon > u_comm_hat, which
// extends below upsilon_min when eta >= 5; the optimizer's root bracket lives
// there.
double r_hat_unchecked(int eta, double upsilon, double zeta);
double p_hat_unchecked(int eta, double upsilon, double zeta);

}  // namespace detail

}  // namespace mmbeam
