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
// Geometry and timing of one beam-sweeping / data-communication cycle.
//
// The mobile user (MU) moves on a line with speed in [-phi/2, phi/2]. At the
// start of a cycle its position is known to lie in an interval of width u_th.
// The base station sweeps that interval with eta beams over eta microslots of
// length delta_s, widening successive beams so that the uncertainty left after
// the sweep (u_comm) does not depend on which beam the MU reports. Data
// communication then runs until the uncertainty has grown back to u_th.
//
// Schedules are expressed in a local frame where the start-of-cycle
// uncertainty interval is [0, u_th].

#pragma once

#include <cmath>
#include <string>
#include <vector>

namespace mmbeam {

/// Physical scenario constants. SI units throughout; power is an opaque unit
/// such that snr_gamma(params) * power is dimensionless (watts with the
/// defaults below).
struct SystemParams
{
    double w_tot = 1.76e9;           // bandwidth [Hz]
    double lambda = 5e-3;            // wavelength [m] (60 GHz)
    double n0 = std::pow(10.0, -20.4);  // noise PSD [W/Hz] (-174 dBm/Hz)
    double delta_s = 1e-5;           // microslot [s]
    double d = 10.0;                 // BS-MU distance [m]
    double xi = 1.0;                 // antenna efficiency
    double phi = 40.0;               // speed uncertainty v_max - v_min [m/s]
    double v_drift = 0.0;            // must be zero, see validate()
    double p_max = 1e-4;             // average power budget

    /// Throws DomainError unless every field is in range and v_drift == 0.
    void validate() const;

    /// delta_s * phi: the uncertainty growth over one microslot [m].
    double slot_growth() const { return delta_s * phi; }
};

struct UncertaintyInterval
{
    double center = 0.0;
    double width = 0.0;

    UncertaintyInterval grown(double phi, double dt) const;
};

struct ScanInterval
{
    double lo = 0.0;
    double hi = 0.0;

    double width() const { return hi - lo; }
    double center() const { return 0.5 * (lo + hi); }
    bool contains(double p) const { return p >= lo && p <= hi; }
};

struct SweepSchedule
{
    int eta = 0;
    double u_th = 0.0;
    std::vector<double> omegas;           // beamwidths [rad], one per microslot
    std::vector<ScanInterval> intervals;  // scanned positions [m], local frame
    double u_comm = 0.0;                  // width when communication starts [m]
    double t_cycle = 0.0;                 // cycle duration T [s]
};

/// u0 + phi * dt. Throws DomainError on negative input.
double uncertainty_after(double u0, double phi, double dt);

/// Smallest sweep-trigger width for which the sweep both shrinks the
/// uncertainty and keeps every beamwidth nonnegative.
double min_uth(const SystemParams& params, int eta);

/// The two halves of min_uth, in units of delta_s * phi.
double shrinkage_bound(int eta);
double nonnegative_beam_bound(int eta);

/// Post-sweep width as a function of the trigger width.
double u_comm_of(const SystemParams& params, double u_th, int eta);

/// Cycle duration T.
double cycle_duration(const SystemParams& params, double u_th, int eta);

/// Builds the beamwidths, scan intervals and timing for one cycle. Throws
/// InfeasibleError (carrying the violated bound) when u_th < min_uth.
SweepSchedule build_schedule(const SystemParams& params, double u_th, int eta);

inline constexpr double default_small_angle_threshold = 0.35;

/// Warns when u_th / d is large enough that the small-angle beamwidth
/// approximation is off by more than about 1%. Never throws on a valid u_th.
std::vector<std::string> validate_small_angle(
    const SystemParams& params,
    double u_th,
    double threshold = default_small_angle_threshold);

}  // namespace mmbeam
