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
// Independent checks of the cycle model:
//
//  - trajectory simulation of the sweep, for coverage of the start-of-cycle
//    interval and for the post-sweep width;
//  - numerical quadrature of the defining time averages, against which the
//    closed forms are compared;
//  - random equal-power allocations, none of which may beat water-filling.
//
// Monte Carlo work is split by trajectory index; every trajectory draws from
// its own generator seeded by derive_seed(master, index), so results do not
// depend on the thread count.

#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "core_model.hpp"

namespace mmbeam {

/// Counter-based seed splitting (splitmix64 finalizer over master + index).
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index);

enum class SpeedKind
{
    constant_extreme,    // one of +/- phi/2 for the whole cycle
    piecewise_uniform,   // uniform in [-phi/2, phi/2], redrawn every dwell
    bang_bang            // +/- phi/2, redrawn every dwell
};

struct SpeedProcess
{
    SpeedKind kind = SpeedKind::bang_bang;
    std::uint64_t seed = 0;
    double dwell = 0.0;  // [s]; ignored for constant_extreme
};

/// Integrator resolution: steps per microslot.
inline constexpr int steps_per_slot = 100;

struct TrajectoryResult
{
    std::vector<double> true_positions;  // sampled every delta_s / steps_per_slot
    int detected_beam = 0;               // 1..eta, 0 if no beam saw the MU
    bool covered = false;
    bool final_width_ok = false;
    double final_position = 0.0;
};

/// Follows the MU through the sweep. Beam i detects the MU when the MU lies
/// in the i-th scan interval at the start of microslot i; the first such beam
/// is reported.
TrajectoryResult simulate_cycle(const SystemParams& params,
                                const SweepSchedule& schedule,
                                const SpeedProcess& process,
                                double p0);

struct CoverageReport
{
    std::size_t trajectories = 0;
    std::size_t uncovered = 0;
    std::size_t window_violations = 0;     // final position outside beam's window
    double u_comm = 0.0;
    std::vector<std::size_t> beam_hits;    // per beam
    std::vector<double> beam_min;          // extreme final positions per beam
    std::vector<double> beam_max;

    /// Largest relative shortfall of an observed per-beam final spread against
    /// u_comm, over beams with at least one hit.
    double worst_span_deficit() const;
    /// Largest relative excess of an observed spread over u_comm.
    double worst_span_excess() const;
};

/// Runs n trajectories with p0 uniform on [0, u_th] and speed kinds cycling
/// through all three SpeedKinds. threads == 0 picks the hardware count.
CoverageReport monte_carlo_cycles(const SystemParams& params,
                                  const SweepSchedule& schedule,
                                  std::size_t n,
                                  std::uint64_t master_seed,
                                  unsigned threads = 0);

inline constexpr double default_quadrature_tol = 1e-9;

/// Time-average rate over one cycle under water-filling, by Romberg-refined
/// composite midpoint quadrature.
double integrate_rate_numeric(const SystemParams& params, int eta, double u_th,
                              double rho, double rel_tol = default_quadrature_tol);

/// Time-average transmit power, same method.
double integrate_power_numeric(const SystemParams& params, int eta, double u_th,
                               double rho, double rel_tol = default_quadrature_tol);

struct JensenReport
{
    std::size_t n_profiles = 0;
    std::size_t n_violations = 0;
    double budget = 0.0;             // common mean normalized power
    double waterfilling_rate = 0.0;  // mean of ln(1 + x / u) on the grid
    double best_rate = 0.0;          // best random profile
    double worst_excess = 0.0;       // max(rate - waterfilling_rate), may be < 0
    double self_residual = 0.0;      // grid water-filling rate vs closed form, relative
};

inline constexpr std::size_t jensen_grid_points = 10'000;
inline constexpr double jensen_tolerance = 1e-9;

/// Draws n nonnegative power profiles with the water-filling profile's mean
/// power and compares their average rate against it.
JensenReport jensen_check(const SystemParams& params, int eta, double u_th,
                          double rho, std::size_t n_perturbations,
                          std::uint64_t seed);

struct CheckResult
{
    std::string check_name;
    std::size_t n_cases = 0;
    std::size_t n_failures = 0;
    double worst_residual = 0.0;
};

struct VerifyOptions
{
    std::uint64_t seed = 1;
    double perturb_closed_form = 0.0;  // relative fault injected into closed forms
    std::size_t closed_form_cases = 200;
    double closed_form_tol = 1e-7;
    std::size_t trajectories = 20'000;  // per test point
    double span_tol = 1e-9;  // relative excess of a beam's final spread over u_comm
    std::size_t jensen_profiles = 1000;
    std::size_t f_eta_points = 50;
    unsigned threads = 0;
};

std::vector<CheckResult> run_verification(const SystemParams& params,
                                          const VerifyOptions& opts);

void write_report_csv(std::ostream& os, const std::vector<CheckResult>& rows);

}  // namespace mmbeam
