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
// Rate maximization under the average power budget.
//
// With the budget tight, zeta is a function of (upsilon, eta) and the problem
// reduces to one dimension per beam count. For each eta the normalized rate is
// unimodal in upsilon: its derivative has the sign of f_eta, which decreases
// from +inf at the lower edge of the bracket to a negative value at
// upsilon_max(eta). The root is found by bisection and the best eta by
// exhaustive search over {2, ..., eta_max}.

#pragma once

#include <vector>

#include "perf.hpp"

namespace mmbeam {

struct FeasibilityBounds
{
    int eta = 2;
    double upsilon_min = 0.0;
    double upsilon_max = 0.0;
    bool feasible = false;
};

/// Largest upsilon for which the budget can be met with zeta = 0.
double upsilon_max(int eta, double p_hat_max);

/// upsilon_min <= upsilon_max, evaluated for one eta.
FeasibilityBounds feasibility(int eta, double p_hat_max);

inline constexpr int eta_search_cap = 1'000'000;

/// Largest eta for which the normalized problem is feasible. Always >= 4.
int eta_max(double p_hat_max);

/// zeta that spends the whole budget at (upsilon, eta). Requires
/// u_comm_hat(upsilon) < upsilon <= upsilon_max(eta).
double zeta_of(double upsilon, int eta, double p_hat_max);

/// Derivative surrogate: sign(f_eta) == sign(d/dupsilon r_hat(eta, upsilon,
/// zeta_of(upsilon, eta))). Defined on (shrinkage_bound(eta), upsilon_max].
double f_eta(double upsilon, int eta, double p_hat_max);

struct BisectionOptions
{
    double tol = 1e-10;     // bracket width relative to the root estimate
    double nudge = 1e-9;    // relative offset from the pole at the lower edge
    int max_iterations = 400;
};

struct UpsilonSolution
{
    int eta = 2;
    double root = 0.0;           // zero of f_eta
    double upsilon = 0.0;        // max(root, nonnegative_beam_bound(eta))
    int iterations = 0;
    bool clamped = false;        // upsilon came from the clamp, not the root
    bool degenerate = false;     // budget too small to open a bracket
};

UpsilonSolution solve_upsilon(int eta, double p_hat_max, const BisectionOptions& opts = {});

/// Optimal upsilon for a fixed eta.
double bisect_upsilon(int eta, double p_hat_max, double tol = 1e-10);

struct EtaCandidate
{
    int eta = 2;
    double upsilon = 0.0;
    double zeta = 0.0;
    double r_hat = 0.0;
};

struct NormalizedOptimum
{
    int eta = 2;
    double upsilon = 0.0;
    double zeta = 0.0;
    double r_hat = 0.0;
    double p_hat = 0.0;
    bool degenerate = false;
    std::vector<EtaCandidate> per_eta;
};

/// Solves the normalized problem; depends on the budget only.
NormalizedOptimum optimize_normalized(double p_hat_max, const BisectionOptions& opts = {});

struct OptimalDesign
{
    int eta_star = 2;
    double upsilon_star = 0.0;
    double zeta_star = 0.0;
    double u_th_star = 0.0;   // [m]
    double rho_star = 0.0;
    double r_bar_star = 0.0;  // [bit/s]
    double p_bar_star = 0.0;
    double t_cycle = 0.0;     // [s]
    double spectral_efficiency = 0.0;  // r_bar / w_tot [bit/s/Hz]
    double p_hat_max = 0.0;
    bool degenerate = false;
    std::vector<EtaCandidate> per_eta;
};

OptimalDesign optimize(const SystemParams& params, const BisectionOptions& opts = {});

}  // namespace mmbeam
