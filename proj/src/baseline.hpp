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
// IEEE 802.11ad-style reference scheme: fixed-width sector beams, constant
// transmit power, and a two-beam realignment every time the MU (moving at
// +/- v_max) reaches the edge of its sector.

#pragma once

#include "core_model.hpp"

namespace mmbeam {

struct BaselineConfig
{
    double beamwidth_deg = 7.0;
    double v_max = 20.0;  // [m/s]
    double p_t = 0.0;     // transmit power during communication

    void validate() const;
    double beamwidth_rad() const;
};

struct BaselinePoint
{
    double f_comm = 0.0;
    double r_bar = 0.0;   // [bit/s]
    double p_bar = 0.0;
    double spectral_efficiency = 0.0;
};

/// Fraction of time spent communicating: (r/v) / (r/v + 2 delta_s) with
/// r = d tan(beamwidth / 2).
double baseline_fcomm(const SystemParams& params, const BaselineConfig& cfg);

BaselinePoint baseline_rate_power(const SystemParams& params, const BaselineConfig& cfg);

/// Transmit power whose time average equals p_bar_target.
double baseline_power_for_avg(const SystemParams& params,
                              const BaselineConfig& cfg,
                              double p_bar_target);

}  // namespace mmbeam
