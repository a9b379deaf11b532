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

#include "baseline.hpp"

#include <cmath>
#include <numbers>

#include "errors.hpp"
#include "perf.hpp"

namespace mmbeam {

void BaselineConfig::validate() const
{
    if (!(beamwidth_deg > 0.0) || !(beamwidth_deg < 180.0))
    {
        throw DomainError("baseline beamwidth must lie in (0, 180) degrees");
    }
    if (!(v_max > 0.0))
    {
        throw DomainError("baseline v_max must be > 0");
    }
    if (!(p_t >= 0.0))
    {
        throw DomainError("baseline transmit power must be >= 0");
    }
}

double BaselineConfig::beamwidth_rad() const
{
    return beamwidth_deg * std::numbers::pi / 180.0;
}

double baseline_fcomm(const SystemParams& params, const BaselineConfig& cfg)
{
    cfg.validate();
    double const r = params.d * std::tan(cfg.beamwidth_rad() / 2.0);
    double const dwell = r / cfg.v_max;
    return dwell / (dwell + 2.0 * params.delta_s);
}

BaselinePoint baseline_rate_power(const SystemParams& params, const BaselineConfig& cfg)
{
    BaselinePoint b;
    b.f_comm = baseline_fcomm(params, cfg);
    b.r_bar = params.w_tot
              * std::log2(1.0 + snr_gamma(params) * cfg.p_t / cfg.beamwidth_rad())
              * b.f_comm;
    b.p_bar = cfg.p_t * b.f_comm;
    b.spectral_efficiency = b.r_bar / params.w_tot;
    return b;
}

double baseline_power_for_avg(const SystemParams& params,
                              const BaselineConfig& cfg,
                              double p_bar_target)
{
    if (!(p_bar_target > 0.0))
    {
        throw DomainError("target average power must be > 0");
    }
    return p_bar_target / baseline_fcomm(params, cfg);
}

}  // namespace mmbeam
