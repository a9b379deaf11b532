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

#include "mmbeam/mmbeam.h"

#include <cstring>
#include <fstream>
#include <new>
#include <string>
#include <string_view>

#include "baseline.hpp"
#include "core_model.hpp"
#include "errors.hpp"
#include "optimizer.hpp"
#include "oracle.hpp"
#include "perf.hpp"

struct mmb_params
{
    mmbeam::SystemParams value;
};

struct mmb_schedule
{
    mmbeam::SweepSchedule value;
};

struct mmb_design
{
    mmbeam::OptimalDesign value;
};

struct mmb_report
{
    std::vector<mmbeam::CheckResult> rows;
};

namespace {

thread_local std::string last_error;

class BadArgument : public std::exception
{
  public:
    explicit BadArgument(std::string what) : what_(std::move(what)) {}
    const char* what() const noexcept override { return what_.c_str(); }

  private:
    std::string what_;
};

const char* text(const char* s, const char* name)
{
    if (s == nullptr)
    {
        throw BadArgument(std::string("null ") + name);
    }
    return s;
}

template <class T>
T& deref(T* p, const char* name)
{
    if (p == nullptr)
    {
        throw BadArgument(std::string("null ") + name);
    }
    return *p;
}

mmb_status to_status(mmbeam::ErrorCode code)
{
    switch (code)
    {
    case mmbeam::ErrorCode::domain: return MMB_ERR_DOMAIN;
    case mmbeam::ErrorCode::infeasible: return MMB_ERR_INFEASIBLE;
    case mmbeam::ErrorCode::singular: return MMB_ERR_SINGULAR;
    case mmbeam::ErrorCode::io: return MMB_ERR_IO;
    case mmbeam::ErrorCode::internal: break;
    }
    return MMB_ERR_INTERNAL;
}

template <class F>
mmb_status try_(F&& f)
{
    try
    {
        f();
        last_error.clear();
        return MMB_OK;
    }
    catch (const BadArgument& e)
    {
        last_error = e.what();
        return MMB_ERR_INVALID_ARGUMENT;
    }
    catch (const mmbeam::Error& e)
    {
        last_error = e.what();
        return to_status(e.code());
    }
    catch (const std::bad_alloc&)
    {
        last_error = "out of memory";
        return MMB_ERR_INTERNAL;
    }
    catch (const std::exception& e)
    {
        last_error = e.what();
        return MMB_ERR_INTERNAL;
    }
    catch (...)
    {
        last_error = "unknown error";
        return MMB_ERR_INTERNAL;
    }
}

double* field(mmbeam::SystemParams& p, std::string_view key)
{
    if (key == "w_tot") return &p.w_tot;
    if (key == "lambda") return &p.lambda;
    if (key == "n0") return &p.n0;
    if (key == "delta_s") return &p.delta_s;
    if (key == "d") return &p.d;
    if (key == "xi") return &p.xi;
    if (key == "phi") return &p.phi;
    if (key == "v_drift") return &p.v_drift;
    if (key == "p_max") return &p.p_max;
    throw BadArgument("unknown parameter key '" + std::string(key) + "'");
}

mmbeam::BaselineConfig baseline_config(double beamwidth_deg, double v_max, double p_t)
{
    mmbeam::BaselineConfig cfg;
    cfg.beamwidth_deg = beamwidth_deg;
    cfg.v_max = v_max;
    cfg.p_t = p_t;
    return cfg;
}

}  // namespace

extern "C" {

const char* mmb_last_error(void)
{
    return last_error.c_str();
}

const char* mmb_status_string(mmb_status status)
{
    switch (status)
    {
    case MMB_OK: return "ok";
    case MMB_ERR_INVALID_ARGUMENT: return "invalid argument";
    case MMB_ERR_DOMAIN: return "domain error";
    case MMB_ERR_INFEASIBLE: return "infeasible";
    case MMB_ERR_SINGULAR: return "singular input";
    case MMB_ERR_INTERNAL: return "internal error";
    case MMB_ERR_IO: return "i/o error";
    }
    return "unknown status";
}

mmb_status mmb_params_create(mmb_params** out)
{
    return try_([&] { deref(out, "output") = new mmb_params{}; });
}

mmb_status mmb_params_clone(const mmb_params* params, mmb_params** out)
{
    return try_([&] { deref(out, "output") = new mmb_params{deref(params, "params")}; });
}

void mmb_params_destroy(mmb_params* params)
{
    delete params;
}

mmb_status mmb_params_set(mmb_params* params, const char* key, double value)
{
    return try_([&] {
        *field(deref(params, "params").value, text(key, "key")) = value;
    });
}

mmb_status mmb_params_get(const mmb_params* params, const char* key, double* value)
{
    return try_([&] {
        auto copy = deref(params, "params").value;
        deref(value, "output") = *field(copy, text(key, "key"));
    });
}

mmb_status mmb_params_validate(const mmb_params* params)
{
    return try_([&] { deref(params, "params").value.validate(); });
}

mmb_status mmb_uncertainty_after(double u0, double phi, double dt, double* out)
{
    return try_([&] { deref(out, "output") = mmbeam::uncertainty_after(u0, phi, dt); });
}

mmb_status mmb_min_uth(const mmb_params* params, int eta, double* out)
{
    return try_([&] {
        auto const& p = deref(params, "params").value;
        p.validate();
        deref(out, "output") = mmbeam::min_uth(p, eta);
    });
}

mmb_status mmb_schedule_build(const mmb_params* params, double u_th, int eta, mmb_schedule** out)
{
    return try_([&] {
        auto& slot = deref(out, "output");
        slot = new mmb_schedule{mmbeam::build_schedule(deref(params, "params").value, u_th, eta)};
    });
}

void mmb_schedule_destroy(mmb_schedule* schedule)
{
    delete schedule;
}

int mmb_schedule_eta(const mmb_schedule* schedule)
{
    return schedule ? schedule->value.eta : 0;
}

double mmb_schedule_u_th(const mmb_schedule* schedule)
{
    return schedule ? schedule->value.u_th : 0.0;
}

double mmb_schedule_u_comm(const mmb_schedule* schedule)
{
    return schedule ? schedule->value.u_comm : 0.0;
}

double mmb_schedule_t_cycle(const mmb_schedule* schedule)
{
    return schedule ? schedule->value.t_cycle : 0.0;
}

mmb_status mmb_schedule_beam(const mmb_schedule* schedule, int index, double* omega,
                             double* lo, double* hi)
{
    return try_([&] {
        auto const& s = deref(schedule, "schedule").value;
        if (index < 0 || index >= s.eta)
        {
            throw BadArgument("beam index out of range");
        }
        if (omega) *omega = s.omegas[index];
        if (lo) *lo = s.intervals[index].lo;
        if (hi) *hi = s.intervals[index].hi;
    });
}

mmb_status mmb_small_angle_check(const mmb_params* params, double u_th, double threshold, int* warn)
{
    return try_([&] {
        auto const w = mmbeam::validate_small_angle(deref(params, "params").value, u_th, threshold);
        deref(warn, "output") = w.empty() ? 0 : 1;
        if (!w.empty())
        {
            last_error = w.front();
        }
    });
}

mmb_status mmb_snr_gamma(const mmb_params* params, double* out)
{
    return try_([&] { deref(out, "output") = mmbeam::snr_gamma(deref(params, "params").value); });
}

mmb_status mmb_p_hat_max(const mmb_params* params, double* out)
{
    return try_([&] { deref(out, "output") = mmbeam::p_hat_max(deref(params, "params").value); });
}

mmb_status mmb_avg_rate(const mmb_params* params, int eta, double u_th, double rho, double* out)
{
    return try_([&] {
        deref(out, "output") = mmbeam::avg_rate_closed(deref(params, "params").value, eta, u_th, rho);
    });
}

mmb_status mmb_avg_power(const mmb_params* params, int eta, double u_th, double rho, double* out)
{
    return try_([&] {
        deref(out, "output") = mmbeam::avg_power_closed(deref(params, "params").value, eta, u_th, rho);
    });
}

mmb_status mmb_r_hat(int eta, double upsilon, double zeta, double* out)
{
    return try_([&] { deref(out, "output") = mmbeam::r_hat(eta, upsilon, zeta); });
}

mmb_status mmb_p_hat(int eta, double upsilon, double zeta, double* out)
{
    return try_([&] { deref(out, "output") = mmbeam::p_hat(eta, upsilon, zeta); });
}

mmb_status mmb_optimize(const mmb_params* params, mmb_design** out)
{
    return try_([&] {
        auto& slot = deref(out, "output");
        slot = new mmb_design{mmbeam::optimize(deref(params, "params").value)};
    });
}

void mmb_design_destroy(mmb_design* design)
{
    delete design;
}

mmb_status mmb_design_summary_get(const mmb_design* design, mmb_design_summary* out)
{
    return try_([&] {
        auto const& d = deref(design, "design").value;
        auto& s = deref(out, "output");
        s.eta_star = d.eta_star;
        s.upsilon_star = d.upsilon_star;
        s.zeta_star = d.zeta_star;
        s.u_th_star = d.u_th_star;
        s.rho_star = d.rho_star;
        s.r_bar_star = d.r_bar_star;
        s.p_bar_star = d.p_bar_star;
        s.t_cycle = d.t_cycle;
        s.spectral_efficiency = d.spectral_efficiency;
        s.p_hat_max = d.p_hat_max;
        s.degenerate = d.degenerate ? 1 : 0;
    });
}

size_t mmb_design_eta_count(const mmb_design* design)
{
    return design ? design->value.per_eta.size() : 0;
}

mmb_status mmb_design_eta_entry(const mmb_design* design, size_t index, int* eta,
                                double* upsilon, double* zeta, double* r_hat)
{
    return try_([&] {
        auto const& v = deref(design, "design").value.per_eta;
        if (index >= v.size())
        {
            throw BadArgument("eta entry index out of range");
        }
        auto const& c = v[index];
        if (eta) *eta = c.eta;
        if (upsilon) *upsilon = c.upsilon;
        if (zeta) *zeta = c.zeta;
        if (r_hat) *r_hat = c.r_hat;
    });
}

mmb_status mmb_eta_max(double p_hat_max, int* out)
{
    return try_([&] { deref(out, "output") = mmbeam::eta_max(p_hat_max); });
}

mmb_status mmb_upsilon_max(int eta, double p_hat_max, double* out)
{
    return try_([&] {
        if (eta < 2)
        {
            throw mmbeam::DomainError("eta must be >= 2");
        }
        deref(out, "output") = mmbeam::upsilon_max(eta, p_hat_max);
    });
}

mmb_status mmb_bisect_upsilon(int eta, double p_hat_max, double tol, double* out)
{
    return try_([&] { deref(out, "output") = mmbeam::bisect_upsilon(eta, p_hat_max, tol); });
}

mmb_status mmb_baseline(const mmb_params* params, double beamwidth_deg, double v_max,
                        double p_t, mmb_baseline_result* out)
{
    return try_([&] {
        auto const& p = deref(params, "params").value;
        p.validate();
        auto const b = mmbeam::baseline_rate_power(p, baseline_config(beamwidth_deg, v_max, p_t));
        auto& r = deref(out, "output");
        r.f_comm = b.f_comm;
        r.r_bar = b.r_bar;
        r.p_bar = b.p_bar;
        r.spectral_efficiency = b.spectral_efficiency;
    });
}

mmb_status mmb_baseline_power_for_avg(const mmb_params* params, double beamwidth_deg,
                                      double v_max, double p_bar_target, double* p_t)
{
    return try_([&] {
        auto const& p = deref(params, "params").value;
        p.validate();
        deref(p_t, "output") = mmbeam::baseline_power_for_avg(
            p, baseline_config(beamwidth_deg, v_max, 0.0), p_bar_target);
    });
}

void mmb_verify_options_init(mmb_verify_options* opts)
{
    if (opts == nullptr)
    {
        return;
    }
    mmbeam::VerifyOptions const d;
    opts->seed = d.seed;
    opts->perturb_closed_form = d.perturb_closed_form;
    opts->trajectories = d.trajectories;
    opts->threads = d.threads;
}

mmb_status mmb_verify(const mmb_params* params, const mmb_verify_options* opts, mmb_report** out)
{
    return try_([&] {
        auto& slot = deref(out, "output");
        mmbeam::VerifyOptions o;
        if (opts != nullptr)
        {
            o.seed = opts->seed;
            o.perturb_closed_form = opts->perturb_closed_form;
            if (opts->trajectories > 0)
            {
                o.trajectories = opts->trajectories;
            }
            o.threads = opts->threads;
        }
        slot = new mmb_report{mmbeam::run_verification(deref(params, "params").value, o)};
    });
}

void mmb_report_destroy(mmb_report* report)
{
    delete report;
}

size_t mmb_report_count(const mmb_report* report)
{
    return report ? report->rows.size() : 0;
}

mmb_status mmb_report_row(const mmb_report* report, size_t index, const char** name,
                          size_t* n_cases, size_t* n_failures, double* worst_residual)
{
    return try_([&] {
        auto const& rows = deref(report, "report").rows;
        if (index >= rows.size())
        {
            throw BadArgument("report row index out of range");
        }
        auto const& r = rows[index];
        if (name) *name = r.check_name.c_str();
        if (n_cases) *n_cases = r.n_cases;
        if (n_failures) *n_failures = r.n_failures;
        if (worst_residual) *worst_residual = r.worst_residual;
    });
}

size_t mmb_report_total_failures(const mmb_report* report)
{
    size_t total = 0;
    if (report)
    {
        for (auto const& r : report->rows)
        {
            total += r.n_failures;
        }
    }
    return total;
}

mmb_status mmb_report_write_csv(const mmb_report* report, const char* path)
{
    return try_([&] {
        auto const& rows = deref(report, "report").rows;
        std::ofstream os(text(path, "path"));
        if (!os)
        {
            throw mmbeam::IoError(std::string("cannot open '") + path + "' for writing");
        }
        mmbeam::write_report_csv(os, rows);
        if (!os)
        {
            throw mmbeam::IoError(std::string("write to '") + path + "' failed");
        }
    });
}

}  // extern "C"
