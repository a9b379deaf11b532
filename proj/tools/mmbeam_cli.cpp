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
// mmbeam command-line driver. Talks to the library only through the C API.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mmbeam/mmbeam.h"

namespace {

enum Exit
{
    exit_ok = 0,
    exit_verify = 1,
    exit_infeasible = 2,
    exit_io = 3
};

// Thrown to unwind with a specific exit code.
struct Fail
{
    int code;
    std::string message;
};

struct ParamsDeleter
{
    void operator()(mmb_params* p) const { mmb_params_destroy(p); }
};
struct DesignDeleter
{
    void operator()(mmb_design* p) const { mmb_design_destroy(p); }
};
struct ReportDeleter
{
    void operator()(mmb_report* p) const { mmb_report_destroy(p); }
};
using ParamsPtr = std::unique_ptr<mmb_params, ParamsDeleter>;
using DesignPtr = std::unique_ptr<mmb_design, DesignDeleter>;
using ReportPtr = std::unique_ptr<mmb_report, ReportDeleter>;

int exit_for(mmb_status s)
{
    switch (s)
    {
    case MMB_ERR_DOMAIN:
    case MMB_ERR_INFEASIBLE:
    case MMB_ERR_SINGULAR:
    case MMB_ERR_INVALID_ARGUMENT: return exit_infeasible;
    case MMB_ERR_IO: return exit_io;
    default: return exit_verify;
    }
}

void check(mmb_status s, const std::string& what)
{
    if (s != MMB_OK)
    {
        throw Fail{exit_for(s), what + ": " + mmb_status_string(s) + " (" + mmb_last_error() + ")"};
    }
}

std::string fmt(double v)
{
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double dbm_per_hz_to_w(double dbm)
{
    return std::pow(10.0, dbm / 10.0) * 1e-3;
}

struct Options
{
    std::string config;
    std::optional<double> phi;
    std::optional<double> vmax;
    std::optional<double> pmax;
    std::optional<double> beamwidth;
    std::string axis = "power";
    std::vector<double> values;
    std::string out;
    std::optional<std::uint64_t> seed;
    bool json = false;
    double perturb = 0.0;
    std::size_t trajectories = 0;
};

struct Run
{
    ParamsPtr params;
    double beamwidth_deg = 7.0;
    std::uint64_t seed = 1;
};

// Flat key=value file; '#' starts a comment. Keys are the parameter names,
// plus v_max (sets phi = 2 v_max), beamwidth_deg and seed. n0 is in dBm/Hz.
void apply_config(const std::string& path, Run& run)
{
    std::ifstream in(path);
    if (!in)
    {
        throw Fail{exit_io, "cannot read config '" + path + "'"};
    }
    std::string line;
    int lineno = 0;
    while (std::getline(in, line))
    {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos)
        {
            line.erase(hash);
        }
        auto const eq = line.find('=');
        auto trim = [](std::string s) {
            auto const b = s.find_first_not_of(" \t\r");
            auto const e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
        };
        if (trim(line).empty())
        {
            continue;
        }
        if (eq == std::string::npos)
        {
            throw Fail{exit_infeasible, path + ":" + std::to_string(lineno) + ": expected key=value"};
        }
        auto const key = trim(line.substr(0, eq));
        auto const text = trim(line.substr(eq + 1));
        double value = 0.0;
        try
        {
            std::size_t used = 0;
            value = std::stod(text, &used);
            if (used != text.size())
            {
                throw std::invalid_argument(text);
            }
        }
        catch (const std::exception&)
        {
            throw Fail{exit_infeasible, path + ":" + std::to_string(lineno) + ": bad number '" + text + "'"};
        }
        if (key == "n0")
        {
            value = dbm_per_hz_to_w(value);
        }
        if (key == "v_max")
        {
            check(mmb_params_set(run.params.get(), "phi", 2.0 * value), "config");
        }
        else if (key == "beamwidth_deg")
        {
            run.beamwidth_deg = value;
        }
        else if (key == "seed")
        {
            run.seed = static_cast<std::uint64_t>(value);
        }
        else
        {
            check(mmb_params_set(run.params.get(), key.c_str(), value),
                  path + ":" + std::to_string(lineno));
        }
    }
}

Run make_run(const Options& o)
{
    Run run;
    mmb_params* raw = nullptr;
    check(mmb_params_create(&raw), "params");
    run.params.reset(raw);
    if (!o.config.empty())
    {
        apply_config(o.config, run);
    }
    if (o.seed)
    {
        run.seed = *o.seed;
    }
    if (o.vmax)
    {
        check(mmb_params_set(raw, "phi", 2.0 * *o.vmax), "--vmax");
    }
    if (o.phi)
    {
        check(mmb_params_set(raw, "phi", *o.phi), "--phi");
    }
    if (o.pmax)
    {
        check(mmb_params_set(raw, "p_max", *o.pmax), "--pmax");
    }
    if (o.beamwidth)
    {
        run.beamwidth_deg = *o.beamwidth;
    }
    check(mmb_params_validate(raw), "parameters");
    return run;
}

double get(const mmb_params* p, const char* key)
{
    double v = 0.0;
    check(mmb_params_get(p, key, &v), key);
    return v;
}

// Opens --out, or stdout when empty.
class Sink
{
  public:
    explicit Sink(const std::string& path)
    {
        if (!path.empty())
        {
            file_.open(path);
            if (!file_)
            {
                throw Fail{exit_io, "cannot write '" + path + "'"};
            }
        }
    }
    std::ostream& os() { return file_.is_open() ? file_ : std::cout; }
    void close(const std::string& path)
    {
        if (file_.is_open())
        {
            file_.close();
            if (!file_)
            {
                throw Fail{exit_io, "error writing '" + path + "'"};
            }
        }
    }

  private:
    std::ofstream file_;
};

struct DesignRow
{
    mmb_design_summary s{};
    mmb_baseline_result base{};
};

DesignRow evaluate(const mmb_params* params, double beamwidth_deg)
{
    DesignRow row;
    mmb_design* raw = nullptr;
    check(mmb_optimize(params, &raw), "optimize");
    DesignPtr design(raw);
    check(mmb_design_summary_get(design.get(), &row.s), "optimize");
    double const v_max = 0.5 * get(params, "phi");
    double p_t = 0.0;
    check(mmb_baseline_power_for_avg(params, beamwidth_deg, v_max, get(params, "p_max"), &p_t),
          "baseline");
    check(mmb_baseline(params, beamwidth_deg, v_max, p_t, &row.base), "baseline");
    return row;
}

void warn_degenerate(const mmb_design_summary& s)
{
    if (s.degenerate)
    {
        std::cerr << "warning: power budget too small for a meaningful design; "
                     "reporting the near-zero-rate limit\n";
    }
}

int cmd_optimize(const Options& o)
{
    auto run = make_run(o);
    mmb_design* raw = nullptr;
    check(mmb_optimize(run.params.get(), &raw), "optimize");
    DesignPtr design(raw);
    mmb_design_summary s{};
    check(mmb_design_summary_get(design.get(), &s), "optimize");
    warn_degenerate(s);

    Sink sink(o.out);
    auto& os = sink.os();
    if (o.json)
    {
        nlohmann::json j;
        j["eta_star"] = s.eta_star;
        j["upsilon_star"] = s.upsilon_star;
        j["zeta_star"] = s.zeta_star;
        j["u_th_star_m"] = s.u_th_star;
        j["rho_star"] = s.rho_star;
        j["t_cycle_s"] = s.t_cycle;
        j["spectral_efficiency"] = s.spectral_efficiency;
        j["r_bar"] = s.r_bar_star;
        j["p_bar"] = s.p_bar_star;
        j["p_hat_max"] = s.p_hat_max;
        j["degenerate"] = s.degenerate != 0;
        auto& per = j["per_eta"] = nlohmann::json::array();
        for (std::size_t i = 0; i < mmb_design_eta_count(design.get()); ++i)
        {
            int eta = 0;
            double ups = 0, zeta = 0, r = 0;
            check(mmb_design_eta_entry(design.get(), i, &eta, &ups, &zeta, &r), "optimize");
            per.push_back({{"eta", eta}, {"upsilon", ups}, {"zeta", zeta}, {"r_hat", r}});
        }
        os << j.dump(2) << "\n";
    }
    else if (!o.out.empty())
    {
        os << "eta_star,u_th_star_m,rho_star,t_cycle_s,spectral_efficiency,p_bar\n"
           << s.eta_star << ',' << fmt(s.u_th_star) << ',' << fmt(s.rho_star) << ','
           << fmt(s.t_cycle) << ',' << fmt(s.spectral_efficiency) << ',' << fmt(s.p_bar_star)
           << "\n";
    }
    else
    {
        os << "eta*                 " << s.eta_star << "\n"
           << "u_th* [m]            " << fmt(s.u_th_star) << "\n"
           << "rho*                 " << fmt(s.rho_star) << "\n"
           << "T [s]                " << fmt(s.t_cycle) << "\n"
           << "R/W_tot [bit/s/Hz]   " << fmt(s.spectral_efficiency) << "\n"
           << "P_bar                " << fmt(s.p_bar_star) << "\n";
    }
    sink.close(o.out);
    return exit_ok;
}

std::vector<double> default_grid(const std::string& axis)
{
    std::vector<double> v;
    if (axis == "power")
    {
        // 1e-5 .. 1e-3 W, four points per decade.
        for (int k = 0; k <= 8; ++k)
        {
            v.push_back(std::pow(10.0, -5.0 + 0.25 * k));
        }
    }
    else
    {
        for (int k = 1; k <= 8; ++k)
        {
            v.push_back(5.0 * k);
        }
    }
    return v;
}

int cmd_sweep(const Options& o)
{
    if (o.axis != "power" && o.axis != "speed")
    {
        throw Fail{exit_infeasible, "--axis must be power or speed"};
    }
    auto run = make_run(o);
    auto const values = o.values.empty() ? default_grid(o.axis) : o.values;
    for (std::size_t i = 1; i < values.size(); ++i)
    {
        if (!(values[i] > values[i - 1]))
        {
            throw Fail{exit_infeasible, "--values must be strictly increasing"};
        }
    }

    std::vector<std::future<DesignRow>> jobs;
    for (double v : values)
    {
        mmb_params* raw = nullptr;
        check(mmb_params_clone(run.params.get(), &raw), "params");
        auto local = std::shared_ptr<mmb_params>(raw, ParamsDeleter{});
        check(mmb_params_set(raw, o.axis == "power" ? "p_max" : "phi",
                             o.axis == "power" ? v : 2.0 * v),
              "--values");
        check(mmb_params_validate(raw), "--values");
        double const bw = run.beamwidth_deg;
        jobs.push_back(std::async(std::launch::async, [local, bw] { return evaluate(local.get(), bw); }));
    }
    std::vector<DesignRow> rows;
    for (auto& j : jobs)
    {
        rows.push_back(j.get());
    }

    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        warn_degenerate(rows[i].s);
        if (rows[i].base.spectral_efficiency > rows[i].s.spectral_efficiency)
        {
            std::cerr << "warning: reference scheme beats the optimized design at "
                      << fmt(values[i]) << "\n";
        }
    }
    for (std::size_t i = 1; i < rows.size(); ++i)
    {
        double const prev = rows[i - 1].s.spectral_efficiency;
        double const cur = rows[i].s.spectral_efficiency;
        bool const ok = o.axis == "power" ? cur > prev : cur < prev;
        if (!ok)
        {
            throw Fail{exit_verify, "spectral efficiency not strictly " +
                                        std::string(o.axis == "power" ? "increasing" : "decreasing") +
                                        " at " + fmt(values[i])};
        }
    }

    Sink sink(o.out);
    auto& os = sink.os();
    os << "axis_value,se_proposed,se_11ad,eta_star,u_th_star_m,p_bar\n";
    for (std::size_t i = 0; i < rows.size(); ++i)
    {
        auto const& r = rows[i];
        os << fmt(values[i]) << ',' << fmt(r.s.spectral_efficiency) << ','
           << fmt(r.base.spectral_efficiency) << ',' << r.s.eta_star << ','
           << fmt(r.s.u_th_star) << ',' << fmt(r.s.p_bar_star) << "\n";
    }
    sink.close(o.out);
    return exit_ok;
}

int cmd_verify(const Options& o)
{
    auto run = make_run(o);
    mmb_verify_options vo;
    mmb_verify_options_init(&vo);
    vo.seed = run.seed;
    vo.perturb_closed_form = o.perturb;
    vo.trajectories = o.trajectories;
    mmb_report* raw = nullptr;
    check(mmb_verify(run.params.get(), &vo, &raw), "verify");
    ReportPtr report(raw);

    if (!o.out.empty())
    {
        check(mmb_report_write_csv(report.get(), o.out.c_str()), "verify");
    }
    std::size_t const failures = mmb_report_total_failures(report.get());
    for (std::size_t i = 0; i < mmb_report_count(report.get()); ++i)
    {
        const char* name = nullptr;
        std::size_t n = 0, f = 0;
        double worst = 0;
        check(mmb_report_row(report.get(), i, &name, &n, &f, &worst), "verify");
        std::cout << (f == 0 ? "ok   " : "FAIL ") << name << "  cases=" << n << " failures=" << f
                  << " worst=" << fmt(worst) << "\n";
    }
    return failures == 0 ? exit_ok : exit_verify;
}

int cmd_baseline(const Options& o)
{
    auto run = make_run(o);
    double const v_max = 0.5 * get(run.params.get(), "phi");
    double p_t = 0.0;
    check(mmb_baseline_power_for_avg(run.params.get(), run.beamwidth_deg, v_max,
                                     get(run.params.get(), "p_max"), &p_t),
          "baseline");
    mmb_baseline_result b{};
    check(mmb_baseline(run.params.get(), run.beamwidth_deg, v_max, p_t, &b), "baseline");

    Sink sink(o.out);
    auto& os = sink.os();
    if (o.json)
    {
        nlohmann::json j{{"f_comm", b.f_comm},
                         {"p_t", p_t},
                         {"r_bar", b.r_bar},
                         {"p_bar", b.p_bar},
                         {"spectral_efficiency", b.spectral_efficiency}};
        os << j.dump(2) << "\n";
    }
    else
    {
        os << "f_comm,p_t,r_bar,p_bar,spectral_efficiency\n"
           << fmt(b.f_comm) << ',' << fmt(p_t) << ',' << fmt(b.r_bar) << ',' << fmt(b.p_bar) << ','
           << fmt(b.spectral_efficiency) << "\n";
    }
    sink.close(o.out);
    return exit_ok;
}

void common_flags(CLI::App* sub, Options& o)
{
    sub->add_option("--config", o.config, "key=value parameter file (n0 in dBm/Hz)");
    sub->add_option("--phi", o.phi, "speed uncertainty v_max - v_min [m/s]");
    sub->add_option("--vmax", o.vmax, "maximum speed [m/s]; sets phi = 2 vmax");
    sub->add_option("--pmax", o.pmax, "average power budget [W]");
    sub->add_option("--beamwidth", o.beamwidth, "reference-scheme beamwidth [deg]");
    sub->add_option("--out", o.out, "output file (default stdout)");
    sub->add_option("--seed", o.seed, "master seed");
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Beam sweeping and data communication design for mobile mm-wave links"};
    app.require_subcommand(1);
    Options o;

    auto* opt = app.add_subcommand("optimize", "rate-optimal design for one scenario");
    common_flags(opt, o);
    opt->add_flag("--json", o.json, "JSON output");

    auto* sweep = app.add_subcommand("sweep", "spectral efficiency along power or speed");
    common_flags(sweep, o);
    sweep->add_option("--axis", o.axis, "power or speed")->check(CLI::IsMember({"power", "speed"}));
    sweep->add_option("--values", o.values, "axis values, strictly increasing")->delimiter(',');

    auto* verify = app.add_subcommand("verify", "run the verification suites");
    common_flags(verify, o);
    verify->add_option("--perturb-closed-form", o.perturb, "relative fault injected into closed forms");
    verify->add_option("--trajectories", o.trajectories, "Monte Carlo trajectories per test point");

    auto* base = app.add_subcommand("baseline", "802.11ad-style reference at the same average power");
    common_flags(base, o);
    base->add_flag("--json", o.json, "JSON output");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError& e)
    {
        int const rc = app.exit(e);
        return rc == 0 ? 0 : exit_infeasible;
    }

    try
    {
        if (opt->parsed()) return cmd_optimize(o);
        if (sweep->parsed()) return cmd_sweep(o);
        if (verify->parsed()) return cmd_verify(o);
        if (base->parsed()) return cmd_baseline(o);
    }
    catch (const Fail& f)
    {
        std::cerr << "error: " << f.message << "\n";
        return f.code;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return exit_verify;
    }
    return exit_ok;
}
