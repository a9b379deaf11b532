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

#include "oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <ostream>
#include <random>
#include <thread>

#include "errors.hpp"
#include "optimizer.hpp"
#include "perf.hpp"

namespace mmbeam {

namespace {

// Cycle quantities re-derived from the schedule and the width growth law
// rather than taken from the closed forms under test.
struct CycleGeometry
{
    double t_start = 0.0;
    double t_end = 0.0;
    double u_comm = 0.0;
    double gamma = 0.0;
    double level = 0.0;  // d * gamma * rho [m]
};

CycleGeometry cycle_geometry(const SystemParams& params, int eta, double u_th, double rho)
{
    SweepSchedule const s = build_schedule(params, u_th, eta);
    CycleGeometry g;
    g.t_start = eta * params.delta_s;
    // Width after the sweep when beam 1 is reported: d omega_1 plus eta slots
    // of growth.
    g.u_comm = params.d * s.omegas.front() + eta * params.slot_growth();
    g.t_end = g.t_start + (u_th - g.u_comm) / params.phi;
    g.gamma = snr_gamma(params);
    g.level = params.d * g.gamma * rho;
    if (g.level < g.u_comm * (1.0 - 1e-12))
    {
        throw DomainError("water level below u_comm / (d gamma)");
    }
    return g;
}

template <class F>
double romberg_midpoint(F&& f, double a, double b, double rel_tol)
{
    if (!(b > a))
    {
        return 0.0;
    }
    constexpr int max_levels = 23;
    std::vector<double> prev;
    std::vector<double> cur;
    std::size_t panels = 1;
    for (int k = 0; k < max_levels; ++k, panels *= 2)
    {
        double const h = (b - a) / static_cast<double>(panels);
        double sum = 0.0;
        for (std::size_t i = 0; i < panels; ++i)
        {
            sum += f(a + (static_cast<double>(i) + 0.5) * h);
        }
        cur.assign(k + 1, 0.0);
        cur[0] = sum * h;
        double pow4 = 1.0;
        for (int j = 1; j <= k; ++j)
        {
            pow4 *= 4.0;
            cur[j] = cur[j - 1] + (cur[j - 1] - prev[j - 1]) / (pow4 - 1.0);
        }
        if (k >= 3)
        {
            double const diff = std::abs(cur[k] - prev[k - 1]);
            if (diff <= rel_tol * std::abs(cur[k]) || (cur[k] == 0.0 && diff == 0.0))
            {
                return cur[k];
            }
        }
        std::swap(prev, cur);
    }
    throw InternalError("quadrature did not reach the requested tolerance");
}

class SpeedDraw
{
  public:
    SpeedDraw(const SpeedProcess& process, double phi, double step, int total_steps)
        : kind_(process.kind), half_(0.5 * phi), rng_(process.seed)
    {
        if (kind_ == SpeedKind::constant_extreme)
        {
            dwell_steps_ = total_steps;
        }
        else
        {
            if (!(process.dwell > 0.0))
            {
                throw DomainError("speed process dwell must be > 0");
            }
            dwell_steps_ = std::max<long long>(1, std::llround(process.dwell / step));
        }
    }

    double at(long long step)
    {
        if (step % dwell_steps_ == 0)
        {
            current_ = draw();
        }
        return current_;
    }

  private:
    double draw()
    {
        if (kind_ == SpeedKind::piecewise_uniform)
        {
            return std::uniform_real_distribution<double>(-half_, half_)(rng_);
        }
        return std::bernoulli_distribution(0.5)(rng_) ? half_ : -half_;
    }

    SpeedKind kind_;
    double half_;
    std::mt19937_64 rng_;
    long long dwell_steps_ = 1;
    double current_ = 0.0;
};

double resolution(const SweepSchedule& s, const SystemParams& params)
{
    return 1e-10 * (s.u_th + s.eta * params.slot_growth());
}

void merge(CoverageReport& into, const CoverageReport& part)
{
    into.trajectories += part.trajectories;
    into.uncovered += part.uncovered;
    into.window_violations += part.window_violations;
    for (std::size_t i = 0; i < into.beam_hits.size(); ++i)
    {
        into.beam_hits[i] += part.beam_hits[i];
        into.beam_min[i] = std::min(into.beam_min[i], part.beam_min[i]);
        into.beam_max[i] = std::max(into.beam_max[i], part.beam_max[i]);
    }
}

CoverageReport empty_report(const SweepSchedule& s)
{
    CoverageReport r;
    r.u_comm = s.u_comm;
    r.beam_hits.assign(s.eta, 0);
    r.beam_min.assign(s.eta, std::numeric_limits<double>::infinity());
    r.beam_max.assign(s.eta, -std::numeric_limits<double>::infinity());
    return r;
}

double relative(double a, double b)
{
    double const scale = std::max(std::abs(a), std::abs(b));
    return scale == 0.0 ? 0.0 : std::abs(a - b) / scale;
}

void record(CheckResult& c, double residual, bool failed)
{
    ++c.n_cases;
    if (failed)
    {
        ++c.n_failures;
    }
    if (!std::isfinite(residual))
    {
        c.worst_residual = std::numeric_limits<double>::infinity();
    }
    else
    {
        c.worst_residual = std::max(c.worst_residual, residual);
    }
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index)
{
    std::uint64_t z = master + 0x9e3779b97f4a7c15ULL * (index + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

TrajectoryResult simulate_cycle(const SystemParams& params,
                                const SweepSchedule& schedule,
                                const SpeedProcess& process,
                                double p0)
{
    if (!(p0 >= 0.0 && p0 <= schedule.u_th))
    {
        throw DomainError("simulate_cycle: p0 must lie in [0, u_th]");
    }
    int const total = schedule.eta * steps_per_slot;
    double const step = params.delta_s / steps_per_slot;
    double const tol = resolution(schedule, params);

    TrajectoryResult r;
    r.true_positions.resize(total + 1);
    r.true_positions[0] = p0;
    SpeedDraw speed(process, params.phi, step, total);
    for (int k = 0; k < total; ++k)
    {
        r.true_positions[k + 1] = r.true_positions[k] + speed.at(k) * step;
    }

    for (int i = 0; i < schedule.eta; ++i)
    {
        double const p = r.true_positions[i * steps_per_slot];
        ScanInterval const& scan = schedule.intervals[i];
        if (p >= scan.lo - tol && p <= scan.hi + tol)
        {
            r.detected_beam = i + 1;
            break;
        }
    }
    r.covered = r.detected_beam > 0;
    r.final_position = r.true_positions.back();
    if (r.covered)
    {
        double const center = schedule.intervals[r.detected_beam - 1].center();
        r.final_width_ok = std::abs(r.final_position - center) <= 0.5 * schedule.u_comm + tol;
    }
    return r;
}

double CoverageReport::worst_span_deficit() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < beam_hits.size(); ++i)
    {
        if (beam_hits[i] > 0)
        {
            worst = std::max(worst, (u_comm - (beam_max[i] - beam_min[i])) / u_comm);
        }
    }
    return worst;
}

double CoverageReport::worst_span_excess() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < beam_hits.size(); ++i)
    {
        if (beam_hits[i] > 0)
        {
            worst = std::max(worst, ((beam_max[i] - beam_min[i]) - u_comm) / u_comm);
        }
    }
    return worst;
}

CoverageReport monte_carlo_cycles(const SystemParams& params,
                                  const SweepSchedule& schedule,
                                  std::size_t n,
                                  std::uint64_t master_seed,
                                  unsigned threads)
{
    double const step = params.delta_s / steps_per_slot;

    auto run = [&](std::size_t begin, std::size_t end, CoverageReport& out) {
        for (std::size_t idx = begin; idx < end; ++idx)
        {
            std::uint64_t const seed = derive_seed(master_seed, idx);
            std::mt19937_64 rng(seed);
            double p0 = std::uniform_real_distribution<double>(0.0, schedule.u_th)(rng);
            // Pin both edges of the start interval.
            if (idx == 0)
            {
                p0 = 0.0;
            }
            else if (idx == 1)
            {
                p0 = schedule.u_th;
            }
            SpeedProcess proc;
            proc.kind = static_cast<SpeedKind>(idx % 3);
            proc.dwell = std::uniform_real_distribution<double>(step, 2.0 * params.delta_s)(rng);
            proc.seed = derive_seed(seed, 0x5eedULL);

            TrajectoryResult const t = simulate_cycle(params, schedule, proc, p0);
            ++out.trajectories;
            if (!t.covered)
            {
                ++out.uncovered;
                continue;
            }
            if (!t.final_width_ok)
            {
                ++out.window_violations;
            }
            std::size_t const b = t.detected_beam - 1;
            ++out.beam_hits[b];
            out.beam_min[b] = std::min(out.beam_min[b], t.final_position);
            out.beam_max[b] = std::max(out.beam_max[b], t.final_position);
        }
    };

    unsigned workers = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, std::max<std::size_t>(1, n)));

    std::vector<CoverageReport> parts(workers, empty_report(schedule));
    std::vector<std::thread> pool;
    std::size_t const chunk = (n + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w)
    {
        std::size_t const begin = std::min(n, w * chunk);
        std::size_t const end = std::min(n, begin + chunk);
        pool.emplace_back(run, begin, end, std::ref(parts[w]));
    }
    for (auto& t : pool)
    {
        t.join();
    }

    CoverageReport total = empty_report(schedule);
    for (auto const& p : parts)
    {
        merge(total, p);
    }
    return total;
}

double integrate_rate_numeric(const SystemParams& params, int eta, double u_th,
                              double rho, double rel_tol)
{
    CycleGeometry const g = cycle_geometry(params, eta, u_th, rho);
    // Power is zero once the width passes the water level.
    double const t_zero = g.t_start + (g.level - g.u_comm) / params.phi;
    double const upper = std::min(g.t_end, t_zero);
    auto integrand = [&](double t) {
        double const u = g.u_comm + params.phi * (t - g.t_start);
        double const power = std::max(0.0, rho - u / (params.d * g.gamma));
        return std::log1p(params.d * g.gamma * power / u) / std::numbers::ln2;
    };
    double const integral = romberg_midpoint(integrand, g.t_start, upper, rel_tol);
    return params.w_tot / g.t_end * integral;
}

double integrate_power_numeric(const SystemParams& params, int eta, double u_th,
                               double rho, double rel_tol)
{
    CycleGeometry const g = cycle_geometry(params, eta, u_th, rho);
    double const t_zero = g.t_start + (g.level - g.u_comm) / params.phi;
    double const upper = std::min(g.t_end, t_zero);
    auto integrand = [&](double t) {
        double const u = g.u_comm + params.phi * (t - g.t_start);
        return std::max(0.0, rho - u / (params.d * g.gamma));
    };
    double const integral = romberg_midpoint(integrand, g.t_start, upper, rel_tol);
    return integral / g.t_end;
}

JensenReport jensen_check(const SystemParams& params, int eta, double u_th,
                          double rho, std::size_t n_perturbations,
                          std::uint64_t seed)
{
    CycleGeometry const g = cycle_geometry(params, eta, u_th, rho);
    double const unit = params.slot_growth();
    double const level = g.level / unit;
    std::size_t const n = jensen_grid_points;
    double const dt = (g.t_end - g.t_start) / static_cast<double>(n);

    // Normalized widths and the water-filling allocation on the grid.
    std::vector<double> width(n);
    std::vector<double> wf(n);
    for (std::size_t j = 0; j < n; ++j)
    {
        double const t = g.t_start + (static_cast<double>(j) + 0.5) * dt;
        width[j] = (g.u_comm + params.phi * (t - g.t_start)) / unit;
        wf[j] = std::max(0.0, level - width[j]);
    }
    auto mean_rate = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (std::size_t j = 0; j < n; ++j)
        {
            s += std::log1p(x[j] / width[j]);
        }
        return s / static_cast<double>(n);
    };
    auto mean = [&](const std::vector<double>& x) {
        double s = 0.0;
        for (double v : x)
        {
            s += v;
        }
        return s / static_cast<double>(n);
    };

    JensenReport rep;
    rep.budget = mean(wf);
    rep.waterfilling_rate = mean_rate(wf);
    // The grid average, stretched back over the whole cycle, against the
    // closed-form rate.
    double const closed = std::numbers::ln2 * avg_rate_closed(params, eta, u_th, rho) / params.w_tot;
    double const on_grid = rep.waterfilling_rate * (g.t_end - g.t_start) / g.t_end;
    rep.self_residual = closed > 0.0 ? std::abs(on_grid - closed) / closed : std::abs(on_grid);
    rep.worst_excess = -std::numeric_limits<double>::infinity();
    rep.best_rate = -std::numeric_limits<double>::infinity();

    std::vector<double> x(n);
    for (std::size_t k = 0; k < n_perturbations; ++k)
    {
        std::mt19937_64 rng(derive_seed(seed, k));
        std::uniform_real_distribution<double> uni(0.0, 1.0);
        std::exponential_distribution<double> expo(1.0);
        std::normal_distribution<double> gauss(0.0, 1.0);
        switch (k % 5)
        {
        case 0:
            std::fill(x.begin(), x.end(), 1.0);
            break;
        case 1:
            for (auto& v : x)
            {
                v = expo(rng);
            }
            break;
        case 2:
        {
            double const sigma = uni(rng);
            double const floor = 1e-3 * uni(rng) * std::max(level, 1.0);
            for (std::size_t j = 0; j < n; ++j)
            {
                x[j] = wf[j] * std::exp(sigma * gauss(rng)) + floor;
            }
            break;
        }
        case 3:
        {
            double const keep = 0.05 + 0.9 * uni(rng);
            for (auto& v : x)
            {
                v = uni(rng) < keep ? expo(rng) : 0.0;
            }
            break;
        }
        default:
        {
            double const amp = uni(rng);
            double const freq = 1.0 + 20.0 * uni(rng);
            double const phase = 2.0 * std::numbers::pi * uni(rng);
            for (std::size_t j = 0; j < n; ++j)
            {
                double const s = (static_cast<double>(j) + 0.5) / static_cast<double>(n);
                x[j] = 1.0 + amp * std::sin(2.0 * std::numbers::pi * freq * s + phase);
            }
            break;
        }
        }
        double const m = mean(x);
        double const scale = m > 0.0 ? rep.budget / m : 0.0;
        for (auto& v : x)
        {
            v *= scale;
        }
        double const rate = mean_rate(x);
        double const excess = rate - rep.waterfilling_rate;
        ++rep.n_profiles;
        if (excess > jensen_tolerance)
        {
            ++rep.n_violations;
        }
        rep.worst_excess = std::max(rep.worst_excess, excess);
        rep.best_rate = std::max(rep.best_rate, rate);
    }
    return rep;
}

std::vector<CheckResult> run_verification(const SystemParams& params, const VerifyOptions& opts)
{
    params.validate();
    std::vector<CheckResult> rows;
    std::mt19937_64 rng(derive_seed(opts.seed, 0));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double const g = params.slot_growth();
    double const gamma = snr_gamma(params);

    // Closed forms against quadrature, and the normalization identity, on
    // random feasible tuples spanning both sides of the water-level kink.
    {
        CheckResult rate{"closed_form_rate"};
        CheckResult power{"closed_form_power"};
        CheckResult ident{"normalization_identity"};
        for (std::size_t k = 0; k < opts.closed_form_cases; ++k)
        {
            int const eta = 2 + static_cast<int>(uni(rng) * 7.0);
            double const lo = min_uth(params, eta);
            double const hi = std::max(lo * 1.5, 1e3 * g);
            double const u_th = lo * std::pow(hi / lo, uni(rng));
            double const uc = u_comm_of(params, u_th, eta);
            double const ratio = 1.01 * std::pow(3.0 * u_th / uc / 1.01, uni(rng));
            double const rho = ratio * uc / (params.d * gamma);

            double const fault = 1.0 + opts.perturb_closed_form;
            double const r_closed = avg_rate_closed(params, eta, u_th, rho) * fault;
            double const p_closed = avg_power_closed(params, eta, u_th, rho) * fault;
            double const r_num = integrate_rate_numeric(params, eta, u_th, rho);
            double const p_num = integrate_power_numeric(params, eta, u_th, rho);
            double const er = relative(r_closed, r_num);
            double const ep = relative(p_closed, p_num);
            record(rate, er, !(er <= opts.closed_form_tol));
            record(power, ep, !(ep <= opts.closed_form_tol));

            NormalizedDesign const nd = normalize(params, u_th, rho, eta);
            double const rh = r_hat(eta, nd.upsilon, nd.zeta);
            double const ph = p_hat(eta, nd.upsilon, nd.zeta);
            double const ei = std::max(relative(rh, std::numbers::ln2 * r_closed / params.w_tot),
                                       relative(ph, params.d * gamma / g * p_closed));
            record(ident, ei, !(ei <= 1e-9));
        }
        rows.push_back(rate);
        rows.push_back(power);
        rows.push_back(ident);
    }

    // Water-filling against random equal-power profiles.
    {
        CheckResult c{"jensen_waterfilling"};
        for (int eta : {2, 4})
        {
            double const u_th = 10.0 * min_uth(params, eta);
            double const uc = u_comm_of(params, u_th, eta);
            for (double ratio : {1.5, 20.0})
            {
                double const rho = ratio * uc / (params.d * gamma);
                JensenReport const j = jensen_check(params, eta, u_th, rho,
                                                    opts.jensen_profiles / 4,
                                                    derive_seed(opts.seed, 100 + eta));
                c.n_cases += j.n_profiles;
                c.n_failures += j.n_violations;
                c.worst_residual = std::max(c.worst_residual, std::max(0.0, j.worst_excess));
            }
        }
        rows.push_back(c);
    }

    // Sweep protocol: coverage and post-sweep width.
    {
        CheckResult cover{"sweep_coverage"};
        CheckResult width{"sweep_width"};
        std::uint64_t point = 0;
        for (int eta : {2, 3, 5})
        {
            for (double stretch : {1.0, 3.0})
            {
                SweepSchedule const s = build_schedule(params, stretch * min_uth(params, eta), eta);
                CoverageReport const r = monte_carlo_cycles(
                    params, s, opts.trajectories, derive_seed(opts.seed, 200 + point++), opts.threads);
                cover.n_cases += r.trajectories;
                cover.n_failures += r.uncovered;
                cover.worst_residual = std::max(
                    cover.worst_residual,
                    static_cast<double>(r.uncovered) / static_cast<double>(r.trajectories));

                // Every trajectory must end inside its beam's u_comm window,
                // and no beam's observed spread may exceed u_comm.
                double const excess = std::max(0.0, r.worst_span_excess());
                width.n_cases += r.trajectories;
                width.n_failures += r.window_violations;
                if (excess > opts.span_tol)
                {
                    ++width.n_failures;
                }
                width.worst_residual = std::max(width.worst_residual, excess);
            }
        }
        rows.push_back(cover);
        rows.push_back(width);
    }

    // f_eta: sign against a finite difference of the rate along the
    // power-tight manifold, monotonicity, and boundary signs.
    {
        CheckResult sign{"f_eta_sign"};
        CheckResult mono{"f_eta_monotone"};
        for (double budget : {0.1, 1.0, 10.0, 100.0})
        {
            int const top = std::min(eta_max(budget), 8);
            for (int eta = 2; eta <= top; ++eta)
            {
                double const lo = shrinkage_bound(eta);
                double const hi = upsilon_max(eta, budget);
                auto along = [&](double v) {
                    return detail::r_hat_unchecked(eta, v, zeta_of(v, eta, budget));
                };
                for (std::size_t k = 0; k < opts.f_eta_points; ++k)
                {
                    double const v = lo + (hi - lo) * (0.01 + 0.98 * uni(rng));
                    double const h = 1e-6 * v;
                    double const fd = (along(v + h) - along(v - h)) / (2.0 * h);
                    double const f = f_eta(v, eta, budget);
                    bool const ambiguous = std::abs(fd) * h <= 1e-12 * std::abs(along(v));
                    bool const agree = ambiguous || ((fd > 0.0) == (f > 0.0));
                    record(sign, agree ? 0.0 : std::abs(fd), !agree);
                }

                double prev = f_eta(lo * (1.0 + 1e-9), eta, budget);
                record(mono, 0.0, !(prev > 0.0));
                for (int k = 1; k <= 100; ++k)
                {
                    double const v = lo + (hi - lo) * k / 100.0;
                    double const f = f_eta(v, eta, budget);
                    bool const ok = f < prev;
                    record(mono, ok ? 0.0 : f - prev, !ok);
                    prev = f;
                }
                double const f_top = f_eta(hi, eta, budget);
                record(mono, std::max(0.0, f_top), !(f_top < 0.0));
            }
        }
        rows.push_back(sign);
        rows.push_back(mono);
    }

    {
        CheckResult c{"optimizer_power_tight"};
        OptimalDesign const d = optimize(params);
        double const e = relative(d.p_bar_star, params.p_max);
        record(c, e, !(e <= 1e-8));
        rows.push_back(c);
    }
    return rows;
}

void write_report_csv(std::ostream& os, const std::vector<CheckResult>& rows)
{
    os << "check_name,n_cases,n_failures,worst_residual\n";
    char buf[64];
    for (auto const& r : rows)
    {
        std::snprintf(buf, sizeof buf, "%.12g", r.worst_residual);
        os << r.check_name << ',' << r.n_cases << ',' << r.n_failures << ',' << buf << '\n';
    }
}

}  // namespace mmbeam
