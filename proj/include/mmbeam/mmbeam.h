/* SPDX-License-Identifier: Apache-2.0
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 * ------------------------------------------------------------------------
 *
 * C interface to the mmbeam library: beam-sweeping / data-communication cycle
 * model for a mobile mm-wave user, its rate-optimal design, an 802.11ad-style
 * reference, and the verification suites.
 *
 * Every call returns an mmb_status. On failure a description of the last
 * error on the calling thread is available from mmb_last_error(). Objects are
 * opaque handles created by mmb_*_create / mmb_*_build / mmb_optimize /
 * mmb_verify and released with the matching *_destroy function. Handles are
 * not shared between threads by the library; distinct handles may be used
 * concurrently.
 */

#ifndef MMBEAM_MMBEAM_H
#define MMBEAM_MMBEAM_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(MMBEAM_BUILDING)
#    define MMB_API __declspec(dllexport)
#  else
#    define MMB_API __declspec(dllimport)
#  endif
#else
#  define MMB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum mmb_status
{
    MMB_OK = 0,
    MMB_ERR_INVALID_ARGUMENT = 1, /* null handle, unknown key, bad index */
    MMB_ERR_DOMAIN = 2,           /* input outside an operation's domain */
    MMB_ERR_INFEASIBLE = 3,       /* no design satisfies the constraints */
    MMB_ERR_SINGULAR = 4,         /* formula evaluated at a pole */
    MMB_ERR_INTERNAL = 5,
    MMB_ERR_IO = 6
} mmb_status;

typedef struct mmb_params mmb_params;
typedef struct mmb_schedule mmb_schedule;
typedef struct mmb_design mmb_design;
typedef struct mmb_report mmb_report;

MMB_API const char* mmb_last_error(void);
MMB_API const char* mmb_status_string(mmb_status status);

/* ---- System parameters ------------------------------------------------ */

/* Creates parameters holding the default scenario: 60 GHz carrier
 * (lambda = 5 mm), 1.76 GHz bandwidth, N0 = -174 dBm/Hz, 10 us microslot,
 * d = 10 m, xi = 1, phi = 40 m/s, v_drift = 0, p_max = 1e-4 W. */
MMB_API mmb_status mmb_params_create(mmb_params** out);
MMB_API mmb_status mmb_params_clone(const mmb_params* params, mmb_params** out);
MMB_API void mmb_params_destroy(mmb_params* params);

/* Keys: w_tot, lambda, n0 (W/Hz), delta_s, d, xi, phi, v_drift, p_max. */
MMB_API mmb_status mmb_params_set(mmb_params* params, const char* key, double value);
MMB_API mmb_status mmb_params_get(const mmb_params* params, const char* key, double* value);
MMB_API mmb_status mmb_params_validate(const mmb_params* params);

/* ---- Cycle geometry ---------------------------------------------------- */

MMB_API mmb_status mmb_uncertainty_after(double u0, double phi, double dt, double* out);
MMB_API mmb_status mmb_min_uth(const mmb_params* params, int eta, double* out);

/* Fails with MMB_ERR_INFEASIBLE when u_th < mmb_min_uth. */
MMB_API mmb_status mmb_schedule_build(const mmb_params* params, double u_th, int eta,
                                      mmb_schedule** out);
MMB_API void mmb_schedule_destroy(mmb_schedule* schedule);
MMB_API int mmb_schedule_eta(const mmb_schedule* schedule);
MMB_API double mmb_schedule_u_th(const mmb_schedule* schedule);
MMB_API double mmb_schedule_u_comm(const mmb_schedule* schedule);
MMB_API double mmb_schedule_t_cycle(const mmb_schedule* schedule);
/* index is 0-based. */
MMB_API mmb_status mmb_schedule_beam(const mmb_schedule* schedule, int index,
                                     double* omega, double* lo, double* hi);

/* Writes 1 to *warn when u_th / d exceeds threshold (radians). */
MMB_API mmb_status mmb_small_angle_check(const mmb_params* params, double u_th,
                                         double threshold, int* warn);

/* ---- Performance -------------------------------------------------------- */

MMB_API mmb_status mmb_snr_gamma(const mmb_params* params, double* out);
MMB_API mmb_status mmb_p_hat_max(const mmb_params* params, double* out);
MMB_API mmb_status mmb_avg_rate(const mmb_params* params, int eta, double u_th,
                                double rho, double* out);
MMB_API mmb_status mmb_avg_power(const mmb_params* params, int eta, double u_th,
                                 double rho, double* out);
MMB_API mmb_status mmb_r_hat(int eta, double upsilon, double zeta, double* out);
MMB_API mmb_status mmb_p_hat(int eta, double upsilon, double zeta, double* out);

/* ---- Optimization ------------------------------------------------------- */

typedef struct mmb_design_summary
{
    int eta_star;
    double upsilon_star;
    double zeta_star;
    double u_th_star;           /* m */
    double rho_star;
    double r_bar_star;          /* bit/s */
    double p_bar_star;
    double t_cycle;             /* s */
    double spectral_efficiency; /* bit/s/Hz */
    double p_hat_max;
    int degenerate;             /* budget too small for a meaningful design */
} mmb_design_summary;

MMB_API mmb_status mmb_optimize(const mmb_params* params, mmb_design** out);
MMB_API void mmb_design_destroy(mmb_design* design);
MMB_API mmb_status mmb_design_summary_get(const mmb_design* design, mmb_design_summary* out);
MMB_API size_t mmb_design_eta_count(const mmb_design* design);
MMB_API mmb_status mmb_design_eta_entry(const mmb_design* design, size_t index, int* eta,
                                        double* upsilon, double* zeta, double* r_hat);

MMB_API mmb_status mmb_eta_max(double p_hat_max, int* out);
MMB_API mmb_status mmb_upsilon_max(int eta, double p_hat_max, double* out);
MMB_API mmb_status mmb_bisect_upsilon(int eta, double p_hat_max, double tol, double* out);

/* ---- 802.11ad-style reference ------------------------------------------ */

typedef struct mmb_baseline_result
{
    double f_comm;
    double r_bar;               /* bit/s */
    double p_bar;
    double spectral_efficiency; /* bit/s/Hz */
} mmb_baseline_result;

MMB_API mmb_status mmb_baseline(const mmb_params* params, double beamwidth_deg,
                                double v_max, double p_t, mmb_baseline_result* out);
MMB_API mmb_status mmb_baseline_power_for_avg(const mmb_params* params, double beamwidth_deg,
                                              double v_max, double p_bar_target, double* p_t);

/* ---- Verification ------------------------------------------------------- */

typedef struct mmb_verify_options
{
    uint64_t seed;
    double perturb_closed_form; /* relative fault injected into closed forms */
    size_t trajectories;        /* per sweep test point; 0 keeps the default */
    unsigned threads;           /* 0: hardware concurrency */
} mmb_verify_options;

MMB_API void mmb_verify_options_init(mmb_verify_options* opts);
MMB_API mmb_status mmb_verify(const mmb_params* params, const mmb_verify_options* opts,
                              mmb_report** out);
MMB_API void mmb_report_destroy(mmb_report* report);
MMB_API size_t mmb_report_count(const mmb_report* report);
MMB_API mmb_status mmb_report_row(const mmb_report* report, size_t index, const char** name,
                                  size_t* n_cases, size_t* n_failures, double* worst_residual);
MMB_API size_t mmb_report_total_failures(const mmb_report* report);
/* Columns: check_name,n_cases,n_failures,worst_residual. */
MMB_API mmb_status mmb_report_write_csv(const mmb_report* report, const char* path);

#ifdef __cplusplus
}
#endif

#endif /* MMBEAM_MMBEAM_H */
