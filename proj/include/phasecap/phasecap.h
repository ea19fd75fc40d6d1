// Copyright 2026 The phasecap Authors
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

/* C interface to the phasecap library. Every call returns a status code;
 * on failure phasecap_last_error() describes the problem (thread-local). */

#ifndef PHASECAP_PHASECAP_H
#define PHASECAP_PHASECAP_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define PHASECAP_API __declspec(dllexport)
#else
#define PHASECAP_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum phasecap_status {
    PHASECAP_OK = 0,
    PHASECAP_E_USAGE = 1,
    PHASECAP_E_NUMERIC = 2,
    PHASECAP_E_DOMAIN = 3,
    PHASECAP_E_CONFIG = 4,
    PHASECAP_E_CONSTRAINT = 5,
    PHASECAP_E_RANK = 6,
    PHASECAP_E_SCHEMA = 7,
    PHASECAP_E_IO = 8,
    PHASECAP_E_OPTIMIZATION = 9,
    PHASECAP_E_INTERNAL = 10
} phasecap_status;

typedef enum phasecap_kind {
    PHASECAP_KIND_U = 0,
    PHASECAP_KIND_U_S = 1,
    PHASECAP_KIND_ASYMPTOTIC = 2,
    PHASECAP_KIND_MEMORYLESS_PLUS_CORR = 3,
    PHASECAP_KIND_QAM_LOWER = 4,
    PHASECAP_KIND_NONUNITARY_UPPER = 5,
    PHASECAP_KIND_NONUNITARY_LOWER = 6
} phasecap_kind;

typedef struct phasecap_config phasecap_config;
typedef struct phasecap_channel phasecap_channel;

typedef struct phasecap_sweep_summary {
    size_t rows;
    size_t computed;
    size_t cached;
    size_t failed;
} phasecap_sweep_summary;

typedef struct phasecap_mc_controls {
    int64_t n_samples;
    int block_length;
    int n_blocks;
    int q_levels;
    int past_window;
} phasecap_mc_controls;

/* opt_alpha / opt_xi are NaN for kinds that do not optimize. */
typedef struct phasecap_record {
    double snr_db;
    phasecap_kind kind;
    double value_bits;
    double std_error_bits;
    double opt_alpha;
    double opt_xi;
    int64_t n_samples;
    uint64_t seed;
} phasecap_record;

PHASECAP_API const char* phasecap_version(void);
PHASECAP_API const char* phasecap_last_error(void);
PHASECAP_API const char* phasecap_status_name(phasecap_status status);
PHASECAP_API const char* phasecap_kind_name(phasecap_kind kind);
PHASECAP_API phasecap_status phasecap_kind_parse(const char* name, phasecap_kind* out);

/* Configuration. */
PHASECAP_API phasecap_status phasecap_config_load(const char* path, phasecap_config** out);
PHASECAP_API phasecap_status phasecap_config_parse(const char* text, const char* base_dir, phasecap_config** out);
PHASECAP_API phasecap_status phasecap_config_set(phasecap_config* config, const char* section, const char* key,
                                                 const char* value);
PHASECAP_API phasecap_status phasecap_config_validate(const phasecap_config* config);
/* Copies the canonical text into buf (may be NULL when capacity is 0) and
 * stores the required size including the terminator in *needed. */
PHASECAP_API phasecap_status phasecap_config_canonical(const phasecap_config* config, char* buf, size_t capacity,
                                                       size_t* needed);
PHASECAP_API void phasecap_config_free(phasecap_config* config);

/* Sweeps and plots. A sweep with failed rows still writes the CSV and
 * returns PHASECAP_E_NUMERIC. */
PHASECAP_API phasecap_status phasecap_sweep_run(const phasecap_config* config, int verbose,
                                                phasecap_sweep_summary* summary);
/* out_path may be NULL; written_path receives the script path. */
PHASECAP_API phasecap_status phasecap_plot_emit(const char* csv_path, const char* figure_id, const char* out_path,
                                                char* written_path, size_t capacity, size_t* needed);

/* Helpers. */
PHASECAP_API phasecap_status phasecap_wavelength(double frequency_hz, double* out_m);
PHASECAP_API phasecap_status phasecap_los_spacing(double frequency_hz, double range_m, int antennas, double* out_m);
PHASECAP_API phasecap_status phasecap_avg_peak_gap(int antennas, double* out_nats);
PHASECAP_API phasecap_status phasecap_asymptotic_capacity(int antennas, double sigma_delta_rad, double snr_db,
                                                          double* out_bits);

/* Channels. */
PHASECAP_API phasecap_status phasecap_channel_create(int antennas, double sigma_delta_rad, phasecap_channel** out);
PHASECAP_API phasecap_status phasecap_channel_load(const char* matrix_path, double sigma_delta_rad,
                                                   phasecap_channel** out);
PHASECAP_API phasecap_status phasecap_channel_eigen_bounds(const phasecap_channel* channel, double* lambda_min,
                                                           double* lambda_max);
PHASECAP_API void phasecap_channel_free(phasecap_channel* channel);

PHASECAP_API void phasecap_mc_controls_default(phasecap_mc_controls* out);
/* Evaluates one quantity at one SNR. QAM kinds use peak-normalized 64-QAM. */
PHASECAP_API phasecap_status phasecap_evaluate(const phasecap_channel* channel, phasecap_kind kind, double snr_db,
                                               const phasecap_mc_controls* mc, uint64_t seed,
                                               phasecap_record* out);

#ifdef __cplusplus
}
#endif

#endif
