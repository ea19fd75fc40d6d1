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

#include "phasecap/phasecap.h"

#include "phasecap/bounds.hpp"
#include "phasecap/channel.hpp"
#include "phasecap/error.hpp"
#include "phasecap/sweep.hpp"

#include <cmath>
#include <cstring>
#include <iostream>
#include <limits>
#include <new>
#include <string>

struct phasecap_config {
    phasecap::sweep::ExperimentConfig config;
};

struct phasecap_channel {
    phasecap::channel::ChannelParams params;
};

namespace {

thread_local std::string g_last_error;

phasecap_status fail(phasecap_status status, std::string message)
{
    g_last_error = std::move(message);
    return status;
}

template <typename F>
phasecap_status guarded(F&& body)
{
    using namespace phasecap;
    try {
        g_last_error.clear();
        return body();
    } catch (const ConfigError& e) {
        return fail(PHASECAP_E_CONFIG, e.what());
    } catch (const ConstraintError& e) {
        return fail(PHASECAP_E_CONSTRAINT, e.what());
    } catch (const RankError& e) {
        return fail(PHASECAP_E_RANK, e.what());
    } catch (const OptimizationError& e) {
        return fail(PHASECAP_E_OPTIMIZATION, e.what());
    } catch (const NumericError& e) {
        return fail(PHASECAP_E_NUMERIC, e.what());
    } catch (const DomainError& e) {
        return fail(PHASECAP_E_DOMAIN, e.what());
    } catch (const SchemaError& e) {
        return fail(PHASECAP_E_SCHEMA, e.what());
    } catch (const IoError& e) {
        return fail(PHASECAP_E_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(PHASECAP_E_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(PHASECAP_E_INTERNAL, e.what());
    } catch (...) {
        return fail(PHASECAP_E_INTERNAL, "unknown error");
    }
}

phasecap_status copy_out(const std::string& s, char* buf, size_t capacity, size_t* needed)
{
    if (needed)
        *needed = s.size() + 1;
    if (capacity == 0)
        return PHASECAP_OK;
    if (!buf)
        return fail(PHASECAP_E_USAGE, "buffer is null");
    if (capacity < s.size() + 1)
        return fail(PHASECAP_E_USAGE, "buffer too small");
    std::memcpy(buf, s.c_str(), s.size() + 1);
    return PHASECAP_OK;
}

bool valid_kind(int k)
{
    return k >= PHASECAP_KIND_U && k <= PHASECAP_KIND_NONUNITARY_LOWER;
}

} // namespace

extern "C" {

const char* phasecap_version(void)
{
    return "0.1.0";
}

const char* phasecap_last_error(void)
{
    return g_last_error.c_str();
}

const char* phasecap_status_name(phasecap_status status)
{
    switch (status) {
    case PHASECAP_OK: return "ok";
    case PHASECAP_E_USAGE: return "usage error";
    case PHASECAP_E_NUMERIC: return "numeric failure";
    case PHASECAP_E_DOMAIN: return "domain error";
    case PHASECAP_E_CONFIG: return "configuration error";
    case PHASECAP_E_CONSTRAINT: return "constraint violation";
    case PHASECAP_E_RANK: return "rank-deficient channel";
    case PHASECAP_E_SCHEMA: return "schema error";
    case PHASECAP_E_IO: return "i/o error";
    case PHASECAP_E_OPTIMIZATION: return "optimization failure";
    case PHASECAP_E_INTERNAL: return "internal error";
    }
    return "unknown status";
}

const char* phasecap_kind_name(phasecap_kind kind)
{
    if (!valid_kind(kind))
        return "unknown";
    return phasecap::bounds::kind_name(static_cast<phasecap::bounds::Kind>(kind)).data();
}

phasecap_status phasecap_kind_parse(const char* name, phasecap_kind* out)
{
    if (!name || !out)
        return fail(PHASECAP_E_USAGE, "null argument");
    const auto k = phasecap::bounds::parse_kind(name);
    if (!k)
        return fail(PHASECAP_E_USAGE, std::string("unknown kind: ") + name);
    *out = static_cast<phasecap_kind>(*k);
    return PHASECAP_OK;
}

phasecap_status phasecap_config_load(const char* path, phasecap_config** out)
{
    if (!path || !out)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        *out = new phasecap_config{phasecap::sweep::load_config(path)};
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_config_parse(const char* text, const char* base_dir, phasecap_config** out)
{
    if (!text || !out)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        *out = new phasecap_config{phasecap::sweep::parse_config(text, base_dir ? base_dir : "")};
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_config_set(phasecap_config* config, const char* section, const char* key, const char* value)
{
    if (!config || !section || !key || !value)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        phasecap::sweep::set_field(config->config, section, key, value);
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_config_validate(const phasecap_config* config)
{
    if (!config)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        phasecap::sweep::validate(config->config);
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_config_canonical(const phasecap_config* config, char* buf, size_t capacity, size_t* needed)
{
    if (!config)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] { return copy_out(phasecap::sweep::canonical_text(config->config), buf, capacity, needed); });
}

void phasecap_config_free(phasecap_config* config)
{
    delete config;
}

phasecap_status phasecap_sweep_run(const phasecap_config* config, int verbose, phasecap_sweep_summary* summary)
{
    if (!config)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        const auto s = phasecap::sweep::run_sweep(config->config, verbose ? &std::cerr : nullptr);
        if (summary)
            *summary = {s.rows, s.computed, s.cached, s.failed};
        if (s.failed > 0)
            return fail(PHASECAP_E_NUMERIC,
                        (std::to_string(s.failed) + " of " + std::to_string(s.rows) + " rows failed").c_str());
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_plot_emit(const char* csv_path, const char* figure_id, const char* out_path,
                                   char* written_path, size_t capacity, size_t* needed)
{
    if (!csv_path || !figure_id)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        const auto path = phasecap::sweep::emit_plot_script(csv_path, figure_id, out_path ? out_path : "");
        return copy_out(path.string(), written_path, capacity, needed);
    });
}

phasecap_status phasecap_wavelength(double frequency_hz, double* out_m)
{
    if (!out_m)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        *out_m = phasecap::channel::wavelength_from_frequency(frequency_hz);
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_los_spacing(double frequency_hz, double range_m, int antennas, double* out_m)
{
    if (!out_m)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        const double lambda = phasecap::channel::wavelength_from_frequency(frequency_hz);
        *out_m = phasecap::channel::los_antenna_spacing(lambda, range_m, antennas);
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_avg_peak_gap(int antennas, double* out_nats)
{
    if (!out_nats)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        *out_nats = phasecap::bounds::avg_peak_gap(antennas);
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_asymptotic_capacity(int antennas, double sigma_delta_rad, double snr_db, double* out_bits)
{
    if (!out_bits)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        const double nats = phasecap::bounds::asymptotic_capacity_nats(antennas, sigma_delta_rad,
                                                                        phasecap::bounds::db_to_linear(snr_db));
        *out_bits = nats / std::log(2.0);
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_channel_create(int antennas, double sigma_delta_rad, phasecap_channel** out)
{
    if (!out)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        phasecap::channel::ChannelParams p;
        p.antennas = antennas;
        p.sigma_delta = sigma_delta_rad;
        p.validate();
        *out = new phasecap_channel{std::move(p)};
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_channel_load(const char* matrix_path, double sigma_delta_rad, phasecap_channel** out)
{
    if (!matrix_path || !out)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        phasecap::channel::ChannelParams p;
        p.h_matrix = phasecap::channel::load_matrix(matrix_path);
        if (p.h_matrix->rows() != p.h_matrix->cols())
            throw phasecap::DomainError("channel matrix must be square");
        p.antennas = static_cast<int>(p.h_matrix->rows());
        p.sigma_delta = sigma_delta_rad;
        p.validate();
        *out = new phasecap_channel{std::move(p)};
        return PHASECAP_OK;
    });
}

phasecap_status phasecap_channel_eigen_bounds(const phasecap_channel* channel, double* lambda_min, double* lambda_max)
{
    if (!channel || !lambda_min || !lambda_max)
        return fail(PHASECAP_E_USAGE, "null argument");
    return guarded([&] {
        const auto eb = phasecap::channel::singular_value_bounds(channel->params.effective_h());
        *lambda_min = eb.lambda_min;
        *lambda_max = eb.lambda_max;
        return PHASECAP_OK;
    });
}

void phasecap_channel_free(phasecap_channel* channel)
{
    delete channel;
}

void phasecap_mc_controls_default(phasecap_mc_controls* out)
{
    if (!out)
        return;
    const phasecap::bounds::McControls mc;
    *out = {mc.n_samples, mc.block_length, mc.n_blocks, mc.q_levels, mc.past_window};
}

phasecap_status phasecap_evaluate(const phasecap_channel* channel, phasecap_kind kind, double snr_db,
                                  const phasecap_mc_controls* mc, uint64_t seed, phasecap_record* out)
{
    if (!channel || !out)
        return fail(PHASECAP_E_USAGE, "null argument");
    if (!valid_kind(kind))
        return fail(PHASECAP_E_USAGE, "unknown kind");
    return guarded([&] {
        using phasecap::bounds::Kind;
        namespace b = phasecap::bounds;
        b::McControls controls;
        if (mc)
            controls = {mc->n_samples, mc->block_length, mc->n_blocks, mc->q_levels, mc->past_window};
        auto params = channel->params;
        params.snr = b::db_to_linear(snr_db);
        const auto eb = phasecap::channel::singular_value_bounds(params.effective_h());
        auto identity = params;
        identity.h_matrix.reset();
        const bool unit = std::abs(eb.lambda_min - 1.0) < 1e-9 && std::abs(eb.lambda_max - 1.0) < 1e-9;
        const auto k = static_cast<Kind>(kind);
        if (!unit && k != Kind::qam_lower && k != Kind::nonunitary_upper && k != Kind::nonunitary_lower)
            throw phasecap::DomainError("this kind needs a unitary channel");
        const auto qam = phasecap::channel::Constellation::qam(64);
        const b::GridControls grid;
        b::BoundRecord rec;
        switch (k) {
        case Kind::upper: rec = b::upper_bound_U(identity, grid, controls, seed); break;
        case Kind::upper_simplified: rec = b::upper_bound_Us(identity, grid, controls, seed); break;
        case Kind::memoryless_plus_corr: rec = b::memoryless_plus_correction(identity, grid); break;
        case Kind::asymptotic: rec = b::asymptotic_capacity(identity); break;
        case Kind::qam_lower: rec = b::qam_lower(params, qam, controls, seed); break;
        case Kind::nonunitary_upper:
            identity.snr *= eb.lambda_max;
            rec = b::upper_bound_U(identity, grid, controls, seed);
            break;
        case Kind::nonunitary_lower:
            identity.snr *= eb.lambda_min;
            rec = b::qam_lower(identity, qam, controls, seed);
            break;
        }
        const double nan = std::numeric_limits<double>::quiet_NaN();
        *out = {snr_db,
                kind,
                rec.value_bits,
                rec.std_error_bits,
                rec.opt_alpha.value_or(nan),
                rec.opt_xi.value_or(nan),
                rec.n_samples,
                rec.seed};
        return PHASECAP_OK;
    });
}

} // extern "C"
