#include "tlnoise/tlnoise.h"

#include <sstream>
#include <string>

#include "tlnoise/commands.hpp"
#include "tlnoise/error.hpp"

struct tln_config {
    tlnoise::TopologyConfig config;
};

struct tln_spectrum {
    tlnoise::NoiseSpectrum spectrum;
};

struct tln_fit {
    tlnoise::FitProblem problem;
    tlnoise::FitResult result;
    tlnoise::FitReport report;
};

namespace {

thread_local std::string last_error;

tln_status status_of(tlnoise::ErrorCode code) {
    using tlnoise::ErrorCode;
    switch (code) {
        case ErrorCode::InvalidArgument: return TLN_INVALID_ARGUMENT;
        case ErrorCode::ResonancePole: return TLN_RESONANCE_POLE;
        case ErrorCode::UnmatchedSource: return TLN_UNMATCHED_SOURCE;
        case ErrorCode::UnmatchedJ1: return TLN_UNMATCHED_J1;
        case ErrorCode::DegenerateSource: return TLN_DEGENERATE_SOURCE;
        case ErrorCode::NonPositiveArgument: return TLN_NON_POSITIVE_ARGUMENT;
        case ErrorCode::ZeroReference: return TLN_ZERO_REFERENCE;
        case ErrorCode::InsufficientData: return TLN_INSUFFICIENT_DATA;
        case ErrorCode::ParseError: return TLN_PARSE_ERROR;
        case ErrorCode::ValidationError: return TLN_VALIDATION_ERROR;
        case ErrorCode::FormatError: return TLN_FORMAT_ERROR;
        case ErrorCode::NonMonotonicFrequency: return TLN_NON_MONOTONIC_FREQUENCY;
        case ErrorCode::Io: return TLN_IO_ERROR;
    }
    return TLN_INTERNAL_ERROR;
}

// Runs body, translating exceptions into a status and last_error.
template <typename F>
tln_status guarded(F&& body) noexcept {
    try {
        last_error.clear();
        return body();
    } catch (const tlnoise::Error& e) {
        last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        last_error = "out of memory";
    } catch (const std::exception& e) {
        last_error = e.what();
    } catch (...) {
        last_error = "unknown error";
    }
    return TLN_INTERNAL_ERROR;
}

tln_status null_argument(const char* what) {
    last_error = std::string(what) + " must not be NULL";
    return TLN_INVALID_ARGUMENT;
}

std::vector<tlnoise::Param> parse_param_list(const char* list) {
    std::vector<tlnoise::Param> params;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos) continue;
        params.push_back(tlnoise::parse_param(item.substr(b, e - b + 1)));
    }
    if (params.empty())
        tlnoise::fail(tlnoise::ErrorCode::InvalidArgument, "no free parameters given");
    return params;
}

}  // namespace

extern "C" {

const char* tln_version(void) { return "1.0.0"; }

const char* tln_status_name(tln_status status) {
    switch (status) {
        case TLN_OK: return "ok";
        case TLN_INVALID_ARGUMENT: return "invalid argument";
        case TLN_PARSE_ERROR: return "parse error";
        case TLN_VALIDATION_ERROR: return "validation error";
        case TLN_IO_ERROR: return "i/o error";
        case TLN_FORMAT_ERROR: return "format error";
        case TLN_NON_MONOTONIC_FREQUENCY: return "non-monotonic frequency";
        case TLN_RESONANCE_POLE: return "resonance pole";
        case TLN_UNMATCHED_SOURCE: return "unmatched source";
        case TLN_UNMATCHED_J1: return "unmatched J1";
        case TLN_DEGENERATE_SOURCE: return "degenerate source";
        case TLN_NON_POSITIVE_ARGUMENT: return "non-positive argument";
        case TLN_ZERO_REFERENCE: return "zero reference";
        case TLN_INSUFFICIENT_DATA: return "insufficient data";
        case TLN_NOT_CONVERGED: return "not converged";
        case TLN_ORACLE_MISMATCH: return "oracle mismatch";
        case TLN_INTERNAL_ERROR: return "internal error";
    }
    return "unknown status";
}

const char* tln_last_error(void) { return last_error.c_str(); }

tln_status tln_config_parse(const char* text, tln_config** out) {
    if (!text) return null_argument("text");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        *out = new tln_config{tlnoise::parse_config(text)};
        return TLN_OK;
    });
}

tln_status tln_config_load(const char* path, tln_config** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        *out = new tln_config{tlnoise::load_config(path)};
        return TLN_OK;
    });
}

void tln_config_free(tln_config* config) { delete config; }

int tln_config_is_splitter(const tln_config* config) {
    return config && config->config.model.kind == tlnoise::ModelKind::Splitter ? 1 : 0;
}

tln_status tln_simulate(const tln_config* config, tln_spectrum** out) {
    if (!config) return null_argument("config");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        *out = new tln_spectrum{tlnoise::simulate(config->config)};
        return TLN_OK;
    });
}

tln_status tln_spectrum_read_csv(const char* path, tln_spectrum** out) {
    if (!path) return null_argument("path");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        *out = new tln_spectrum{tlnoise::read_spectrum_csv(std::filesystem::path(path))};
        return TLN_OK;
    });
}

tln_status tln_spectrum_write_csv(const tln_spectrum* spectrum, const char* path, int normalized) {
    if (!spectrum) return null_argument("spectrum");
    if (!path) return null_argument("path");
    return guarded([&] {
        std::ostringstream buffer;
        tlnoise::write_spectrum_csv(spectrum->spectrum, buffer,
                                    normalized ? tlnoise::LevelColumn::Linear
                                               : tlnoise::LevelColumn::Display);
        tlnoise::write_file_atomic(path, buffer.str());
        return TLN_OK;
    });
}

size_t tln_spectrum_size(const tln_spectrum* spectrum) {
    return spectrum ? spectrum->spectrum.size() : 0;
}

tln_status tln_spectrum_point(const tln_spectrum* spectrum, size_t index, double* frequency_hz,
                              double* level, int* excluded) {
    if (!spectrum) return null_argument("spectrum");
    const auto& s = spectrum->spectrum;
    if (index >= s.size()) {
        last_error = "spectrum index out of range";
        return TLN_INVALID_ARGUMENT;
    }
    if (frequency_hz) *frequency_hz = s.frequencies[index];
    if (level) *level = s.display_level.empty() ? s.linear_power[index] : s.display_level[index];
    if (excluded) *excluded = s.excluded[index] ? 1 : 0;
    return TLN_OK;
}

void tln_spectrum_free(tln_spectrum* spectrum) { delete spectrum; }

tln_status tln_sweep_write_csv(const tln_config* config, int arm, double from_m, double to_m,
                               int steps, const char* path, size_t* rows_written) {
    if (!config) return null_argument("config");
    if (!path) return null_argument("path");
    if (arm != 3 && arm != 4) {
        last_error = "arm must be 3 or 4";
        return TLN_INVALID_ARGUMENT;
    }
    return guarded([&] {
        const auto surface = tlnoise::sweep(config->config, static_cast<tlnoise::Arm>(arm), from_m,
                                            to_m, steps);
        std::ostringstream buffer;
        tlnoise::write_sweep_csv(surface, buffer);
        tlnoise::write_file_atomic(path, buffer.str());
        if (rows_written) *rows_written = surface.power.size();
        return TLN_OK;
    });
}

tln_status tln_fit_run(const tln_config* config, const tln_spectrum* observed,
                       const char* free_params, int max_iterations, tln_fit** out) {
    if (!config) return null_argument("config");
    if (!observed) return null_argument("observed");
    if (!free_params) return null_argument("free_params");
    if (!out) return null_argument("out");
    *out = nullptr;
    return guarded([&] {
        auto problem = tlnoise::make_fit_problem(config->config, observed->spectrum,
                                                 parse_param_list(free_params));
        auto fit_config = tlnoise::make_fit_config(config->config);
        if (max_iterations > 0) fit_config.simplex.max_iterations = max_iterations;
        auto result = tlnoise::fit(problem, fit_config);
        auto report = tlnoise::fit_report(result, problem);
        const bool converged = result.converged;
        *out = new tln_fit{std::move(problem), std::move(result), std::move(report)};
        return converged ? TLN_OK : TLN_NOT_CONVERGED;
    });
}

int tln_fit_converged(const tln_fit* fit) { return fit && fit->result.converged ? 1 : 0; }

double tln_fit_rss(const tln_fit* fit) { return fit ? fit->result.rss : 0.0; }

int tln_fit_iterations(const tln_fit* fit) { return fit ? fit->result.iterations : 0; }

tln_status tln_fit_value(const tln_fit* fit, const char* name, double* out) {
    if (!fit) return null_argument("fit");
    if (!name) return null_argument("name");
    if (!out) return null_argument("out");
    return guarded([&] {
        const auto p = tlnoise::parse_param(name);
        const auto& free = fit->problem.free_parameters;
        for (std::size_t i = 0; i < free.size(); ++i) {
            if (free[i].id == p) {
                *out = fit->result.values[i];
                return TLN_OK;
            }
        }
        *out = tlnoise::get_param(fit->problem.base, p);
        return TLN_OK;
    });
}

const char* tln_fit_report_json(const tln_fit* fit) { return fit ? fit->report.json.c_str() : ""; }

const char* tln_fit_report_text(const tln_fit* fit) { return fit ? fit->report.text.c_str() : ""; }

tln_status tln_fit_write_report(const tln_fit* fit, const char* path) {
    if (!fit) return null_argument("fit");
    if (!path) return null_argument("path");
    return guarded([&] {
        tlnoise::write_file_atomic(path, fit->report.json + "\n");
        return TLN_OK;
    });
}

void tln_fit_free(tln_fit* fit) { delete fit; }

tln_status tln_oracle_check(const tln_config* config, int terms, int samples, uint64_t seed,
                            double* max_deviation, int* evaluated) {
    if (!config) return null_argument("config");
    return guarded([&] {
        const auto check = tlnoise::oracle_check(config->config, terms, samples, seed);
        if (max_deviation) *max_deviation = check.max_deviation;
        if (evaluated) *evaluated = check.evaluated;
        return check.max_deviation < tlnoise::oracle_tolerance ? TLN_OK : TLN_ORACLE_MISMATCH;
    });
}

tln_status tln_reflection_coefficient(tln_termination_kind kind, double re, double im, double z0,
                                      double* out_re, double* out_im) {
    if (!out_re || !out_im) return null_argument("output");
    return guarded([&] {
        tlnoise::Termination t = tlnoise::Termination::matched();
        switch (kind) {
            case TLN_SHORT: t = tlnoise::Termination::short_circuit(); break;
            case TLN_OPEN: t = tlnoise::Termination::open_circuit(); break;
            case TLN_MATCHED: break;
            case TLN_FINITE: t = tlnoise::Termination::finite({re, im}); break;
            default:
                tlnoise::fail(tlnoise::ErrorCode::InvalidArgument, "unknown termination kind");
        }
        const auto g = tlnoise::reflection_coefficient(t, z0);
        *out_re = g.real();
        *out_im = g.imag();
        return TLN_OK;
    });
}

tln_status tln_wavenumber(double frequency_hz, double n, double* out) {
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = tlnoise::wavenumber(frequency_hz, n);
        return TLN_OK;
    });
}

tln_status tln_thermal_source_power(double temperature_k, double resistance_ohm, double* out) {
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = tlnoise::thermal_source_power(temperature_k, resistance_ohm);
        return TLN_OK;
    });
}

tln_status tln_model_power(const tln_config* config, double frequency_hz, double* out) {
    if (!config) return null_argument("config");
    if (!out) return null_argument("out");
    return guarded([&] {
        const auto s = tlnoise::linear_spectrum(config->config.model,
                                                tlnoise::FrequencyGrid({frequency_hz}));
        if (s.excluded[0])
            tlnoise::fail(tlnoise::ErrorCode::ResonancePole, "frequency sits on a resonance pole");
        *out = s.linear_power[0];
        return TLN_OK;
    });
}

tln_status tln_total_noise_power(const tln_config* config, double frequency_hz, double* out) {
    if (!config) return null_argument("config");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = tlnoise::total_noise_power(config->config.model.splitter, frequency_hz);
        return TLN_OK;
    });
}

tln_status tln_limit_noise_power(const tln_config* config, double frequency_hz, int m3, int m4,
                                 double* out) {
    if (!config) return null_argument("config");
    if (!out) return null_argument("out");
    return guarded([&] {
        *out = tlnoise::limit_noise_power(config->config.model.splitter, frequency_hz, {m3, m4});
        return TLN_OK;
    });
}

}  // extern "C"
