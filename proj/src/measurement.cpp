#include "tlnoise/measurement.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

constexpr double nan = std::numeric_limits<double>::quiet_NaN();

}  // namespace

void DisplayModel::validate() const {
    if (!std::isfinite(a)) fail(ErrorCode::ValidationError, "display offset a must be finite");
    if (!(sn >= 0.0) || !std::isfinite(sn))
        fail(ErrorCode::ValidationError, "display noise floor must satisfy sn >= 0");
}

std::vector<double> normalize_to_matched(std::span<const double> raw,
                                         std::span<const double> reference) {
    if (raw.size() != reference.size())
        fail(ErrorCode::InvalidArgument, "raw and reference spectra differ in length");
    std::vector<double> out(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        if (std::isnan(raw[i]) || std::isnan(reference[i])) {
            out[i] = nan;
            continue;
        }
        if (!(reference[i] > 0.0))
            fail(ErrorCode::ZeroReference,
                 "reference power is not positive at point " + std::to_string(i));
        out[i] = raw[i] / reference[i];
    }
    return out;
}

double display_level(double relative_power, const DisplayModel& model) {
    if (std::isnan(relative_power)) return nan;
    const double arg = relative_power + model.sn;
    if (!(arg > 0.0))
        fail(ErrorCode::NonPositiveArgument, "relative power + sn must be positive for the log");
    return model.a + std::log10(arg);
}

double relative_power_from_display(double level, const DisplayModel& model) {
    return std::pow(DisplayModel::log_base, level - model.a) - model.sn;
}

std::vector<double> apply_display_model(std::span<const double> relative_power,
                                        const DisplayModel& model) {
    std::vector<double> out(relative_power.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = display_level(relative_power[i], model);
    return out;
}

void ModelParameters::validate() const {
    display.validate();
    if (kind == ModelKind::SingleCable)
        cable.validate();
    else
        splitter.validate();
}

NoiseSpectrum linear_spectrum(const ModelParameters& params, const FrequencyGrid& grid) {
    params.validate();
    if (params.kind == ModelKind::SingleCable) return cable_noise_spectrum(params.cable, grid);
    NoiseSpectrum out;
    out.frequencies = grid.values();
    out.linear_power.resize(grid.size());
    out.excluded.assign(grid.size(), false);
    for (std::size_t i = 0; i < grid.size(); ++i)
        out.linear_power[i] = splitter_noise_power(params.splitter, grid[i]);
    return out;
}

NoiseSpectrum matched_reference_spectrum(const ModelParameters& params,
                                         const FrequencyGrid& grid) {
    ModelParameters reference = params;
    reference.cable.load = Termination::matched();
    reference.splitter.arm3.termination = Termination::matched();
    reference.splitter.arm4.termination = Termination::matched();
    return linear_spectrum(reference, grid);
}

NoiseSpectrum model_spectrum(const ModelParameters& params, const FrequencyGrid& grid) {
    NoiseSpectrum spectrum = linear_spectrum(params, grid);
    const NoiseSpectrum reference = matched_reference_spectrum(params, grid);
    spectrum.linear_power = normalize_to_matched(spectrum.linear_power, reference.linear_power);
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        if (std::isnan(spectrum.linear_power[i])) spectrum.excluded[i] = true;
    spectrum.display_level = apply_display_model(spectrum.linear_power, params.display);
    return spectrum;
}

NoiseSpectrum synth_spectrum(const ModelParameters& truth, const FrequencyGrid& grid,
                             double noise_sigma, std::uint64_t seed) {
    if (!(noise_sigma >= 0.0)) fail(ErrorCode::InvalidArgument, "noise sigma must be >= 0");
    NoiseSpectrum spectrum = model_spectrum(truth, grid);
    if (noise_sigma == 0.0) return spectrum;
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sigma);
    for (std::size_t i = 0; i < spectrum.size(); ++i) {
        const double dy = noise(rng);
        if (!spectrum.excluded[i]) spectrum.display_level[i] += dy;
    }
    return spectrum;
}

}  // namespace tlnoise
