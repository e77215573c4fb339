#pragma once

// Maps linear model power onto analyzer display levels.

#include <cstdint>
#include <span>
#include <vector>

#include "tlnoise/spectrum.hpp"
#include "tlnoise/splitter.hpp"
#include "tlnoise/tline.hpp"

namespace tlnoise {

/// level = a + log10(relative_power + sn)
struct DisplayModel {
    double a = 0.0;
    double sn = 0.0;
    static constexpr double log_base = 10.0;

    void validate() const;
};

/// raw / reference per point. NaN entries pass through unchanged; a zero or
/// negative reference throws ZeroReference.
std::vector<double> normalize_to_matched(std::span<const double> raw,
                                         std::span<const double> reference);

double display_level(double relative_power, const DisplayModel& model);
/// Inverse of display_level: 10^(level - a) - sn.
double relative_power_from_display(double level, const DisplayModel& model);

/// Throws NonPositiveArgument where relative_power + sn <= 0. NaN passes through.
std::vector<double> apply_display_model(std::span<const double> relative_power,
                                        const DisplayModel& model);

enum class ModelKind { SingleCable, Splitter };

/// Everything needed to produce a display-level spectrum.
struct ModelParameters {
    ModelKind kind = ModelKind::SingleCable;
    CableSetup cable;
    SplitterSetup splitter;
    DisplayModel display;

    void validate() const;
};

/// Linear power of the chosen topology (V^2/Hz), excluded points flagged.
NoiseSpectrum linear_spectrum(const ModelParameters& params, const FrequencyGrid& grid);

/// Power of the same topology with every reflective termination replaced by
/// a matched load.
NoiseSpectrum matched_reference_spectrum(const ModelParameters& params, const FrequencyGrid& grid);

/// Normalized relative power plus display levels.
NoiseSpectrum model_spectrum(const ModelParameters& params, const FrequencyGrid& grid);

/// model_spectrum with seeded zero-mean Gaussian noise of the given standard
/// deviation added to every display level.
NoiseSpectrum synth_spectrum(const ModelParameters& truth, const FrequencyGrid& grid,
                             double noise_sigma, std::uint64_t seed);

}  // namespace tlnoise
