#pragma once

// The operations behind each command-line verb.

#include <cstdint>
#include <vector>

#include "tlnoise/config.hpp"
#include "tlnoise/csv.hpp"

namespace tlnoise {

/// Display-level spectrum (with normalized relative power in linear_power).
NoiseSpectrum simulate(const TopologyConfig& config);

/// Display levels over (arm length x frequency). Splitter mode only.
/// A zero-width range yields a single row regardless of `steps`.
PowerSurface sweep(const TopologyConfig& config, Arm arm, double from_m, double to_m, int steps);

struct OracleCheck {
    double max_deviation = 0.0;
    int evaluated = 0;
    int skipped = 0;  // samples that landed on a resonance pole
};

inline constexpr double oracle_tolerance = 1e-10;

/// Bounce series against the closed form at `samples` seeded random
/// frequencies inside the config grid. Deviation is relative to the closed
/// form, absolute where the closed form is exactly zero. Throws
/// ValidationError for single-cable configs with |Gl Gb| >= 1.
OracleCheck oracle_check(const TopologyConfig& config, int terms, int samples, std::uint64_t seed);

/// Problem over `observed` with the config as base; bounds and initial
/// values come from the fit settings or default around the config values.
FitProblem make_fit_problem(const TopologyConfig& config, NoiseSpectrum observed,
                            const std::vector<Param>& free_parameters);

FitConfig make_fit_config(const TopologyConfig& config);

}  // namespace tlnoise
