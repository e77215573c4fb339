#pragma once

// Topology configuration documents (JSON, comments allowed).
//
//   {
//     "mode": "single-cable" | "splitter",
//     "temperature_k": 290,
//     "cable":    { "length_m", "z0_ohm", "n", "termination", "source_termination" },
//     "splitter": { "profile", "arm3": {"length_m", "termination"}, "arm4": {...},
//                   "amp_cable_m", "j1_termination", "j1_cable_m", "temperature_k",
//                   "source_termination", "tau_ns": {"13": .., "14": .., "23": .., "24": ..} },
//     "display":  { "a", "sn" },
//     "grid":     { "start_hz", "stop_hz", "points" },
//     "fit":      { "max_iterations", "x_tolerance", "multistart",
//                   "initial": {"L": ..}, "bounds": {"L": [lo, hi]} }
//   }
//
// Terminations are "short", "open", "matched" or a number of ohms. In
// splitter mode the shared z0 and n come from the cable block.

#include <cstddef>
#include <filesystem>
#include <map>
#include <string_view>

#include "tlnoise/fitter.hpp"
#include "tlnoise/measurement.hpp"

namespace tlnoise {

struct GridConfig {
    double start_hz = 1e6;
    double stop_hz = 100e6;
    std::size_t points = 2000;

    FrequencyGrid grid() const;
};

struct FitSettings {
    std::map<Param, Bounds> bounds;
    std::map<Param, double> initial;
    int max_iterations = 5000;
    double x_tolerance = 1e-6;
    int multistart = 1;
};

struct TopologyConfig {
    ModelParameters model;
    GridConfig grid;
    FitSettings fit;
};

/// Throws ParseError (with line/column or key path) for malformed documents
/// and unknown keys, ValidationError for out-of-range values.
TopologyConfig parse_config(std::string_view text);

/// Throws Io when the file cannot be read.
TopologyConfig load_config(const std::filesystem::path& path);

/// "short" | "open" | "matched" | ohms. Throws ParseError.
Termination parse_termination(std::string_view text);

}  // namespace tlnoise
