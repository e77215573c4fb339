#pragma once

// Derivative-free least-squares recovery of model parameters from spectra.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlnoise/measurement.hpp"
#include "tlnoise/nelder_mead.hpp"

namespace tlnoise {

enum class Param { L_A, L_3, L_4, n, a, sn, tau_23, tau_24, tau_13, tau_14 };

std::string_view param_name(Param p) noexcept;
/// Accepts the canonical names plus "L" for L_A. Throws InvalidArgument.
Param parse_param(std::string_view name);
/// Current value of p inside params.
double get_param(const ModelParameters& params, Param p);
void set_param(ModelParameters& params, Param p, double value);
/// Parameters that move spectral features (lengths, index, delays).
bool is_shape_param(Param p) noexcept;

struct FreeParameter {
    Param id;
    Bounds bounds;
    double initial;
};

struct FitProblem {
    NoiseSpectrum observed;
    /// Values of every parameter that is not free.
    ModelParameters base;
    std::vector<FreeParameter> free_parameters;

    /// Bounds finite and ordered, initial inside, sn >= 0, n >= 1, no
    /// duplicates, parameters applicable to the model kind.
    void validate() const;
};

struct FitConfig {
    SimplexOptions simplex;
    /// Starts per shape parameter on an evenly spaced lattice inside its
    /// bounds; 1 uses the initial guess only.
    int multistart = 1;
};

struct FitResult {
    std::vector<double> values;  // aligned with problem.free_parameters
    double rss = 0.0;
    double initial_rss = 0.0;
    int iterations = 0;
    bool converged = false;
    std::size_t excluded_points = 0;
    std::size_t used_points = 0;
};

/// observed - model display levels over points included in both.
std::vector<double> residuals(const FitProblem& problem, std::span<const double> candidate);

/// Throws InsufficientData when there are fewer than twice as many included
/// points as free parameters, or when the observed levels are flat while a
/// shape parameter is free. A hit iteration cap is reported through
/// converged = false, not an exception.
FitResult fit(const FitProblem& problem, const FitConfig& config = {});

struct FitReport {
    std::string text;
    std::string json;
};

FitReport fit_report(const FitResult& result, const FitProblem& problem);

}  // namespace tlnoise
