#include "tlnoise/commands.hpp"

#include <cmath>
#include <random>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

Bounds default_bounds(Param p, double value) {
    switch (p) {
        case Param::L_A:
        case Param::L_3:
        case Param::L_4:
            return value > 0.0 ? Bounds{0.8 * value, 1.2 * value} : Bounds{0.0, 1.0};
        case Param::n: return {std::max(1.0, 0.8 * value), std::max(1.2 * value, 1.5)};
        case Param::a: return {value - 1.0, value + 1.0};
        case Param::sn: return {0.0, 2.0 * value + 1.0};
        default: break;
    }
    if (value == 0.0) return {0.0, 20e-9};
    const double lo = 0.8 * value, hi = 1.2 * value;
    return {std::min(lo, hi), std::max(lo, hi)};
}

}  // namespace

NoiseSpectrum simulate(const TopologyConfig& config) {
    return model_spectrum(config.model, config.grid.grid());
}

PowerSurface sweep(const TopologyConfig& config, Arm arm, double from_m, double to_m, int steps) {
    if (config.model.kind != ModelKind::Splitter)
        fail(ErrorCode::ValidationError, "sweep requires mode \"splitter\"");
    if (!(from_m >= 0.0) || !(to_m >= from_m))
        fail(ErrorCode::ValidationError, "sweep range requires 0 <= from <= to");
    std::vector<double> lengths;
    if (to_m == from_m) {
        lengths.push_back(from_m);
    } else {
        if (steps < 2) fail(ErrorCode::ValidationError, "sweep over a range needs steps >= 2");
        for (int i = 0; i < steps; ++i)
            lengths.push_back(from_m + (to_m - from_m) * i / (steps - 1));
        lengths.back() = to_m;
    }
    const FrequencyGrid grid = config.grid.grid();
    PowerSurface surface = sweep_arm_length(config.model.splitter, grid, arm, lengths);
    const NoiseSpectrum reference = matched_reference_spectrum(config.model, grid);
    const std::size_t nf = grid.size();
    for (std::size_t r = 0; r < lengths.size(); ++r) {
        for (std::size_t c = 0; c < nf; ++c) {
            double& v = surface.power[r * nf + c];
            v = display_level(v / reference.linear_power[c], config.model.display);
        }
    }
    return surface;
}

OracleCheck oracle_check(const TopologyConfig& config, int terms, int samples, std::uint64_t seed) {
    if (config.model.kind != ModelKind::SingleCable)
        fail(ErrorCode::ValidationError, "oracle check requires mode \"single-cable\"");
    if (terms < 1 || samples < 1)
        fail(ErrorCode::ValidationError, "oracle check needs terms >= 1 and samples >= 1");
    const auto& setup = config.model.cable;
    const double z0 = setup.cable.z0_ohm;
    const double loop = std::abs(reflection_coefficient(setup.load, z0) *
                                 reflection_coefficient(setup.source_impedance, z0));
    if (loop >= 1.0)
        fail(ErrorCode::ValidationError, "bounce series diverges: |Gl Gb| = 1 (lossless cavity)");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> frequency(config.grid.start_hz, config.grid.stop_hz);
    OracleCheck check;
    for (int i = 0; i < samples; ++i) {
        const double f = frequency(rng);
        cplx closed;
        try {
            closed = total_voltage_closed_form(setup, f);
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ResonancePole) throw;
            ++check.skipped;
            continue;
        }
        const cplx series = bounce_series_oracle(setup, f, terms);
        const double scale = std::abs(closed);
        const double deviation = scale > 0.0 ? std::abs(series - closed) / scale : std::abs(series);
        check.max_deviation = std::max(check.max_deviation, deviation);
        ++check.evaluated;
    }
    return check;
}

FitProblem make_fit_problem(const TopologyConfig& config, NoiseSpectrum observed,
                            const std::vector<Param>& free_parameters) {
    FitProblem problem;
    problem.observed = std::move(observed);
    problem.base = config.model;
    for (Param p : free_parameters) {
        const double value = get_param(config.model, p);
        const auto init = config.fit.initial.find(p);
        const auto bounds = config.fit.bounds.find(p);
        FreeParameter fp{p, bounds != config.fit.bounds.end() ? bounds->second : default_bounds(p, value),
                         init != config.fit.initial.end() ? init->second : value};
        problem.free_parameters.push_back(fp);
    }
    problem.validate();
    return problem;
}

FitConfig make_fit_config(const TopologyConfig& config) {
    FitConfig fc;
    fc.simplex.max_iterations = config.fit.max_iterations;
    fc.simplex.x_tolerance = config.fit.x_tolerance;
    fc.multistart = config.fit.multistart;
    return fc;
}

}  // namespace tlnoise
