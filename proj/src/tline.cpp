#include "tlnoise/tline.hpp"

#include <cmath>
#include <limits>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

// Closed form and series are evaluated in extended precision and rounded
// once, so both land within an ulp of the exact value even near nulls.
using xcplx = std::complex<long double>;

// std::pow(complex, int) goes through log() and turns 0^0 into NaN.
xcplx int_power(xcplx base, int exponent) {
    xcplx result(1.0L, 0.0L);
    while (exponent > 0) {
        if (exponent & 1) result *= base;
        base *= base;
        exponent >>= 1;
    }
    return result;
}

xcplx widen(cplx z) { return {z.real(), z.imag()}; }
cplx narrow(xcplx z) { return {static_cast<double>(z.real()), static_cast<double>(z.imag())}; }

struct Reflections {
    xcplx v0, gl, gb;
    long double kl;
};

Reflections reflections_of(const CableSetup& setup, double frequency_hz) {
    const double z0 = setup.cable.z0_ohm;
    return {widen(source_divided_voltage(setup)),
            widen(reflection_coefficient(setup.load, z0)),
            widen(reflection_coefficient(setup.source_impedance, z0)),
            static_cast<long double>(wavenumber(frequency_hz, setup.cable.n) * setup.cable.length_m)};
}

xcplx wide_bounce_term(const Reflections& r, int index) {
    if (index == 0) return r.v0;
    const xcplx round_trips = std::polar(1.0L, -2.0L * index * r.kl);
    // Wave returning from the load plus its immediate re-reflection at the source.
    return r.v0 * int_power(r.gl, index) * int_power(r.gb, index - 1) * round_trips * (1.0L + r.gb);
}

}  // namespace

namespace {

bool is_reactive(const Termination& t) { return t.is_finite() && t.value().imag() != 0.0; }

}  // namespace

void CableSetup::validate() const {
    cable.validate();
    if (!(source_power >= 0.0) || !std::isfinite(source_power))
        fail(ErrorCode::ValidationError, "source power must satisfy source_power >= 0");
}

CableSetup thermal_cable_setup(const CableSegment& cable, const Termination& load,
                               double temperature_k) {
    CableSetup setup;
    setup.cable = cable;
    setup.load = load;
    setup.source_impedance = Termination::matched();
    setup.source_power = thermal_source_power(temperature_k, cable.z0_ohm);
    setup.validate();
    return setup;
}

cplx source_divided_voltage(const CableSetup& setup) {
    const double z0 = setup.cable.z0_ohm;
    const auto& zb = setup.source_impedance;
    if (zb.is_open()) return {0.0, 0.0};
    if (zb.is_matched()) return {0.5, 0.0};
    return z0 / (*zb.impedance(z0) + z0);
}

cplx bounce_term(const CableSetup& setup, double frequency_hz, int index) {
    if (index < 0) fail(ErrorCode::InvalidArgument, "bounce index must be >= 0");
    return narrow(wide_bounce_term(reflections_of(setup, frequency_hz), index));
}

cplx total_voltage_closed_form(const CableSetup& setup, double frequency_hz) {
    const Reflections r = reflections_of(setup, frequency_hz);
    // (exp(2ikL) + Gl) / (exp(2ikL) - Gl Gb), numerator and denominator both
    // scaled by the unit phasor exp(-2ikL); the pole test is unaffected.
    const xcplx round_trip = std::polar(1.0L, -2.0L * r.kl);
    const xcplx denominator = 1.0L - r.gl * r.gb * round_trip;
    if (std::abs(denominator) < resonance_epsilon)
        fail(ErrorCode::ResonancePole, "lossless resonance: |exp(2ikL) - Gl Gb| < 1e-9 at f = " +
                                           std::to_string(frequency_hz) + " Hz");
    return narrow(r.v0 * (1.0L + r.gl * round_trip) / denominator);
}

cplx bounce_series_oracle(const CableSetup& setup, double frequency_hz, int terms) {
    if (terms < 1) fail(ErrorCode::InvalidArgument, "bounce series needs at least one term");
    const Reflections r = reflections_of(setup, frequency_hz);
    xcplx sum(0.0L, 0.0L);
    for (int m = 0; m < terms; ++m) sum += wide_bounce_term(r, m);
    return narrow(sum);
}

double matched_source_power(const CableSetup& setup, double frequency_hz) {
    const double z0 = setup.cable.z0_ohm;
    if (!setup.source_impedance.matches(z0))
        fail(ErrorCode::UnmatchedSource, "matched-source power requires Zb = Z0");
    const double vb2 = setup.source_power;
    const auto& load = setup.load;
    if (load.matches(z0)) return vb2 / 4.0;

    const double kl = wavenumber(frequency_hz, setup.cable.n) * setup.cable.length_m;
    const double c = std::cos(kl);
    const double s = std::sin(kl);
    switch (load.kind()) {
        case Termination::Kind::Short: return vb2 * s * s;
        case Termination::Kind::Open: return vb2 * c * c;
        case Termination::Kind::Matched: return vb2 / 4.0;
        case Termination::Kind::Finite: break;
    }
    if (is_reactive(load))
        fail(ErrorCode::InvalidArgument, "matched-source power needs a real load impedance");
    const double zl = load.value().real();
    const double sum = z0 + zl;
    return vb2 * (zl * zl * c * c + z0 * z0 * s * s) / (sum * sum);
}

NoiseSpectrum cable_noise_spectrum(const CableSetup& setup, const FrequencyGrid& grid) {
    setup.validate();
    const bool pointwise_eq6 =
        setup.source_impedance.matches(setup.cable.z0_ohm) && !is_reactive(setup.load);
    NoiseSpectrum out;
    out.frequencies = grid.values();
    out.linear_power.resize(grid.size());
    out.excluded.assign(grid.size(), false);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double f = grid[i];
        if (pointwise_eq6) {
            out.linear_power[i] = matched_source_power(setup, f);
            continue;
        }
        try {
            out.linear_power[i] = std::norm(total_voltage_closed_form(setup, f)) * setup.source_power;
        } catch (const Error& e) {
            if (e.code() != ErrorCode::ResonancePole) throw;
            out.linear_power[i] = std::numeric_limits<double>::quiet_NaN();
            out.excluded[i] = true;
        }
    }
    return out;
}

}  // namespace tlnoise
