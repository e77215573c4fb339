#pragma once

// Single cable between a noisy source impedance and a reflective load.

#include "tlnoise/spectrum.hpp"
#include "tlnoise/wave.hpp"

namespace tlnoise {

struct CableSetup {
    CableSegment cable;
    Termination load = Termination::matched();
    Termination source_impedance = Termination::matched();
    /// Source magnitude v_b^2 in V^2/Hz.
    double source_power = 0.0;

    void validate() const;
};

/// Setup whose source power is the thermal noise of a z0 resistor at T.
CableSetup thermal_cable_setup(const CableSegment& cable, const Termination& load,
                               double temperature_k = constants::room_temperature);

/// Pole-proximity threshold on |exp(2ikL) - Gl Gb|.
inline constexpr double resonance_epsilon = 1e-9;

/// v0 / vb = Z0 / (Zb + Z0); exactly 0 for an open source.
cplx source_divided_voltage(const CableSetup& setup);

/// Returning-wave amplitude of the given order, normalized to vb.
///
/// Order 0 is the direct wave v0. Order m >= 1 is the pair formed by the
/// m-th wave coming back from the load and its re-reflection off the source:
/// v0 Gl^m Gb^(m-1) exp(-2imkL) (1 + Gb).
cplx bounce_term(const CableSetup& setup, double frequency_hz, int index);

/// vs / vb summed over every reflection. Throws ResonancePole when the
/// denominator magnitude drops below resonance_epsilon.
cplx total_voltage_closed_form(const CableSetup& setup, double frequency_hz);

/// Partial sum of the first `terms` bounce terms (orders 0 .. terms-1).
cplx bounce_series_oracle(const CableSetup& setup, double frequency_hz, int terms);

/// Power delivered to a matched source, in V^2/Hz.
///
/// Short and Open loads use sin^2(kL) and cos^2(kL) directly, Matched is
/// exactly vb^2/4. Throws UnmatchedSource unless Zb = Z0, InvalidArgument
/// for a load with a reactive part.
double matched_source_power(const CableSetup& setup, double frequency_hz);

/// Pointwise power over the grid. Points sitting on a lossless double-mirror
/// resonance are flagged as excluded with NaN power.
NoiseSpectrum cable_noise_spectrum(const CableSetup& setup, const FrequencyGrid& grid);

}  // namespace tlnoise
