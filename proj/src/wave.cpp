#include "tlnoise/wave.hpp"

#include <cmath>

#include "tlnoise/error.hpp"

namespace tlnoise {

Termination Termination::finite(cplx z) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        fail(ErrorCode::InvalidArgument, "termination impedance must be finite");
    if (z.real() < 0.0)
        fail(ErrorCode::InvalidArgument, "termination impedance must have Re(Z) >= 0");
    return Termination(Kind::Finite, z);
}

std::optional<cplx> Termination::impedance(double z0) const {
    switch (kind_) {
        case Kind::Short: return cplx(0.0, 0.0);
        case Kind::Open: return std::nullopt;
        case Kind::Matched: return cplx(z0, 0.0);
        case Kind::Finite: return value_;
    }
    return std::nullopt;
}

bool Termination::matches(double z0) const noexcept {
    return kind_ == Kind::Matched || (kind_ == Kind::Finite && value_ == cplx(z0, 0.0));
}

void CableSegment::validate() const {
    if (!(length_m >= 0.0) || !std::isfinite(length_m))
        fail(ErrorCode::ValidationError, "cable length must satisfy length >= 0");
    if (!(z0_ohm > 0.0) || !std::isfinite(z0_ohm))
        fail(ErrorCode::ValidationError, "characteristic impedance must satisfy z0 > 0");
    if (!(n >= 1.0) || !std::isfinite(n))
        fail(ErrorCode::ValidationError, "refractive index must satisfy n >= 1");
}

cplx reflection_coefficient(const Termination& load, double z0) {
    if (!(z0 > 0.0)) fail(ErrorCode::InvalidArgument, "z0 must be positive");
    switch (load.kind()) {
        case Termination::Kind::Short: return {-1.0, 0.0};
        case Termination::Kind::Open: return {1.0, 0.0};
        case Termination::Kind::Matched: return {0.0, 0.0};
        case Termination::Kind::Finite: break;
    }
    const cplx z = load.value();
    return (z - z0) / (z + z0);
}

double wavenumber(double frequency_hz, double n) {
    if (!(frequency_hz >= 0.0)) fail(ErrorCode::InvalidArgument, "frequency must be >= 0");
    return 2.0 * constants::pi * frequency_hz * n / constants::speed_of_light;
}

cplx propagation_phase(double frequency_hz, double n, double length_m) {
    if (!(length_m >= 0.0)) fail(ErrorCode::InvalidArgument, "length must be >= 0");
    const double phase = wavenumber(frequency_hz, n) * length_m;
    return {std::cos(phase), -std::sin(phase)};
}

double thermal_source_power(double temperature_k, double resistance_ohm) {
    if (!(temperature_k >= 0.0)) fail(ErrorCode::InvalidArgument, "temperature must be >= 0");
    if (!(resistance_ohm >= 0.0)) fail(ErrorCode::InvalidArgument, "resistance must be >= 0");
    return 4.0 * constants::boltzmann * temperature_k * resistance_ohm;
}

}  // namespace tlnoise
