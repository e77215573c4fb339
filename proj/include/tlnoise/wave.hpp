#pragma once

// Complex-phasor primitives shared by the cable and splitter models.

#include <complex>
#include <optional>

namespace tlnoise {

using cplx = std::complex<double>;

namespace constants {
inline constexpr double speed_of_light = 2.99792458e8;  // m/s
inline constexpr double boltzmann = 1.380649e-23;       // J/K
inline constexpr double pi = 3.14159265358979323846;
inline constexpr double default_z0 = 50.0;
inline constexpr double default_refractive_index = 1.60;
inline constexpr double room_temperature = 290.0;
}  // namespace constants

/// Load at the end of a port or cable.
///
/// Open is kept symbolic so that every expression depending on it can use
/// the exact |Z| -> infinity limit instead of a large stand-in value.
class Termination {
public:
    enum class Kind { Short, Open, Matched, Finite };

    static Termination short_circuit() { return Termination(Kind::Short, 0.0); }
    static Termination open_circuit() { return Termination(Kind::Open, 0.0); }
    static Termination matched() { return Termination(Kind::Matched, 0.0); }
    /// Throws InvalidArgument when Re(z) < 0 or z is not finite.
    static Termination finite(cplx z);

    Kind kind() const noexcept { return kind_; }
    bool is_short() const noexcept { return kind_ == Kind::Short; }
    bool is_open() const noexcept { return kind_ == Kind::Open; }
    bool is_matched() const noexcept { return kind_ == Kind::Matched; }
    bool is_finite() const noexcept { return kind_ == Kind::Finite; }

    /// Impedance in ohms against a line of impedance z0; nullopt for Open.
    std::optional<cplx> impedance(double z0) const;

    /// Short, Matched, or a Finite value equal to z0.
    bool matches(double z0) const noexcept;

    /// Nominal value stored for Finite terminations.
    cplx value() const noexcept { return value_; }

    bool operator==(const Termination&) const = default;

private:
    Termination(Kind kind, cplx value) : kind_(kind), value_(value) {}

    Kind kind_;
    cplx value_;
};

/// One lossless coaxial run.
struct CableSegment {
    double length_m = 0.0;
    double z0_ohm = constants::default_z0;
    double n = constants::default_refractive_index;

    /// Throws ValidationError naming the violated bound.
    void validate() const;
};

/// (Z - z0) / (Z + z0), with the exact values -1, +1 and 0 for Short, Open
/// and Matched.
cplx reflection_coefficient(const Termination& load, double z0);

/// k = 2 pi f n / c.
double wavenumber(double frequency_hz, double n);

/// exp(-i k L) for a lossless line.
cplx propagation_phase(double frequency_hz, double n, double length_m);

/// Johnson-Nyquist open-circuit voltage density 4 kB T Z in V^2/Hz.
double thermal_source_power(double temperature_k, double resistance_ohm);

}  // namespace tlnoise
