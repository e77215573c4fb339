#pragma once

// Four-port splitter with reflective cables on the two input ports.
//
// Port numbering follows the hardware: J2 faces the pre-amplifier through a
// cable of length L_A, J1 is the sum port (normally matched), J3 and J4 carry
// the reflective arms. Phase factors are exp(-ikL) along cables and
// exp(+i w tau) across the splitter, with w = 2 pi f.

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "tlnoise/spectrum.hpp"
#include "tlnoise/wave.hpp"

namespace tlnoise {

class SplitterModel {
public:
    using ComplexMatrix = std::array<std::array<cplx, 4>, 4>;
    using DelayMatrix = std::array<std::array<double, 4>, 4>;

    /// Ideal sum/difference splitter with zero delays.
    static SplitterModel ideal();
    /// Ideal scattering amplitudes plus the fitted H2979 delays
    /// (tau_31 = tau_41 = 5.31 ns, tau_32 = tau_42 = 8.46 ns).
    static SplitterModel h2979_fit();
    /// Throws ValidationError for an unknown profile name.
    static SplitterModel from_profile(const std::string& name);

    /// Ports are 1-based, matching J1..J4.
    cplx s(int i, int j) const { return s_.at(i - 1).at(j - 1); }
    double tau(int i, int j) const { return tau_.at(i - 1).at(j - 1); }

    void set_s(int i, int j, cplx value) { s_.at(i - 1).at(j - 1) = value; }
    /// Sets tau_ij and tau_ji together.
    void set_tau(int i, int j, double seconds);
    /// Sets only tau_ij; used to describe asymmetric hardware.
    void set_tau_directed(int i, int j, double seconds) { tau_.at(i - 1).at(j - 1) = seconds; }

    const ComplexMatrix& s_matrix() const noexcept { return s_; }
    const DelayMatrix& tau_matrix() const noexcept { return tau_; }

private:
    ComplexMatrix s_{};
    DelayMatrix tau_{};
};

struct SplitterValidation {
    /// max |(B^H B - I)_ij| over the 2x2 input/output block B.
    double unitarity_defect = 0.0;
    /// |det B|; zero for a rank-deficient block.
    double block_determinant = 0.0;
    /// max |tau_ij - tau_ji|.
    double tau_asymmetry = 0.0;
    bool unitary = false;
    bool symmetric = false;
    bool passed = false;
    /// Modelling assumptions the noise expressions rely on.
    std::vector<std::string> notes;
};

inline constexpr double unitarity_tolerance = 1e-12;

SplitterValidation validate_splitter(const SplitterModel& model);

struct ArmSetup {
    double length_m = 0.0;
    Termination termination = Termination::matched();
};

enum class Arm { J3 = 3, J4 = 4 };

struct SplitterSetup {
    SplitterModel splitter = SplitterModel::h2979_fit();
    ArmSetup arm3;
    ArmSetup arm4;
    double amp_cable_m = 0.0;
    Termination j1_termination = Termination::matched();
    double j1_cable_m = 0.0;
    /// Pre-amplifier input impedance z2.
    Termination source_impedance = Termination::matched();
    double temperature_k = constants::room_temperature;
    double z0_ohm = constants::default_z0;
    double n = constants::default_refractive_index;

    const ArmSetup& arm(Arm which) const { return which == Arm::J3 ? arm3 : arm4; }
    ArmSetup& arm(Arm which) { return which == Arm::J3 ? arm3 : arm4; }

    void validate() const;
};

/// Short/open state of the two reflective arms: 0 is a short, 1 an open.
struct LimitIndex {
    int m3 = 0;
    int m4 = 0;
};

/// v2a / v20: the amplifier's own noise wave plus its round trips through
/// each arm. Throws UnmatchedJ1 unless J1 is matched.
cplx reflected_wave_response(const SplitterSetup& setup, double frequency_hz);

/// Noise voltage density (V/sqrt(Hz)) from the resistor terminating arm 3 or
/// 4, as it arrives at the amplifier. Throws DegenerateSource when the
/// termination has no resistive part (Short, Open, zero or purely reactive).
cplx arm_noise_contribution(const SplitterSetup& setup, double frequency_hz, Arm arm);

/// Noise voltage density from the J1 termination, routed through both arms
/// and out of J2. Throws DegenerateSource unless Z1 is finite and positive.
cplx j1_noise_contribution(const SplitterSetup& setup, double frequency_hz);

/// Total mean-square voltage at the amplifier input (V^2/Hz) from all four
/// independent thermal sources, in closed form. Open arms and an open z2 are
/// evaluated through the exact limit of every rational coefficient.
///
/// The closed form carries the J1 source at Z1 = Z0; throws UnmatchedJ1
/// otherwise and InvalidArgument for reactive terminations.
double total_noise_power(const SplitterSetup& setup, double frequency_hz);

/// Short/open limiting form with the (-1)^m sign structure.
double limit_noise_power(const SplitterSetup& setup, double frequency_hz, LimitIndex limits);

/// LimitIndex for arms that are both Short or Open; nullopt otherwise.
std::optional<LimitIndex> limit_index_of(const SplitterSetup& setup);

/// limit_noise_power when both arms are Short/Open and z2 = Z0, otherwise
/// total_noise_power.
double splitter_noise_power(const SplitterSetup& setup, double frequency_hz);

/// Power over (length x frequency), row-major by length.
struct PowerSurface {
    std::vector<double> lengths;
    std::vector<double> frequencies;
    std::vector<double> power;

    double at(std::size_t length_index, std::size_t frequency_index) const {
        return power[length_index * frequencies.size() + frequency_index];
    }
};

PowerSurface sweep_arm_length(const SplitterSetup& setup, const FrequencyGrid& grid, Arm arm,
                              const std::vector<double>& lengths);

}  // namespace tlnoise
