#include "tlnoise/splitter.hpp"

#include <algorithm>
#include <cmath>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

constexpr double ns = 1e-9;

const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

double omega(double frequency_hz) { return 2.0 * constants::pi * frequency_hz; }

void require_matched_j1(const SplitterSetup& setup) {
    if (!setup.j1_termination.matches(setup.z0_ohm))
        fail(ErrorCode::UnmatchedJ1, "J1 must be terminated with a matched load");
}

// The closed forms bake in the ideal +-1/sqrt(2) amplitudes.
void require_ideal_amplitudes(const SplitterModel& model) {
    const auto ideal = SplitterModel::ideal();
    for (int i = 1; i <= 4; ++i)
        for (int j = 1; j <= 4; ++j)
            if (std::abs(model.s(i, j) - ideal.s(i, j)) > 1e-12)
                fail(ErrorCode::InvalidArgument,
                     "closed-form noise power assumes the ideal splitter amplitudes");
}

// Thermal source density behind a divider into the line: Z0/(Z+Z0) sqrt(4kTR).
cplx divided_thermal_source(const Termination& t, double z0, double temperature_k,
                            const char* what) {
    if (t.is_short() || t.is_open())
        fail(ErrorCode::DegenerateSource, std::string(what) + " is not a resistive source");
    const cplx z = *t.impedance(z0);
    if (!(z.real() > 0.0))
        fail(ErrorCode::DegenerateSource, std::string(what) + " has no resistive part");
    return z0 / (z + z0) * std::sqrt(thermal_source_power(temperature_k, z.real()));
}

// Each Z in the closed form appears through Z0/(Z0+Z) and Z/(Z0+Z); the pair
// has exact values at both limits.
struct Weights {
    double u;  // Z0 / (Z0 + Z)
    double w;  // Z  / (Z0 + Z)
};

Weights weights_of(const Termination& t, double z0) {
    switch (t.kind()) {
        case Termination::Kind::Short: return {1.0, 0.0};
        case Termination::Kind::Open: return {0.0, 1.0};
        case Termination::Kind::Matched: return {0.5, 0.5};
        case Termination::Kind::Finite: break;
    }
    if (t.value().imag() != 0.0)
        fail(ErrorCode::InvalidArgument, "closed-form noise power needs real terminations");
    const double z = t.value().real();
    return {z0 / (z0 + z), z / (z0 + z)};
}

struct Phases {
    double p3;     // 2(kL_A + kL_3 - w tau_23)
    double p4;     // 2(kL_A + kL_4 - w tau_24)
    double cross;  // 2kL_3 - 2kL_4 - w tau_13 + w tau_14 - w tau_23 + w tau_24
    double diff;   // 2(kL_3 - kL_4 - w tau_23 + w tau_24)
};

Phases phases_of(const SplitterSetup& setup, double frequency_hz) {
    const double k = wavenumber(frequency_hz, setup.n);
    const double w = omega(frequency_hz);
    const auto& m = setup.splitter;
    const double kla = k * setup.amp_cable_m;
    const double kl3 = k * setup.arm3.length_m;
    const double kl4 = k * setup.arm4.length_m;
    Phases p;
    p.p3 = 2.0 * (kla + kl3 - w * m.tau(2, 3));
    p.p4 = 2.0 * (kla + kl4 - w * m.tau(2, 4));
    p.cross = 2.0 * kl3 - 2.0 * kl4 - w * m.tau(1, 3) + w * m.tau(1, 4) - w * m.tau(2, 3) +
              w * m.tau(2, 4);
    p.diff = 2.0 * (kl3 - kl4 - w * m.tau(2, 3) + w * m.tau(2, 4));
    return p;
}

}  // namespace

SplitterModel SplitterModel::ideal() {
    SplitterModel m;
    m.set_s(3, 2, -inv_sqrt2);
    m.set_s(2, 3, -inv_sqrt2);
    for (auto [i, j] : {std::pair{2, 4}, {4, 2}, {3, 1}, {1, 3}, {1, 4}, {4, 1}})
        m.set_s(i, j, inv_sqrt2);
    return m;
}

SplitterModel SplitterModel::h2979_fit() {
    auto m = ideal();
    m.set_tau(4, 1, 5.31 * ns);
    m.set_tau(3, 1, 5.31 * ns);
    m.set_tau(4, 2, 8.46 * ns);
    m.set_tau(3, 2, 8.46 * ns);
    return m;
}

SplitterModel SplitterModel::from_profile(const std::string& name) {
    if (name == "H2979-fit") return h2979_fit();
    if (name == "ideal") return ideal();
    fail(ErrorCode::ValidationError, "unknown splitter profile \"" + name + "\"");
}

void SplitterModel::set_tau(int i, int j, double seconds) {
    tau_.at(i - 1).at(j - 1) = seconds;
    tau_.at(j - 1).at(i - 1) = seconds;
}

SplitterValidation validate_splitter(const SplitterModel& model) {
    SplitterValidation report;
    const cplx b[2][2] = {{model.s(1, 3), model.s(1, 4)}, {model.s(2, 3), model.s(2, 4)}};
    for (int r = 0; r < 2; ++r) {
        for (int c = 0; c < 2; ++c) {
            cplx g = std::conj(b[0][r]) * b[0][c] + std::conj(b[1][r]) * b[1][c];
            if (r == c) g -= 1.0;
            report.unitarity_defect = std::max(report.unitarity_defect, std::abs(g));
        }
    }
    report.block_determinant = std::abs(b[0][0] * b[1][1] - b[0][1] * b[1][0]);
    for (int i = 1; i <= 4; ++i)
        for (int j = i + 1; j <= 4; ++j)
            report.tau_asymmetry =
                std::max(report.tau_asymmetry, std::abs(model.tau(i, j) - model.tau(j, i)));
    report.unitary = report.unitarity_defect < unitarity_tolerance;
    report.symmetric = report.tau_asymmetry == 0.0;
    report.passed = report.unitary && report.symmetric;
    if (!report.unitary && report.block_determinant < unitarity_tolerance)
        report.notes.emplace_back("input/output block is singular");
    report.notes.emplace_back(
        "closed-form total power carries the J1 source at Z1 = Z0 (J1 matched)");
    report.notes.emplace_back(
        "short/open limiting form equals the closed-form limit only for z2 = Z0");
    return report;
}

void SplitterSetup::validate() const {
    for (auto [len, what] : {std::pair{arm3.length_m, "arm3 length"},
                             {arm4.length_m, "arm4 length"},
                             {amp_cable_m, "amplifier cable length"},
                             {j1_cable_m, "J1 cable length"}}) {
        if (!(len >= 0.0) || !std::isfinite(len))
            fail(ErrorCode::ValidationError, std::string(what) + " must satisfy length >= 0");
    }
    CableSegment{0.0, z0_ohm, n}.validate();
    if (!(temperature_k >= 0.0) || !std::isfinite(temperature_k))
        fail(ErrorCode::ValidationError, "temperature must satisfy T >= 0");
    for (const auto& row : splitter.tau_matrix())
        for (double t : row)
            if (!std::isfinite(t)) fail(ErrorCode::ValidationError, "splitter delays must be finite");
}

cplx reflected_wave_response(const SplitterSetup& setup, double frequency_hz) {
    require_matched_j1(setup);
    const double k = wavenumber(frequency_hz, setup.n);
    const double w = omega(frequency_hz);
    const auto& m = setup.splitter;
    const double z0 = setup.z0_ohm;
    const cplx g3 = reflection_coefficient(setup.arm3.termination, z0);
    const cplx g4 = reflection_coefficient(setup.arm4.termination, z0);
    const double la = setup.amp_cable_m;

    const double phase3 = -k * la + w * m.tau(3, 2) - 2.0 * k * setup.arm3.length_m +
                          w * m.tau(2, 3) - k * la;
    const double phase4 = -k * la + w * m.tau(4, 2) - 2.0 * k * setup.arm4.length_m +
                          w * m.tau(2, 4) - k * la;
    return 1.0 + m.s(3, 2) * g3 * m.s(2, 3) * std::polar(1.0, phase3) +
           m.s(4, 2) * g4 * m.s(2, 4) * std::polar(1.0, phase4);
}

cplx arm_noise_contribution(const SplitterSetup& setup, double frequency_hz, Arm arm) {
    const int port = static_cast<int>(arm);
    const auto& a = setup.arm(arm);
    const cplx source = divided_thermal_source(a.termination, setup.z0_ohm, setup.temperature_k,
                                               port == 3 ? "Z3" : "Z4");
    const double k = wavenumber(frequency_hz, setup.n);
    const double phase = -k * a.length_m + omega(frequency_hz) * setup.splitter.tau(2, port) -
                         k * setup.amp_cable_m;
    return source * setup.splitter.s(2, port) * std::polar(1.0, phase);
}

cplx j1_noise_contribution(const SplitterSetup& setup, double frequency_hz) {
    const cplx source =
        divided_thermal_source(setup.j1_termination, setup.z0_ohm, setup.temperature_k, "Z1");
    const double k = wavenumber(frequency_hz, setup.n);
    const double w = omega(frequency_hz);
    const auto& m = setup.splitter;
    const double z0 = setup.z0_ohm;
    const double la = setup.amp_cable_m;
    const cplx g3 = reflection_coefficient(setup.arm3.termination, z0);
    const cplx g4 = reflection_coefficient(setup.arm4.termination, z0);

    // J1 -> arm -> back into the splitter -> J2 -> amplifier cable.
    const double phase3 =
        w * m.tau(3, 1) - 2.0 * k * setup.arm3.length_m - k * la + w * m.tau(2, 3);
    const double phase4 =
        w * m.tau(4, 1) - 2.0 * k * setup.arm4.length_m - k * la + w * m.tau(2, 4);
    const cplx paths = m.s(3, 1) * g3 * m.s(2, 3) * std::polar(1.0, phase3) +
                       m.s(4, 1) * g4 * m.s(2, 4) * std::polar(1.0, phase4);
    return source * std::polar(1.0, -k * setup.j1_cable_m) * paths;
}

double total_noise_power(const SplitterSetup& setup, double frequency_hz) {
    require_matched_j1(setup);
    require_ideal_amplitudes(setup.splitter);
    const double z0 = setup.z0_ohm;
    const auto [u3, w3] = weights_of(setup.arm3.termination, z0);
    const auto [u4, w4] = weights_of(setup.arm4.termination, z0);
    const auto [u2, w2] = weights_of(setup.source_impedance, z0);
    const Phases ph = phases_of(setup, frequency_hz);

    // Every coefficient below is the printed polynomial in (Z0, Z3, Z4)
    // divided by (Z0+Z3)^2 (Z0+Z4)^2: Z0^p Z3^q Z4^r -> u3^(2-q) w3^q u4^(2-r) w4^r.
    const double u3s = u3 * u3, w3s = w3 * w3, u4s = u4 * u4, w4s = w4 * w4;
    const double uw3 = u3 * w3, uw4 = u4 * w4;

    const double arms_constant = u3s * u4s + w3s * w4s + 4.0 * uw3 * u4s + 4.0 * u3s * uw4 +
                                 4.0 * w3s * uw4 + 4.0 * uw3 * w4s +
                                 (w3s * u4s + 12.0 * uw3 * uw4 + u3s * w4s);
    const double arms_cross = (u3s - w3s) * (u4s - w4s);

    const double amp_constant = 3.0 * u3s * u4s + 4.0 * uw3 * u4s + 3.0 * w3s * u4s +
                                4.0 * u3s * uw4 + 4.0 * uw3 * uw4 + 4.0 * w3s * uw4 +
                                3.0 * u3s * w4s + 4.0 * uw3 * w4s + 3.0 * w3s * w4s;
    const double amp_arm3 = 2.0 * (u3s - w3s) * (u4 + w4) * (u4 + w4);
    const double amp_arm4 = 2.0 * (u3 + w3) * (u3 + w3) * (u4s - w4s);
    const double amp_diff = u3s * u4s - u3s * w4s - w3s * u4s + w3s * w4s;
    // cos(2(-kL3 + kL4 + w tau23 - w tau24)) is cos(diff).
    const double terminations = (u2 + w2) * (u2 + w2) * (arms_constant - arms_cross * std::cos(ph.cross));
    const double amplifier = 4.0 * u2 * w2 *
                             (amp_constant - amp_arm3 * std::cos(ph.p3) -
                              amp_arm4 * std::cos(ph.p4) + amp_diff * std::cos(-ph.diff));

    const double prefactor = 4.0 * constants::boltzmann * setup.temperature_k * z0 / 8.0;
    return prefactor * (terminations + amplifier);
}

double limit_noise_power(const SplitterSetup& setup, double frequency_hz, LimitIndex limits) {
    if ((limits.m3 != 0 && limits.m3 != 1) || (limits.m4 != 0 && limits.m4 != 1))
        fail(ErrorCode::InvalidArgument, "limit indices must be 0 (short) or 1 (open)");
    const Phases ph = phases_of(setup, frequency_hz);
    const double s3 = limits.m3 == 0 ? 1.0 : -1.0;
    const double s4 = limits.m4 == 0 ? 1.0 : -1.0;
    const double prefactor =
        4.0 * constants::boltzmann * setup.temperature_k * setup.z0_ohm / 8.0;
    return prefactor * (4.0 - 2.0 * s3 * std::cos(ph.p3) - 2.0 * s4 * std::cos(ph.p4) -
                        s3 * s4 * std::cos(ph.cross) + s3 * s4 * std::cos(ph.diff));
}

std::optional<LimitIndex> limit_index_of(const SplitterSetup& setup) {
    auto index = [](const Termination& t) -> std::optional<int> {
        if (t.is_short()) return 0;
        if (t.is_open()) return 1;
        return std::nullopt;
    };
    const auto m3 = index(setup.arm3.termination);
    const auto m4 = index(setup.arm4.termination);
    if (!m3 || !m4) return std::nullopt;
    return LimitIndex{*m3, *m4};
}

double splitter_noise_power(const SplitterSetup& setup, double frequency_hz) {
    const auto limits = limit_index_of(setup);
    if (limits && setup.source_impedance.matches(setup.z0_ohm)) {
        require_matched_j1(setup);
        return limit_noise_power(setup, frequency_hz, *limits);
    }
    return total_noise_power(setup, frequency_hz);
}

PowerSurface sweep_arm_length(const SplitterSetup& setup, const FrequencyGrid& grid, Arm arm,
                              const std::vector<double>& lengths) {
    if (lengths.empty()) fail(ErrorCode::InvalidArgument, "sweep needs at least one length");
    setup.validate();
    PowerSurface surface;
    surface.lengths = lengths;
    surface.frequencies = grid.values();
    surface.power.reserve(lengths.size() * grid.size());
    SplitterSetup row = setup;
    for (double length : lengths) {
        if (!(length >= 0.0)) fail(ErrorCode::InvalidArgument, "sweep lengths must be >= 0");
        row.arm(arm).length_m = length;
        for (double f : grid) surface.power.push_back(splitter_noise_power(row, f));
    }
    return surface;
}

}  // namespace tlnoise
