#include "tlnoise/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

void require_increasing(const std::vector<double>& f) {
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (!std::isfinite(f[i]) || f[i] < 0.0)
            fail(ErrorCode::ValidationError,
                 "frequency " + std::to_string(i) + " must be finite and >= 0");
        if (i > 0 && !(f[i] > f[i - 1]))
            fail(ErrorCode::ValidationError, "frequencies must be strictly increasing (index " +
                                                 std::to_string(i) + ")");
    }
}

}  // namespace

FrequencyGrid::FrequencyGrid(std::vector<double> frequencies_hz)
    : values_(std::move(frequencies_hz)) {
    if (values_.empty()) fail(ErrorCode::ValidationError, "frequency grid is empty");
    require_increasing(values_);
}

FrequencyGrid FrequencyGrid::linear(double start_hz, double stop_hz, std::size_t points) {
    if (points == 0) fail(ErrorCode::ValidationError, "grid needs at least one point");
    if (points == 1) return FrequencyGrid({start_hz});
    if (!(stop_hz > start_hz))
        fail(ErrorCode::ValidationError, "grid requires stop > start");
    std::vector<double> f(points);
    const double step = (stop_hz - start_hz) / static_cast<double>(points - 1);
    for (std::size_t i = 0; i < points; ++i) f[i] = start_hz + step * static_cast<double>(i);
    f.back() = stop_hz;
    return FrequencyGrid(std::move(f));
}

std::size_t NoiseSpectrum::excluded_count() const noexcept {
    return static_cast<std::size_t>(std::count(excluded.begin(), excluded.end(), true));
}

void NoiseSpectrum::validate() const {
    const auto n = frequencies.size();
    if (excluded.size() != n)
        fail(ErrorCode::ValidationError, "spectrum excluded flags do not match frequencies");
    if (!linear_power.empty() && linear_power.size() != n)
        fail(ErrorCode::ValidationError, "spectrum linear_power length mismatch");
    if (!display_level.empty() && display_level.size() != n)
        fail(ErrorCode::ValidationError, "spectrum display_level length mismatch");
    require_increasing(frequencies);
}

}  // namespace tlnoise
