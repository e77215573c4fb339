#pragma once

#include <cstddef>
#include <vector>

namespace tlnoise {

/// Strictly increasing list of evaluation frequencies in Hz.
class FrequencyGrid {
public:
    FrequencyGrid() = default;
    /// Throws ValidationError if empty, negative, non-finite or not strictly
    /// increasing.
    explicit FrequencyGrid(std::vector<double> frequencies_hz);

    /// `points` evenly spaced values from start to stop inclusive.
    static FrequencyGrid linear(double start_hz, double stop_hz, std::size_t points);

    const std::vector<double>& values() const noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t i) const { return values_[i]; }
    auto begin() const noexcept { return values_.begin(); }
    auto end() const noexcept { return values_.end(); }

private:
    std::vector<double> values_;
};

/// Per-frequency model or measured noise levels.
///
/// `linear_power` holds V^2/Hz straight out of a model, or relative power
/// once normalized. `display_level` is empty until a display model has been
/// applied. Excluded points carry NaN in both arrays.
struct NoiseSpectrum {
    std::vector<double> frequencies;
    std::vector<double> linear_power;
    std::vector<double> display_level;
    std::vector<bool> excluded;

    std::size_t size() const noexcept { return frequencies.size(); }
    std::size_t excluded_count() const noexcept;

    /// Checks equal array lengths and strictly increasing frequencies.
    void validate() const;
};

}  // namespace tlnoise
