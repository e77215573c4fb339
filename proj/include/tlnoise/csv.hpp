#pragma once

// Spectrum and sweep CSV files.
//
// Spectrum: header "frequency_hz,level,excluded", one record per point,
// levels at 17 significant digits, LF line endings (CRLF accepted on read).
// Sweep: header "length_m,frequency_hz,level", long format.

#include <filesystem>
#include <iosfwd>
#include <string>

#include "tlnoise/spectrum.hpp"
#include "tlnoise/splitter.hpp"

namespace tlnoise {

enum class LevelColumn { Display, Linear };

/// The returned spectrum carries levels in display_level; linear_power is
/// left empty. Throws FormatError (with row number) and NonMonotonicFrequency.
NoiseSpectrum read_spectrum_csv(std::istream& in);
NoiseSpectrum read_spectrum_csv(const std::filesystem::path& path);

void write_spectrum_csv(const NoiseSpectrum& spectrum, std::ostream& out,
                        LevelColumn column = LevelColumn::Display);

/// Surface values are written as given.
void write_sweep_csv(const PowerSurface& surface, std::ostream& out);

/// Writes to a sibling temporary and renames it over `path`. Throws Io.
void write_file_atomic(const std::filesystem::path& path, const std::string& content);

/// Shortest round-trip decimal form used by every writer.
std::string format_double(double value);

}  // namespace tlnoise
