#include "tlnoise/csv.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

constexpr const char* spectrum_header = "frequency_hz,level,excluded";
constexpr const char* sweep_header = "length_m,frequency_hz,level";

[[noreturn]] void row_fail(std::size_t row, const std::string& what) {
    fail(ErrorCode::FormatError, "row " + std::to_string(row) + ": " + what);
}

double parse_number(std::string_view field, std::size_t row, const char* column) {
    double value = 0.0;
    const auto* end = field.data() + field.size();
    const auto [ptr, ec] = std::from_chars(field.data(), end, value);
    if (field.empty() || ec != std::errc() || ptr != end)
        row_fail(row, std::string("cannot parse ") + column + " \"" + std::string(field) + "\"");
    return value;
}

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        fields.push_back(line.substr(start, comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return fields;
}

}  // namespace

std::string format_double(double value) {
    if (std::isnan(value)) return "nan";
    char buffer[32];
    std::snprintf(buffer, sizeof buffer, "%.17g", value);
    return buffer;
}

NoiseSpectrum read_spectrum_csv(std::istream& in) {
    std::string line;
    std::size_t row = 1;
    if (!std::getline(in, line)) fail(ErrorCode::FormatError, "row 1: missing header");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != spectrum_header)
        row_fail(row, std::string("header must be \"") + spectrum_header + "\"");

    NoiseSpectrum spectrum;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            if (in.peek() == std::char_traits<char>::eof()) break;
            row_fail(row, "empty record");
        }
        const auto fields = split(line);
        if (fields.size() != 3) row_fail(row, "expected 3 fields");
        const double f = parse_number(fields[0], row, "frequency_hz");
        const double level = parse_number(fields[1], row, "level");
        bool excluded = false;
        if (fields[2] == "1" || fields[2] == "true")
            excluded = true;
        else if (fields[2] != "0" && fields[2] != "false")
            row_fail(row, "excluded must be 0 or 1");
        if (!spectrum.frequencies.empty() && !(f > spectrum.frequencies.back()))
            fail(ErrorCode::NonMonotonicFrequency,
                 "row " + std::to_string(row) + ": frequency does not increase");
        spectrum.frequencies.push_back(f);
        spectrum.display_level.push_back(level);
        spectrum.excluded.push_back(excluded);
    }
    if (spectrum.frequencies.empty()) fail(ErrorCode::FormatError, "no records");
    return spectrum;
}

NoiseSpectrum read_spectrum_csv(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read " + path.string());
    return read_spectrum_csv(in);
}

void write_spectrum_csv(const NoiseSpectrum& spectrum, std::ostream& out, LevelColumn column) {
    const auto& levels = column == LevelColumn::Display ? spectrum.display_level : spectrum.linear_power;
    if (levels.size() != spectrum.size())
        fail(ErrorCode::InvalidArgument, "spectrum has no values in the requested column");
    out << spectrum_header << '\n';
    for (std::size_t i = 0; i < spectrum.size(); ++i)
        out << format_double(spectrum.frequencies[i]) << ',' << format_double(levels[i]) << ','
            << (spectrum.excluded[i] ? '1' : '0') << '\n';
}

void write_sweep_csv(const PowerSurface& surface, std::ostream& out) {
    out << sweep_header << '\n';
    for (std::size_t r = 0; r < surface.lengths.size(); ++r)
        for (std::size_t c = 0; c < surface.frequencies.size(); ++c)
            out << format_double(surface.lengths[r]) << ',' << format_double(surface.frequencies[c])
                << ',' << format_double(surface.at(r, c)) << '\n';
}

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
    auto tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail(ErrorCode::Io, "cannot write " + tmp.string());
        out << content;
        out.flush();
        if (!out) fail(ErrorCode::Io, "write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        fail(ErrorCode::Io, "cannot move output into place at " + path.string());
    }
}

}  // namespace tlnoise
