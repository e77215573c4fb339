#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "test_support.hpp"
#include "tlnoise/commands.hpp"
#include "tlnoise/config.hpp"
#include "tlnoise/csv.hpp"
#include "tlnoise/error.hpp"

using namespace tlnoise;
using Catch::Approx;

namespace {

ErrorCode code_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("no error thrown");
    return ErrorCode::Io;
}

std::string message_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("minimal single-cable config picks up defaults", "[config]") {
    const auto c = parse_config(R"({ "cable": { "length_m": 4, "termination": "short" } })");
    CHECK(c.model.kind == ModelKind::SingleCable);
    CHECK(c.model.cable.cable.length_m == 4.0);
    CHECK(c.model.cable.cable.z0_ohm == 50.0);
    CHECK(c.model.cable.cable.n == 1.60);
    CHECK(c.model.cable.load.is_short());
    CHECK(c.model.cable.source_power == Approx(thermal_source_power(290.0, 50.0)));
    CHECK(c.model.display.a == -1.754);
    CHECK(c.model.display.sn == 1.91);
    CHECK(c.grid.start_hz == 1e6);
    CHECK(c.grid.stop_hz == 100e6);
    CHECK(c.grid.points == 2000);
}

TEST_CASE("splitter config with the H2979 profile", "[config]") {
    const auto c = parse_config(R"({
        // J3 open on 1 m, J4 shorted on 3.98 m
        "mode": "splitter",
        "cable": { "n": 1.6 },
        "splitter": {
            "profile": "H2979-fit",
            "arm3": { "length_m": 1.0, "termination": "open" },
            "arm4": { "length_m": 3.98, "termination": "short" },
            "amp_cable_m": 1.98
        }
    })");
    CHECK(c.model.kind == ModelKind::Splitter);
    const auto& m = c.model.splitter.splitter;
    CHECK(m.tau(3, 1) == Approx(5.31e-9).epsilon(1e-15));
    CHECK(m.tau(4, 1) == Approx(5.31e-9).epsilon(1e-15));
    CHECK(m.tau(3, 2) == Approx(8.46e-9).epsilon(1e-15));
    CHECK(m.tau(4, 2) == Approx(8.46e-9).epsilon(1e-15));
    CHECK(c.model.splitter.arm3.termination.is_open());
    CHECK(c.model.splitter.arm4.length_m == 3.98);
    CHECK(c.model.splitter.temperature_k == 290.0);
    CHECK(c.model.display.a == -1.27);
}

TEST_CASE("config errors", "[config]") {
    CHECK(code_of([] { parse_config(R"({"cable": {"length_m": -1}})"); }) == ErrorCode::ValidationError);
    CHECK(message_of([] { parse_config(R"({"cable": {"length_m": -1}})"); }).find("length >= 0") !=
          std::string::npos);
    CHECK(code_of([] { parse_config(R"({"cable": {"foo": 1}})"); }) == ErrorCode::ParseError);
    CHECK(message_of([] { parse_config(R"({"cable": {"foo": 1}})"); }).find("cable.foo") !=
          std::string::npos);
    CHECK(code_of([] { parse_config("{\n  \"cable\": {,}\n}"); }) == ErrorCode::ParseError);
    CHECK(message_of([] { parse_config("{\n  \"cable\": {,}\n}"); }).find("line 2") != std::string::npos);
    CHECK(code_of([] { parse_config(R"({"mode": "triple"})"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_config(R"({"cable": {"termination": "wet"}})"); }) == ErrorCode::ParseError);
    CHECK(code_of([] { parse_config(R"({"grid": {"start_hz": 5, "stop_hz": 1}})"); }) ==
          ErrorCode::ValidationError);
    CHECK(code_of([] { load_config("/nonexistent/config.json"); }) == ErrorCode::Io);
}

TEST_CASE("termination values", "[config]") {
    CHECK(parse_termination("short").is_short());
    CHECK(parse_termination("open").is_open());
    CHECK(parse_termination("matched").is_matched());
    CHECK(parse_termination("75").value() == cplx(75.0, 0.0));
    CHECK_THROWS_AS(parse_termination("-3"), Error);
}

TEST_CASE("fit settings", "[config]") {
    const auto c = parse_config(R"({
        "cable": { "length_m": 4.08, "termination": "short" },
        "fit": { "max_iterations": 50, "initial": { "L": 4.2 }, "bounds": { "L": [3.0, 5.0] } }
    })");
    CHECK(c.fit.max_iterations == 50);
    CHECK(c.fit.initial.at(Param::L_A) == 4.2);
    CHECK(c.fit.bounds.at(Param::L_A).upper == 5.0);
}

TEST_CASE("spectrum CSV round trip is bit-identical", "[csv]") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    NoiseSpectrum s;
    for (int i = 0; i < 1000; ++i) {
        s.frequencies.push_back(1e6 + i * 99017.3571 + u(rng) * 1e-3);
        s.display_level.push_back(u(rng) / 7.0);
        s.excluded.push_back(i % 97 == 0);
    }
    std::stringstream io;
    write_spectrum_csv(s, io);
    CHECK(io.str().rfind("frequency_hz,level,excluded\n", 0) == 0);
    const auto back = read_spectrum_csv(io);
    CHECK(back.frequencies == s.frequencies);
    CHECK(back.display_level == s.display_level);
    CHECK(back.excluded == s.excluded);

    for (double x : {0.1, 1.0 / 3.0, 6.02214076e23, -1.4729711077458495, 5e-324})
        CHECK(std::strtod(format_double(x).c_str(), nullptr) == x);
}

TEST_CASE("spectrum CSV errors", "[csv]") {
    auto read = [](const std::string& text) {
        std::istringstream in(text);
        return read_spectrum_csv(in);
    };
    CHECK(code_of([&] { read("frequency_hz,level,excluded\n"); }) == ErrorCode::FormatError);
    CHECK(message_of([&] { read("frequency_hz,level,excluded\n"); }).find("no records") !=
          std::string::npos);
    CHECK(code_of([&] { read("freq,level\n1,2\n"); }) == ErrorCode::FormatError);
    CHECK(code_of([&] { read("frequency_hz,level,excluded\n1,abc,0\n"); }) == ErrorCode::FormatError);
    CHECK(code_of([&] { read("frequency_hz,level,excluded\n1,2,maybe\n"); }) == ErrorCode::FormatError);

    const std::string unordered = "frequency_hz,level,excluded\n1,0,0\n3,0,0\n2,0,0\n";
    CHECK(code_of([&] { read(unordered); }) == ErrorCode::NonMonotonicFrequency);
    CHECK(message_of([&] { read(unordered); }).find("row 4") != std::string::npos);

    const auto crlf = read("frequency_hz,level,excluded\r\n1,0.5,false\r\n2,nan,true\r\n");
    CHECK(crlf.size() == 2);
    CHECK(crlf.display_level[0] == 0.5);
    CHECK(crlf.excluded[1]);
}

TEST_CASE("atomic writes replace the target", "[csv]") {
    const auto dir = std::filesystem::temp_directory_path() / "tlnoise_csv_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.csv";
    write_file_atomic(path, "first\n");
    write_file_atomic(path, "second\n");
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "second");
    std::size_t entries = 0;
    for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator(dir)) ++entries;
    CHECK(entries == 1);
    std::filesystem::remove_all(dir);
    CHECK(code_of([] { write_file_atomic("/nonexistent/dir/x.csv", "x"); }) == ErrorCode::Io);
}

TEST_CASE("sweep command", "[commands]") {
    auto c = parse_config(R"({
        "mode": "splitter",
        "splitter": { "arm3": {"length_m": 1, "termination": "open"},
                      "arm4": {"length_m": 0, "termination": "short"}, "amp_cable_m": 2 },
        "grid": { "start_hz": 1e6, "stop_hz": 3e6, "points": 3 }
    })");
    const auto s = sweep(c, Arm::J4, 0.0, 4.0, 2);
    CHECK(s.power.size() == 6);
    std::stringstream out;
    write_sweep_csv(s, out);
    std::string line;
    int rows = -1;
    std::getline(out, line);
    CHECK(line == "length_m,frequency_hz,level");
    while (std::getline(out, line)) ++rows;
    CHECK(rows == 5);  // header consumed separately

    // Zero-width range: one row identical to simulate at that length.
    const auto single = sweep(c, Arm::J4, 2.5, 2.5, 7);
    REQUIRE(single.lengths.size() == 1);
    c.model.splitter.arm4.length_m = 2.5;
    const auto sim = simulate(c);
    for (std::size_t i = 0; i < sim.size(); ++i) CHECK(single.at(0, i) == sim.display_level[i]);

    auto cable = parse_config(R"({"cable": {"length_m": 1}})");
    CHECK(code_of([&] { sweep(cable, Arm::J3, 0, 1, 2); }) == ErrorCode::ValidationError);
}

TEST_CASE("oracle check command", "[commands]") {
    const auto matched = parse_config(R"({"cable": {"length_m": 4.08, "termination": "matched"}})");
    const auto m = oracle_check(matched, 200, 500, 1);
    CHECK(m.max_deviation == 0.0);
    CHECK(m.evaluated == 500);

    const auto shorted = parse_config(R"({"cable": {"length_m": 4.08, "termination": "short"}})");
    CHECK(oracle_check(shorted, 200, 500, 1).max_deviation < 1e-15);

    // |Gl Gb| = 0.95: Gl = -1 against a source with Gb = -0.95.
    const double zb = 50.0 * 0.05 / 1.95;
    const auto lossy = parse_config(R"({"cable": {"length_m": 4.08, "termination": "short",
        "source_termination": )" + std::to_string(zb) + "}}");
    const auto r = oracle_check(lossy, 50, 500, 1);
    CHECK(r.max_deviation > oracle_tolerance);
    CHECK(r.max_deviation > 1e-3);

    const auto pole = parse_config(R"({"cable": {"length_m": 4.08, "termination": "open",
        "source_termination": "open"}})");
    CHECK(code_of([&] { oracle_check(pole, 10, 10, 1); }) == ErrorCode::ValidationError);
}
