#include "tlnoise/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

using nlohmann::json;

[[noreturn]] void parse_fail(const std::string& key, const std::string& what) {
    fail(ErrorCode::ParseError, "key \"" + key + "\": " + what);
}

std::string join(const std::string& prefix, const std::string& key) {
    return prefix.empty() ? key : prefix + "." + key;
}

void reject_unknown(const json& obj, const std::string& prefix,
                    std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) parse_fail(prefix, "expected an object");
    for (const auto& [key, value] : obj.items()) {
        const bool known = std::any_of(allowed.begin(), allowed.end(),
                                       [&](const char* a) { return key == a; });
        if (!known) fail(ErrorCode::ParseError, "unknown key \"" + join(prefix, key) + "\"");
    }
}

double number(const json& obj, const std::string& prefix, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number()) parse_fail(join(prefix, key), "expected a number");
    return v.get<double>();
}

Termination termination(const json& obj, const std::string& prefix, const char* key,
                        const Termination& fallback) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    try {
        if (v.is_number()) {
            const double ohms = v.get<double>();
            if (!(ohms >= 0.0)) fail(ErrorCode::ValidationError, "impedance must be >= 0");
            return Termination::finite(ohms);
        }
        if (v.is_string()) return parse_termination(v.get<std::string>());
    } catch (const Error& e) {
        if (e.code() == ErrorCode::ValidationError)
            fail(ErrorCode::ValidationError, join(prefix, key) + ": " + e.what());
        parse_fail(join(prefix, key), e.what());
    }
    parse_fail(join(prefix, key), "expected \"short\", \"open\", \"matched\" or ohms");
}

void read_arm(const json& root, const std::string& prefix, ArmSetup& arm) {
    reject_unknown(root, prefix, {"length_m", "termination"});
    arm.length_m = number(root, prefix, "length_m", arm.length_m);
    arm.termination = termination(root, prefix, "termination", arm.termination);
}

cplx complex_entry(const json& v, const std::string& key) {
    if (v.is_number()) return {v.get<double>(), 0.0};
    if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
        return {v[0].get<double>(), v[1].get<double>()};
    parse_fail(key, "expected a number or [re, im]");
}

void read_splitter(const json& s, SplitterSetup& setup, double& temperature) {
    const std::string p = "splitter";
    reject_unknown(s, p,
                   {"profile", "arm3", "arm4", "amp_cable_m", "j1_termination", "j1_cable_m",
                    "temperature_k", "source_termination", "tau_ns", "s"});
    if (s.contains("profile")) {
        if (!s["profile"].is_string()) parse_fail("splitter.profile", "expected a string");
        setup.splitter = SplitterModel::from_profile(s["profile"].get<std::string>());
    }
    if (s.contains("arm3")) read_arm(s["arm3"], "splitter.arm3", setup.arm3);
    if (s.contains("arm4")) read_arm(s["arm4"], "splitter.arm4", setup.arm4);
    setup.amp_cable_m = number(s, p, "amp_cable_m", setup.amp_cable_m);
    setup.j1_cable_m = number(s, p, "j1_cable_m", setup.j1_cable_m);
    setup.j1_termination = termination(s, p, "j1_termination", setup.j1_termination);
    setup.source_impedance = termination(s, p, "source_termination", setup.source_impedance);
    temperature = number(s, p, "temperature_k", temperature);
    if (s.contains("tau_ns")) {
        const auto& t = s["tau_ns"];
        reject_unknown(t, "splitter.tau_ns", {"12", "13", "14", "23", "24", "34"});
        for (const auto& [key, value] : t.items()) {
            if (!value.is_number()) parse_fail("splitter.tau_ns." + key, "expected a number");
            setup.splitter.set_tau(key[0] - '0', key[1] - '0', value.get<double>() * 1e-9);
        }
    }
    if (s.contains("s")) {
        const auto& m = s["s"];
        if (!m.is_array() || m.size() != 4) parse_fail("splitter.s", "expected a 4x4 array");
        for (int i = 0; i < 4; ++i) {
            if (!m[i].is_array() || m[i].size() != 4)
                parse_fail("splitter.s", "expected a 4x4 array");
            for (int j = 0; j < 4; ++j)
                setup.splitter.set_s(i + 1, j + 1, complex_entry(m[i][j], "splitter.s"));
        }
    }
}

void read_fit(const json& f, FitSettings& fit) {
    reject_unknown(f, "fit", {"max_iterations", "x_tolerance", "multistart", "initial", "bounds"});
    fit.max_iterations = static_cast<int>(number(f, "fit", "max_iterations", fit.max_iterations));
    fit.x_tolerance = number(f, "fit", "x_tolerance", fit.x_tolerance);
    fit.multistart = static_cast<int>(number(f, "fit", "multistart", fit.multistart));
    auto param_key = [](const std::string& prefix, const std::string& key) {
        try {
            return parse_param(key);
        } catch (const Error&) {
            fail(ErrorCode::ParseError, "unknown key \"" + prefix + "." + key + "\"");
        }
    };
    if (f.contains("initial")) {
        const auto& init = f["initial"];
        if (!init.is_object()) parse_fail("fit.initial", "expected an object");
        for (const auto& [key, value] : init.items()) {
            if (!value.is_number()) parse_fail("fit.initial." + key, "expected a number");
            fit.initial[param_key("fit.initial", key)] = value.get<double>();
        }
    }
    if (f.contains("bounds")) {
        const auto& b = f["bounds"];
        if (!b.is_object()) parse_fail("fit.bounds", "expected an object");
        for (const auto& [key, value] : b.items()) {
            if (!value.is_array() || value.size() != 2 || !value[0].is_number() ||
                !value[1].is_number())
                parse_fail("fit.bounds." + key, "expected [lower, upper]");
            fit.bounds[param_key("fit.bounds", key)] = {value[0].get<double>(),
                                                        value[1].get<double>()};
        }
    }
    if (fit.max_iterations < 1)
        fail(ErrorCode::ValidationError, "fit.max_iterations must be >= 1");
    if (fit.multistart < 1) fail(ErrorCode::ValidationError, "fit.multistart must be >= 1");
    if (!(fit.x_tolerance > 0.0)) fail(ErrorCode::ValidationError, "fit.x_tolerance must be > 0");
}

std::string position_of(std::string_view text, std::size_t byte) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i < std::min(byte, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

}  // namespace

FrequencyGrid GridConfig::grid() const { return FrequencyGrid::linear(start_hz, stop_hz, points); }

Termination parse_termination(std::string_view text) {
    std::string lower(text);
    std::transform(lower.begin(), lower.end(), lower.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    if (lower == "short") return Termination::short_circuit();
    if (lower == "open") return Termination::open_circuit();
    if (lower == "matched") return Termination::matched();
    double ohms = 0.0;
    const auto* end = lower.data() + lower.size();
    const auto [ptr, ec] = std::from_chars(lower.data(), end, ohms);
    if (ec != std::errc() || ptr != end || lower.empty())
        fail(ErrorCode::ParseError, "termination \"" + std::string(text) +
                                        "\" is not short, open, matched or a number of ohms");
    if (!(ohms >= 0.0)) fail(ErrorCode::ValidationError, "impedance must be >= 0");
    return Termination::finite(ohms);
}

TopologyConfig parse_config(std::string_view text) {
    json root;
    try {
        root = json::parse(text.begin(), text.end(), nullptr, true, true);
    } catch (const json::parse_error& e) {
        fail(ErrorCode::ParseError, "malformed config at " + position_of(text, e.byte) + ": " +
                                        e.what());
    }
    reject_unknown(root, "", {"mode", "temperature_k", "cable", "splitter", "display", "grid", "fit"});

    TopologyConfig config;
    auto& model = config.model;
    if (root.contains("mode")) {
        if (!root["mode"].is_string()) parse_fail("mode", "expected a string");
        const auto mode = root["mode"].get<std::string>();
        if (mode == "single-cable")
            model.kind = ModelKind::SingleCable;
        else if (mode == "splitter")
            model.kind = ModelKind::Splitter;
        else
            parse_fail("mode", "expected \"single-cable\" or \"splitter\"");
    }
    const bool single = model.kind == ModelKind::SingleCable;
    model.display = single ? DisplayModel{-1.754, 1.91} : DisplayModel{-1.27, 1.10};

    double temperature = number(root, "", "temperature_k", constants::room_temperature);

    CableSegment cable;
    Termination load = Termination::matched();
    Termination source = Termination::matched();
    if (root.contains("cable")) {
        const auto& c = root["cable"];
        reject_unknown(c, "cable", {"length_m", "z0_ohm", "n", "termination", "source_termination"});
        cable.length_m = number(c, "cable", "length_m", cable.length_m);
        cable.z0_ohm = number(c, "cable", "z0_ohm", cable.z0_ohm);
        cable.n = number(c, "cable", "n", cable.n);
        load = termination(c, "cable", "termination", load);
        source = termination(c, "cable", "source_termination", source);
    }
    if (root.contains("splitter")) read_splitter(root["splitter"], model.splitter, temperature);
    if (root.contains("display")) {
        const auto& d = root["display"];
        reject_unknown(d, "display", {"a", "sn"});
        model.display.a = number(d, "display", "a", model.display.a);
        model.display.sn = number(d, "display", "sn", model.display.sn);
    }
    if (root.contains("grid")) {
        const auto& g = root["grid"];
        reject_unknown(g, "grid", {"start_hz", "stop_hz", "points"});
        config.grid.start_hz = number(g, "grid", "start_hz", config.grid.start_hz);
        config.grid.stop_hz = number(g, "grid", "stop_hz", config.grid.stop_hz);
        const double points = number(g, "grid", "points", static_cast<double>(config.grid.points));
        if (!(points >= 2.0) || points != std::floor(points))
            fail(ErrorCode::ValidationError, "grid.points must be an integer >= 2");
        config.grid.points = static_cast<std::size_t>(points);
    }
    if (root.contains("fit")) read_fit(root["fit"], config.fit);

    if (!(config.grid.start_hz >= 0.0) || !(config.grid.stop_hz > config.grid.start_hz))
        fail(ErrorCode::ValidationError, "grid requires stop_hz > start_hz >= 0");
    if (!(temperature >= 0.0)) fail(ErrorCode::ValidationError, "temperature must satisfy T >= 0");

    cable.validate();
    model.cable.cable = cable;
    model.cable.load = load;
    model.cable.source_impedance = source;
    model.cable.source_power = thermal_source_power(temperature, cable.z0_ohm);
    model.splitter.z0_ohm = cable.z0_ohm;
    model.splitter.n = cable.n;
    model.splitter.temperature_k = temperature;
    model.validate();
    return config;
}

TopologyConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::Io, "cannot read config " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace tlnoise
