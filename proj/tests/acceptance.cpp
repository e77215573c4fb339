// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance            run everything, exit 1 if any criterion fails
//   acceptance --only N   run criterion N alone
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "tlnoise/commands.hpp"
#include "tlnoise/config.hpp"
#include "tlnoise/fitter.hpp"
#include "tlnoise/measurement.hpp"
#include "tlnoise/splitter.hpp"
#include "tlnoise/tline.hpp"

namespace fs = std::filesystem;
using namespace tlnoise;

namespace {

// Tolerances, pinned.
constexpr double kOracleRel = 1e-10;
constexpr double kOracleSeconds = 5.0;
constexpr double kComplementRel = 1e-12;
constexpr double kMatchedRel = 1e-15;
constexpr double kSpacingTolHz = 0.05e6;
constexpr double kLimitRel = 1e-9;
constexpr double kLimitSeconds = 2.0;
constexpr double kAverageRel = 1e-12;
constexpr double kUnitarity = 1e-15;
constexpr double kRecoverRel = 1e-3;
constexpr double kNoisyRel = 1e-2;
constexpr double kNoisyPassFraction = 0.9;
constexpr double kFitSeconds = 60.0;

const double kT0 = constants::boltzmann * constants::room_temperature;

struct Outcome {
    bool pass;
    std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(const char* f, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, a);
    return buf;
}

Termination termination_for(cplx gamma) { return Termination::finite(50.0 * (1.0 + gamma) / (1.0 - gamma)); }

cplx random_in_disk(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return std::polar(std::sqrt(u(rng)), 2.0 * constants::pi * u(rng));
}

std::vector<std::size_t> local_minima(const std::vector<double>& v) {
    std::vector<std::size_t> out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] < v[i - 1] && v[i] <= v[i + 1]) out.push_back(i);
    return out;
}

// 1. Bounce series (200 terms) against the closed form.
Outcome oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> fs(1e6, 100e6), ls(0.1, 10.0);
    double worst = 0.0, worst_q = 0.0;
    int failures = 0, draws = 0;
    while (draws < 10000) {
        const cplx gl = random_in_disk(rng), gb = random_in_disk(rng);
        if (std::abs(gl * gb) > 0.9) continue;
        ++draws;
        CableSetup s;
        s.cable = CableSegment{ls(rng), 50.0, 1.60};
        s.load = termination_for(gl);
        s.source_impedance = termination_for(gb);
        s.source_power = 1.0;
        const double f = fs(rng);
        const cplx closed = total_voltage_closed_form(s, f);
        const cplx series = bounce_series_oracle(s, f, 200);
        const double rel = std::abs(series - closed) / std::abs(closed);
        if (rel >= kOracleRel) ++failures;
        if (rel > worst) {
            worst = rel;
            worst_q = std::abs(gl * gb);
        }
    }
    const double elapsed = seconds_since(t0);
    std::ostringstream d;
    d << "max rel " << fmt("%.3g", worst) << " at |GlGb| = " << fmt("%.4f", worst_q) << ", " << failures
      << "/" << draws << " draws >= 1e-10, tail bound 0.9^199/0.1 = "
      << fmt("%.2g", std::pow(0.9, 199) / 0.1) << ", " << fmt("%.2f", elapsed) << " s";
    return {failures == 0 && elapsed < kOracleSeconds, d.str()};
}

// 2. Short + Open = vb^2, Matched = vb^2/4.
Outcome complementarity() {
    const CableSegment cable{4.08, 50.0, 1.60};
    const auto shorted = thermal_cable_setup(cable, Termination::short_circuit());
    const auto open = thermal_cable_setup(cable, Termination::open_circuit());
    const auto matched = thermal_cable_setup(cable, Termination::matched());
    const double vb2 = shorted.source_power;
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> fs(0.0, 1e9);
    double worst_sum = 0.0, worst_matched = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double f = fs(rng);
        const double sum = matched_source_power(shorted, f) + matched_source_power(open, f);
        worst_sum = std::max(worst_sum, std::abs(sum - vb2) / vb2);
        worst_matched =
            std::max(worst_matched, std::abs(matched_source_power(matched, f) - vb2 / 4) / (vb2 / 4));
    }
    return {worst_sum < kComplementRel && worst_matched < kMatchedRel,
            "short+open max rel " + fmt("%.3g", worst_sum) + ", matched max rel " +
                fmt("%.3g", worst_matched)};
}

// 3. Adjacent minima of the simulated short-terminated spectra.
Outcome null_spacing(const fs::path& configs) {
    struct Case {
        const char* file;
        double expected_hz;
    };
    bool ok = true;
    std::ostringstream d;
    for (const Case c : {Case{"cable_4m08_short.json", 22.97e6}, Case{"cable_7m93_short.json", 11.82e6}}) {
        const auto cfg = load_config(configs / c.file);
        const auto spec = simulate(cfg);
        const auto minima = local_minima(spec.linear_power);
        double lo = 1e300, hi = 0.0;
        for (std::size_t i = 1; i < minima.size(); ++i) {
            const double gap = spec.frequencies[minima[i]] - spec.frequencies[minima[i - 1]];
            lo = std::min(lo, gap);
            hi = std::max(hi, gap);
        }
        const bool good = minima.size() >= 3 && std::abs(lo - c.expected_hz) <= kSpacingTolHz &&
                          std::abs(hi - c.expected_hz) <= kSpacingTolHz;
        ok = ok && good;
        d << c.file << ": " << minima.size() << " minima, spacing " << fmt("%.3f", lo / 1e6) << ".."
          << fmt("%.3f", hi / 1e6) << " MHz (expect " << fmt("%.2f", c.expected_hz / 1e6)
          << " +/- 0.05); ";
    }
    return {ok, d.str()};
}

// 4. Limiting form against the analytic limit of the full power sum.
Outcome limit_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> fs(1e6, 100e6), ls(0.0, 5.0);
    double worst = 0.0;
    for (int m3 = 0; m3 < 2; ++m3)
        for (int m4 = 0; m4 < 2; ++m4) {
            SplitterSetup s;
            s.splitter = SplitterModel::h2979_fit();
            s.arm3 = {ls(rng), m3 ? Termination::open_circuit() : Termination::short_circuit()};
            s.arm4 = {ls(rng), m4 ? Termination::open_circuit() : Termination::short_circuit()};
            s.amp_cable_m = ls(rng);
            for (int i = 0; i < 1000; ++i) {
                const double f = fs(rng);
                const double lim = limit_noise_power(s, f, {m3, m4});
                const double total = total_noise_power(s, f);
                const double scale = std::max(std::abs(lim), std::abs(total));
                if (scale > 0.0) worst = std::max(worst, std::abs(lim - total) / scale);
            }
        }
    const double elapsed = seconds_since(t0);
    const auto report = validate_splitter(SplitterModel::h2979_fit());
    std::string assumptions;
    for (const auto& n : report.notes) assumptions += (assumptions.empty() ? "" : "; ") + n;
    return {worst < kLimitRel && elapsed < kLimitSeconds,
            "max rel " + fmt("%.3g", worst) + " over 4x1000, " + fmt("%.2f", elapsed) +
                " s; assumptions: " + assumptions};
}

// 5. Mean over the four short/open combinations.
Outcome m_average() {
    SplitterSetup s;
    s.arm3 = {1.0, Termination::short_circuit()};
    s.arm4 = {3.98, Termination::short_circuit()};
    s.amp_cable_m = 1.98;
    const double flat = 2.0 * kT0 * s.z0_ohm;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> fs(0.0, 1e9);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const double f = fs(rng);
        double mean = 0.0;
        for (int m = 0; m < 4; ++m) mean += limit_noise_power(s, f, {m & 1, m >> 1}) / 4.0;
        worst = std::max(worst, std::abs(mean - flat) / flat);
    }
    return {worst < kAverageRel, "max rel deviation from 2 kB T Z0: " + fmt("%.3g", worst)};
}

// 6. Scattering block of the shipped profile.
Outcome s_matrix() {
    const auto v = validate_splitter(SplitterModel::h2979_fit());
    return {v.passed && v.unitarity_defect < kUnitarity,
            "unitarity defect " + fmt("%.3g", v.unitarity_defect) + ", tau asymmetry " +
                fmt("%.3g", v.tau_asymmetry)};
}

// 7. Fit recovery on synthetic single-cable data.
Outcome fit_recovery(const fs::path& configs) {
    const auto t0 = std::chrono::steady_clock::now();
    auto cfg = load_config(configs / "cable_4m08_short.json");
    const std::vector<Param> free{Param::L_A, Param::a, Param::sn};
    const std::vector<double> truth{4.08, -1.754, 1.91};
    const auto grid = cfg.grid.grid();

    // Noiseless: every corner of the +/-5% box as a start.
    const auto clean = synth_spectrum(cfg.model, grid, 0.0, 1);
    double worst = 0.0;
    for (int corner = 0; corner < 8; ++corner) {
        auto c = cfg;
        for (int j = 0; j < 3; ++j) c.fit.initial[free[j]] = truth[j] * ((corner >> j) & 1 ? 1.05 : 0.95);
        const auto r = fit(make_fit_problem(c, clean, free), make_fit_config(c));
        for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(r.values[j] - truth[j]) / std::abs(truth[j]));
    }

    // Display noise sigma = 0.05, 50 seeded trials.
    int recovered = 0;
    std::mt19937_64 starts(77);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 50; ++trial) {
        const auto noisy = synth_spectrum(cfg.model, grid, 0.05, 1000 + trial);
        auto c = cfg;
        for (int j = 0; j < 3; ++j) c.fit.initial[free[j]] = truth[j] * (coin(starts) ? 1.05 : 0.95);
        const auto r = fit(make_fit_problem(c, noisy, free), make_fit_config(c));
        if (std::abs(r.values[0] - 4.08) / 4.08 < kNoisyRel) ++recovered;
    }
    const double elapsed = seconds_since(t0);
    return {worst < kRecoverRel && recovered >= kNoisyPassFraction * 50 && elapsed < kFitSeconds,
            "noiseless worst rel " + fmt("%.3g", worst) + " over 8 starts; sigma 0.05: L within 1% in " +
                std::to_string(recovered) + "/50; " + fmt("%.1f", elapsed) + " s"};
}

int run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string("\"") + TLNOISE_CLI + "\" " + args + " > \"" + log.string() + "\" 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

// 8. config -> simulate -> fit through the command-line tool.
Outcome pipeline(const fs::path& configs) {
    const auto dir = fs::temp_directory_path() / "tlnoise_acceptance";
    fs::create_directories(dir);
    const auto sim = dir / "sim.csv", report = dir / "fit.json", log = dir / "cli.log";
    const auto fit_cfg = dir / "fit.json.cfg";
    std::ofstream(fit_cfg) << R"({
  "cable": { "length_m": 4.08, "n": 1.60, "termination": "short" },
  "display": { "a": -1.754, "sn": 1.91 },
  "fit": { "initial": { "L": 4.284, "a": -1.6663, "sn": 1.8145 } }
})";
    const int rc_sim =
        run_cli("simulate --config \"" + (configs / "cable_4m08_short.json").string() + "\" --out \"" + sim.string() + "\"", log);
    const int rc_fit = run_cli("fit --config \"" + fit_cfg.string() + "\" --observed \"" + sim.string() +
                                   "\" --free L,a,sn --out \"" + report.string() + "\"",
                               log);
    if (rc_sim != 0 || rc_fit != 0)
        return {false, "exit codes simulate " + std::to_string(rc_sim) + ", fit " + std::to_string(rc_fit)};
    std::ifstream in(report);
    const auto j = nlohmann::json::parse(in);
    const std::vector<std::pair<std::string, double>> truth{{"L_A", 4.08}, {"a", -1.754}, {"sn", 1.91}};
    double worst = 0.0;
    for (const auto& p : j["parameters"])
        for (const auto& [name, value] : truth)
            if (p["name"] == name)
                worst = std::max(worst, std::abs(p["estimate"].get<double>() - value) / std::abs(value));
    fs::remove_all(dir);
    return {worst < kRecoverRel, "exit 0/0, worst rel error " + fmt("%.3g", worst)};
}

// Lag of the first correlation peak past the first zero crossing, from
// Pearson correlation of the row against itself shifted by `lag` samples.
std::size_t first_period_lag(const std::vector<double>& x) {
    auto pearson = [&](std::size_t lag) {
        const std::size_t n = x.size() - lag;
        double ma = 0, mb = 0;
        for (std::size_t i = 0; i < n; ++i) ma += x[i], mb += x[i + lag];
        ma /= n, mb /= n;
        double sab = 0, saa = 0, sbb = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = x[i] - ma, b = x[i + lag] - mb;
            sab += a * b, saa += a * a, sbb += b * b;
        }
        return sab / std::sqrt(saa * sbb);
    };
    const std::size_t max_lag = x.size() * 2 / 3;
    std::size_t lag = 1;
    while (lag < max_lag && pearson(lag) > 0.0) ++lag;
    double prev = pearson(lag), best = prev;
    std::size_t best_lag = lag;
    for (++lag; lag < max_lag; ++lag) {
        const double r = pearson(lag);
        if (r > best) best = r, best_lag = lag;
        if (r < prev && best > 0.9) break;  // past the first peak
        prev = r;
    }
    return best_lag;
}

// 9. Sweep rows periodic in f; toggling J3 shifts its features by half a period.
Outcome figure_shape(const fs::path& configs) {
    auto cfg = load_config(configs / "splitter_arm4_sweep.json");
    // Wide enough that the slowest row (L4 = 0) still shows three periods.
    cfg.grid = GridConfig{1e6, 1000e6, 20000};
    const auto grid = cfg.grid.grid();
    const double df = grid[1] - grid[0];
    const auto& sp = cfg.model.splitter;
    const double c = constants::speed_of_light;

    // The J4 term is isolated by removing the mean over its short/open states.
    auto open4 = cfg;
    open4.model.splitter.arm4.termination = Termination::open_circuit();
    const auto shorted = sweep(cfg, Arm::J4, 0.0, 4.0, 41);
    const auto opened = sweep(open4, Arm::J4, 0.0, 4.0, 41);
    int periodic_rows = 0;
    double worst_err = 0.0;
    for (std::size_t r = 0; r < shorted.lengths.size(); ++r) {
        std::vector<double> row(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i) {
            const double a = relative_power_from_display(shorted.at(r, i), cfg.model.display);
            const double b = relative_power_from_display(opened.at(r, i), cfg.model.display);
            row[i] = 0.5 * (a - b);
        }
        const double l4 = shorted.lengths[r];
        const double period = 1.0 / (2.0 * (sp.n * (sp.amp_cable_m + l4) / c - sp.splitter.tau(2, 4)));
        const double measured = first_period_lag(row) * df;
        const double err = std::abs(measured - period);
        worst_err = std::max(worst_err, err);
        if (err <= df) ++periodic_rows;
    }

    // J3 alone (J4 matched): open minima sit half a period from short minima.
    auto single = cfg;
    single.model.splitter.arm4.termination = Termination::matched();
    single.model.splitter.arm3.termination = Termination::short_circuit();
    auto single_open = single;
    single_open.model.splitter.arm3.termination = Termination::open_circuit();
    const auto a = simulate(single), b = simulate(single_open);
    const auto min_short = local_minima(a.linear_power), min_open = local_minima(b.linear_power);
    const double p3 = 1.0 / (2.0 * (sp.n * (sp.amp_cable_m + sp.arm3.length_m) / c - sp.splitter.tau(2, 3)));
    double worst_shift = 0.0;
    for (std::size_t io : min_open) {
        double nearest = 1e300;
        for (std::size_t is : min_short) nearest = std::min(nearest, std::abs(grid[io] - grid[is]));
        worst_shift = std::max(worst_shift, std::abs(nearest - p3 / 2.0));
    }
    const bool shift_ok = min_open.size() >= 3 && min_short.size() >= 3 && worst_shift <= df;
    const bool rows_ok = periodic_rows == static_cast<int>(shorted.lengths.size());
    return {rows_ok && shift_ok,
            std::to_string(periodic_rows) + "/" + std::to_string(shorted.lengths.size()) +
                " rows with correlation peak at 1/D4 (worst " + fmt("%.3f", worst_err / 1e6) +
                " MHz, grid " + fmt("%.3f", df / 1e6) + " MHz); J3 short->open shift off half period by " +
                fmt("%.3f", worst_shift / 1e6) + " MHz over " + std::to_string(min_open.size()) + " minima"};
}

}  // namespace

int main(int argc, char** argv) {
    int only = 0;
    if (argc == 3 && std::string(argv[1]) == "--only") only = std::atoi(argv[2]);
    const fs::path configs = TLNOISE_CONFIG_DIR;

    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"oracle equivalence", oracle_equivalence},
        {"complementarity", complementarity},
        {"null spacing", [&] { return null_spacing(configs); }},
        {"limit equivalence", limit_equivalence},
        {"m-average flatness", m_average},
        {"S-matrix validation", s_matrix},
        {"fit recovery", [&] { return fit_recovery(configs); }},
        {"full-pipeline closure", [&] { return pipeline(configs); }},
        {"figure-shape reproduction", [&] { return figure_shape(configs); }},
    };

    int failed = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (only && static_cast<int>(i) + 1 != only) continue;
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o = {false, std::string("exception: ") + e.what()};
        }
        if (!o.pass) ++failed;
        std::printf("%s criterion %zu (%s): %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first,
                    o.detail.c_str());
        std::fflush(stdout);
    }
    return failed ? 1 : 0;
}
