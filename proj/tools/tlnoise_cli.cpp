// Command-line front end over the tlnoise C API.

#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>

#include <CLI11.hpp>

#include "tlnoise/tlnoise.h"

namespace {

enum Exit : int {
    kOk = 0,
    kConfig = 1,
    kIo = 2,
    kNotConverged = 3,
    kInsufficientData = 4,
    kOracleMismatch = 5,
};

int exit_code(tln_status status) {
    switch (status) {
        case TLN_OK: return kOk;
        case TLN_IO_ERROR:
        case TLN_FORMAT_ERROR:
        case TLN_NON_MONOTONIC_FREQUENCY: return kIo;
        case TLN_NOT_CONVERGED: return kNotConverged;
        case TLN_INSUFFICIENT_DATA: return kInsufficientData;
        case TLN_ORACLE_MISMATCH: return kOracleMismatch;
        default: return kConfig;
    }
}

int report(tln_status status, const char* context) {
    std::fprintf(stderr, "tlnoise: %s: %s: %s\n", context, tln_status_name(status), tln_last_error());
    return exit_code(status);
}

struct ConfigDeleter {
    void operator()(tln_config* c) const { tln_config_free(c); }
};
struct SpectrumDeleter {
    void operator()(tln_spectrum* s) const { tln_spectrum_free(s); }
};
struct FitDeleter {
    void operator()(tln_fit* f) const { tln_fit_free(f); }
};
using ConfigPtr = std::unique_ptr<tln_config, ConfigDeleter>;
using SpectrumPtr = std::unique_ptr<tln_spectrum, SpectrumDeleter>;
using FitPtr = std::unique_ptr<tln_fit, FitDeleter>;

// "out.csv" -> "out.matched.csv"
std::string sibling_path(const std::string& out, const std::string& tag) {
    std::filesystem::path p(out);
    const auto ext = p.extension().string();
    p.replace_extension();
    return p.string() + "." + tag + (ext.empty() ? ".csv" : ext);
}

int load(const std::string& path, ConfigPtr& config) {
    tln_config* raw = nullptr;
    const tln_status st = tln_config_load(path.c_str(), &raw);
    config.reset(raw);
    return st == TLN_OK ? kOk : report(st, path.c_str());
}

int run_simulate(const std::string& config_path, const std::string& out, const std::string& compare) {
    ConfigPtr config;
    if (int rc = load(config_path, config)) return rc;
    tln_spectrum* raw = nullptr;
    tln_status st = tln_simulate(config.get(), &raw);
    SpectrumPtr spectrum(raw);
    if (st != TLN_OK) return report(st, "simulate");
    if ((st = tln_spectrum_write_csv(spectrum.get(), out.c_str(), 0)) != TLN_OK)
        return report(st, out.c_str());
    std::printf("wrote %zu points to %s\n", tln_spectrum_size(spectrum.get()), out.c_str());
    if (compare == "matched") {
        const auto normalized = sibling_path(out, "matched");
        if ((st = tln_spectrum_write_csv(spectrum.get(), normalized.c_str(), 1)) != TLN_OK)
            return report(st, normalized.c_str());
        std::printf("wrote matched-normalized trace to %s\n", normalized.c_str());
    }
    return kOk;
}

int run_sweep(const std::string& config_path, const std::string& out, int arm, double from,
              double to, int steps) {
    ConfigPtr config;
    if (int rc = load(config_path, config)) return rc;
    std::size_t rows = 0;
    const tln_status st = tln_sweep_write_csv(config.get(), arm, from, to, steps, out.c_str(), &rows);
    if (st != TLN_OK) return report(st, "sweep");
    std::printf("wrote %zu rows to %s\n", rows, out.c_str());
    return kOk;
}

int run_fit(const std::string& config_path, const std::string& observed_path,
            const std::string& free, const std::string& out, int max_iterations) {
    ConfigPtr config;
    if (int rc = load(config_path, config)) return rc;
    tln_spectrum* raw_spectrum = nullptr;
    tln_status st = tln_spectrum_read_csv(observed_path.c_str(), &raw_spectrum);
    SpectrumPtr observed(raw_spectrum);
    if (st != TLN_OK) return report(st, observed_path.c_str());

    tln_fit* raw_fit = nullptr;
    const tln_status fit_status =
        tln_fit_run(config.get(), observed.get(), free.c_str(), max_iterations, &raw_fit);
    FitPtr fit(raw_fit);
    if (!fit) return report(fit_status, "fit");
    std::fputs(tln_fit_report_text(fit.get()), stdout);
    if ((st = tln_fit_write_report(fit.get(), out.c_str())) != TLN_OK) return report(st, out.c_str());
    if (fit_status != TLN_OK) {
        std::fprintf(stderr, "tlnoise: fit did not converge; best-so-far written to %s\n",
                     out.c_str());
        return exit_code(fit_status);
    }
    return kOk;
}

int run_oracle(const std::string& config_path, const std::string& out, int terms, int samples,
               std::uint64_t seed) {
    ConfigPtr config;
    if (int rc = load(config_path, config)) return rc;
    double deviation = 0.0;
    int evaluated = 0;
    const tln_status st =
        tln_oracle_check(config.get(), terms, samples, seed, &deviation, &evaluated);
    if (st != TLN_OK && st != TLN_ORACLE_MISMATCH) return report(st, "oracle-check");
    char line[160];
    std::snprintf(line, sizeof line, "max relative deviation %.3e over %d frequencies (%d terms): %s\n",
                  deviation, evaluated, terms, st == TLN_OK ? "ok" : "MISMATCH");
    std::fputs(line, stdout);
    if (!out.empty()) {
        std::FILE* f = std::fopen(out.c_str(), "w");
        if (!f) {
            std::fprintf(stderr, "tlnoise: cannot write %s\n", out.c_str());
            return kIo;
        }
        std::fputs(line, f);
        std::fclose(f);
    }
    return exit_code(st);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal-noise spectra of reflective coaxial lines and splitter networks"};
    app.require_subcommand(1);
    std::uint64_t seed = 1;
    app.add_option("--seed", seed, "Seed for every randomized step")->capture_default_str();
    app.set_version_flag("--version", std::string(tln_version()));

    std::string config_path, out;

    auto* simulate = app.add_subcommand("simulate", "Write the model spectrum as CSV");
    std::string compare;
    simulate->add_option("--config", config_path, "Topology config")->required();
    simulate->add_option("--out", out, "Output CSV")->required();
    simulate->add_option("--compare", compare, "Also write the trace normalized to the matched case")
        ->check(CLI::IsMember({"matched"}));

    auto* sweep = app.add_subcommand("sweep", "Sweep one splitter arm length");
    int arm = 4, steps = 41;
    double from = 0.0, to = 4.0;
    sweep->add_option("--config", config_path, "Topology config")->required();
    sweep->add_option("--out", out, "Output CSV")->required();
    sweep->add_option("--arm", arm, "Arm to sweep")->check(CLI::IsMember({3, 4}))->capture_default_str();
    sweep->add_option("--from", from, "First length in meters")->capture_default_str();
    sweep->add_option("--to", to, "Last length in meters")->capture_default_str();
    sweep->add_option("--steps", steps, "Number of lengths")->capture_default_str();

    auto* fit = app.add_subcommand("fit", "Fit model parameters to an observed spectrum");
    std::string observed, free_params = "L,a,sn";
    int max_iterations = 0;
    fit->add_option("--config", config_path, "Topology config")->required();
    fit->add_option("--out", out, "Output JSON report")->required();
    fit->add_option("--observed", observed, "Observed spectrum CSV")->required();
    fit->add_option("--free", free_params, "Comma-separated free parameters")->capture_default_str();
    fit->add_option("--max-iterations", max_iterations, "Iteration cap (0 keeps the config value)");

    auto* oracle = app.add_subcommand("oracle-check", "Compare the bounce series with the closed form");
    int terms = 200, samples = 1000;
    oracle->add_option("--config", config_path, "Topology config")->required();
    oracle->add_option("--out", out, "Optional summary file");
    oracle->add_option("--terms", terms, "Bounce terms to sum")->capture_default_str();
    oracle->add_option("--samples", samples, "Random frequencies")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kConfig;
    }

    if (*simulate) return run_simulate(config_path, out, compare);
    if (*sweep) return run_sweep(config_path, out, arm, from, to, steps);
    if (*fit) return run_fit(config_path, observed, free_params, out, max_iterations);
    if (*oracle) return run_oracle(config_path, out, terms, samples, seed);
    return kConfig;
}
