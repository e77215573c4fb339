#include "tlnoise/fitter.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "tlnoise/error.hpp"

namespace tlnoise {

namespace {

constexpr Param all_params[] = {Param::L_A,    Param::L_3,    Param::L_4,    Param::n,
                                Param::a,      Param::sn,     Param::tau_23, Param::tau_24,
                                Param::tau_13, Param::tau_14};

std::pair<int, int> tau_ports(Param p) {
    switch (p) {
        case Param::tau_23: return {2, 3};
        case Param::tau_24: return {2, 4};
        case Param::tau_13: return {1, 3};
        case Param::tau_14: return {1, 4};
        default: break;
    }
    fail(ErrorCode::InvalidArgument, "not a delay parameter");
}

bool applies_to(Param p, ModelKind kind) {
    if (kind == ModelKind::Splitter) return true;
    return p == Param::L_A || p == Param::n || p == Param::a || p == Param::sn;
}

// Display levels of the candidate model at the observed frequencies; NaN
// where the model cannot be evaluated.
std::vector<double> model_levels(const ModelParameters& params, const std::vector<double>& freqs) {
    const FrequencyGrid grid(freqs);
    const NoiseSpectrum power = linear_spectrum(params, grid);
    const NoiseSpectrum reference = matched_reference_spectrum(params, grid);
    std::vector<double> levels(freqs.size(), std::numeric_limits<double>::quiet_NaN());
    for (std::size_t i = 0; i < freqs.size(); ++i) {
        const double ref = reference.linear_power[i];
        const double p = power.linear_power[i];
        if (std::isnan(p) || !(ref > 0.0)) continue;
        const double arg = p / ref + params.display.sn;
        if (arg > 0.0) levels[i] = params.display.a + std::log10(arg);
    }
    return levels;
}

ModelParameters apply(const FitProblem& problem, std::span<const double> candidate) {
    ModelParameters params = problem.base;
    for (std::size_t i = 0; i < candidate.size(); ++i)
        set_param(params, problem.free_parameters[i].id, candidate[i]);
    return params;
}

bool observed_included(const NoiseSpectrum& s, std::size_t i) {
    return !s.excluded[i] && std::isfinite(s.display_level[i]);
}

struct Evaluation {
    std::vector<double> residuals;
    std::size_t excluded = 0;
};

Evaluation evaluate(const FitProblem& problem, std::span<const double> candidate) {
    const auto& obs = problem.observed;
    const auto levels = model_levels(apply(problem, candidate), obs.frequencies);
    Evaluation e;
    e.residuals.reserve(levels.size());
    for (std::size_t i = 0; i < levels.size(); ++i) {
        if (!observed_included(obs, i) || std::isnan(levels[i])) {
            ++e.excluded;
            continue;
        }
        e.residuals.push_back(obs.display_level[i] - levels[i]);
    }
    return e;
}

double sum_squares(const std::vector<double>& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return s;
}

std::vector<std::vector<double>> lattice_starts(const FitProblem& problem, int per_param) {
    std::vector<double> initial;
    for (const auto& fp : problem.free_parameters) initial.push_back(fp.initial);
    std::vector<std::vector<double>> starts{initial};
    if (per_param <= 1) return starts;
    for (std::size_t i = 0; i < problem.free_parameters.size(); ++i) {
        const auto& fp = problem.free_parameters[i];
        if (!is_shape_param(fp.id)) continue;
        std::vector<std::vector<double>> next;
        for (const auto& s : starts) {
            for (int j = 0; j < per_param; ++j) {
                auto copy = s;
                const double width = fp.bounds.upper - fp.bounds.lower;
                copy[i] = fp.bounds.lower + width * (j + 0.5) / per_param;
                next.push_back(std::move(copy));
            }
        }
        starts = std::move(next);
    }
    starts.insert(starts.begin(), initial);
    return starts;
}

}  // namespace

std::string_view param_name(Param p) noexcept {
    switch (p) {
        case Param::L_A: return "L_A";
        case Param::L_3: return "L_3";
        case Param::L_4: return "L_4";
        case Param::n: return "n";
        case Param::a: return "a";
        case Param::sn: return "sn";
        case Param::tau_23: return "tau_23";
        case Param::tau_24: return "tau_24";
        case Param::tau_13: return "tau_13";
        case Param::tau_14: return "tau_14";
    }
    return "?";
}

Param parse_param(std::string_view name) {
    if (name == "L") return Param::L_A;
    for (Param p : all_params)
        if (param_name(p) == name) return p;
    fail(ErrorCode::InvalidArgument, "unknown fit parameter \"" + std::string(name) + "\"");
}

bool is_shape_param(Param p) noexcept { return p != Param::a && p != Param::sn; }

double get_param(const ModelParameters& params, Param p) {
    const bool single = params.kind == ModelKind::SingleCable;
    if (!applies_to(p, params.kind))
        fail(ErrorCode::InvalidArgument,
             std::string(param_name(p)) + " does not apply to the single-cable model");
    switch (p) {
        case Param::L_A: return single ? params.cable.cable.length_m : params.splitter.amp_cable_m;
        case Param::L_3: return params.splitter.arm3.length_m;
        case Param::L_4: return params.splitter.arm4.length_m;
        case Param::n: return single ? params.cable.cable.n : params.splitter.n;
        case Param::a: return params.display.a;
        case Param::sn: return params.display.sn;
        default: {
            const auto [i, j] = tau_ports(p);
            return params.splitter.splitter.tau(i, j);
        }
    }
}

void set_param(ModelParameters& params, Param p, double value) {
    const bool single = params.kind == ModelKind::SingleCable;
    if (!applies_to(p, params.kind))
        fail(ErrorCode::InvalidArgument,
             std::string(param_name(p)) + " does not apply to the single-cable model");
    switch (p) {
        case Param::L_A:
            (single ? params.cable.cable.length_m : params.splitter.amp_cable_m) = value;
            return;
        case Param::L_3: params.splitter.arm3.length_m = value; return;
        case Param::L_4: params.splitter.arm4.length_m = value; return;
        case Param::n: (single ? params.cable.cable.n : params.splitter.n) = value; return;
        case Param::a: params.display.a = value; return;
        case Param::sn: params.display.sn = value; return;
        default: {
            const auto [i, j] = tau_ports(p);
            params.splitter.splitter.set_tau(i, j, value);
        }
    }
}

void FitProblem::validate() const {
    observed.validate();
    if (observed.display_level.size() != observed.size())
        fail(ErrorCode::ValidationError, "observed spectrum carries no display levels");
    if (free_parameters.empty())
        fail(ErrorCode::ValidationError, "fit needs at least one free parameter");
    for (std::size_t i = 0; i < free_parameters.size(); ++i) {
        const auto& fp = free_parameters[i];
        const std::string name(param_name(fp.id));
        for (std::size_t j = 0; j < i; ++j)
            if (free_parameters[j].id == fp.id)
                fail(ErrorCode::ValidationError, "parameter " + name + " listed twice");
        if (!applies_to(fp.id, base.kind))
            fail(ErrorCode::ValidationError, name + " does not apply to the single-cable model");
        if (!std::isfinite(fp.bounds.lower) || !std::isfinite(fp.bounds.upper) ||
            !(fp.bounds.lower < fp.bounds.upper))
            fail(ErrorCode::ValidationError, name + " needs finite bounds with lower < upper");
        if (!(fp.initial >= fp.bounds.lower && fp.initial <= fp.bounds.upper))
            fail(ErrorCode::ValidationError, name + " initial guess lies outside its bounds");
        if (fp.id == Param::sn && fp.bounds.lower < 0.0)
            fail(ErrorCode::ValidationError, "sn lower bound must be >= 0");
        if (fp.id == Param::n && fp.bounds.lower < 1.0)
            fail(ErrorCode::ValidationError, "n lower bound must be >= 1");
        if ((fp.id == Param::L_A || fp.id == Param::L_3 || fp.id == Param::L_4) &&
            fp.bounds.lower < 0.0)
            fail(ErrorCode::ValidationError, name + " lower bound must be >= 0");
    }
}

std::vector<double> residuals(const FitProblem& problem, std::span<const double> candidate) {
    if (candidate.size() != problem.free_parameters.size())
        fail(ErrorCode::InvalidArgument, "candidate size does not match the free parameters");
    return evaluate(problem, candidate).residuals;
}

FitResult fit(const FitProblem& problem, const FitConfig& config) {
    problem.validate();
    const auto& obs = problem.observed;
    std::size_t included = 0;
    double lo = std::numeric_limits<double>::infinity();
    double hi = -lo;
    for (std::size_t i = 0; i < obs.size(); ++i) {
        if (!observed_included(obs, i)) continue;
        ++included;
        lo = std::min(lo, obs.display_level[i]);
        hi = std::max(hi, obs.display_level[i]);
    }
    const std::size_t k = problem.free_parameters.size();
    if (included < 2 * k)
        fail(ErrorCode::InsufficientData, "need at least " + std::to_string(2 * k) +
                                              " included points, have " + std::to_string(included));
    const bool shape_free = std::any_of(problem.free_parameters.begin(),
                                        problem.free_parameters.end(),
                                        [](const FreeParameter& fp) { return is_shape_param(fp.id); });
    if (shape_free && hi - lo <= 1e-12 * std::max(1.0, std::abs(hi)))
        fail(ErrorCode::InsufficientData,
             "observed spectrum is flat; lengths, index and delays are unidentifiable");

    std::vector<Bounds> bounds;
    for (const auto& fp : problem.free_parameters) bounds.push_back(fp.bounds);
    const Objective objective = [&](std::span<const double> x) {
        const auto e = evaluate(problem, x);
        if (e.residuals.empty()) return std::numeric_limits<double>::infinity();
        return sum_squares(e.residuals);
    };

    FitResult result;
    bool have_best = false;
    int iterations = 0;
    for (const auto& start : lattice_starts(problem, config.multistart)) {
        const SimplexResult run = minimize_simplex(objective, start, bounds, config.simplex);
        iterations += run.iterations;
        if (!have_best) result.initial_rss = run.initial_value;
        if (!have_best || run.value < result.rss) {
            have_best = true;
            result.values = run.x;
            result.rss = run.value;
            result.converged = run.converged;
        }
    }
    result.iterations = iterations;
    const auto final_eval = evaluate(problem, result.values);
    result.excluded_points = final_eval.excluded;
    result.used_points = final_eval.residuals.size();
    return result;
}

FitReport fit_report(const FitResult& result, const FitProblem& problem) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["model"] = problem.base.kind == ModelKind::SingleCable ? "single-cable" : "splitter";
    j["log_base"] = DisplayModel::log_base;
    j["converged"] = result.converged;
    j["rss"] = result.rss;
    j["initial_rss"] = result.initial_rss;
    j["iterations"] = result.iterations;
    j["used_points"] = result.used_points;
    j["excluded_points"] = result.excluded_points;

    std::ostringstream text;
    text << std::setprecision(10);
    text << "model: " << j["model"].get<std::string>() << "\n";
    text << "converged: " << (result.converged ? "yes" : "no") << " after " << result.iterations
         << " iterations\n";

    ordered_json params = ordered_json::array();
    bool n_free = false, length_free = false;
    for (std::size_t i = 0; i < problem.free_parameters.size(); ++i) {
        const auto& fp = problem.free_parameters[i];
        const double value = i < result.values.size() ? result.values[i] : fp.initial;
        const double edge = 1e-6 * (fp.bounds.upper - fp.bounds.lower);
        const bool active =
            value - fp.bounds.lower <= edge || fp.bounds.upper - value <= edge;
        n_free |= fp.id == Param::n;
        length_free |= fp.id == Param::L_A || fp.id == Param::L_3 || fp.id == Param::L_4;
        params.push_back({{"name", param_name(fp.id)},
                          {"estimate", value},
                          {"initial", fp.initial},
                          {"lower", fp.bounds.lower},
                          {"upper", fp.bounds.upper},
                          {"bound_active", active}});
        text << "  " << std::left << std::setw(8) << param_name(fp.id) << value << "  ["
             << fp.bounds.lower << ", " << fp.bounds.upper << "]"
             << (active ? "  bound-active" : "") << "\n";
    }
    j["parameters"] = std::move(params);

    const auto r = residuals(problem, result.values);
    double mean = 0.0, max_abs = 0.0;
    for (double x : r) {
        mean += x;
        max_abs = std::max(max_abs, std::abs(x));
    }
    const double count = r.empty() ? 1.0 : static_cast<double>(r.size());
    mean /= count;
    const double rms = std::sqrt(result.rss / count);
    j["residuals"] = {{"mean", mean}, {"rms", rms}, {"max_abs", max_abs}};

    ordered_json warnings = ordered_json::array();
    if (n_free && length_free)
        warnings.push_back("n and a cable length are both free; the spectrum depends only on "
                           "their product");
    j["warnings"] = warnings;

    text << "rss: " << result.rss << " (initial " << result.initial_rss << ")\n";
    text << "residuals: mean " << mean << ", rms " << rms << ", max |r| " << max_abs << "\n";
    if (result.excluded_points > 0) text << "excluded points: " << result.excluded_points << "\n";
    for (const auto& w : warnings) text << "warning: " << w.get<std::string>() << "\n";

    return {text.str(), j.dump(2)};
}

}  // namespace tlnoise
