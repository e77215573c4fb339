#include "tlnoise/nelder_mead.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tlnoise/error.hpp"

namespace tlnoise {

double reflect_into(double x, const Bounds& b) {
    const double width = b.upper - b.lower;
    if (width <= 0.0) return b.lower;
    if (x >= b.lower && x <= b.upper) return x;
    double t = std::fmod(x - b.lower, 2.0 * width);
    if (t < 0.0) t += 2.0 * width;
    if (t > width) t = 2.0 * width - t;
    return b.lower + t;
}

namespace {

using Point = std::vector<double>;

struct Vertex {
    Point x;
    double f;
};

class Simplex {
public:
    Simplex(const Objective& objective, std::span<const Bounds> bounds)
        : objective_(objective), bounds_(bounds) {}

    double evaluate(Point& x) {
        for (std::size_t i = 0; i < x.size(); ++i) x[i] = reflect_into(x[i], bounds_[i]);
        const double f = objective_(x);
        return std::isnan(f) ? std::numeric_limits<double>::infinity() : f;
    }

    void build(const Point& start, double step_fraction) {
        vertices_.clear();
        Point x0 = start;
        vertices_.push_back({x0, evaluate(x0)});
        for (std::size_t i = 0; i < start.size(); ++i) {
            Point x = start;
            const double step = step_fraction * (bounds_[i].upper - bounds_[i].lower);
            x[i] = (x[i] + step <= bounds_[i].upper) ? x[i] + step : x[i] - step;
            const double f = evaluate(x);
            vertices_.push_back({std::move(x), f});
        }
        sort();
    }

    bool converged(const SimplexOptions& opt) const {
        const auto& best = vertices_.front();
        if (vertices_.back().f - best.f <= opt.f_tolerance) return true;
        for (std::size_t i = 0; i < best.x.size(); ++i) {
            const double scale =
                std::max(std::abs(best.x[i]), 1e-6 * (bounds_[i].upper - bounds_[i].lower));
            for (const auto& v : vertices_)
                if (std::abs(v.x[i] - best.x[i]) > opt.x_tolerance * scale) return false;
        }
        return true;
    }

    // One Nelder-Mead step with the standard coefficients (1, 2, 1/2, 1/2).
    void step() {
        const std::size_t n = vertices_.size() - 1;
        Point centroid(n, 0.0);
        for (std::size_t v = 0; v < n; ++v)
            for (std::size_t i = 0; i < n; ++i) centroid[i] += vertices_[v].x[i] / n;
        const Vertex& worst = vertices_.back();

        auto along = [&](double t) {
            Point p(n);
            for (std::size_t i = 0; i < n; ++i) p[i] = centroid[i] + t * (worst.x[i] - centroid[i]);
            return p;
        };

        Point reflected = along(-1.0);
        const double fr = evaluate(reflected);
        if (fr < vertices_.front().f) {
            Point expanded = along(-2.0);
            const double fe = evaluate(expanded);
            replace_worst(fe < fr ? Vertex{std::move(expanded), fe} : Vertex{std::move(reflected), fr});
            return;
        }
        if (fr < vertices_[n - 1].f) {
            replace_worst({std::move(reflected), fr});
            return;
        }
        const bool outside = fr < worst.f;
        Point contracted = along(outside ? -0.5 : 0.5);
        const double fc = evaluate(contracted);
        if (fc < std::min(fr, worst.f)) {
            replace_worst({std::move(contracted), fc});
            return;
        }
        const Point best = vertices_.front().x;
        for (std::size_t v = 1; v <= n; ++v) {
            for (std::size_t i = 0; i < n; ++i)
                vertices_[v].x[i] = best[i] + 0.5 * (vertices_[v].x[i] - best[i]);
            vertices_[v].f = evaluate(vertices_[v].x);
        }
        sort();
    }

    const Vertex& best() const { return vertices_.front(); }

private:
    void replace_worst(Vertex v) {
        vertices_.back() = std::move(v);
        sort();
    }

    void sort() {
        std::stable_sort(vertices_.begin(), vertices_.end(),
                         [](const Vertex& a, const Vertex& b) { return a.f < b.f; });
    }

    const Objective& objective_;
    std::span<const Bounds> bounds_;
    std::vector<Vertex> vertices_;
};

}  // namespace

SimplexResult minimize_simplex(const Objective& objective, std::span<const double> start,
                               std::span<const Bounds> bounds, const SimplexOptions& options) {
    if (start.empty()) fail(ErrorCode::InvalidArgument, "simplex needs at least one parameter");
    if (start.size() != bounds.size())
        fail(ErrorCode::InvalidArgument, "start point and bounds differ in dimension");
    for (std::size_t i = 0; i < start.size(); ++i) {
        if (!(bounds[i].lower <= bounds[i].upper) || !std::isfinite(bounds[i].lower) ||
            !std::isfinite(bounds[i].upper))
            fail(ErrorCode::InvalidArgument, "simplex bounds must be finite and ordered");
        if (start[i] < bounds[i].lower || start[i] > bounds[i].upper)
            fail(ErrorCode::InvalidArgument, "simplex start lies outside its bounds");
    }

    Simplex simplex(objective, bounds);
    SimplexResult result;
    Point x(start.begin(), start.end());
    result.initial_value = simplex.evaluate(x);

    double step = options.initial_step;
    for (int round = 0; round <= options.restarts; ++round) {
        simplex.build(x, step);
        bool done = false;
        while (result.iterations < options.max_iterations) {
            if (simplex.converged(options)) {
                done = true;
                break;
            }
            simplex.step();
            ++result.iterations;
        }
        if (!done) done = simplex.converged(options);
        x = simplex.best().x;
        result.converged = done;
        if (!done) break;
        // Restart with a small simplex around the optimum to escape collapse.
        step = std::max(options.initial_step * 1e-2, 1e-8);
    }
    result.x = x;
    result.value = simplex.best().f;
    return result;
}

}  // namespace tlnoise
