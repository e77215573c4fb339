#pragma once

#include <functional>
#include <span>
#include <vector>

namespace tlnoise {

struct Bounds {
    double lower;
    double upper;
};

struct SimplexOptions {
    /// Converged when every vertex lies within x_tolerance * max(|x|, 1e-12)
    /// of the best vertex in every coordinate.
    double x_tolerance = 1e-6;
    /// ... or when the objective spread across the simplex drops below this.
    double f_tolerance = 1e-12;
    int max_iterations = 5000;
    /// Initial simplex edge as a fraction of each bound width.
    double initial_step = 0.05;
    /// Rebuild the simplex around the optimum and rerun this many times.
    int restarts = 2;
};

struct SimplexResult {
    std::vector<double> x;
    double value = 0.0;
    double initial_value = 0.0;
    int iterations = 0;
    bool converged = false;
};

using Objective = std::function<double(std::span<const double>)>;

/// Bounded Nelder-Mead. Trial points that leave the box are mirrored back
/// across the violated bound, so every evaluated point is feasible.
SimplexResult minimize_simplex(const Objective& objective, std::span<const double> start,
                               std::span<const Bounds> bounds, const SimplexOptions& options = {});

/// Mirrors x back into [lower, upper].
double reflect_into(double x, const Bounds& b);

}  // namespace tlnoise
