#pragma once

#include <vector>

#include "stefan/boundary_path.hpp"

namespace stefan {

/// Extends a path defined for t >= 0 to [-1, infinity) with the constant
/// value 0 on [-1, 0), so the M1 comparison sees a continuous left
/// endpoint. Idempotent.
BoundaryPath embed_left(const BoundaryPath& path);

/// Levy-type distance between monotone grid paths on a common [-1, T]:
/// max of the smallest eps such that each path lies inside the other's
/// eps-tube (f(t - eps) - eps <= g(t) <= f(t + eps) + eps at every grid
/// knot, both directions), and the endpoint gaps at -1 and T. On monotone
/// paths this metrizes the same convergence as M1: pointwise on a dense
/// set including the endpoints. Computed by bisection over eps; zero iff
/// the paths agree at all knots. Rejects mismatched horizons.
double levy_m1_distance(const BoundaryPath& f, const BoundaryPath& g);

struct DenseConvergenceReport {
    std::vector<double> probe_times;
    /// abs_errors[p][i] = |f^i(probe p) - limit(probe p)|.
    std::vector<std::vector<double>> abs_errors;
    std::vector<double> tail_errors;           // last element per probe
    std::vector<bool> monotone_nonincreasing;  // per probe, 1e-12 slack
    bool tails_vanishing = true;               // all tails below tolerance
    double tail_tolerance = 0.0;
};

/// Per-probe convergence table |f^n(t) - f(t)| with flags for
/// non-monotone or non-vanishing tails.
DenseConvergenceReport dense_convergence_report(
    const std::vector<BoundaryPath>& sequence, const BoundaryPath& limit,
    std::vector<double> probe_times, double tail_tolerance = 1e-2);

/// Default probes: -1, T, and midpoints between consecutive detected
/// jumps of the limit (jump threshold passed by the caller).
std::vector<double> default_probe_times(const BoundaryPath& limit,
                                        double jump_threshold);

} // namespace stefan
