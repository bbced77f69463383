#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

namespace stefan {

/// Uniform spatial mesh over (0, x_max]: cell j is (j*dx, (j+1)*dx] with
/// mass lumped at the midpoint (j + 0.5)*dx.
struct SpaceGrid {
    double dx = 1e-3;
    double x_max = 6.0;

    int n_cells() const { return static_cast<int>(std::lround(x_max / dx)); }
    double midpoint(int j) const { return (j + 0.5) * dx; }
    double right_edge(int j) const { return (j + 1) * dx; }
};

struct SimulationConfig {
    double alpha = 1.0;     // feedback strength
    double horizon = 1.0;   // T
    double dt = 1e-3;
    double dx = 1e-3;
    double x_max = 6.0;
    std::uint64_t seed = 12345;
    double picard_tol = 1e-6;
    int picard_max_iters = 200;
    bool jump_refine = true;

    // Step-order variant inside gamma_map kept for convergence studies:
    // false = apply boundary increment, then diffuse (the default scheme).
    bool increment_after_diffuse = false;

    void validate() const {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        if (!(horizon > 0.0)) throw std::invalid_argument("horizon must be positive");
        if (!(dt > 0.0) || !(dt < horizon))
            throw std::invalid_argument("dt must satisfy 0 < dt < horizon");
        if (!(dx > 0.0) || !(dx < x_max))
            throw std::invalid_argument("dx must satisfy 0 < dx < x_max");
        if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
        if (picard_max_iters < 1)
            throw std::invalid_argument("picard_max_iters must be positive");
    }

    int n_steps() const { return static_cast<int>(std::lround(horizon / dt)); }

    SpaceGrid space_grid() const { return SpaceGrid{dx, x_max}; }

    /// Grid times 0, dt, ..., n_steps*dt.
    std::vector<double> grid_times() const {
        const int m = n_steps();
        std::vector<double> t(m + 1);
        for (int k = 0; k <= m; ++k) t[k] = k * dt;
        return t;
    }
};

} // namespace stefan
