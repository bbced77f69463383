#include "stefan/subprob_grid.hpp"

#include <cmath>

namespace stefan {

double SubProbabilityGrid::interior_mass() const {
    double acc = 0.0;
    for (double m : cell_masses) acc += m;
    return acc;
}

SubProbabilityGrid discretize(const InitialLaw& law, const SpaceGrid& grid) {
    SubProbabilityGrid nu;
    nu.dx = grid.dx;
    const int n = grid.n_cells();
    nu.cell_masses.assign(static_cast<std::size_t>(n), 0.0);

    if (law.is_atomic()) {
        for (const auto& [loc, w] : law.atoms()) {
            if (w == 0.0) continue;
            if (loc <= 0.0) {
                nu.lost_mass += w;
                continue;
            }
            // Split between the midpoints bracketing loc; the share below
            // the lowest midpoint is absorbed, beyond the highest escapes.
            const double pos = loc / grid.dx - 0.5; // fractional cell index
            const double fl = std::floor(pos);
            const double frac = pos - fl;
            const auto lo = static_cast<long>(fl);
            auto deposit = [&](long cell, double mass) {
                if (mass <= 0.0) return;
                if (cell < 0)
                    nu.lost_mass += mass;
                else if (cell >= n)
                    nu.escaped_mass += mass;
                else
                    nu.cell_masses[static_cast<std::size_t>(cell)] += mass;
            };
            deposit(lo, w * (1.0 - frac));
            deposit(lo + 1, w * frac);
        }
    } else {
        nu.lost_mass = law.cdf(0.0);
        double prev = nu.lost_mass;
        for (int j = 0; j < n; ++j) {
            const double c = law.cdf(grid.right_edge(j));
            nu.cell_masses[static_cast<std::size_t>(j)] = std::max(0.0, c - prev);
            prev = c;
        }
        nu.escaped_mass = std::max(0.0, 1.0 - prev);
    }
    return nu;
}

} // namespace stefan
