#pragma once

#include <vector>

#include "stefan/config.hpp"
#include "stefan/initial_law.hpp"

namespace stefan {

/// Cell masses of the sub-probability measure of surviving states on
/// (0, x_max], plus the two sinks of the mass ledger: lost_mass (absorbed
/// at the boundary, feeds the loss process) and escaped_mass (diffused
/// beyond x_max, tracked but outside the dynamics).
struct SubProbabilityGrid {
    double dx = 1e-3;
    std::vector<double> cell_masses;
    double lost_mass = 0.0;
    double escaped_mass = 0.0;

    int n_cells() const { return static_cast<int>(cell_masses.size()); }
    double midpoint(int j) const { return (j + 0.5) * dx; }

    double interior_mass() const;

    /// interior + lost + escaped; conserved by every engine operation.
    double total_mass() const { return interior_mass() + lost_mass + escaped_mass; }
};

/// Lump a law onto the grid. Continuous variants use per-cell CDF
/// differences (mass-exact midpoint lumping); atomic variants split each
/// atom linearly between the two bracketing midpoints. Mass at or below 0
/// lands in lost_mass, mass beyond x_max in escaped_mass.
SubProbabilityGrid discretize(const InitialLaw& law, const SpaceGrid& grid);

} // namespace stefan
