#pragma once

#include <vector>

#include "stefan/boundary_path.hpp"
#include "stefan/config.hpp"
#include "stefan/density_engine.hpp"
#include "stefan/initial_law.hpp"

namespace stefan {

struct PicardTrace {
    /// First, every 10th, and last iterate (memory-bounded retention).
    std::vector<BoundaryPath> iterates;
    std::vector<int> iterate_indices;
    /// sup-norm increments between successive iterates, one per step.
    std::vector<double> sup_deltas;
    bool converged = false;
    int iterations = 0;
    /// Most negative pointwise increment seen across all steps; the
    /// iteration is monotone up to rounding, so this stays above -1e-12.
    double worst_monotonicity = 0.0;
};

struct PicardResult {
    BoundaryPath path;
    PicardTrace trace;
};

/// Time-0 loss of the minimal/physical solution: the smallest z with
/// z = alpha * (mass at or below z after feedback), found by the
/// inf-formula scan on the initial density and settled onto the snapped
/// grid used by gamma_map. Zero for laws with no initial cascade.
double initial_jump(const InitialLaw& law, const SimulationConfig& cfg);

/// Minimal solution by monotone Picard iteration of gamma_map starting
/// from the flat path at the time-0 jump. Iterates are nondecreasing in
/// the iteration index (asserted, not assumed); stops on sup-norm
/// increment below picard_tol or on picard_max_iters (NonConvergence is a
/// flag on the trace, not an abort).
PicardResult minimal_picard(const InitialLaw& law, const SimulationConfig& cfg);

struct PhysicalDiagnostics {
    double escaped = 0.0;
    double remaining = 0.0;
    std::vector<double> jump_times;
    std::vector<double> jump_sizes;
    int max_cascade_rounds = 0;
};

/// Physical solution by explicit time stepping: diffuse, then resolve the
/// boundary increment owed by newly absorbed mass together with any
/// inf-formula cascade, re-evaluating until no increment remains. The
/// jump at t = 0 is evaluated on the initial law before any diffusion.
BoundaryPath physical_timestep(const InitialLaw& law, const SimulationConfig& cfg,
                               PhysicalDiagnostics* diag = nullptr);

/// sup_t |candidate(t) - gamma_map(law, candidate)(t)| over the grid.
double solve_residual(const InitialLaw& law, const BoundaryPath& candidate,
                      const SimulationConfig& cfg);

} // namespace stefan
