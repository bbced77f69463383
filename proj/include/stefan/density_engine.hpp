#pragma once

#include <vector>

#include "stefan/boundary_path.hpp"
#include "stefan/config.hpp"
#include "stefan/initial_law.hpp"
#include "stefan/subprob_grid.hpp"

namespace stefan {

/// One-step transition plan for Brownian motion killed at 0: discrete
/// Gaussian weights truncated at kernel_halfwidth cells and renormalized,
/// with image subtraction applied against the reflected index.
struct AbsorbingStepPlan {
    double dt;
    double dx;
    int kernel_halfwidth;
    bool parallel = true;

    /// weights[k + kernel_halfwidth] = phi_dt(k*dx)*dx, renormalized so the
    /// full stencil sums to 1.
    std::vector<double> weights;
    /// suffix[a + kernel_halfwidth] = sum of weights with index >= a.
    std::vector<double> suffix;

    double weight(int k) const {
        const int K = kernel_halfwidth;
        return (k < -K || k > K) ? 0.0 : weights[static_cast<std::size_t>(k + K)];
    }
    double tail_from(int a) const { // sum_{k >= a} weight(k)
        const int K = kernel_halfwidth;
        if (a > K) return 0.0;
        if (a < -K) a = -K;
        return suffix[static_cast<std::size_t>(a + K)];
    }

    /// Default halfwidth covers 8 standard deviations of one step.
    static AbsorbingStepPlan make(double dt, double dx, bool parallel = true);
};

/// Advances nu by one diffusion step with absorption at 0 (method of
/// images): m'_j = sum_i m_i [phi_dt(x_j - x_i) - phi_dt(x_j + x_i)] dx.
/// Updates lost_mass/escaped_mass and returns the mass absorbed this step.
double absorbing_step(SubProbabilityGrid& nu, const AbsorbingStepPlan& plan);

/// Direct transcription of the same formula, serial, kept as the
/// reference implementation for tests and the benchmark.
double absorbing_step_reference(SubProbabilityGrid& nu,
                                const AbsorbingStepPlan& plan);

/// Translates the density left by delta >= 0 with linear redistribution
/// across cell boundaries; mass landing at or below 0 is absorbed into
/// lost_mass. Returns the absorbed mass. Rejects negative delta.
double apply_boundary_increment(SubProbabilityGrid& nu, double delta);

/// Exact translation by whole cells (used by gamma_map, where boundary
/// levels are snapped to the mesh so the scheme is monotone cell by cell).
double translate_cells(SubProbabilityGrid& nu, long cells);

/// Smallest x > 0 with alpha * (base_mass + nu((0, x])) < x, scanned over
/// cell edges. `base_mass` is mass already owed to the boundary at this
/// instant (newly dead, not yet fed back); the plain physical jump uses 0.
/// With refine, the crossing is located inside the cell by linear
/// interpolation of the cumulative. Returns 0 when the first cell already
/// satisfies the condition; capped at alpha * total + dx past the grid.
double physical_jump(const SubProbabilityGrid& nu, double alpha, bool refine,
                     double base_mass = 0.0);

struct GammaDiagnostics {
    double escaped = 0.0;
    double remaining = 0.0;
    double absorbed = 0.0;
};

/// The loss generated by a candidate boundary: t -> alpha * P(tau^ell <= t)
/// on the configured grid. Boundary levels are snapped down to whole cells
/// (increment-then-diffuse within each step), which keeps the output
/// monotone in ell and in the law exactly. Output is nondecreasing, cadlag
/// on the grid and bounded by alpha; the value at 0 covers the initial
/// nonpositive mass plus absorption from ell's jump at 0.
BoundaryPath gamma_map(const InitialLaw& law, const BoundaryPath& ell,
                       const SimulationConfig& cfg,
                       GammaDiagnostics* diag = nullptr);

/// State of the surviving density just before grid time index k under the
/// frozen boundary ell: all boundary levels up to t_{k-1} applied, diffused
/// through t_k, ell's jump at t_k not yet applied. k = 0 returns the
/// discretized law untouched. `owed_mass` receives the mass newly dead at
/// t_k whose feedback is still pending (the final diffusion step's loss,
/// or the nonpositive atom at k = 0) -- the scan base the physical stepper
/// would use at this instant.
SubProbabilityGrid evolve_pre_jump_density(const InitialLaw& law,
                                           const BoundaryPath& ell, int k,
                                           const SimulationConfig& cfg,
                                           double* owed_mass = nullptr);

} // namespace stefan
