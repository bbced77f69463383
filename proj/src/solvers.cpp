#include "stefan/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "stefan/subprob_grid.hpp"

namespace stefan {

namespace {

long snap_cells(double level, double dx) {
    if (level <= 0.0) return 0;
    return static_cast<long>(std::floor(level / dx + 1e-9));
}

// alpha * (dead mass after snapping the candidate level z to whole cells),
// computed by the same translation code gamma_map uses so the Picard seed
// is a bitwise fixed point of the map at time 0.
double snapped_level_response(const SubProbabilityGrid& nu0, double alpha,
                              double z) {
    SubProbabilityGrid nu = nu0;
    translate_cells(nu, snap_cells(z, nu.dx));
    return alpha * std::min(1.0, nu.lost_mass);
}

} // namespace

double initial_jump(const InitialLaw& law, const SimulationConfig& cfg) {
    cfg.validate();
    const SubProbabilityGrid nu0 = discretize(law, cfg.space_grid());
    // Smallest z > 0 with alpha * (atom + nu((0, z])) < z; the scan skips
    // the spurious fixed point at 0 that plain value iteration sticks to.
    double z = physical_jump(nu0, cfg.alpha, cfg.jump_refine, nu0.lost_mass);
    if (nu0.lost_mass <= 0.0 && z <= 0.0) return 0.0;
    // Settle onto the snapped grid from above; the response is quantized
    // in z, so this terminates exactly.
    for (int i = 0; i < 200; ++i) {
        const double next = snapped_level_response(nu0, cfg.alpha, z);
        if (next >= z) break;
        z = next;
    }
    return z;
}

PicardResult minimal_picard(const InitialLaw& law, const SimulationConfig& cfg) {
    cfg.validate();
    const std::vector<double> times = cfg.grid_times();
    const double z0 = initial_jump(law, cfg);
    BoundaryPath current = BoundaryPath::constant(times, z0);

    PicardTrace trace;
    auto retain = [&trace](const BoundaryPath& p, int k) {
        trace.iterates.push_back(p);
        trace.iterate_indices.push_back(k);
    };
    retain(current, 0);

    for (int k = 1; k <= cfg.picard_max_iters; ++k) {
        BoundaryPath next = gamma_map(law, current, cfg);
        const double worst = BoundaryPath::min_difference(next, current);
        trace.worst_monotonicity = std::min(trace.worst_monotonicity, worst);
        const double delta = BoundaryPath::sup_distance(next, current);
        trace.sup_deltas.push_back(delta);
        trace.iterations = k;
        current = std::move(next);
        if (k % 10 == 0) retain(current, k);
        if (delta < cfg.picard_tol) {
            trace.converged = true;
            break;
        }
    }
    if (trace.iterate_indices.back() != trace.iterations)
        retain(current, trace.iterations);
    return PicardResult{std::move(current), std::move(trace)};
}

BoundaryPath physical_timestep(const InitialLaw& law, const SimulationConfig& cfg,
                               PhysicalDiagnostics* diag) {
    cfg.validate();
    const SpaceGrid grid = cfg.space_grid();
    const AbsorbingStepPlan plan = AbsorbingStepPlan::make(cfg.dt, cfg.dx);
    SubProbabilityGrid nu = discretize(law, grid);

    const std::vector<double> times = cfg.grid_times();
    std::vector<double> values(times.size(), 0.0);

    int worst_rounds = 0;
    // Resolves the boundary increment at one grid time: newly dead mass
    // owes alpha times itself in boundary rise, the rise absorbs more, and
    // the inf-formula scan shortcuts through genuine cascades. Converges
    // to the smallest admissible increment from below (lost_before is the
    // dead mass already fed back at earlier times).
    auto resolve_increment = [&](double lost_before) -> int {
        double applied = 0.0;
        int rounds = 0;
        for (; rounds < 10000; ++rounds) {
            const double newly_dead = nu.lost_mass - lost_before;
            const double owed_mass =
                std::max(0.0, newly_dead - applied / cfg.alpha);
            const double inc =
                physical_jump(nu, cfg.alpha, cfg.jump_refine, owed_mass);
            if (inc <= 1e-13) break;
            apply_boundary_increment(nu, inc);
            applied += inc;
        }
        return rounds;
    };

    // t = 0: the nonpositive atom dies before any diffusion and its loss
    // feeds back, together with any inf-formula cascade on the raw law.
    worst_rounds = std::max(worst_rounds, resolve_increment(0.0));
    values[0] = cfg.alpha * std::min(1.0, nu.lost_mass);
    if (diag && values[0] > 0.0) {
        diag->jump_times.push_back(0.0);
        diag->jump_sizes.push_back(values[0]);
    }

    const int m = static_cast<int>(times.size()) - 1;
    for (int k = 1; k <= m; ++k) {
        const double lost_before = nu.lost_mass;
        absorbing_step(nu, plan);
        worst_rounds = std::max(worst_rounds, resolve_increment(lost_before));
        values[static_cast<std::size_t>(k)] =
            cfg.alpha * std::min(1.0, nu.lost_mass);
    }

    if (diag) {
        diag->escaped = nu.escaped_mass;
        diag->remaining = nu.interior_mass();
        diag->max_cascade_rounds = worst_rounds;
        const double threshold = std::max(5.0 * cfg.dx, 1e-4);
        for (int k = 1; k <= m; ++k) {
            const double inc = values[static_cast<std::size_t>(k)] -
                               values[static_cast<std::size_t>(k - 1)];
            if (inc > threshold) {
                diag->jump_times.push_back(times[static_cast<std::size_t>(k)]);
                diag->jump_sizes.push_back(inc);
            }
        }
    }
    return BoundaryPath(times, std::move(values));
}

double solve_residual(const InitialLaw& law, const BoundaryPath& candidate,
                      const SimulationConfig& cfg) {
    if (!candidate.is_nondecreasing(1e-12))
        throw std::invalid_argument("residual requires a nondecreasing candidate");
    const BoundaryPath mapped = gamma_map(law, candidate, cfg);
    double sup = 0.0;
    for (std::size_t i = 0; i < mapped.times().size(); ++i) {
        const double t = mapped.times()[i];
        sup = std::max(sup, std::abs(candidate.value_at(t) - mapped.values()[i]));
    }
    return sup;
}

} // namespace stefan
