#include "stefan/density_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefan {

namespace {

constexpr double kTwoPi = 6.283185307179586476925;

// Snap a boundary level to whole cells; the small forward guard keeps
// exact multiples of dx from rounding down.
long snap_cells(double level, double dx) {
    if (level <= 0.0) return 0;
    return static_cast<long>(std::floor(level / dx + 1e-9));
}

} // namespace

AbsorbingStepPlan AbsorbingStepPlan::make(double dt, double dx, bool parallel) {
    if (!(dt > 0.0) || !(dx > 0.0))
        throw std::invalid_argument("step plan requires positive dt and dx");
    AbsorbingStepPlan plan;
    plan.dt = dt;
    plan.dx = dx;
    plan.parallel = parallel;
    const double sigma = std::sqrt(dt);
    plan.kernel_halfwidth =
        std::max(1, static_cast<int>(std::ceil(8.0 * sigma / dx)));
    const int K = plan.kernel_halfwidth;
    plan.weights.assign(static_cast<std::size_t>(2 * K + 1), 0.0);
    const double norm = dx / (sigma * std::sqrt(kTwoPi));
    double raw_sum = 0.0;
    for (int k = -K; k <= K; ++k) {
        const double y = k * dx / sigma;
        const double w = norm * std::exp(-0.5 * y * y);
        plan.weights[static_cast<std::size_t>(k + K)] = w;
        raw_sum += w;
    }
    for (double& w : plan.weights) w /= raw_sum;
    plan.suffix.assign(plan.weights.size() + 1, 0.0);
    for (int a = 2 * K; a >= 0; --a)
        plan.suffix[static_cast<std::size_t>(a)] =
            plan.suffix[static_cast<std::size_t>(a + 1)] +
            plan.weights[static_cast<std::size_t>(a)];
    plan.suffix.pop_back();
    return plan;
}

double absorbing_step(SubProbabilityGrid& nu, const AbsorbingStepPlan& plan) {
    const int n = nu.n_cells();
    const int K = plan.kernel_halfwidth;
    const double* m = nu.cell_masses.data();
    const double* w = plan.weights.data(); // centered at index K
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    double* o = out.data();

    const double before = nu.interior_mass();

#pragma omp parallel for schedule(static) if (plan.parallel)
    for (int j = 0; j < n; ++j) {
        const int lo = std::max(0, j - K);
        const int hi = std::min(n - 1, j + K);
        double free_part = 0.0;
        // w is symmetric, so w[j - i] = w[i - j]; indexing by (i - j + K)
        // keeps both arrays ascending for the vectorizer.
        const double* wrow = w + (K - j);
        for (int i = lo; i <= hi; ++i) free_part += m[i] * wrow[i];
        double image_part = 0.0;
        const int ihi = std::min(n - 1, K - j - 1);
        const double* wimg = w + (K + j + 1);
        for (int i = 0; i <= ihi; ++i) image_part += m[i] * wimg[i];
        o[j] = std::max(0.0, free_part - image_part);
    }

    // Escape past x_max via kernel tail sums, one term per source cell.
    double escaped = 0.0;
    for (int i = 0; i < n; ++i)
        escaped += m[i] * (plan.tail_from(n - i) - plan.tail_from(n + i + 1));

    nu.cell_masses.swap(out);
    const double after = nu.interior_mass();
    const double absorbed = std::max(0.0, before - after - escaped);
    nu.lost_mass += absorbed;
    nu.escaped_mass += escaped;
    return absorbed;
}

double absorbing_step_reference(SubProbabilityGrid& nu,
                                const AbsorbingStepPlan& plan) {
    const int n = nu.n_cells();
    const int K = plan.kernel_halfwidth;
    const std::vector<double> m = nu.cell_masses;
    const double before = nu.interior_mass();

    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        double acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += m[static_cast<std::size_t>(i)] *
                   (plan.weight(j - i) - plan.weight(i + j + 1));
        out[static_cast<std::size_t>(j)] = std::max(0.0, acc);
    }

    double escaped = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = n; j <= i + K; ++j)
            escaped += m[static_cast<std::size_t>(i)] *
                       (plan.weight(j - i) - plan.weight(i + j + 1));

    nu.cell_masses.swap(out);
    const double after = nu.interior_mass();
    const double absorbed = std::max(0.0, before - after - escaped);
    nu.lost_mass += absorbed;
    nu.escaped_mass += escaped;
    return absorbed;
}

double apply_boundary_increment(SubProbabilityGrid& nu, double delta) {
    if (delta < 0.0)
        throw std::invalid_argument(
            "boundary increments must be nonnegative (the boundary is "
            "nondecreasing)");
    if (delta == 0.0) return 0.0;

    const int n = nu.n_cells();
    const double cells = delta / nu.dx;
    const double fl = std::floor(cells);
    const double r = cells - fl;
    const long q = static_cast<long>(fl);

    const double before = nu.interior_mass();
    std::vector<double> out(static_cast<std::size_t>(n), 0.0);
    for (int j = 0; j < n; ++j) {
        const long s0 = j + q;     // source for weight (1 - r)
        const long s1 = j + q + 1; // source for weight r
        double v = 0.0;
        if (s0 < n) v += (1.0 - r) * nu.cell_masses[static_cast<std::size_t>(s0)];
        if (s1 < n) v += r * nu.cell_masses[static_cast<std::size_t>(s1)];
        out[static_cast<std::size_t>(j)] = v;
    }
    nu.cell_masses.swap(out);
    const double absorbed = std::max(0.0, before - nu.interior_mass());
    nu.lost_mass += absorbed;
    return absorbed;
}

double translate_cells(SubProbabilityGrid& nu, long cells) {
    if (cells < 0) throw std::invalid_argument("translation must be nonnegative");
    if (cells == 0) return 0.0;
    const long n = nu.n_cells();
    double absorbed = 0.0;
    const long q = std::min(cells, n);
    for (long j = 0; j < q; ++j)
        absorbed += nu.cell_masses[static_cast<std::size_t>(j)];
    for (long j = 0; j + q < n; ++j)
        nu.cell_masses[static_cast<std::size_t>(j)] =
            nu.cell_masses[static_cast<std::size_t>(j + q)];
    for (long j = n - q; j < n; ++j)
        nu.cell_masses[static_cast<std::size_t>(j)] = 0.0;
    nu.lost_mass += absorbed;
    return absorbed;
}

double physical_jump(const SubProbabilityGrid& nu, double alpha, bool refine,
                     double base_mass) {
    const int n = nu.n_cells();
    const double dx = nu.dx;
    double cum = base_mass;
    double prev_cum = base_mass;
    for (int j = 0; j < n; ++j) {
        prev_cum = cum;
        cum += nu.cell_masses[static_cast<std::size_t>(j)];
        const double edge = (j + 1) * dx;
        if (alpha * cum < edge) {
            if (j == 0 && alpha * base_mass <= 0.0) return 0.0;
            if (!refine) return edge;
            const double prev_edge = j * dx;
            const double denom =
                dx - alpha * nu.cell_masses[static_cast<std::size_t>(j)];
            if (!(denom > 0.0)) return edge;
            const double s =
                std::clamp((alpha * prev_cum - prev_edge) / denom, 0.0, 1.0);
            return prev_edge + s * dx;
        }
    }
    // No crossing inside the grid: the cumulative is flat past x_max, so
    // the crossing sits at alpha * total (capped formula keeps the scan
    // total on a finite mesh).
    const double cap = alpha * cum;
    return refine ? cap : cap + dx;
}

BoundaryPath gamma_map(const InitialLaw& law, const BoundaryPath& ell,
                       const SimulationConfig& cfg, GammaDiagnostics* diag) {
    cfg.validate();
    if (!ell.is_nondecreasing(1e-12))
        throw std::invalid_argument("gamma_map requires a nondecreasing boundary");

    const SpaceGrid grid = cfg.space_grid();
    const AbsorbingStepPlan plan = AbsorbingStepPlan::make(cfg.dt, cfg.dx);
    SubProbabilityGrid nu = discretize(law, grid);

    const std::vector<double> times = cfg.grid_times();
    const int m = static_cast<int>(times.size()) - 1;
    std::vector<double> values(times.size(), 0.0);

    // Jump of the candidate at 0 acts on the initial density.
    long applied = snap_cells(ell.value_at(0.0), cfg.dx);
    translate_cells(nu, applied);
    values[0] = cfg.alpha * std::min(1.0, nu.lost_mass);

    for (int k = 1; k <= m; ++k) {
        const long level = snap_cells(ell.value_at(times[static_cast<std::size_t>(k)]),
                                      cfg.dx);
        if (!cfg.increment_after_diffuse) {
            translate_cells(nu, level - applied);
            applied = level;
            absorbing_step(nu, plan);
        } else {
            absorbing_step(nu, plan);
            translate_cells(nu, level - applied);
            applied = level;
        }
        values[static_cast<std::size_t>(k)] = cfg.alpha * std::min(1.0, nu.lost_mass);
    }

    if (diag) {
        diag->escaped = nu.escaped_mass;
        diag->remaining = nu.interior_mass();
        diag->absorbed = nu.lost_mass;
    }
    return BoundaryPath(times, std::move(values));
}

SubProbabilityGrid evolve_pre_jump_density(const InitialLaw& law,
                                           const BoundaryPath& ell, int k,
                                           const SimulationConfig& cfg,
                                           double* owed_mass) {
    cfg.validate();
    const SpaceGrid grid = cfg.space_grid();
    SubProbabilityGrid nu = discretize(law, grid);
    if (k <= 0) {
        if (owed_mass) *owed_mass = nu.lost_mass;
        return nu;
    }
    const AbsorbingStepPlan plan = AbsorbingStepPlan::make(cfg.dt, cfg.dx);
    long applied = 0;
    double last_diffusion_loss = 0.0;
    for (int j = 1; j <= k; ++j) {
        const double t_prev = (j - 1) * cfg.dt;
        const long level = snap_cells(ell.value_at(t_prev), cfg.dx);
        translate_cells(nu, level - applied);
        applied = level;
        last_diffusion_loss = absorbing_step(nu, plan);
    }
    if (owed_mass) *owed_mass = last_diffusion_loss;
    return nu;
}

} // namespace stefan
