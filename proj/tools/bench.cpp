// Benchmark of the OpenMP kernels against their serial references:
// the absorbing diffusion step and one particle sweep. Prints timings,
// speedup, and agreement so regressions in either path are visible.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "stefan/density_engine.hpp"
#include "stefan/particles.hpp"
#include "stefan/subprob_grid.hpp"

using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point t0) {
    return std::chrono::duration<double>(clock_type::now() - t0).count();
}

stefan::SubProbabilityGrid make_density(int n, double dx) {
    stefan::SubProbabilityGrid nu;
    nu.dx = dx;
    nu.cell_masses.assign(static_cast<std::size_t>(n), 0.0);
    double total = 0.0;
    for (int j = 0; j < n; ++j) {
        const double x = (j + 0.5) * dx;
        const double v = std::exp(-0.5 * (x - 1.5) * (x - 1.5) / 0.09);
        nu.cell_masses[static_cast<std::size_t>(j)] = v;
        total += v;
    }
    for (auto& m : nu.cell_masses) m /= total;
    return nu;
}

} // namespace

int main() {
    const double dx = 1e-3, dt = 1e-3;
    const int n = 6000;
    const int reps = 50;

#ifdef _OPENMP
    std::printf("openmp: max threads %d\n", omp_get_max_threads());
#else
    std::printf("openmp: not enabled\n");
#endif

    auto plan = stefan::AbsorbingStepPlan::make(dt, dx);
    std::printf("absorbing step: n=%d cells, kernel halfwidth %d, %d reps\n", n,
                plan.kernel_halfwidth, reps);

    auto nu_ref = make_density(n, dx);
    auto t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) stefan::absorbing_step_reference(nu_ref, plan);
    const double t_ref = seconds_since(t0);

    auto nu_fast = make_density(n, dx);
    t0 = clock_type::now();
    for (int r = 0; r < reps; ++r) stefan::absorbing_step(nu_fast, plan);
    const double t_fast = seconds_since(t0);

    double max_diff = std::abs(nu_ref.lost_mass - nu_fast.lost_mass);
    for (int j = 0; j < n; ++j)
        max_diff = std::max(max_diff,
                            std::abs(nu_ref.cell_masses[static_cast<std::size_t>(j)] -
                                     nu_fast.cell_masses[static_cast<std::size_t>(j)]));

    std::printf("  reference: %8.3f ms/step\n", 1e3 * t_ref / reps);
    std::printf("  kernel:    %8.3f ms/step  (speedup %.2fx, max |diff| %.3e)\n",
                1e3 * t_fast / reps, t_ref / t_fast, max_diff);

    // Particle sweep: same seed, one thread vs all threads.
    const int n_particles = 200000;
    stefan::SimulationConfig cfg;
    cfg.horizon = 0.05;
    cfg.dt = 1e-3;
    cfg.alpha = 0.1;
    cfg.seed = 7;
    const auto law = stefan::InitialLaw::uniform(0.0, 1.0);

#ifdef _OPENMP
    omp_set_num_threads(1);
#endif
    t0 = clock_type::now();
    const auto serial = stefan::simulate(law, n_particles, cfg);
    const double t_serial = seconds_since(t0);

#ifdef _OPENMP
    omp_set_num_threads(omp_get_num_procs());
#endif
    t0 = clock_type::now();
    const auto parallel = stefan::simulate(law, n_particles, cfg);
    const double t_par = seconds_since(t0);

    bool identical = true;
    for (std::size_t i = 0; i < serial.loss_path.values().size(); ++i)
        if (serial.loss_path.values()[i] != parallel.loss_path.values()[i])
            identical = false;

    std::printf("particles: N=%d, %d steps\n", n_particles, cfg.n_steps());
    std::printf("  1 thread:    %8.3f ms\n", 1e3 * t_serial);
    std::printf("  all threads: %8.3f ms  (speedup %.2fx, paths %s)\n",
                1e3 * t_par, t_serial / t_par,
                identical ? "bit-identical" : "DIFFER");
    return identical && max_diff < 1e-12 ? 0 : 1;
}
