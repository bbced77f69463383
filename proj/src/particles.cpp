#include "stefan/particles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "stefan/rng.hpp"

namespace stefan {

namespace {

constexpr std::uint32_t kSlotInit = 0;
constexpr std::uint32_t kSlotStep = 1;

} // namespace

CascadeOutcome cascade_resolve(std::span<const double> survivor_positions,
                               double per_particle_loss, int newly_hit) {
    if (newly_hit < 1)
        throw std::invalid_argument("cascade needs at least one hit particle");

    const std::size_t n = survivor_positions.size();
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i)
        order[i] = {survivor_positions[i], i};
    std::sort(order.begin(), order.end());

    CascadeOutcome out;
    out.rounds = 0;
    std::size_t absorbed = 0;
    // One pass over the sorted survivors; a "round" covers every survivor
    // reachable under the current jump before it gets extended.
    std::size_t next = 0;
    while (true) {
        const double jump =
            per_particle_loss * static_cast<double>(newly_hit + absorbed);
        std::size_t reach = next;
        while (reach < n && order[reach].first <= jump) ++reach;
        if (reach == next) break;
        ++out.rounds;
        for (std::size_t i = next; i < reach; ++i)
            out.absorbed.push_back(order[i].second);
        absorbed += reach - next;
        next = reach;
    }
    out.total_jump =
        per_particle_loss * static_cast<double>(newly_hit + absorbed);
    return out;
}

SimulateResult simulate(const InitialLaw& law, int n_particles,
                        const SimulationConfig& cfg) {
    cfg.validate();
    if (n_particles < 1)
        throw std::invalid_argument("simulate requires at least one particle");

    const int n = n_particles;
    const double per_loss = cfg.alpha / static_cast<double>(n);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double nan = std::numeric_limits<double>::quiet_NaN();

    ParticleEnsemble ens;
    ens.positions.assign(static_cast<std::size_t>(n), 0.0);
    ens.alive.assign(static_cast<std::size_t>(n), 1);
    ens.hit_times.assign(static_cast<std::size_t>(n), nan);

    const std::vector<double> times = cfg.grid_times();
    std::vector<double> loss_values(times.size(), 0.0);
    CascadeLog log;

    // Initial draw; nonpositive starts are hit at t = 0.
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        const auto u = rng::uniform_pair(cfg.seed, static_cast<std::uint64_t>(i),
                                         0, kSlotInit);
        ens.positions[static_cast<std::size_t>(i)] = law.quantile(u.u0);
    }

    // Survivors near the boundary, gathered deterministically and handed
    // to the cascade in sorted order. Candidates are capped at alpha: the
    // loss process never exceeds alpha, so no particle above alpha can be
    // absorbed within a single grid time.
    std::vector<double> candidate_pos;
    std::vector<int> candidate_idx;
    const double candidate_cap = cfg.alpha * (1.0 + 1e-12);

    auto run_cascade = [&](int newly_hit, double t) {
        if (newly_hit < 1) return 0.0;
        candidate_pos.clear();
        candidate_idx.clear();
        for (int i = 0; i < n; ++i) {
            if (!ens.alive[static_cast<std::size_t>(i)]) continue;
            const double x = ens.positions[static_cast<std::size_t>(i)];
            if (x <= candidate_cap) {
                candidate_pos.push_back(x);
                candidate_idx.push_back(i);
            }
        }
        const CascadeOutcome outcome =
            cascade_resolve(candidate_pos, per_loss, newly_hit);
        for (std::size_t k : outcome.absorbed) {
            const int i = candidate_idx[k];
            ens.alive[static_cast<std::size_t>(i)] = 0;
            ens.hit_times[static_cast<std::size_t>(i)] = t;
            ++ens.dead_count;
        }
        // Frozen between grid times: the whole jump lands here.
        if (outcome.total_jump > 0.0) {
#pragma omp parallel for schedule(static)
            for (int i = 0; i < n; ++i)
                if (ens.alive[static_cast<std::size_t>(i)])
                    ens.positions[static_cast<std::size_t>(i)] -=
                        outcome.total_jump;
        }
        if (!outcome.absorbed.empty())
            log.events.push_back(CascadeEvent{
                t, outcome.rounds, static_cast<int>(outcome.absorbed.size()),
                outcome.total_jump});
        return outcome.total_jump;
    };

    // t = 0: nonpositive initial positions are the triggers.
    {
        int hit0 = 0;
        for (int i = 0; i < n; ++i) {
            if (ens.positions[static_cast<std::size_t>(i)] <= 0.0) {
                ens.alive[static_cast<std::size_t>(i)] = 0;
                ens.hit_times[static_cast<std::size_t>(i)] = 0.0;
                ++ens.dead_count;
                ++hit0;
            }
        }
        if (hit0 > 0) run_cascade(hit0, 0.0);
        loss_values[0] = ens.loss(cfg.alpha);
    }

    const int m = static_cast<int>(times.size()) - 1;
    std::vector<std::uint8_t> newly_dead(static_cast<std::size_t>(n), 0);
    for (int k = 1; k <= m; ++k) {
        const std::uint32_t step = static_cast<std::uint32_t>(k);
        int hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
        for (int i = 0; i < n; ++i) {
            if (!ens.alive[static_cast<std::size_t>(i)]) {
                newly_dead[static_cast<std::size_t>(i)] = 0;
                continue;
            }
            const auto u = rng::uniform_pair(
                cfg.seed, static_cast<std::uint64_t>(i), step, kSlotStep);
            const double x_before = ens.positions[static_cast<std::size_t>(i)];
            const double x_after =
                x_before + sqrt_dt * rng::normal_quantile(u.u0);
            bool dead = x_after <= 0.0;
            if (!dead) {
                // Brownian bridge: P(min over the step <= 0 | endpoints).
                const double p_hit =
                    std::exp(-2.0 * x_before * x_after / cfg.dt);
                dead = u.u1 < p_hit;
            }
            ens.positions[static_cast<std::size_t>(i)] = x_after;
            newly_dead[static_cast<std::size_t>(i)] = dead ? 1 : 0;
            if (dead) ++hits;
        }
        if (hits > 0) {
            const double t = times[static_cast<std::size_t>(k)];
            for (int i = 0; i < n; ++i) {
                if (newly_dead[static_cast<std::size_t>(i)]) {
                    ens.alive[static_cast<std::size_t>(i)] = 0;
                    ens.hit_times[static_cast<std::size_t>(i)] = t;
                    ++ens.dead_count;
                }
            }
            run_cascade(hits, t);
        }
        loss_values[static_cast<std::size_t>(k)] = ens.loss(cfg.alpha);
    }

    return SimulateResult{BoundaryPath(times, std::move(loss_values)),
                          std::move(log), std::move(ens)};
}

double crossing_diagnostic(const std::vector<std::vector<double>>& windows) {
    if (windows.empty()) return 1.0;
    std::size_t violating = 0;
    for (const auto& w : windows) {
        if (w.empty()) {
            ++violating; // empty infimum: degenerate window counts against
            continue;
        }
        double lo = 0.0;
        for (double v : w) lo = std::min(lo, v);
        if (lo >= 0.0) ++violating;
    }
    return static_cast<double>(violating) / static_cast<double>(windows.size());
}

} // namespace stefan
