#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "stefan/boundary_path.hpp"
#include "stefan/config.hpp"
#include "stefan/initial_law.hpp"

namespace stefan {

struct CascadeEvent {
    double time;
    int rounds;        // waves of the greedy resolution
    int absorbed;      // particles absorbed by the cascade (beyond the triggers)
    double total_jump; // loss increment at this grid time
};

struct CascadeLog {
    std::vector<CascadeEvent> events;
};

struct ParticleEnsemble {
    std::vector<double> positions;
    std::vector<std::uint8_t> alive;
    std::vector<double> hit_times; // NaN while alive
    int dead_count = 0;

    /// L^N = (alpha / N) * dead_count, exactly.
    double loss(double alpha) const {
        return alpha * static_cast<double>(dead_count) /
               static_cast<double>(positions.size());
    }
};

struct CascadeOutcome {
    double total_jump;
    int rounds;
    std::vector<std::size_t> absorbed; // indices into the survivor span
};

/// Greedy cascade: start from the loss of the newly hit particles,
/// repeatedly absorb every survivor at or below the running jump and add
/// their loss, until nothing new is absorbed. Returns the smallest fixed
/// point; the final jump is per_particle_loss * (newly_hit + #absorbed)
/// computed in one multiplication so equal cascades compare bit-equal.
CascadeOutcome cascade_resolve(std::span<const double> survivor_positions,
                               double per_particle_loss, int newly_hit);

struct SimulateResult {
    BoundaryPath loss_path;
    CascadeLog log;
    ParticleEnsemble ensemble;
};

/// Euler scheme for the N-particle system with Brownian-bridge kill
/// correction and grid-time cascades. All randomness is counter-based on
/// (seed, particle, step), so the result is bit-identical for any thread
/// count.
SimulateResult simulate(const InitialLaw& law, int n_particles,
                        const SimulationConfig& cfg);

/// Fraction of post-hit windows that never go strictly below the hitting
/// level at sampling resolution. Each window holds f(tau + s) - f(tau) for
/// s = dt, 2 dt, ..., h. Empty windows (h = 0) count as violating.
double crossing_diagnostic(const std::vector<std::vector<double>>& windows);

} // namespace stefan
