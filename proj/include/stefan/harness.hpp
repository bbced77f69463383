#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "stefan/boundary_path.hpp"
#include "stefan/config.hpp"
#include "stefan/initial_law.hpp"
#include "stefan/m1.hpp"
#include "stefan/solvers.hpp"

namespace stefan {

/// Thrown by experiments whose law sequence fails the required CDF
/// ordering; the CLI maps it to exit code 2.
class OrderingViolation : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SolverKind { Picard, Physical };

struct SolveSummary {
    std::string label;
    double parameter = 0.0; // shift or smoothing rate
    bool converged = true;
    int iterations = 0;
    double residual = 0.0;
    double final_value = 0.0;
    std::vector<double> jump_times;
    std::vector<double> jump_sizes;
    BoundaryPath path; // kept in memory; CSV export via the CLI
};

struct ExperimentReport {
    std::string experiment_id;
    SimulationConfig config;
    std::vector<SolveSummary> items;
    std::string distance_kind; // "consecutive" or "to_limit"
    std::vector<double> m1_distances;
    double gap = 0.0;
    double limit_residual = 0.0;
    bool ordering_violation = false;
    bool dominance_ok = true;
    bool monotone_ok = true;
    std::vector<std::string> notes;
    DenseConvergenceReport dense;
    /// Jump-rule check of physical_limit_residual: per detected jump of
    /// the limit path, |observed - inf-formula| and the tolerance used.
    std::vector<double> jump_check_times;
    std::vector<double> jump_check_residuals;
    double jump_check_tolerance = 0.0;
};

/// Density bound under which the harness labels a law "uniqueness
/// regime". The inf-formula never crosses for densities below 1/(2 alpha),
/// so minimal and physical solutions coincide and stay continuous at desk
/// scale.
bool is_uniqueness_regime(const InitialLaw& law, double alpha);

/// Solves for each shifted law X + x, verifies the shift ordering
/// x < y => solution(x) >= solution(y) pointwise, and reports M1 distances
/// between consecutive solutions.
ExperimentReport shift_scan(const InitialLaw& law, std::vector<double> shifts,
                            SolverKind solver, const SimulationConfig& cfg);

/// Ordered approximation of the law from below (right shifts shrinking to
/// zero, or exponential smoothing with growing rate): verifies the CDF
/// dominance chain, the pointwise solution ordering, and the decay of M1
/// distances to the unperturbed solution.
enum class ApproximationMode { RightShift, ExponentialSmoothing };
ExperimentReport right_continuity_probe(const InitialLaw& law,
                                        ApproximationMode mode,
                                        const std::vector<double>& parameters,
                                        const SimulationConfig& cfg);

/// Same checks for a caller-supplied law sequence; throws
/// OrderingViolation when the dominance chain fails.
ExperimentReport right_continuity_probe(const InitialLaw& limit_law,
                                        const std::vector<InitialLaw>& sequence,
                                        const SimulationConfig& cfg);

/// Left shifts increasing to zero: estimates the left-limit solution,
/// checks it solves the equation (residual) and dominates the minimal
/// solution, and reports the sup gap.
ExperimentReport left_limit_probe(const InitialLaw& law,
                                  const std::vector<double>& shifts,
                                  const SimulationConfig& cfg);

/// Physical solutions along a weakly converging law sequence: forms the
/// limit path, then checks every detected jump of the limit against the
/// inf-formula evaluated on the recomputed pre-jump density.
ExperimentReport physical_limit_residual(const std::vector<InitialLaw>& laws,
                                         const InitialLaw& limit_law,
                                         const SimulationConfig& cfg);

} // namespace stefan
