#pragma once

#include <utility>
#include <variant>
#include <vector>

#include "stefan/config.hpp"

namespace stefan {

/// Law of the initial state X. Mass at or below zero is absorbed at t = 0
/// by every solver, so the law only needs an exact CDF and (for atomic
/// variants) the atom locations; shifts are tracked as an analytic offset
/// so that shifting composes additively with no grid error.
class InitialLaw {
public:
    struct Uniform {
        double a;
        double b;
    };
    struct TruncatedNormal { // lower cut at 0
        double mean;
        double sd;
    };
    struct DiracMixture {
        std::vector<std::pair<double, double>> atoms; // (location, weight)
    };
    struct Empirical {
        std::vector<double> samples; // sorted ascending
    };
    struct GridDensity {
        double dx;
        std::vector<double> cell_masses; // cell j = (j dx, (j+1) dx]
        double atom_at_zero;             // mass at or below 0
    };

    static InitialLaw uniform(double a, double b);
    static InitialLaw truncated_normal(double mean, double sd);
    static InitialLaw dirac_mixture(std::vector<std::pair<double, double>> atoms);
    static InitialLaw dirac(double location) {
        return dirac_mixture({{location, 1.0}});
    }
    static InitialLaw empirical(std::vector<double> samples);
    static InitialLaw grid_density(double dx, std::vector<double> cell_masses,
                                   double atom_at_zero);

    /// P(X <= x); right-continuous and nondecreasing.
    double cdf(double x) const;

    /// Inverse CDF for u in (0, 1) (left-continuous generalized inverse).
    double quantile(double u) const;

    /// E|X|, computed in closed form where available and by quadrature on
    /// the CDF otherwise.
    double mean_abs() const;

    /// Supremum of the density; +infinity for atomic variants.
    double density_sup() const;

    /// Law of X + s.
    InitialLaw shifted(double s) const;

    double offset() const { return offset_; }

    /// Atoms of the law (location incl. offset, weight); empty for
    /// continuous variants. Used for exact lumping during discretization.
    std::vector<std::pair<double, double>> atoms() const;

    bool is_atomic() const;

    /// Upper end of the support (quantile of 1 - 1e-8 for unbounded laws).
    double support_upper() const;

    const std::variant<Uniform, TruncatedNormal, DiracMixture, Empirical,
                       GridDensity>&
    base() const {
        return base_;
    }

private:
    InitialLaw() = default;
    std::variant<Uniform, TruncatedNormal, DiracMixture, Empirical, GridDensity>
        base_;
    double offset_ = 0.0;
};

/// shift_law of the interface: law of X + s.
inline InitialLaw shift_law(const InitialLaw& law, double s) {
    return law.shifted(s);
}

/// Law of X + Exp(rate), discretized on the given grid extended far enough
/// to keep the lost exponential tail below 1e-12. Rejects nonpositive rate.
InitialLaw smooth_law_exponential(const InitialLaw& law, double rate,
                                  const SpaceGrid& grid);

/// True iff cdf(f) >= cdf(g) at every edge of the grid (and at 0), i.e. the
/// first argument's CDF dominates. `tol` absorbs last-ulp rounding in CDF
/// evaluation; the default keeps genuinely crossing CDFs detectable.
bool dominance_check(const InitialLaw& f, const InitialLaw& g,
                     const SpaceGrid& grid, double tol = 1e-14);

/// Default spatial cutoff: upper support plus 4*sqrt(T), rounded up to a
/// whole number of cells.
double default_x_max(const InitialLaw& law, double horizon, double dx);

} // namespace stefan
