#include "stefan/initial_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "stefan/rng.hpp"

namespace stefan {

namespace {

double uniform_cdf(const InitialLaw::Uniform& u, double x) {
    if (x <= u.a) return 0.0;
    if (x >= u.b) return 1.0;
    return (x - u.a) / (u.b - u.a);
}

double tn_lower_mass(const InitialLaw::TruncatedNormal& tn) {
    return rng::normal_cdf(-tn.mean / tn.sd);
}

double tn_cdf(const InitialLaw::TruncatedNormal& tn, double x) {
    if (x <= 0.0) return 0.0;
    const double p0 = tn_lower_mass(tn);
    const double p = rng::normal_cdf((x - tn.mean) / tn.sd);
    return (p - p0) / (1.0 - p0);
}

double grid_cdf(const InitialLaw::GridDensity& g, double x) {
    if (x <= 0.0) return x < 0.0 ? 0.0 : g.atom_at_zero;
    double acc = g.atom_at_zero;
    const double cells = x / g.dx;
    const auto full = static_cast<std::size_t>(cells);
    const std::size_t n = g.cell_masses.size();
    for (std::size_t j = 0; j < std::min(full, n); ++j) acc += g.cell_masses[j];
    if (full < n) acc += g.cell_masses[full] * (cells - static_cast<double>(full));
    return acc;
}

} // namespace

InitialLaw InitialLaw::uniform(double a, double b) {
    if (!(a < b)) throw std::invalid_argument("uniform law requires a < b");
    InitialLaw law;
    law.base_ = Uniform{a, b};
    return law;
}

InitialLaw InitialLaw::truncated_normal(double mean, double sd) {
    if (!(sd > 0.0)) throw std::invalid_argument("truncated normal requires sd > 0");
    InitialLaw law;
    law.base_ = TruncatedNormal{mean, sd};
    return law;
}

InitialLaw InitialLaw::dirac_mixture(std::vector<std::pair<double, double>> atoms) {
    if (atoms.empty()) throw std::invalid_argument("dirac mixture requires atoms");
    double total = 0.0;
    for (const auto& [loc, w] : atoms) {
        if (w < 0.0) throw std::invalid_argument("atom weights must be nonnegative");
        total += w;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("atom weights must sum to 1");
    std::sort(atoms.begin(), atoms.end());
    InitialLaw law;
    law.base_ = DiracMixture{std::move(atoms)};
    return law;
}

InitialLaw InitialLaw::empirical(std::vector<double> samples) {
    if (samples.empty()) throw std::invalid_argument("empirical law requires samples");
    std::sort(samples.begin(), samples.end());
    InitialLaw law;
    law.base_ = Empirical{std::move(samples)};
    return law;
}

InitialLaw InitialLaw::grid_density(double dx, std::vector<double> cell_masses,
                                    double atom_at_zero) {
    if (!(dx > 0.0)) throw std::invalid_argument("grid density requires dx > 0");
    if (atom_at_zero < 0.0)
        throw std::invalid_argument("atom mass must be nonnegative");
    double total = atom_at_zero;
    for (double m : cell_masses) {
        if (m < -1e-15) throw std::invalid_argument("cell masses must be nonnegative");
        total += m;
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("grid density total mass must be 1");
    InitialLaw law;
    law.base_ = GridDensity{dx, std::move(cell_masses), atom_at_zero};
    return law;
}

double InitialLaw::cdf(double x) const {
    const double y = x - offset_;
    return std::visit(
        [y](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return uniform_cdf(v, y);
            } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
                return tn_cdf(v, y);
            } else if constexpr (std::is_same_v<T, DiracMixture>) {
                double acc = 0.0;
                for (const auto& [loc, w] : v.atoms)
                    if (loc <= y) acc += w;
                return acc;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                const auto it = std::upper_bound(v.samples.begin(),
                                                 v.samples.end(), y);
                return static_cast<double>(it - v.samples.begin()) /
                       static_cast<double>(v.samples.size());
            } else {
                return grid_cdf(v, y);
            }
        },
        base_);
}

double InitialLaw::quantile(double u) const {
    if (!(u > 0.0 && u < 1.0))
        throw std::invalid_argument("quantile requires u in (0, 1)");
    const double q = std::visit(
        [u](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return v.a + u * (v.b - v.a);
            } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
                const double p0 = tn_lower_mass(v);
                return v.mean + v.sd * rng::normal_quantile(p0 + u * (1.0 - p0));
            } else if constexpr (std::is_same_v<T, DiracMixture>) {
                double acc = 0.0;
                for (const auto& [loc, w] : v.atoms) {
                    acc += w;
                    if (u <= acc) return loc;
                }
                return v.atoms.back().first;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                const auto n = v.samples.size();
                auto idx = static_cast<std::size_t>(u * static_cast<double>(n));
                if (idx >= n) idx = n - 1;
                return v.samples[idx];
            } else {
                double rem = u - v.atom_at_zero;
                if (rem <= 0.0) return 0.0;
                for (std::size_t j = 0; j < v.cell_masses.size(); ++j) {
                    const double m = v.cell_masses[j];
                    if (rem <= m && m > 0.0)
                        return (static_cast<double>(j) + rem / m) * v.dx;
                    rem -= m;
                }
                return v.dx * static_cast<double>(v.cell_masses.size());
            }
        },
        base_);
    return q + offset_;
}

double InitialLaw::mean_abs() const {
    return std::visit(
        [this](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            const double off = offset_;
            if constexpr (std::is_same_v<T, Uniform>) {
                const double a = v.a + off, b = v.b + off;
                // integral of |x| / (b - a) over [a, b]
                auto prim = [](double x) { return 0.5 * x * std::abs(x); };
                return (prim(b) - prim(a)) / (b - a);
            } else if constexpr (std::is_same_v<T, DiracMixture>) {
                double acc = 0.0;
                for (const auto& [loc, w] : v.atoms) acc += w * std::abs(loc + off);
                return acc;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                double acc = 0.0;
                for (double s : v.samples) acc += std::abs(s + off);
                return acc / static_cast<double>(v.samples.size());
            } else if constexpr (std::is_same_v<T, GridDensity>) {
                double acc = v.atom_at_zero * std::abs(off);
                for (std::size_t j = 0; j < v.cell_masses.size(); ++j)
                    acc += v.cell_masses[j] *
                           std::abs((static_cast<double>(j) + 0.5) * v.dx + off);
                return acc;
            } else {
                // Truncated normal: E[X] closed form, then shift by quadrature
                // only when the offset makes the support straddle 0.
                const double a0 = -v.mean / v.sd;
                const double phi = 0.3989422804014326779 * std::exp(-0.5 * a0 * a0);
                const double mean = v.mean + v.sd * phi / (1.0 - rng::normal_cdf(a0));
                if (off >= 0.0) return mean + off;
                // E|X + off| with X >= 0: split at -off.
                const double c = -off;
                // integrate CDF on [0, c] by midpoint rule
                const int n = 512;
                double below = 0.0;
                const double h = c / n;
                for (int i = 0; i < n; ++i)
                    below += tn_cdf(v, (i + 0.5) * h) * h;
                return mean + off + 2.0 * below;
            }
        },
        base_);
}

double InitialLaw::density_sup() const {
    return std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return 1.0 / (v.b - v.a);
            } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
                const double peak =
                    0.3989422804014326779 / v.sd / (1.0 - tn_lower_mass(v));
                return peak;
            } else if constexpr (std::is_same_v<T, GridDensity>) {
                double m = 0.0;
                for (double c : v.cell_masses) m = std::max(m, c);
                return m / v.dx;
            } else {
                return std::numeric_limits<double>::infinity();
            }
        },
        base_);
}

InitialLaw InitialLaw::shifted(double s) const {
    InitialLaw law = *this;
    law.offset_ += s;
    return law;
}

std::vector<std::pair<double, double>> InitialLaw::atoms() const {
    std::vector<std::pair<double, double>> out;
    if (const auto* dm = std::get_if<DiracMixture>(&base_)) {
        out = dm->atoms;
        for (auto& [loc, w] : out) loc += offset_;
    } else if (const auto* em = std::get_if<Empirical>(&base_)) {
        const double w = 1.0 / static_cast<double>(em->samples.size());
        out.reserve(em->samples.size());
        for (double s : em->samples) out.emplace_back(s + offset_, w);
    }
    return out;
}

bool InitialLaw::is_atomic() const {
    return std::holds_alternative<DiracMixture>(base_) ||
           std::holds_alternative<Empirical>(base_);
}

double InitialLaw::support_upper() const {
    const double q = std::visit(
        [](const auto& v) -> double {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, Uniform>) {
                return v.b;
            } else if constexpr (std::is_same_v<T, TruncatedNormal>) {
                return v.mean + v.sd * rng::normal_quantile(1.0 - 1e-8);
            } else if constexpr (std::is_same_v<T, DiracMixture>) {
                return v.atoms.back().first;
            } else if constexpr (std::is_same_v<T, Empirical>) {
                return v.samples.back();
            } else {
                return v.dx * static_cast<double>(v.cell_masses.size());
            }
        },
        base_);
    return q + offset_;
}

InitialLaw smooth_law_exponential(const InitialLaw& law, double rate,
                                  const SpaceGrid& grid) {
    if (!(rate > 0.0))
        throw std::invalid_argument("smoothing rate must be positive");

    // Extend the grid so the exponential tail beyond the cutoff is < 1e-13.
    const double pad = 35.0 / rate;
    const double x_hi = grid.x_max + std::ceil(pad / grid.dx) * grid.dx;
    const int n = static_cast<int>(std::lround(x_hi / grid.dx));
    const double dx = grid.dx;

    // Sources: lumped masses of the base law at cell midpoints plus the
    // at-or-below-zero atom treated as sitting at 0.
    std::vector<double> src(static_cast<std::size_t>(n), 0.0);
    const double atom0 = law.cdf(0.0);
    double prev = atom0;
    for (int j = 0; j < n; ++j) {
        const double c = law.cdf((j + 1) * dx);
        src[static_cast<std::size_t>(j)] = c - prev;
        prev = c;
    }

    // Smoothed CDF at edge e_j = j*dx:
    //   F(e_j) = atom0 * K(e_j) + sum_i src[i] * K(e_j - x_i),
    // with K the Exp(rate) CDF and x_i the midpoint (i + .5) dx.
    // Kernel values tabulated once; per-edge sums are independent, which
    // keeps the rate-ordering exact term by term. Sources more than the
    // window below the edge have K within 1e-20 of 1 and enter through
    // their prefix mass.
    std::vector<double> k_edge(static_cast<std::size_t>(n) + 1);
    std::vector<double> k_mid(static_cast<std::size_t>(n) + 1);
    for (int j = 0; j <= n; ++j) {
        k_edge[static_cast<std::size_t>(j)] = -std::expm1(-rate * j * dx);
        k_mid[static_cast<std::size_t>(j)] =
            j == 0 ? 0.0 : -std::expm1(-rate * (j - 0.5) * dx);
    }
    const int window =
        std::min(n, static_cast<int>(std::ceil(46.0 / rate / dx)) + 1);
    std::vector<double> prefix(static_cast<std::size_t>(n) + 1, 0.0);
    for (int i = 0; i < n; ++i)
        prefix[static_cast<std::size_t>(i) + 1] =
            prefix[static_cast<std::size_t>(i)] + src[static_cast<std::size_t>(i)];

    std::vector<double> cdf_at_edge(static_cast<std::size_t>(n) + 1, 0.0);
#pragma omp parallel for schedule(static)
    for (int j = 1; j <= n; ++j) {
        const int lo = std::max(0, j - window);
        double acc = atom0 * k_edge[static_cast<std::size_t>(j)] +
                     prefix[static_cast<std::size_t>(lo)];
        for (int i = j - 1; i >= lo; --i)
            acc += src[static_cast<std::size_t>(i)] *
                   k_mid[static_cast<std::size_t>(j - i)];
        cdf_at_edge[static_cast<std::size_t>(j)] = acc;
    }

    std::vector<double> masses(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j)
        masses[static_cast<std::size_t>(j)] =
            std::max(0.0, cdf_at_edge[static_cast<std::size_t>(j) + 1] -
                              cdf_at_edge[static_cast<std::size_t>(j)]);

    // The smoothed law has no mass at or below zero (Exp > 0 pushes right,
    // and the base atom spreads onto (0, inf)); fold the tiny tail beyond
    // x_hi into nothing and renormalize the < 1e-12 defect into the last
    // cell so the law invariant holds exactly.
    double total = std::accumulate(masses.begin(), masses.end(), 0.0);
    const double defect = 1.0 - total;
    if (std::abs(defect) > 1e-10)
        throw std::runtime_error("exponential smoothing lost mass");
    masses.back() += defect;
    return InitialLaw::grid_density(dx, std::move(masses), 0.0);
}

bool dominance_check(const InitialLaw& f, const InitialLaw& g,
                     const SpaceGrid& grid, double tol) {
    const int n = grid.n_cells();
    for (int j = 0; j <= n; ++j) {
        const double x = j * grid.dx;
        if (f.cdf(x) < g.cdf(x) - tol) return false;
    }
    return true;
}

double default_x_max(const InitialLaw& law, double horizon, double dx) {
    const double hi = law.support_upper() + 4.0 * std::sqrt(horizon);
    return std::ceil(hi / dx) * dx;
}

} // namespace stefan
