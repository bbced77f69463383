#include "stefan/m1.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace stefan {

BoundaryPath embed_left(const BoundaryPath& path) {
    if (path.front_time() == -1.0) return path;
    if (path.front_time() < -1.0)
        throw std::invalid_argument("path extends before -1");
    std::vector<double> t = path.times();
    std::vector<double> v = path.values();
    t.insert(t.begin(), -1.0);
    v.insert(v.begin(), 0.0);
    return BoundaryPath(std::move(t), std::move(v));
}

namespace {

// Clamped cadlag evaluation on [-1, T]: frozen at the endpoint values
// outside the window so eps-probes past the edges stay meaningful.
double eval_clamped(const BoundaryPath& p, double t) {
    if (t >= p.horizon()) return p.values().back();
    return p.value_at(t);
}

double eval_left_clamped(const BoundaryPath& p, double t) {
    if (t > p.horizon()) return p.values().back();
    return p.value_before(t);
}

// g(t) inside f's eps-tube for ALL real t in [-1, T]. g is a step path,
// so over a segment [u_i, u_{i+1}) the upper constraint binds at u_i and
// the lower constraint binds as t approaches u_{i+1} (left limits).
bool within_tube(const BoundaryPath& f, const BoundaryPath& g, double eps,
                 const std::vector<double>& knots) {
    const double horizon = g.horizon();
    for (std::size_t i = 0; i < knots.size(); ++i) {
        const double t = knots[i];
        const double v = g.value_at(t);
        if (v > eval_clamped(f, t + eps) + eps) return false;
        const double t_next = i + 1 < knots.size() ? knots[i + 1] : horizon;
        const double f_sup = i + 1 < knots.size()
                                 ? eval_left_clamped(f, t_next - eps)
                                 : eval_clamped(f, horizon - eps);
        if (v < f_sup - eps) return false;
    }
    return true;
}

std::vector<double> union_knots(const BoundaryPath& a, const BoundaryPath& b) {
    std::vector<double> out;
    out.reserve(a.times().size() + b.times().size());
    out.insert(out.end(), a.times().begin(), a.times().end());
    out.insert(out.end(), b.times().begin(), b.times().end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

} // namespace

double levy_m1_distance(const BoundaryPath& f_in, const BoundaryPath& g_in) {
    const BoundaryPath f = embed_left(f_in);
    const BoundaryPath g = embed_left(g_in);
    if (f.horizon() != g.horizon())
        throw std::invalid_argument("levy_m1_distance requires equal horizons");

    const double end_gap =
        std::max(std::abs(f.value_at(-1.0) - g.value_at(-1.0)),
                 std::abs(f.values().back() - g.values().back()));

    double hi = std::max(BoundaryPath::sup_distance(f, g), end_gap);
    if (hi == 0.0) return 0.0;
    double lo = 0.0;
    const std::vector<double> knots = union_knots(f, g);
    // Both tube inclusions make the bisection predicate symmetric exactly.
    auto ok = [&](double eps) {
        return within_tube(f, g, eps, knots) && within_tube(g, f, eps, knots);
    };
    for (int it = 0; it < 60 && hi - lo > 1e-15 * (1.0 + hi); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (ok(mid))
            hi = mid;
        else
            lo = mid;
    }
    return std::max(hi, end_gap);
}

DenseConvergenceReport dense_convergence_report(
    const std::vector<BoundaryPath>& sequence, const BoundaryPath& limit,
    std::vector<double> probe_times, double tail_tolerance) {
    DenseConvergenceReport rep;
    rep.probe_times = std::move(probe_times);
    rep.tail_tolerance = tail_tolerance;
    rep.abs_errors.resize(rep.probe_times.size());
    rep.tail_errors.resize(rep.probe_times.size(), 0.0);
    rep.monotone_nonincreasing.resize(rep.probe_times.size(), true);

    for (std::size_t p = 0; p < rep.probe_times.size(); ++p) {
        const double t = rep.probe_times[p];
        const double ref = limit.value_at(t);
        auto& row = rep.abs_errors[p];
        row.reserve(sequence.size());
        for (const auto& path : sequence)
            row.push_back(std::abs(path.value_at(t) - ref));
        for (std::size_t i = 1; i < row.size(); ++i)
            if (row[i] > row[i - 1] + 1e-12)
                rep.monotone_nonincreasing[p] = false;
        if (!row.empty()) rep.tail_errors[p] = row.back();
        if (rep.tail_errors[p] > tail_tolerance) rep.tails_vanishing = false;
    }
    return rep;
}

std::vector<double> default_probe_times(const BoundaryPath& limit,
                                        double jump_threshold) {
    const BoundaryPath p = embed_left(limit);
    std::vector<double> anchors = p.jump_times(jump_threshold);
    anchors.insert(anchors.begin(), -1.0);
    anchors.push_back(p.horizon());
    std::vector<double> probes;
    probes.push_back(-1.0);
    for (std::size_t i = 1; i < anchors.size(); ++i) {
        const double mid = 0.5 * (anchors[i - 1] + anchors[i]);
        if (mid > -1.0 && mid < p.horizon()) probes.push_back(mid);
    }
    probes.push_back(p.horizon());
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    return probes;
}

} // namespace stefan
