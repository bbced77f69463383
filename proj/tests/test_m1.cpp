#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "stefan/m1.hpp"
#include "stefan/rng.hpp"

using namespace stefan;

namespace {

BoundaryPath step_path(double jump_time, double height, double horizon,
                       double dt) {
    std::vector<double> t, v;
    for (double s = 0.0; s <= horizon + 1e-12; s += dt) {
        t.push_back(s);
        v.push_back(s >= jump_time ? height : 0.0);
    }
    return BoundaryPath(std::move(t), std::move(v));
}

std::uint64_t mix_state = 4242;
double next_uniform() {
    mix_state = mix_state * 6364136223846793005ull + 1442695040888963407ull;
    return rng::to_open_unit(mix_state);
}

BoundaryPath random_monotone_path(const std::vector<double>& times) {
    std::vector<double> v(times.size());
    double acc = 0.2 * next_uniform();
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (next_uniform() < 0.01) acc += 0.3 * next_uniform(); // jump
        acc += 0.002 * next_uniform();
        v[i] = acc;
    }
    return BoundaryPath(times, std::move(v));
}

// Brute scan over eps, checking the tube condition at the union knots and
// segment midpoints; independent of the bisection.
double brute_levy(const BoundaryPath& f, const BoundaryPath& g) {
    std::vector<double> probes;
    for (double t : f.times()) probes.push_back(t);
    for (double t : g.times()) probes.push_back(t);
    std::sort(probes.begin(), probes.end());
    probes.erase(std::unique(probes.begin(), probes.end()), probes.end());
    const std::size_t n_knots = probes.size();
    for (std::size_t i = 0; i + 1 < n_knots; ++i)
        probes.push_back(0.5 * (probes[i] + probes[i + 1]));

    const double horizon = f.horizon();
    auto clamped = [&](const BoundaryPath& p, double t) {
        return t >= horizon ? p.values().back() : p.value_at(t);
    };
    const double end_gap =
        std::max(std::abs(f.value_at(-1.0) - g.value_at(-1.0)),
                 std::abs(f.values().back() - g.values().back()));
    const double hi = std::max(BoundaryPath::sup_distance(f, g), 1e-6);
    double best = hi;
    for (int i = 2000; i >= 0; --i) {
        const double eps = hi * i / 2000.0;
        bool ok = true;
        for (double t : probes) {
            const double fv = clamped(f, t), gv = clamped(g, t);
            if (gv > clamped(f, t + eps) + eps ||
                gv < clamped(f, t - eps) - eps ||
                fv > clamped(g, t + eps) + eps ||
                fv < clamped(g, t - eps) - eps) {
                ok = false;
                break;
            }
        }
        if (ok)
            best = eps;
        else
            break;
    }
    return std::max(best, end_gap);
}

} // namespace

TEST_CASE("embed_left basics") {
    const auto p = step_path(0.5, 1.0, 1.0, 0.25);
    const auto e = embed_left(p);
    CHECK(e.front_time() == -1.0);
    CHECK(e.value_at(-1.0) == 0.0);
    CHECK(e.value_at(-0.3) == 0.0);
    CHECK(e.value_at(0.75) == 1.0);
    const auto ee = embed_left(e); // idempotent
    CHECK(ee.times() == e.times());
    CHECK(ee.values() == e.values());

    // jump at 0 preserved, continuous at -1
    std::vector<double> t{0.0, 0.5}, v{0.7, 0.9};
    const auto j = embed_left(BoundaryPath(t, v));
    CHECK(j.value_at(-1e-9) == 0.0);
    CHECK(j.value_at(0.0) == 0.7);
}

TEST_CASE("levy distance on the documented cases") {
    const double dt = 1e-3;
    SUBCASE("identical paths") {
        const auto f = step_path(0.4, 0.8, 1.0, dt);
        CHECK(levy_m1_distance(f, f) == 0.0);
    }
    SUBCASE("constant offset") {
        std::vector<double> t{-1.0, 0.0, 1.0};
        const auto f = BoundaryPath(t, {0.0, 0.0, 0.0});
        const auto g = BoundaryPath(t, {0.37, 0.37, 0.37});
        CHECK(levy_m1_distance(f, g) == doctest::Approx(0.37).epsilon(1e-9));
    }
    SUBCASE("shifted unit steps: distance is the shift") {
        for (double delta : {0.05, 0.1, 0.37}) {
            const auto f = step_path(0.5, 1.0, 2.0, dt);
            const auto g = step_path(0.5 + delta, 1.0, 2.0, dt);
            const double d = levy_m1_distance(f, g);
            CHECK(std::abs(d - delta) <= dt + 1e-9);
            CHECK(std::abs(levy_m1_distance(g, f) - d) < 1e-12); // symmetric
        }
    }
    SUBCASE("mismatched horizons rejected") {
        const auto f = step_path(0.2, 1.0, 1.0, 0.1);
        const auto g = step_path(0.2, 1.0, 2.0, 0.1);
        CHECK_THROWS_AS(levy_m1_distance(f, g), std::invalid_argument);
    }
    SUBCASE("bisection agrees with a brute eps scan") {
        for (int trial = 0; trial < 10; ++trial) {
            std::vector<double> times;
            for (double s = 0.0; s <= 0.5 + 1e-12; s += 0.01)
                times.push_back(s);
            const auto f = random_monotone_path(times);
            const auto g = random_monotone_path(times);
            const double fast = levy_m1_distance(f, g);
            const double brute = brute_levy(embed_left(f), embed_left(g));
            CHECK(std::abs(fast - brute) <= brute * 2e-3 + 2e-3);
        }
    }
}

TEST_CASE("levy distance is a pseudo-metric on monotone grid paths") {
    const double dt = 4e-3;
    std::vector<double> times;
    for (double s = 0.0; s <= 1.0 + 1e-12; s += dt) times.push_back(s);
    for (int trial = 0; trial < 100; ++trial) {
        const auto f = random_monotone_path(times);
        const auto g = random_monotone_path(times);
        const auto h = random_monotone_path(times);
        const double fg = levy_m1_distance(f, g);
        const double gh = levy_m1_distance(g, h);
        const double fh = levy_m1_distance(f, h);
        CHECK(fh <= fg + gh + 2.0 * dt);
        CHECK(std::abs(levy_m1_distance(g, f) - fg) < 1e-12);
        CHECK(fg >= 0.0);
    }
}

TEST_CASE("monotone convergence equals pointwise convergence at probes") {
    const double dt = 1e-3;
    const auto limit = step_path(0.5, 1.0, 1.0, dt);

    SUBCASE("shifted steps converge") {
        double prev = 1e9;
        for (int n = 1; n <= 8; ++n) {
            const auto fn = step_path(0.5 + std::ldexp(1.0, -n), 1.0, 1.0, dt);
            const double d = levy_m1_distance(fn, limit);
            CHECK(d < prev + 1e-12);
            CHECK(std::abs(d - std::ldexp(1.0, -n)) <= dt + 1e-9);
            prev = d;
        }
    }
    SUBCASE("staircase refinements converge") {
        // k staircase levels squeezed into a ramp of width 0.2/k
        double prev = 1e9;
        for (int k : {2, 4, 8, 16}) {
            const double width = 0.2 / k;
            const double sub = width / k;
            std::vector<double> t, v;
            for (double s = 0.0; s <= 1.0 + 1e-12; s += dt) {
                t.push_back(s);
                double val = 0.0;
                if (s >= 0.5)
                    val = std::min(1.0, std::floor((s - 0.5) / sub + 1.0) / k);
                v.push_back(val);
            }
            const auto fk = BoundaryPath(t, v);
            const double d = levy_m1_distance(fk, limit);
            CHECK(d <= width + dt + 1e-9);
            CHECK(d <= prev + dt + 1e-9);
            prev = d;
        }
    }
    SUBCASE("non-converging constant gap is detected") {
        const auto off = step_path(0.5, 1.3, 1.0, dt);
        CHECK(levy_m1_distance(off, limit) >
              0.2); // vertical gap cannot vanish
    }
}

TEST_CASE("dense convergence report") {
    const double dt = 1e-2;
    const auto limit = step_path(0.5, 1.0, 1.0, dt);

    SUBCASE("constant sequence is exactly zero") {
        const std::vector<BoundaryPath> seq{limit, limit, limit};
        const auto rep = dense_convergence_report(
            seq, limit, default_probe_times(limit, 0.1));
        for (const auto& row : rep.abs_errors)
            for (double e : row) CHECK(e == 0.0);
        CHECK(rep.tails_vanishing);
    }
    SUBCASE("f_n = limit + 1/n shows the 1/n tail at every probe") {
        std::vector<BoundaryPath> seq;
        for (int n = 1; n <= 6; ++n) {
            auto v = limit.values();
            for (double& x : v) x += 1.0 / n;
            seq.emplace_back(limit.times(), v);
        }
        auto probes = default_probe_times(limit, 0.1);
        const auto rep = dense_convergence_report(seq, limit, probes, 1e-3);
        for (std::size_t p = 0; p < rep.probe_times.size(); ++p) {
            if (rep.probe_times[p] < 0.0) continue; // embedded part is pinned 0
            for (std::size_t i = 0; i < rep.abs_errors[p].size(); ++i)
                CHECK(rep.abs_errors[p][i] ==
                      doctest::Approx(1.0 / (1.0 + i)).epsilon(1e-12));
            CHECK(rep.monotone_nonincreasing[p]);
        }
        CHECK_FALSE(rep.tails_vanishing); // 1/6 is far above 1e-3
    }
    SUBCASE("default probes avoid the jump and include both endpoints") {
        const auto probes = default_probe_times(limit, 0.1);
        CHECK(probes.front() == -1.0);
        CHECK(probes.back() == limit.horizon());
        for (double p : probes) CHECK(std::abs(p - 0.5) > 1e-9);
    }
}
