#include "doctest.h"

#include <cmath>

#include "stefan/config.hpp"
#include "stefan/initial_law.hpp"
#include "stefan/rng.hpp"
#include "stefan/subprob_grid.hpp"

using namespace stefan;

TEST_CASE("config invariants are enforced") {
    SimulationConfig cfg;
    CHECK_NOTHROW(cfg.validate());
    SimulationConfig bad = cfg;
    bad.alpha = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.dt = cfg.horizon;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.dx = cfg.x_max;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = cfg;
    bad.picard_tol = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("cdf_eval on the documented cases") {
    CHECK(InitialLaw::uniform(0, 1).cdf(0.5) == doctest::Approx(0.5));
    CHECK(InitialLaw::dirac(1.0).cdf(0.999) == 0.0);
    CHECK(InitialLaw::dirac(1.0).cdf(1.0) == 1.0); // right-continuity
    const auto emp = InitialLaw::empirical({0.2, 0.4, 0.9});
    CHECK(emp.cdf(0.4) == doctest::Approx(2.0 / 3.0));
    CHECK(emp.cdf(0.39) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("cdf_eval is nondecreasing and right-continuous on refinements") {
    const auto laws = {InitialLaw::uniform(-0.2, 1.3),
                       InitialLaw::truncated_normal(1.0, 0.4),
                       InitialLaw::dirac_mixture({{0.3, 0.25}, {1.1, 0.75}}),
                       InitialLaw::empirical({0.1, 0.5, 0.5, 2.0})};
    for (const auto& law : laws) {
        double prev = -1.0;
        for (int i = 0; i <= 4000; ++i) {
            const double x = -0.5 + i * 7.8125e-4;
            const double c = law.cdf(x);
            CHECK(c >= prev);
            CHECK(c <= 1.0 + 1e-15);
            // right-continuity: approaching from above converges to cdf(x)
            CHECK(law.cdf(x + 1e-12) >= c);
            prev = c;
        }
        CHECK(law.cdf(1e9) == doctest::Approx(1.0));
    }
}

TEST_CASE("shift_law on the documented cases") {
    const auto dirac = InitialLaw::dirac(1.0).shifted(-0.25);
    CHECK(dirac.cdf(0.75) == 1.0);
    CHECK(dirac.cdf(0.7499) == 0.0);
    CHECK(dirac.atoms().size() == 1);
    CHECK(dirac.atoms()[0].first == doctest::Approx(0.75));

    // Uniform(0,1) - 0.3: atom of 0.3 at or below zero, uniform density on
    // (0, 0.7].
    const auto shifted = InitialLaw::uniform(0, 1).shifted(-0.3);
    CHECK(shifted.cdf(0.0) == doctest::Approx(0.3));
    CHECK(shifted.cdf(0.35) == doctest::Approx(0.65));
    CHECK(shifted.cdf(0.7) == doctest::Approx(1.0));
    const SpaceGrid grid{1e-3, 2.0};
    const auto nu = discretize(shifted, grid);
    CHECK(nu.lost_mass == doctest::Approx(0.3));
    CHECK(nu.cell_masses[100] == doctest::Approx(1e-3)); // density 1
    CHECK(nu.cell_masses[900] == 0.0);                   // beyond 0.7

    // identity shift
    const auto same = InitialLaw::uniform(0, 1).shifted(0.0);
    for (double x : {0.1, 0.5, 0.99})
        CHECK(same.cdf(x) == InitialLaw::uniform(0, 1).cdf(x));
}

TEST_CASE("shift_law composes additively") {
    const auto base = InitialLaw::truncated_normal(0.8, 0.3);
    const double pairs[][2] = {{0.2, 0.35}, {-0.1, -0.4}, {0.5, -0.2}, {0, 0.7}};
    for (const auto& p : pairs) {
        const auto two = base.shifted(p[0]).shifted(p[1]);
        const auto one = base.shifted(p[0] + p[1]);
        for (int i = 0; i <= 100; ++i) {
            const double x = -1.0 + 0.05 * i;
            CHECK(std::abs(two.cdf(x) - one.cdf(x)) <= 1e-12);
        }
    }
}

TEST_CASE("exponential smoothing: dirac base, mass, rate ordering") {
    const SpaceGrid grid{1e-3, 6.0};
    const auto dirac = InitialLaw::dirac(1.0);

    SUBCASE("shifted exponential density") {
        const double rate = 10.0;
        const auto sm = smooth_law_exponential(dirac, rate, grid);
        // exact smoothed CDF: 1 - exp(-rate (x - 1)) for x >= 1
        double sup = 0.0;
        for (int i = 0; i <= 5000; ++i) {
            const double x = i * 1e-3;
            const double truth = x <= 1.0 ? 0.0 : -std::expm1(-rate * (x - 1.0));
            sup = std::max(sup, std::abs(sm.cdf(x) - truth));
        }
        CHECK(sup < 1e-2); // half-cell lumping bias at scale rate*dx/2
    }

    SUBCASE("very large rate reproduces the base CDF") {
        const auto sm = smooth_law_exponential(dirac, 1e6, grid);
        double sup = 0.0;
        for (int i = 0; i <= 6000; ++i) {
            const double x = i * 1e-3;
            sup = std::max(sup, std::abs(sm.cdf(x) - dirac.cdf(x)));
        }
        CHECK(sup < 1e-4);
    }

    SUBCASE("rate ordering and mass conservation") {
        const auto base = InitialLaw::uniform(0.0, 1.0);
        const auto s5 = smooth_law_exponential(base, 5.0, grid);
        const auto s10 = smooth_law_exponential(base, 10.0, grid);
        CHECK(dominance_check(s10, s5, grid));
        CHECK(dominance_check(base, s10, grid));
        CHECK(std::abs(s5.cdf(1e9) - 1.0) < 1e-10);
        CHECK(std::abs(s10.cdf(1e9) - 1.0) < 1e-10);
    }

    SUBCASE("nonpositive rate rejected") {
        CHECK_THROWS_AS(smooth_law_exponential(dirac, 0.0, grid),
                        std::invalid_argument);
    }
}

TEST_CASE("dominance_check on the documented cases") {
    const SpaceGrid grid{1e-3, 3.0};
    const auto u = InitialLaw::uniform(0, 1);
    CHECK(dominance_check(u, u.shifted(0.5), grid));
    CHECK(dominance_check(u, u, grid));
    // crossing CDFs: the wide law is ahead at 0.55, behind at 0.9
    const auto narrow = InitialLaw::uniform(0.5, 0.6);
    CHECK(u.cdf(0.55) > narrow.cdf(0.55));
    CHECK(u.cdf(0.9) < narrow.cdf(0.9));
    CHECK_FALSE(dominance_check(u, narrow, grid));
    CHECK_FALSE(dominance_check(narrow, u, grid));
}

TEST_CASE("discretize conserves mass and splits atoms between midpoints") {
    const SpaceGrid grid{1e-3, 6.0};
    for (const auto& law :
         {InitialLaw::uniform(-0.2, 1.1), InitialLaw::truncated_normal(2.0, 0.7),
          InitialLaw::dirac_mixture({{0.0005, 0.5}, {1.00025, 0.5}})}) {
        const auto nu = discretize(law, grid);
        CHECK(nu.total_mass() == doctest::Approx(1.0).epsilon(1e-12));
        for (double m : nu.cell_masses) CHECK(m >= 0.0);
    }
    // atom exactly at a midpoint lands in one cell
    const auto at_mid = discretize(InitialLaw::dirac(0.0005), grid);
    CHECK(at_mid.cell_masses[0] == doctest::Approx(1.0));
    // atom at a cell edge splits evenly
    const auto at_edge = discretize(InitialLaw::dirac(1.0), grid);
    CHECK(at_edge.cell_masses[999] == doctest::Approx(0.5));
    CHECK(at_edge.cell_masses[1000] == doctest::Approx(0.5));
}

TEST_CASE("quantile inverts the CDF across variants") {
    const auto laws = {InitialLaw::uniform(0.2, 1.7),
                       InitialLaw::truncated_normal(1.0, 0.5),
                       InitialLaw::empirical({0.3, 0.7, 1.1, 2.0}),
                       InitialLaw::grid_density(0.01, std::vector<double>(100, 0.01),
                                                0.0)};
    for (const auto& law : laws) {
        for (int i = 1; i < 100; ++i) {
            const double u = i / 100.0;
            const double x = law.quantile(u);
            CHECK(law.cdf(x) >= u - 1e-9);
            CHECK(law.cdf(x - 1e-9) <= u + 1e-9);
        }
    }
}

TEST_CASE("mean_abs matches quadrature") {
    const auto u = InitialLaw::uniform(-0.5, 1.0);
    // E|U(-0.5,1)| = (0.125 + 0.5) / 1.5
    CHECK(u.mean_abs() == doctest::Approx((0.125 + 0.5) / 1.5));
    const auto d = InitialLaw::dirac_mixture({{0.5, 0.4}, {2.0, 0.6}});
    CHECK(d.mean_abs() == doctest::Approx(0.5 * 0.4 + 2.0 * 0.6));
}
