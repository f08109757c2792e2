#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "thorn/greencheck.hpp"
#include "thorn/stats.hpp"

using namespace thorn;

namespace {
SimConfig cfg_with(uint64_t seed, int64_t n) {
    SimConfig c;
    c.seed = seed;
    c.n_paths = n;
    return c;
}
}  // namespace

TEST_CASE("shell Green's function closed form") {
    const ShellGreen sg{1.0, 4.0};
    // vanishes at both absorbing radii
    CHECK(shell_green_radial(sg, 2.0, 1.0) == doctest::Approx(0.0));
    CHECK(shell_green_radial(sg, 2.0, 4.0) == doctest::Approx(0.0));
    CHECK(shell_green_radial(sg, 2.0, 1.0 + 1e-9) <= 1e-7);

    // exchange symmetry of G/rho^2
    for (double r : {1.3, 2.0, 3.1}) {
        for (double rho : {1.7, 2.5, 3.8}) {
            const double a = shell_green_radial(sg, r, rho) / (rho * rho);
            const double b = shell_green_radial(sg, rho, r) / (r * r);
            CHECK(a == doctest::Approx(b).epsilon(1e-10));
        }
    }
    CHECK_THROWS_AS(shell_green_radial(sg, 0.5, 2.0), std::domain_error);
}

TEST_CASE("shell Green's function matches Euler-Maruyama occupation") {
    const ShellGreen sg{1.0, 4.0};
    const double band = shell_green_band(sg, 2.0, 2.4, 2.6);

    Domain dom{4.0, {Ball{{0, 0, 0}, 1.0}}};
    SimConfig c = cfg_with(41, 20000);
    c.start = {0, 0, 2};
    c.dt_factor = 0.15;
    const Probe probe = ProbeShell{2.4, 2.6};
    std::vector<double> occ(c.n_paths);
    parallel_paths(c.n_paths, 1, [&](int64_t i) {
        occ[i] = em_first_passage(dom, c, std::span<const Probe>(&probe, 1), uint64_t(i), false)
                     .occupation[0];
    });
    const auto me = mean_stderr(occ);
    CHECK(std::fabs(me.mean - band) <= 3.0 * me.std_error);
}

TEST_CASE("concentric product identity is exact") {
    // pinned configuration
    const auto r = clean_green_concentric(1.0, 2.0, 3.0, 8.0);
    CHECK(std::fabs(r.lhs - r.rhs) / r.lhs <= 1e-6);
    CHECK(r.correction >= 0.0);
    CHECK(r.rhs >= r.product);

    // identical obstacles: correction is a square integral, still exact
    const auto same = clean_green_concentric(2.0, 2.0, 3.0, 8.0);
    CHECK(std::fabs(same.lhs - same.rhs) / same.lhs <= 1e-6);
    CHECK(same.lhs >= same.product);  // h >= h^2

    // boundary data: both sides approach one near the outer sphere
    const auto near = clean_green_concentric(1.0, 2.0, 7.992, 8.0);
    CHECK(std::fabs(near.lhs - 1.0) <= 1e-3);
    CHECK(std::fabs(near.rhs - 1.0) <= 1e-3);

    CHECK_THROWS_AS(clean_green_concentric(2.0, 1.0, 3.0, 8.0), std::domain_error);
}

TEST_CASE("concentric identity across a parameter grid") {
    const double L = 8.0;
    for (double a : {0.5, 1.0, 1.5}) {
        for (double da : {0.25, 0.75, 1.5}) {
            for (double dy : {0.5, 1.5, 3.0}) {
                const double ap = a + da;
                const double y = ap + dy;
                REQUIRE(y < L);
                const auto r = clean_green_concentric(a, ap, y, L);
                CAPTURE(a);
                CAPTURE(ap);
                CAPTURE(y);
                CHECK(std::fabs(r.lhs - r.rhs) / r.lhs <= 1e-6);
                CHECK(r.correction >= 0.0);
            }
        }
    }
}

TEST_CASE("two-ball identity: identical balls reduce to a single one") {
    BallsMcOptions opts;
    opts.n_h = 20000;
    opts.m_points = 48;
    opts.n_grad = 600;
    opts.n_green = 200;
    const auto r = clean_green_balls_mc({0, 0, 4}, 1.0, {0, 0, 4}, 1.0, 16.0, cfg_with(43, 1000), opts);
    // set identity: avoiding both is avoiding the one
    CHECK(std::fabs(r.lhs.mean - r.h1.mean) <=
          3.0 * std::sqrt(r.lhs.std_error * r.lhs.std_error + r.h1.std_error * r.h1.std_error));
    // the identity itself at mc tolerance
    const double tol = std::max(0.05 * r.lhs.mean,
                                3.0 * std::sqrt(r.lhs.std_error * r.lhs.std_error +
                                                r.rhs.std_error * r.rhs.std_error));
    CHECK(std::fabs(r.lhs.mean - r.rhs.mean) <= tol);
}

TEST_CASE("two-ball identity: far-apart balls have a vanishing correction") {
    BallsMcOptions opts;
    opts.n_h = 20000;
    opts.m_points = 48;
    opts.n_grad = 600;
    opts.n_green = 200;
    const auto r =
        clean_green_balls_mc({0, 0, 7}, 0.5, {0, 0, -7}, 0.5, 16.0, cfg_with(47, 1000), opts);
    CHECK(std::fabs(r.correction) <= 3.0 * r.correction_se + 0.01);
    const double se = std::sqrt(r.lhs.std_error * r.lhs.std_error +
                                std::pow(r.h2.mean * r.h1.std_error, 2) +
                                std::pow(r.h1.mean * r.h2.std_error, 2));
    CHECK(std::fabs(r.lhs.mean - r.h1.mean * r.h2.mean) <= 3.5 * se + 0.01);
}

TEST_CASE("balls preconditions") {
    SimConfig c = cfg_with(1, 10);
    CHECK_THROWS_AS(clean_green_balls_mc({0, 0, 2}, 1.0, {0, 0, 3.5}, 1.0, 16.0, c),
                    std::domain_error);  // overlapping
    CHECK_THROWS_AS(clean_green_balls_mc({0, 0, 7.5}, 1.0, {0, 0, -4}, 1.0, 16.0, c),
                    std::domain_error);  // outside B_{L/2}
    CHECK_THROWS_AS(clean_green_balls_mc({0, 0, 0.5}, 1.0, {0, 0, -4}, 1.0, 16.0, c),
                    std::domain_error);  // origin inside
}

TEST_CASE("substitute inequality for a reachable thorn pair") {
    SimConfig c = cfg_with(53, 1200);
    c.dt_factor = 0.12;
    const auto r = lemma_substitute_check(ThornProfile::power(0.0), 40.0, 1.5707963267948966, c, 1200);
    if (r.regular) {
        const double se =
            std::sqrt(r.lhs.std_error * r.lhs.std_error + r.rhs.std_error * r.rhs.std_error);
        CHECK(r.lhs.mean <= r.rhs.mean + 3.0 * se);
        // doubling the paths keeps the verdict
        SimConfig c2 = cfg_with(59, 2400);
        c2.dt_factor = 0.12;
        const auto r2 = lemma_substitute_check(ThornProfile::power(0.0), 40.0, 1.5707963267948966,
                                               c2, 1200);
        if (r2.regular) {
            const double se2 =
                std::sqrt(r2.lhs.std_error * r2.lhs.std_error + r2.rhs.std_error * r2.rhs.std_error);
            CHECK(r2.lhs.mean <= r2.rhs.mean + 3.0 * se2);
        }
    }
}

TEST_CASE("substitute check with an unreachable thorn is trivial") {
    SimConfig c = cfg_with(61, 400);
    const auto r = lemma_substitute_check(ThornProfile::power(0.0), 0.5, 1.0, c, 200);
    CHECK(r.regular);  // U = U_quarter = 1
    CHECK(r.lhs.mean == doctest::Approx(1.0));
    CHECK(r.rhs.mean == doctest::Approx(2.0));
}
