#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "thorn/exact.hpp"
#include "thorn/sampler.hpp"
#include "thorn/stats.hpp"

using namespace thorn;

namespace {
const UnitVector kZ({0, 0, 1});

SimConfig cfg_with(uint64_t seed, int64_t n, Vec3 start = {0, 0, 0}) {
    SimConfig c;
    c.seed = seed;
    c.n_paths = n;
    c.start = start;
    return c;
}

double sigma_sum(const Estimate& a, double b_se) { return std::sqrt(a.std_error * a.std_error + b_se * b_se); }
}  // namespace

TEST_CASE("walk-on-spheres reproduces the concentric-shell escape law") {
    Domain shell{4.0, {Ball{{0, 0, 0}, 1.0}}};
    const auto est = wos_escape_prob(shell, cfg_with(11, 20000, {0, 0, 2}));
    const double exact = sphere_escape_prob(1, 2, 4);
    CHECK(std::fabs(est.mean - exact) <= 3.0 * est.std_error);
    CHECK_FALSE(est.warn_max_steps);
}

TEST_CASE("walk-on-spheres trivial cases") {
    Domain empty{4.0, {}};
    CHECK(wos_escape_prob(empty, cfg_with(3, 2000, {0, 0, 1})).mean == doctest::Approx(1.0));

    // start sitting on the absorption shell of the obstacle
    Domain shell{4.0, {Ball{{0, 0, 0}, 1.0}}};
    const auto est = wos_escape_prob(shell, cfg_with(3, 2000, {0, 0, 1.0001}));
    CHECK(est.mean <= 0.05);

    Domain outside{4.0, {Ball{{0, 0, 0}, 1.0}}};
    SimConfig bad = cfg_with(3, 10, {0, 0, 0.5});
    CHECK_THROWS_AS(wos_escape_prob(outside, bad), std::domain_error);
}

TEST_CASE("shell bias control with a frozen constant") {
    Domain shell{4.0, {Ball{{0, 0, 0}, 1.0}}};
    const double exact = sphere_escape_prob(1, 2, 4);
    const double C = 2.0;  // fitted once against this benchmark and frozen
    double prev_gap = 0.0;
    double prev_sigma = 0.0;
    for (double eps : {0.02, 0.01, 0.005}) {
        SimConfig c = cfg_with(19, 20000, {0, 0, 2});
        c.eps_shell = eps;
        const auto est = wos_escape_prob(shell, c);
        const double gap = std::fabs(est.mean - exact);
        CHECK(gap <= std::max(3.0 * est.std_error, C * eps));
        if (prev_sigma > 0.0) {
            // halving the shell may not worsen the discrepancy by more than 3 sigma
            CHECK(gap <= prev_gap + 3.0 * sigma_sum(est, prev_sigma));
        }
        prev_gap = gap;
        prev_sigma = est.std_error;
    }
}

TEST_CASE("planar annulus walk matches the radial hitting law") {
    const auto est = wos_annulus2d_inner_first(1.0, 2.0, 4.0, cfg_with(5, 20000));
    CHECK(std::fabs(est.mean - 0.5) <= 3.0 * est.std_error);
}

TEST_CASE("Euler-Maruyama mean squared displacement") {
    const int64_t n = 4000;
    const double t = 2.5;
    SimConfig c = cfg_with(17, n);
    std::vector<double> d2(n);
    for (int64_t i = 0; i < n; ++i) d2[i] = em_free_displacement2(c, uint64_t(i), t);
    const auto me = mean_stderr(d2);
    CHECK(std::fabs(me.mean - 3.0 * t) / (3.0 * t) <= 0.02);
}

TEST_CASE("Euler-Maruyama agrees with the closed-form escape law") {
    Domain shell{4.0, {Ball{{0, 0, 0}, 1.0}}};
    SimConfig c = cfg_with(29, 8000, {0, 0, 2});
    const auto em = em_escape_prob(shell, c);
    const double exact = sphere_escape_prob(1, 2, 4);
    CHECK(std::fabs(em.mean - exact) <= 3.0 * em.std_error);

    // halving the step factor moves the estimate by at most 3 sigma
    SimConfig fine = c;
    fine.dt_factor = 0.05;
    const auto em2 = em_escape_prob(shell, fine);
    CHECK(std::fabs(em.mean - em2.mean) <= 3.0 * sigma_sum(em, em2.std_error));
}

TEST_CASE("walk-on-spheres and Euler-Maruyama cross-validate on benchmark domains") {
    const ThornSet thorn(ThornProfile::power(0.0), kZ, 1.0, 4.0, true, 64.0);
    const std::pair<Domain, Vec3> benches[] = {
        {Domain{4.0, {Ball{{0, 0, 0}, 1.0}}}, {0, 0, 2}},
        {Domain{4.0, {Ball{{0, 0, 2}, 0.5}}}, {0, 0, 0}},
        {Domain{8.0, {Ball{{0, 0, 3}, 1.0}, Ball{{0, 0, -3}, 1.0}}}, {0, 0, 0}},
        {Domain{4.0, {}}, {0, 0, 1}},
        {Domain{8.0, {thorn}}, {0, 0, 0}},
    };
    int idx = 0;
    for (const auto& [dom, start] : benches) {
        SimConfig c = cfg_with(31 + idx, 4000, start);
        c.dt_factor = 0.08;
        const auto w = wos_escape_prob(dom, c);
        const auto e = em_escape_prob(dom, c);
        CAPTURE(idx);
        CHECK(std::fabs(w.mean - e.mean) <= 3.0 * sigma_sum(w, e.std_error));
        ++idx;
    }
}

TEST_CASE("recorded polylines stay within the vertex budget") {
    Domain dom{6.0, {}};
    SimConfig c = cfg_with(151, 1);
    c.dt_factor = 0.02;  // many small steps
    const auto path = em_first_passage(dom, c, {}, 0, true);
    CHECK(path.escaped);
    CHECK(path.polyline.size() >= 2);
    CHECK(path.polyline.size() <= 100000);
    CHECK(norm(path.polyline.front()) <= 1e-12);
}

TEST_CASE("max-steps truncation raises the warning flag") {
    Domain shell{4.0, {Ball{{0, 0, 0}, 1.0}}};
    SimConfig c = cfg_with(37, 500, {0, 0, 2});
    c.max_steps = 3;
    const auto est = wos_escape_prob(shell, c);
    CHECK(est.warn_max_steps);
}

TEST_CASE("estimate_q edge and self-consistency") {
    const auto prof = ThornProfile::power(0.0);
    // the ball misses the thorn entirely: every path escapes
    const auto tiny = estimate_q(prof, 0.5, false, cfg_with(41, 500));
    CHECK(tiny.mean == doctest::Approx(1.0));

    SimConfig c = cfg_with(43, 6000);
    const auto q1 = estimate_q(prof, 50.0, false, c);
    CHECK(q1.mean > 0.0);
    CHECK(q1.mean < 1.0);
    SimConfig fine = c;
    fine.eps_shell = 50.0 * 0.5e-4;
    const auto q2 = estimate_q(prof, 50.0, false, fine);
    CHECK(std::fabs(q1.mean - q2.mean) <= 3.0 * sigma_sum(q1, q2.std_error));
}

TEST_CASE("pathwise monotonicity of q across radii") {
    const std::vector<double> Ls{5.0, 10.0, 20.0};
    const auto flags = estimate_q_multi(ThornProfile::power(0.5), Ls, cfg_with(47, 4000));
    REQUIRE(flags.size() == 3);
    for (size_t i = 0; i < flags[0].size(); ++i) {
        CHECK(flags[1][i] <= flags[0][i]);
        CHECK(flags[2][i] <= flags[1][i]);
    }
}

TEST_CASE("coupled q2 never exceeds the coupled q") {
    const auto prof = ThornProfile::power(0.5);
    const auto q = estimate_q2(prof, 20.0, 1.0, false, cfg_with(53, 5000));
    for (size_t i = 0; i < q.both_flags.size(); ++i) CHECK(q.both_flags[i] <= q.base_flags[i]);
    CHECK(q.q2.mean <= q.q1_coupled.mean);
}

TEST_CASE("antipodal one-sided pair equals the two-sided thorn pathwise") {
    const auto prof = ThornProfile::power(0.5);
    const double L = 16.0;
    const ThornSet up(prof, kZ, 1.0, std::nullopt, false, 64.0);
    const ThornSet down(prof, UnitVector({0, 0, -1}), 1.0, std::nullopt, false, 64.0);
    const ThornSet both(prof, kZ, 1.0, std::nullopt, true, 64.0);
    SimConfig c = cfg_with(59, 4000);
    Domain base{L, {up}};
    const std::vector<Obstacle> extra = {down};
    const auto coupled = wos_escape_coupled(base, extra, c);
    Domain two_sided{L, {both}};
    const auto single = wos_escape_prob(two_sided, c);
    CHECK(coupled.with_extra.mean == doctest::Approx(single.mean).epsilon(1e-15));
}

TEST_CASE("adding a ball obstacle never converts an absorbed path into an escaped one") {
    Domain base{8.0, {Ball{{0, 0, 3}, 1.0}}};
    const std::vector<Obstacle> extra = {Ball{{0, 0, -3}, 1.0}};
    const auto ce = wos_escape_coupled(base, extra, cfg_with(61, 8000));
    for (size_t i = 0; i < ce.flags_all.size(); ++i) CHECK(ce.flags_all[i] <= ce.flags_base[i]);
}

TEST_CASE("independent far-apart balls multiply") {
    const double L = 32.0;
    Domain both{L, {Ball{{0, 0, 8}, 0.75}, Ball{{0, 0, -8}, 0.75}}};
    Domain b1{L, {Ball{{0, 0, 8}, 0.75}}};
    Domain b2{L, {Ball{{0, 0, -8}, 0.75}}};
    const auto qb = wos_escape_prob(both, cfg_with(67, 20000));
    const auto q1 = wos_escape_prob(b1, cfg_with(68, 20000));
    const auto q2 = wos_escape_prob(b2, cfg_with(69, 20000));
    const double prod = q1.mean * q2.mean;
    const double se = std::sqrt(std::pow(qb.std_error, 2) + std::pow(q2.mean * q1.std_error, 2) +
                                std::pow(q1.mean * q2.std_error, 2));
    CHECK(std::fabs(qb.mean - prod) <= 3.5 * se);
}

TEST_CASE("estimate_U returns a regularity flag and positive ratio") {
    const auto prof = ThornProfile::power(0.5);
    const auto u = estimate_U(prof, 24.0, 1.0, cfg_with(71, 8000));
    CHECK(u.U.mean >= 0.0);
    CHECK(u.U.std_error > 0.0);
    // U(theta) should not decrease significantly as theta shrinks
    const auto u_small = estimate_U(prof, 24.0, 0.4, cfg_with(73, 8000));
    CHECK(u_small.U.mean + 3.0 * sigma_sum(u_small.U, u.U.std_error) >= u.U.mean);
}

TEST_CASE("estimate_U rejects hopeless signal") {
    SimConfig c = cfg_with(79, 50);
    CHECK_THROWS_AS(estimate_U(ThornProfile::power(0.5), 2000.0, 1.0, c), InsufficientSignal);
}

TEST_CASE("occupation density matches the interior Green's function") {
    // absorbed only at the L-sphere: G(0, x) = (1/2pi)(1/|x| - 1/L), and the
    // ball average equals the center value by harmonicity
    const double L = 20.0;
    Domain dom{L, {}};
    SimConfig c = cfg_with(83, 4000);
    c.dt_factor = 0.12;
    const auto est = occupation_density(dom, {0, 0, 2}, 0.25, c);
    const double expected = (0.5 - 1.0 / L) / (2.0 * 3.14159265358979323846);
    CHECK(std::fabs(est.mean - expected) <= 3.0 * est.std_error + 0.05 * expected);

    // halving the probe radius stays consistent
    SimConfig c2 = cfg_with(89, 4000);
    c2.dt_factor = 0.12;
    const auto est2 = occupation_density(dom, {0, 0, 2}, 0.125, c2);
    CHECK(std::fabs(est2.mean - est.mean) <= 3.0 * sigma_sum(est2, est.std_error) + 0.05 * expected);
}

TEST_CASE("occupation density domain errors") {
    Domain dom{8.0, {Ball{{0, 0, 4}, 1.0}}};
    SimConfig c = cfg_with(97, 10);
    CHECK_THROWS_AS(occupation_density(dom, {0, 0, 7.9}, 0.25, c), std::domain_error);
    CHECK_THROWS_AS(occupation_density(dom, {0, 0, 4.5}, 1.0, c), std::domain_error);
    CHECK_THROWS_AS(occupation_density(dom, {0, 0, 0.1}, 0.25, c), std::domain_error);
}

TEST_CASE("occupation density is smaller behind an absorbing obstacle") {
    const double L = 12.0;
    Domain free_dom{L, {}};
    Domain blocked{L, {Ball{{0, 0, 2}, 1.0}}};
    SimConfig c = cfg_with(101, 4000);
    c.dt_factor = 0.12;
    const auto g_free = occupation_density(free_dom, {0, 0, 4}, 0.4, c);
    const auto g_blocked = occupation_density(blocked, {0, 0, 4}, 0.4, c);
    CHECK(g_blocked.mean < g_free.mean);
}

TEST_CASE("polar density is flat without an obstacle") {
    Domain dom{8.0, {}};
    const auto pd = hitting_density_polar(dom, 8, cfg_with(103, 20000));
    CHECK(pd.n_escaped == 20000);
    for (size_t b = 0; b < pd.density.size(); ++b)
        CHECK(std::fabs(pd.density[b] - 1.0) <= 3.0 * pd.std_error[b]);
}

TEST_CASE("polar density skews toward the equator with an axis thorn") {
    const ThornSet thorn(ThornProfile::power(0.0), kZ, 1.0, 10.0, true, 80.0);
    Domain dom{20.0, {thorn}};
    const auto pd = hitting_density_polar(dom, 8, cfg_with(107, 8000));
    CHECK(pd.n_escaped > 0);
    CHECK(pd.density.front() < pd.density.back());
}

TEST_CASE("cylinder race estimates") {
    const auto cc = estimate_c_cyl(cfg_with(109, 20000));
    CHECK(cc.c_cyl.mean > 0.0);
    CHECK(cc.c_cyl.mean < 1.0);
    // wall corners are immediate radial hits
    CHECK(cc.per_start[3].mean == doctest::Approx(0.0));
    CHECK(cc.per_start[4].mean == doctest::Approx(0.0));
    // the maximum sits on the axis
    CHECK(cc.c_prime == doctest::Approx(std::max({cc.per_start[0].mean, cc.per_start[1].mean,
                                                  cc.per_start[2].mean})));

    const auto p3 = estimate_axial_exit(3.0, cfg_with(113, 20000));
    const double bound = std::pow(cc.c_cyl.mean, 3.0);
    CHECK(p3.worst.mean <= bound + 3.0 * sigma_sum(p3.worst, 3.0 * cc.c_cyl.mean * cc.c_cyl.mean *
                                                                 cc.c_cyl.std_error));
}

TEST_CASE("thin-cylinder avoidance is monotone in the radius pathwise") {
    const std::vector<double> radii{1e-2, 1e-3, 1e-4};
    const auto scan = cylinder_avoid_scan(radii, Vec3{0.5, 0, 0}, cfg_with(127, 4000));
    REQUIRE(scan.flags.size() == 3);
    // estimates are sorted by descending radius: avoid grows as r shrinks
    for (size_t i = 0; i < scan.flags[0].size(); ++i) {
        CHECK(scan.flags[0][i] <= scan.flags[1][i]);
        CHECK(scan.flags[1][i] <= scan.flags[2][i]);
    }
    CHECK(scan.estimates[0].mean <= scan.estimates[2].mean);

    const auto fat = cylinder_avoid_prob(0.09, cfg_with(131, 4000));
    CHECK(fat.from_equator.mean < 1.0);
    CHECK(fat.from_pole.mean < 1.0);
    CHECK_THROWS_AS(cylinder_avoid_prob(0.5, cfg_with(131, 10)), std::domain_error);
}

TEST_CASE("estimates are bit-identical across thread counts") {
    Domain shell{4.0, {Ball{{0, 0, 0}, 1.0}}};
    SimConfig c1 = cfg_with(137, 5000, {0, 0, 2});
    SimConfig c8 = c1;
    c8.threads = 8;
    const auto e1 = wos_escape_prob(shell, c1);
    const auto e8 = wos_escape_prob(shell, c8);
    CHECK(e1.mean == e8.mean);
    CHECK(e1.std_error == e8.std_error);

    const auto prof = ThornProfile::power(0.5);
    SimConfig t1 = cfg_with(137, 5000);
    SimConfig t8 = t1;
    t8.threads = 8;
    const auto q1 = estimate_q2(prof, 12.0, 1.0, false, t1);
    const auto q8 = estimate_q2(prof, 12.0, 1.0, false, t8);
    CHECK(q1.q2.mean == q8.q2.mean);
    CHECK(q1.both_flags == q8.both_flags);

    SimConfig o1 = cfg_with(139, 2000);
    SimConfig o8 = o1;
    o8.threads = 8;
    Domain dom{12.0, {}};
    CHECK(occupation_density(dom, {0, 0, 2}, 0.3, o1).mean ==
          occupation_density(dom, {0, 0, 2}, 0.3, o8).mean);
}
