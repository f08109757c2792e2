#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <stdexcept>

#include "thorn/profiles.hpp"

using namespace thorn;

TEST_CASE("eval_f pinned values") {
    CHECK(eval_f(ThornProfile::power(0.0), 7.0) == doctest::Approx(1.0));
    CHECK(eval_f(ThornProfile::power(0.5), 4.0) == doctest::Approx(2.0));
    // f(e) = e / exp(log^0.5 e) = e / e = 1
    CHECK(eval_f(ThornProfile::subexp(1.0, 0.5), std::exp(1.0)) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("eval_g pinned values") {
    CHECK(eval_g(ThornProfile::power(0.5), 4.0) == doctest::Approx(2.0));
    CHECK(eval_g(ThornProfile::power(0.0), 10.0) == doctest::Approx(10.0));
    // log g = c log^p z: c=0.1, p=0.5, z = e^100 -> g = e
    const double z = std::exp(100.0);
    CHECK(eval_g(ThornProfile::subexp(0.1, 0.5), z) ==
          doctest::Approx(2.718281828459045).epsilon(1e-12));
}

TEST_CASE("eval_f freeze below z_floor and consistency of g") {
    const auto prof = ThornProfile::power(0.5);
    CHECK(eval_f(prof, 0.25) == doctest::Approx(eval_f(prof, 1.0)));
    for (double z : {1.0, 3.7, 120.0, 9e5}) {
        const double g = eval_g(prof, z);
        CHECK(std::fabs(g * eval_f(prof, z) - z) / z <= 1e-12);
    }
}

TEST_CASE("tabulated profile interpolation and extrapolation error") {
    const std::vector<double> z{1.0, 10.0, 100.0, 1000.0};
    const std::vector<double> f{1.0, 2.0, 4.0, 8.0};
    const auto prof = ThornProfile::tabulated(z, f);
    CHECK(eval_f(prof, 10.0) == doctest::Approx(2.0));
    // log-log linear: halfway between knots in log z
    CHECK(eval_f(prof, std::sqrt(10.0) * 10.0) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(eval_f(prof, 5000.0), std::domain_error);
    CHECK_THROWS_AS(ThornProfile::tabulated({1.0, 1.0}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("tabulated profile loads from a two-column csv") {
    const char* path = "profile_table_test.csv";
    {
        std::ofstream f(path);
        f << "# z, f\n1,1\n10,2\n100,4\n";
    }
    const auto prof = ThornProfile::tabulated_from_csv(path);
    CHECK(eval_f(prof, 10.0) == doctest::Approx(2.0));
    CHECK(eval_g(prof, 100.0) == doctest::Approx(25.0));
    CHECK_THROWS_AS(ThornProfile::tabulated_from_csv("no_such_table.csv"), std::runtime_error);
}

TEST_CASE("monotonicity of f and g on random pairs") {
    std::mt19937_64 gen(42);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    const auto profiles = {ThornProfile::power(0.0), ThornProfile::power(0.5),
                           ThornProfile::subexp(0.1, 0.5), ThornProfile::subexp(1.0, 0.6)};
    for (const auto& prof : profiles) {
        for (int i = 0; i < 1000; ++i) {
            // range [10, 1e8]: past the initial dip of the subexp families
            double z1 = 10.0 * std::pow(1e7, uni(gen));
            double z2 = 10.0 * std::pow(1e7, uni(gen));
            if (z2 < z1) std::swap(z1, z2);
            CHECK(eval_f(prof, z1) <= eval_f(prof, z2) * (1.0 + 1e-12));
            CHECK(eval_g(prof, z1) <= eval_g(prof, z2) * (1.0 + 1e-12));
        }
    }
}

TEST_CASE("check_hypotheses passes for the paper families") {
    for (double alpha : {0.0, 0.25, 0.5, 0.9}) {
        const auto rep = check_hypotheses(ThornProfile::power(alpha), 1.0, 1e9, 64);
        CAPTURE(alpha);
        CHECK(rep.monotone_f);
        CHECK(rep.monotone_g);
        CHECK(rep.osculating_ok);
        CHECK(rep.pass());
    }
    const auto rep = check_hypotheses(ThornProfile::subexp(1.0, 0.5), 10.0, 1e6, 64);
    CHECK(rep.pass());
}

TEST_CASE("check_hypotheses reports a witness for a broken table") {
    const std::vector<double> z{1.0, 10.0, 100.0, 1000.0};
    const std::vector<double> f{1.0, 2.0, 1.5, 3.0};  // dip at z = 100
    const auto rep = check_hypotheses(ThornProfile::tabulated(z, f), 1.0, 1000.0, 32);
    CHECK_FALSE(rep.monotone_f);
    CHECK(rep.worst_z > 10.0);
    CHECK(rep.worst_z <= 1000.0);
    CHECK_FALSE(rep.pass());
}

TEST_CASE("integral test classifies the three reference profiles") {
    // g = z^{1/2}: integrand 4/u^2 in u = log z
    auto res = integral_test(ThornProfile::power(0.5), 10.0, 1e7, 128);
    CHECK(res.verdict == IntegralVerdict::converges);
    CHECK(res.tail_exponent == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(res.partial == doctest::Approx(1.4890096522397206).epsilon(1e-9));

    // g = exp(0.1 log^{1/2} z): integrand 100/u
    res = integral_test(ThornProfile::subexp(0.1, 0.5), 10.0, 1e7, 128);
    CHECK(res.verdict == IntegralVerdict::diverges);
    CHECK(res.tail_exponent == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(res.partial == doctest::Approx(194.59101490553133).epsilon(1e-9));

    // g = exp(log^{0.6} z): integrand u^{-1.2}
    res = integral_test(ThornProfile::subexp(1.0, 0.6), 10.0, 1e7, 128);
    CHECK(res.verdict == IntegralVerdict::converges);
    CHECK(res.tail_exponent == doctest::Approx(1.2).epsilon(1e-6));
    CHECK(res.partial == doctest::Approx(1.3642915787170366).epsilon(1e-9));
}

TEST_CASE("integral test verdict is scale invariant") {
    for (double scale : {1.0, 7.0, 50.0}) {
        CHECK(integral_test(ThornProfile::power(0.5), 10.0 * scale, 1e7 * scale, 128).verdict ==
              IntegralVerdict::converges);
        CHECK(integral_test(ThornProfile::subexp(0.1, 0.5), 10.0 * scale, 1e7 * scale, 128).verdict ==
              IntegralVerdict::diverges);
    }
}

TEST_CASE("integral test domain errors") {
    CHECK_THROWS_AS(integral_test(ThornProfile::power(0.5), 0.5, 1e5, 64), std::domain_error);
    // a cone-like table with f = z gives g = 1 and log g = 0 on the range
    const std::vector<double> z{1.0, 10.0, 1e7};
    const auto cone = ThornProfile::tabulated(z, z);
    CHECK_THROWS_AS(integral_test(cone, 1.5, 1e6, 64), std::domain_error);
}
