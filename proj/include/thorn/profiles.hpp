#pragma once

#include <string>
#include <vector>

namespace thorn {

enum class ProfileFamily { power, subexp, tabulated };

// Radial profile f of a thorn body of revolution, with g(z) = z / f(z).
//   power:     f(z) = z^alpha,              alpha in [0, 1)
//   subexp:    f(z) = z / exp(c * log^p z)
//   tabulated: monotone piecewise-linear interpolation in log-log coordinates
// Below z_floor (default 1) f is frozen at f(z_floor).
struct ThornProfile {
    ProfileFamily family = ProfileFamily::power;
    double alpha = 0.0;
    double c = 1.0;
    double p = 0.5;
    std::vector<double> log_z;  // tabulated knots
    std::vector<double> log_f;
    double z_floor = 1.0;

    static ThornProfile power(double alpha, double z_floor = 1.0);
    static ThornProfile subexp(double c, double p, double z_floor = 1.0);
    static ThornProfile tabulated(const std::vector<double>& z, const std::vector<double>& f,
                                  double z_floor = 1.0);
    // Two-column CSV (z, f), strictly increasing z.
    static ThornProfile tabulated_from_csv(const std::string& path, double z_floor = 1.0);

    std::string id() const;
};

double eval_f(const ThornProfile& profile, double z);
double eval_g(const ThornProfile& profile, double z);

struct HypothesisReport {
    bool monotone_f = true;
    bool monotone_g = true;
    bool g1_ge_2 = false;
    bool osculating_ok = true;
    double worst_z = 0.0;  // witness of the first failed check, if any

    // g1_ge_2 is informational unless strict mode is requested.
    bool pass(bool strict = false) const {
        return monotone_f && monotone_g && osculating_ok && (!strict || g1_ge_2);
    }
};

// Sampled hypothesis checks on a geometric grid of n points in [z_lo, z_hi]:
// monotonicity of f and g, g(1) >= 2, and the tangent-circle containment test
// (the circle in the z-x plane tangent to |x| = f(z) at (z0, f(z0)) must stay
// inside |x| <= f(z); f' by central difference, 64 samples per circle).
// Never throws on a failed check; failures carry a witness point.
HypothesisReport check_hypotheses(const ThornProfile& profile, double z_lo, double z_hi, int n);

enum class IntegralVerdict { converges, diverges, inconclusive };

struct IntegralTestResult {
    IntegralVerdict verdict = IntegralVerdict::inconclusive;
    double tail_exponent = 0.0;  // fitted p with integrand ~ u^-p in u = log z
    double partial = 0.0;        // quadrature of the partial integral
};

// Numerical verdict on the avoidance integral int dz / (z log^2 g(z)) over
// [z_min, z_max], computed in u = log z coordinates. The tail integrand is
// fitted to u^-p over the last decade of u; p <= 1 reports divergence,
// p > 1.1 convergence, and the slow-convergence band (1, 1.1] is inconclusive.
IntegralTestResult integral_test(const ThornProfile& profile, double z_min, double z_max, int n);

const char* verdict_name(IntegralVerdict v);

}  // namespace thorn
