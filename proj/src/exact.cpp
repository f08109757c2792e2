#include "thorn/exact.hpp"

#include <cmath>
#include <stdexcept>

#include "thorn/quadrature.hpp"

namespace thorn {

double radial_hit_prob(double v1, double v2, double v3) {
    if (!(0 < v1 && v1 <= v2 && v2 <= v3 && v1 < v3))
        throw std::domain_error("radial_hit_prob: need 0 < v1 <= v2 <= v3, v1 < v3");
    return (std::log(v3) - std::log(v2)) / (std::log(v3) - std::log(v1));
}

double sphere_escape_prob(double a, double r, double b) {
    if (!(0 < a && a <= r && r <= b && a < b))
        throw std::domain_error("sphere_escape_prob: need 0 < a <= r <= b, a < b");
    return (1.0 / a - 1.0 / r) / (1.0 / a - 1.0 / b);
}

double cyl_escape_bound(const BoundParams& params, double a, double b) {
    if (!(params.c_cyl > 0.0 && params.c_cyl < 1.0))
        throw std::domain_error("cyl_escape_bound: c_cyl must be in (0,1)");
    if (!(a > 0.0 && b >= 2.0 * a)) throw std::domain_error("cyl_escape_bound: need b >= 2a > 0");
    return std::pow(params.c_cyl, b / a);
}

namespace {

void validate_ladder_params(const BoundParams& p) {
    if (!(p.alpha > p.beta && p.beta > 2.0)) throw std::domain_error("ladder: need alpha > beta > 2");
    if (!(p.gamma > 0.0 && p.gamma < 1.0)) throw std::domain_error("ladder: need gamma in (0,1)");
    if (!(p.c_cyl > 0.0 && p.c_cyl < 1.0)) throw std::domain_error("ladder: c_cyl must be in (0,1)");
    if (!(p.c_tilde * std::log(p.c_cyl) <= -2.0))
        throw std::domain_error("ladder: need c_tilde * log(c_cyl) <= -2");
}

double ladder_m(const BoundParams& p, int k) { return k * std::pow(std::log(double(k)), p.alpha); }

}  // namespace

LadderValues ladder(const BoundParams& params, int k) {
    validate_ladder_params(params);
    if (k < 3) throw std::domain_error("ladder: need k >= 3");
    LadderValues v{};
    const double lk = std::log(double(k));
    v.m = ladder_m(params, k);
    v.r = std::exp(v.m);
    v.q = v.r / (params.c_tilde * lk);
    v.a = v.r * k * std::pow(lk, params.beta);
    v.rho = params.c_tilde * v.a * lk;
    v.b = std::exp(ladder_m(params, k + 1)) / (params.c_tilde * lk);
    v.d = v.r * params.c_tilde * lk;
    return v;
}

double qL_lower_bound(const BoundParams& params, double L, int k0) {
    validate_ladder_params(params);
    if (k0 < 3) throw std::domain_error("qL_lower_bound: need k0 >= 3");
    const double logL = std::log(L);
    if (!(logL >= ladder_m(params, k0) - 1e-9))
        throw std::domain_error("qL_lower_bound: need L >= r_k0");
    // Smallest j with r_{j-1} >= L, i.e. m_{j-1} >= log L.
    int j = k0;
    while (ladder_m(params, j - 1) < logL - 1e-9) ++j;
    double sum = 0.0;
    for (int k = k0; k <= j; ++k) {
        const double lk = std::log(double(k));
        sum += (1.0 / k + params.alpha / (k * lk));
    }
    return std::log(params.c_q) - sum / (1.0 - params.gamma);
}

UBoundResult U_upper_bound_power(const BoundParams& params, double theta) {
    if (!(theta > 0.0 && theta <= 1.5707963267948966 + 1e-12))
        throw std::domain_error("U_upper_bound_power: theta must be in (0, pi/2]");
    const double at = std::fabs(std::log(theta));
    const double e = 2.718281828459045;
    if (at <= e) return {params.M, true};
    const double value = params.M * std::pow(at, 1.0 / (1.0 - params.gamma)) *
                         std::pow(std::log(at), params.zeta);
    return {value, false};
}

ConverseBound converse_q_bound(const BoundParams& params, int k) {
    if (k < 0) throw std::domain_error("converse_q_bound: need k >= 0");
    if (k >= 1 && !(params.K1 / params.alpha < 1.0))
        throw std::domain_error("converse_q_bound: K1/alpha must be < 1");
    ConverseBound out;
    for (int j = 1; j <= k; ++j) {
        const double x = params.K1 / (params.alpha * std::sqrt(double(j)));
        if (!(x < 1.0)) throw std::domain_error("converse_q_bound: factor <= 0");
        out.log_sum += std::log1p(-x);
        out.comparison -= x;
    }
    return out;
}

double u_theta_solution(const BoundParams& params, const ThornProfile& profile, double theta,
                        double R, double L) {
    if (!(theta > 0.0)) throw std::domain_error("u_theta_solution: theta must be positive");
    if (!(R >= params.R_f)) throw std::domain_error("u_theta_solution: need R >= R_f");
    if (!(L >= R)) throw std::domain_error("u_theta_solution: need L >= R");
    if (!(eval_g(profile, R) > 1.0)) throw std::domain_error("u_theta_solution: need g(R) > 1");
    double integral = 0.0;
    if (L > R) {
        integral = adaptive_simpson(
            [&](double u) {
                const double lg = std::log(eval_g(profile, std::exp(u)));
                if (!(lg > 0.0)) throw std::domain_error("u_theta_solution: log g <= 0 on range");
                return 1.0 / (lg * lg);
            },
            std::log(R), std::log(L), 1e-12);
    }
    return params.b_R * std::exp(params.c_f * (1.0 + std::fabs(std::log(theta))) * integral);
}

double free_green(const Vec3& x, const Vec3& y) {
    const double d = norm(x - y);
    if (!(d > 0.0)) throw std::domain_error("free_green: coincident points");
    return 1.0 / (6.283185307179586 * d);
}

double k1_theta_exp(double theta, double alpha) {
    if (!(theta > 0.0 && alpha > 1.0)) throw std::domain_error("k1_theta_exp: need theta > 0, alpha > 1");
    return std::exp(std::pow(std::fabs(std::log(theta)), 1.0 / (alpha - 1.0)));
}

double k1_theta_ceil(double theta) {
    if (!(theta > 0.0)) throw std::domain_error("k1_theta_ceil: need theta > 0");
    return std::ceil(std::log(1.0 / theta));
}

}  // namespace thorn
