#include "thorn/greencheck.hpp"

#include <cmath>
#include <stdexcept>

#include "thorn/quadrature.hpp"
#include "thorn/stats.hpp"

namespace thorn {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double shell_green_radial(const ShellGreen& sg, double r, double rho) {
    if (!(sg.a_prime > 0.0 && sg.L > sg.a_prime))
        throw std::domain_error("shell_green_radial: need 0 < a' < L");
    if (!(r >= sg.a_prime && r <= sg.L && rho >= sg.a_prime && rho <= sg.L))
        throw std::domain_error("shell_green_radial: radii must lie inside [a', L]");
    const double lo = std::min(r, rho), hi = std::max(r, rho);
    const double s_lo = 1.0 / sg.a_prime - 1.0 / lo;   // s(min) - s(a')
    const double s_hi = 1.0 / hi - 1.0 / sg.L;         // s(L) - s(max)
    const double s_full = 1.0 / sg.a_prime - 1.0 / sg.L;
    return 2.0 * rho * rho * s_lo * s_hi / s_full;
}

double shell_green_band(const ShellGreen& sg, double r, double rho_lo, double rho_hi) {
    return adaptive_simpson([&](double rho) { return shell_green_radial(sg, r, rho); }, rho_lo,
                            rho_hi, 1e-12);
}

CleanGreenConcentric clean_green_concentric(double a, double a_prime, double y_radius, double L) {
    if (!(0 < a && a <= a_prime && a_prime < y_radius && y_radius < L))
        throw std::domain_error("clean_green_concentric: need 0 < a <= a' < y < L");
    CleanGreenConcentric out;
    out.lhs = sphere_escape_prob(a_prime, y_radius, L);
    const double h1 = sphere_escape_prob(a, y_radius, L);
    const double h2 = sphere_escape_prob(a_prime, y_radius, L);
    out.product = h1 * h2;
    // h_i(rho) = (1/a_i - 1/rho) / (1/a_i - 1/L): analytic radial derivatives.
    const double den1 = 1.0 / a - 1.0 / L;
    const double den2 = 1.0 / a_prime - 1.0 / L;
    const ShellGreen sg{a_prime, L};
    auto integrand = [&](double rho) {
        const double d1 = 1.0 / (rho * rho * den1);
        const double d2 = 1.0 / (rho * rho * den2);
        return d1 * d2 * shell_green_radial(sg, y_radius, rho);
    };
    // The kernel has a kink at rho = y: integrate the two smooth pieces.
    out.correction = adaptive_simpson(integrand, a_prime, y_radius, 1e-13) +
                     adaptive_simpson(integrand, y_radius, L, 1e-13);
    out.rhs = out.product + out.correction;
    return out;
}

namespace {

Estimate wos_domain_prob(const Domain& domain, const SimConfig& cfg, uint64_t salt) {
    SimConfig c = cfg;
    c.seed = cfg.seed ^ salt;
    return wos_escape_prob(domain, c);
}

}  // namespace

CleanGreenBalls clean_green_balls_mc(const Vec3& center1, double r1, const Vec3& center2,
                                     double r2, double L, const SimConfig& cfg,
                                     const BallsMcOptions& opts) {
    const double gap = norm(center1 - center2);
    const bool identical = gap == 0.0 && r1 == r2;
    if (!identical && !(gap > r1 + r2))
        throw std::domain_error("clean_green_balls_mc: balls must be disjoint (or identical)");
    if (norm(center1) + r1 > 0.5 * L || norm(center2) + r2 > 0.5 * L)
        throw std::domain_error("clean_green_balls_mc: balls must sit inside B_{L/2}");
    if (norm(center1) <= r1 || norm(center2) <= r2)
        throw std::domain_error("clean_green_balls_mc: origin must be outside both balls");

    const Ball b1{center1, r1}, b2{center2, r2};
    Domain both{L, {b1, b2}};
    Domain only1{L, {b1}}, only2{L, {b2}};

    SimConfig base = cfg;
    base.n_paths = opts.n_h;
    CleanGreenBalls out;
    out.lhs = wos_domain_prob(both, base, 0x10);
    out.h1 = wos_domain_prob(only1, base, 0x20);
    out.h2 = wos_domain_prob(only2, base, 0x30);

    // Correction integral over B_{L/2} minus the balls, importance-sampled
    // from density free_green(0,x)/Z with Z = (L/2)^2.
    const double R = 0.5 * L;
    const double Z = R * R;
    const double delta = r1 / 20.0;
    const int m = opts.m_points;
    std::vector<double> values(m);
    parallel_paths(m, cfg.threads, [&](int64_t j) {
        PathRng rng(cfg.seed ^ 0x40ULL, uint64_t(j));
        const double radius = R * std::sqrt(rng.uniform());
        const Vec3 x = radius * rng.unit_sphere();
        // Points inside a ball are outside the restricted region; a thin
        // collar around each ball is excluded so the stencil stays valid (its
        // volume contributes well below the statistical resolution).
        if (b1.distance(x) <= 1.2 * delta || b2.distance(x) <= 1.2 * delta ||
            radius < 4.0 * delta) {
            values[j] = 0.0;
            return;
        }
        // Occupation-density weight G(0,x)/free_green(0,x).
        const double probe_r =
            std::min(0.5, 0.45 * std::min({radius, b1.distance(x), b2.distance(x), L - radius}));
        SimConfig gcfg = cfg;
        gcfg.seed = cfg.seed ^ 0x50ULL ^ (uint64_t(j) << 20);
        gcfg.n_paths = opts.n_green;
        gcfg.start = {0, 0, 0};
        const Estimate ghat = occupation_density(both, x, probe_r, gcfg);
        const double w = ghat.mean / free_green({0, 0, 0}, x);

        // grad h1 . grad h2 by central differences, common random numbers
        // across the six stencil points of each h.
        auto stencil = [&](const Domain& dom, uint64_t salt) {
            std::array<double, 3> grad{};
            for (int axis = 0; axis < 3; ++axis) {
                Vec3 e{0, 0, 0};
                (axis == 0 ? e.x : axis == 1 ? e.y : e.z) = delta;
                SimConfig hcfg = cfg;
                hcfg.n_paths = opts.n_grad;
                hcfg.seed = cfg.seed ^ salt ^ (uint64_t(j) << 20);
                hcfg.start = x + e;
                const double hp = wos_escape_prob(dom, hcfg).mean;
                hcfg.start = x - 1.0 * e;
                const double hm = wos_escape_prob(dom, hcfg).mean;
                grad[axis] = (hp - hm) / (2.0 * delta);
            }
            return grad;
        };
        const auto g1 = stencil(only1, 0x60);
        const auto g2 = stencil(only2, 0x70);
        values[j] = w * (g1[0] * g2[0] + g1[1] * g2[1] + g1[2] * g2[2]);
    });
    const auto mv = mean_stderr(values);
    out.correction = Z * mv.mean;
    out.correction_se = Z * mv.std_error;

    out.rhs.n = opts.n_h;
    out.rhs.seed = cfg.seed;
    out.rhs.mean = out.h1.mean * out.h2.mean + out.correction;
    const double prod_var = std::pow(out.h2.mean * out.h1.std_error, 2) +
                            std::pow(out.h1.mean * out.h2.std_error, 2);
    out.rhs.std_error = std::sqrt(prod_var + out.correction_se * out.correction_se);

    for (const Estimate* e : {&out.lhs, &out.h1, &out.h2})
        if (e->mean <= 0.0 || e->std_error / e->mean > 0.2) out.inconclusive = true;
    return out;
}

SubstituteCheck lemma_substitute_check(const ThornProfile& profile, double L, double theta,
                                       const SimConfig& cfg, int64_t n_h) {
    SubstituteCheck out;
    SimConfig ucfg = cfg;
    ucfg.n_paths = std::max<int64_t>(cfg.n_paths, 20000);  // the regularity probe needs signal
    out.u = estimate_U(profile, L, theta, ucfg);
    out.regular = out.u.regular;
    if (!out.regular) return out;

    SimConfig lcfg = cfg;
    lcfg.seed = cfg.seed ^ 0x111ULL;
    out.lhs = estimate_q2(profile, L, theta, true, lcfg).q2;

    const double reach = std::max(4.0 * L, 64.0);
    const ThornSet t1(profile, UnitVector({0, 0, 1}), 1.0, L / 2.0, true, reach);
    const ThornSet t2(profile, UnitVector({std::sin(theta), 0.0, std::cos(theta)}), 1.0, L / 2.0,
                      true, reach);
    Domain quarter{L / 4.0, {t1, t2}};
    Domain full1{L, {t1}}, full2{L, {t2}};

    const int64_t n = cfg.n_paths;
    std::vector<double> contrib(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        SimConfig ecfg = cfg;
        ecfg.seed = cfg.seed ^ 0x222ULL;
        const auto path = em_first_passage(quarter, ecfg, {}, uint64_t(i), false);
        if (!path.escaped || path.truncated) {
            contrib[i] = 0.0;  // absorbed by a thorn before reaching the L/4 sphere
            return;
        }
        SimConfig hcfg = cfg;
        hcfg.n_paths = n_h;
        hcfg.start = path.terminal;
        hcfg.seed = cfg.seed ^ 0x333ULL ^ (uint64_t(i) << 20);
        const double h1 = wos_escape_prob(full1, hcfg).mean;
        hcfg.seed = cfg.seed ^ 0x444ULL ^ (uint64_t(i) << 20);
        const double h2 = wos_escape_prob(full2, hcfg).mean;
        contrib[i] = h1 * h2;
    });
    const auto mc = mean_stderr(contrib);
    out.rhs.mean = 2.0 * mc.mean;
    out.rhs.std_error = 2.0 * mc.std_error;
    out.rhs.n = n;
    out.rhs.seed = cfg.seed;
    return out;
}

}  // namespace thorn
