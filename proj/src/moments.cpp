#include "thorn/moments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "thorn/quadrature.hpp"
#include "thorn/stats.hpp"

namespace thorn {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kFourPi = 4.0 * kPi;
}  // namespace

DirectionGrid DirectionGrid::fibonacci(int n) {
    if (n < 1) throw std::invalid_argument("DirectionGrid: need n >= 1");
    DirectionGrid grid;
    grid.directions.reserve(n);
    grid.weights.assign(n, kFourPi / double(n));
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - (2.0 * i + 1.0) / double(n);
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * kPi * std::fmod(double(i) * (golden - 1.0), 1.0);
        grid.directions.push_back({rho * std::cos(phi), rho * std::sin(phi), z});
    }
    return grid;
}

double DirectionGrid::total_weight() const {
    return std::accumulate(weights.begin(), weights.end(), 0.0);
}

namespace {

// cos of the thorn cap half-angle, tabulated over radius for fast lookups.
struct CapTable {
    double rho_lo = 1.0, rho_hi = 1.0;
    std::vector<double> cos_cap;

    static CapTable build(const ThornSet& thorn, double rho_lo, double rho_hi, int n) {
        CapTable t;
        t.rho_lo = rho_lo;
        t.rho_hi = rho_hi;
        t.cos_cap.resize(n);
        for (int i = 0; i < n; ++i) {
            const double rho = rho_lo + (rho_hi - rho_lo) * double(i) / double(n - 1);
            t.cos_cap[i] = thorn.cap_cos(rho);
        }
        return t;
    }
    double at(double rho) const {
        if (rho < rho_lo || rho > rho_hi) return 2.0;
        const double x = (rho - rho_lo) / (rho_hi - rho_lo) * double(cos_cap.size() - 1);
        const size_t i = std::min(cos_cap.size() - 2, size_t(x));
        const double t = x - double(i);
        return cos_cap[i] + t * (cos_cap[i + 1] - cos_cap[i]);
    }
};

}  // namespace

WLRun sample_WL(const ThornProfile& profile, double L, const DirectionGrid& grid,
                const SimConfig& cfg, bool keep_masks) {
    const int n_dirs = int(grid.directions.size());
    if (n_dirs < 64) throw std::invalid_argument("sample_WL: need a grid of >= 64 directions");
    const ThornSet clipped(profile, UnitVector({0, 0, 1}), 1.0, L, true, std::max(4.0 * L, 64.0));
    const ThornSet unclipped(profile, UnitVector({0, 0, 1}), 1.0, std::nullopt, true,
                             std::max(4.0 * L, 64.0));
    const CapTable caps = CapTable::build(clipped, clipped.inner_radius(), L, 4096);

    const double eps = cfg.eps_shell > 0.0 ? cfg.eps_shell : L * 1e-4;
    const int64_t n = cfg.n_paths;
    const size_t words = size_t((n_dirs + 63) / 64);

    WLRun run;
    run.words_per_path = words;
    run.w.assign(n, 0.0);
    run.z_avoided.assign(n, 0);
    run.masks.assign(keep_masks ? size_t(n) * words : 0, 0);

    const double weight = kFourPi / double(n_dirs);
    parallel_paths(n, cfg.threads, [&](int64_t ipath) {
        PathRng rng(cfg.seed, uint64_t(ipath));
        Vec3 p{0, 0, 0};
        std::vector<uint32_t> active(n_dirs);
        for (int d = 0; d < n_dirs; ++d) active[d] = uint32_t(d);
        bool z_hit = false;
        std::vector<uint64_t> mask(words, ~uint64_t(0));

        auto scan_vertex = [&](const Vec3& v) {
            const double rho = norm(v);
            if (rho < clipped.inner_radius()) return;
            // Same cap rule for the grid directions and the z indicator; the z
            // thorn is unclipped, so past L it falls back to the exact solver.
            double cc = caps.at(rho);
            if (rho > L) {
                if (!z_hit) z_hit = std::fabs(v.z) >= rho * unclipped.cap_cos(rho);
                return;
            }
            if (cc > 1.0) return;
            const double thr = rho * cc;  // compare |v . dir| against rho cos(phi*)
            if (!z_hit && std::fabs(v.z) >= thr) z_hit = true;
            for (size_t k = 0; k < active.size();) {
                const Vec3& dir = grid.directions[active[k]];
                if (std::fabs(dot(v, dir)) >= thr) {
                    const uint32_t d = active[k];
                    mask[d / 64] &= ~(uint64_t(1) << (d % 64));
                    active[k] = active.back();
                    active.pop_back();
                } else {
                    ++k;
                }
            }
        };

        for (int64_t step = 0; step < cfg.max_steps; ++step) {
            scan_vertex(p);
            const double og = L - norm(p);
            if (og < eps) break;
            const double sigma = std::min(cfg.dt_clamp, cfg.dt_factor * og);
            p += sigma * rng.gauss3();
        }
        run.w[ipath] = weight * double(active.size());
        run.z_avoided[ipath] = z_hit ? 0 : 1;
        if (keep_masks) std::copy(mask.begin(), mask.end(), run.masks.begin() + ipath * words);
    });

    const auto ew = mean_stderr(run.w);
    run.EW.mean = ew.mean;
    run.EW.std_error = ew.std_error;
    run.EW.n = n;
    run.EW.seed = cfg.seed;
    std::vector<double> w2(n);
    for (int64_t i = 0; i < n; ++i) w2[i] = run.w[i] * run.w[i];
    const auto ew2 = mean_stderr(w2);
    run.EW2.mean = ew2.mean;
    run.EW2.std_error = ew2.std_error;
    run.EW2.n = n;
    run.EW2.seed = cfg.seed;
    int64_t kz = 0;
    for (int64_t i = 0; i < n; ++i) kz += run.z_avoided[i];
    run.q_z.mean = double(kz) / double(n);
    run.q_z.std_error = std::sqrt(run.q_z.mean * (1.0 - run.q_z.mean) / double(n));
    run.q_z.n = n;
    run.q_z.seed = cfg.seed;
    return run;
}

Estimate second_moment_bound(const Estimate& EW, const Estimate& EW2, double cov01) {
    if (!(EW2.mean > 0.0)) throw std::domain_error("second_moment_bound: degenerate second moment");
    Estimate out;
    out.n = EW.n;
    out.seed = EW.seed;
    out.mean = EW.mean * EW.mean / EW2.mean;
    const double g1 = 2.0 * EW.mean / EW2.mean;
    const double g2 = -EW.mean * EW.mean / (EW2.mean * EW2.mean);
    const double cov_means = EW.n > 0 ? cov01 / double(EW.n) : 0.0;
    const double var = g1 * g1 * EW.std_error * EW.std_error +
                       g2 * g2 * EW2.std_error * EW2.std_error + 2.0 * g1 * g2 * cov_means;
    out.std_error = std::sqrt(std::max(var, 0.0));
    return out;
}

FirstMomentDiag first_moment_diag(const ThornProfile& profile, std::span<const double> L_list,
                                  const SimConfig& cfg) {
    if (L_list.empty()) throw std::invalid_argument("first_moment_diag: empty L list");
    for (size_t i = 1; i < L_list.size(); ++i)
        if (!(L_list[i] > L_list[i - 1]))
            throw std::invalid_argument("first_moment_diag: L list must be increasing");
    FirstMomentDiag diag;
    for (size_t i = 0; i < L_list.size(); ++i) {
        SimConfig c = cfg;
        c.seed = cfg.seed ^ (0x9e3779b97f4a7c15ULL * (i + 1));
        const Estimate q = estimate_q(profile, L_list[i], false, c);
        FirstMomentRow row;
        row.L = L_list[i];
        row.q = q.mean;
        row.q_se = q.std_error;
        row.g = eval_g(profile, L_list[i]);
        row.prod = row.q * row.g;
        row.prod_se = row.q_se * row.g;
        diag.rows.push_back(row);
    }
    std::vector<double> lx, ly;
    for (const auto& row : diag.rows)
        if (row.prod > 0.0) {
            lx.push_back(std::log(row.L));
            ly.push_back(std::log(row.prod));
        }
    if (lx.size() >= 2) diag.trend_slope = linear_fit(lx, ly).slope;
    return diag;
}

DimensionIntegral dimension_integral(std::span<const double> theta, std::span<const double> U,
                                     double beta) {
    const size_t n = theta.size();
    if (n != U.size() || n < 2) throw std::invalid_argument("dimension_integral: need >= 2 rows");
    if (!(beta >= 0.0 && beta < 2.0)) throw std::invalid_argument("dimension_integral: beta in [0,2)");
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(), [&](size_t a, size_t b) { return theta[a] < theta[b]; });
    std::vector<double> lt(n), lu(n);
    for (size_t i = 0; i < n; ++i) {
        const double t = theta[order[i]], u = U[order[i]];
        if (!(t > 0.0 && t <= kPi + 1e-12) || !(u > 0.0))
            throw std::invalid_argument("dimension_integral: need theta in (0,pi], U > 0");
        lt[i] = std::log(t);
        lu[i] = std::log(u);
    }
    auto interp_U = [&](double t) {
        const double x = std::log(t);
        if (x <= lt.front()) return std::exp(lu.front());
        if (x >= lt.back()) return std::exp(lu.back());
        const auto it = std::upper_bound(lt.begin(), lt.end(), x);
        const size_t hi = size_t(it - lt.begin()), lo = hi - 1;
        const double s = (x - lt[lo]) / (lt[hi] - lt[lo]);
        return std::exp(lu[lo] + s * (lu[hi] - lu[lo]));
    };

    DimensionIntegral out;
    const double t_min = std::exp(lt.front());
    out.quadrature = 2.0 * kPi *
                     adaptive_simpson(
                         [&](double t) { return interp_U(t) * std::pow(t, -beta) * std::sin(t); },
                         t_min, kPi, 1e-9);

    // Tail exponent from the smallest tabulated decade.
    std::vector<double> fx, fy;
    for (size_t i = 0; i < n; ++i)
        if (lt[i] <= lt.front() + std::log(10.0) + 1e-12) {
            fx.push_back(lt[i]);
            fy.push_back(lu[i]);
        }
    out.fitted_xi = fx.size() >= 2 ? -linear_fit(fx, fy).slope : 0.0;
    if (out.fitted_xi + beta >= 2.0) {
        out.divergent = true;
        out.value = out.quadrature;
        return out;
    }
    const double amp = interp_U(t_min) * std::pow(t_min, out.fitted_xi);
    const double e1 = 2.0 - out.fitted_xi - beta;
    // sin(theta) ~ theta - theta^3/6 below the cutoff.
    out.tail = 2.0 * kPi * amp *
               (std::pow(t_min, e1) / e1 - std::pow(t_min, e1 + 2.0) / (6.0 * (e1 + 2.0)));
    out.value = out.quadrature + out.tail;
    return out;
}

AxisIntegral axis_integral(const ThornProfile& profile, double s, double theta) {
    if (!(theta > 0.0 && theta <= kPi + 1e-12))
        throw std::domain_error("axis_integral: theta must be in (0, pi]");
    if (!(eval_f(profile, s) < s * std::sin(0.5 * theta)))
        throw std::domain_error("axis_integral: thorn caps merge on the sphere");
    const ThornSet thorn(profile, UnitVector({0, 0, 1}), 1.0, std::nullopt, true,
                         std::max(4.0 * s, 64.0));
    const double cos_cap = thorn.cap_cos(s);
    const double phi_star = cos_cap > 1.0 ? 0.0 : std::acos(std::clamp(cos_cap, -1.0, 1.0));
    if (!(phi_star < 0.5 * kPi)) throw std::domain_error("axis_integral: cap covers the hemisphere");

    const double ca = std::cos(theta), sa = std::sin(theta);
    const bool aligned = std::fabs(sa) < 1e-9;  // theta ~ pi: the two axes share a line

    // Integrand over (polar, azimuth): dS/(r r') reduces to d(polar) d(azimuth) / sin(angle
    // to the rotated axis); the polar-band area cancels the distance to the z-axis.
    auto inner = [&](double tp) {
        const double st = std::sin(tp), ct = std::cos(tp);
        if (aligned) return 2.0 * kPi / st;
        double t1 = (cos_cap - ct * ca) / (st * sa);  // exclusion around +v
        double t2 = -(cos_cap + ct * ca) / (st * sa);  // exclusion around -v
        if (t1 <= -1.0 || t2 >= 1.0) return 0.0;  // ring swallowed by a cap
        const double phi_lo = t1 >= 1.0 ? 0.0 : std::acos(std::clamp(t1, -1.0, 1.0));
        const double phi_hi = t2 <= -1.0 ? kPi : std::acos(std::clamp(t2, -1.0, 1.0));
        if (!(phi_hi > phi_lo)) return 0.0;
        auto f = [&](double phi) {
            const double c = st * sa * std::cos(phi) + ct * ca;
            return 1.0 / std::sqrt(std::max(1e-300, 1.0 - c * c));
        };
        return 2.0 * adaptive_simpson(f, phi_lo, phi_hi, 1e-10);
    };

    // Outer integration split at the cap-boundary breakpoints.
    std::vector<double> cuts = {phi_star, kPi - phi_star};
    for (double b : {theta - phi_star, theta + phi_star, kPi - theta - phi_star, kPi - theta + phi_star})
        if (b > phi_star && b < kPi - phi_star) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    AxisIntegral out;
    for (size_t i = 0; i + 1 < cuts.size(); ++i) {
        if (cuts[i + 1] - cuts[i] < 1e-14) continue;
        out.value += adaptive_simpson(inner, cuts[i], cuts[i + 1], 1e-9);
    }
    out.bound_g = 16.0 * kPi * std::log(kPi * eval_g(profile, s));
    out.abs_log_theta = std::fabs(std::log(theta));
    return out;
}

}  // namespace thorn
