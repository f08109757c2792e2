#include "thorn/sampler.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "thorn/stats.hpp"

namespace thorn {

namespace {

constexpr double kPi = 3.14159265358979323846;

double resolve_eps(const SimConfig& cfg, double L) {
    return cfg.eps_shell > 0.0 ? cfg.eps_shell : L * 1e-4;
}

Vec3 nudge_start(const Domain& domain, const Vec3& start, double eps) {
    const double r = norm(start);
    if (r > 0.0 && domain.L - r < eps) {
        // Tie-breaking for starts sitting on the outer sphere.
        return ((r - 0.5 * eps) / r) * start;
    }
    return start;
}

void validate_start(const Domain& domain, const Vec3& start) {
    if (norm(start) > domain.L) throw std::domain_error("sampler: start outside the outer ball");
    for (const auto& o : domain.obstacles)
        if (obstacle_contains(o, start)) throw std::domain_error("sampler: start inside an obstacle");
}

Estimate bernoulli_estimate(int64_t successes, int64_t n, const SimConfig& cfg, int64_t truncated) {
    Estimate e;
    e.n = n;
    e.seed = cfg.seed;
    e.mean = n > 0 ? double(successes) / double(n) : 0.0;
    e.std_error = n > 0 ? std::sqrt(e.mean * (1.0 - e.mean) / double(n)) : 0.0;
    e.warn_max_steps = truncated * 1000 > n;  // > 0.1% of paths
    return e;
}

double probe_scale(const Probe& probe, const Vec3& p) {
    if (const auto* ball = std::get_if<ProbeBall>(&probe)) {
        const double gap = std::max(norm(p - ball->center) - ball->radius, 0.0);
        return gap + 0.5 * ball->radius;
    }
    const auto& shell = std::get<ProbeShell>(probe);
    const double s = norm(p);
    const double gap = std::max({shell.r_lo - s, s - shell.r_hi, 0.0});
    return gap + 0.5 * (shell.r_hi - shell.r_lo);
}

bool probe_contains(const Probe& probe, const Vec3& p) {
    if (const auto* ball = std::get_if<ProbeBall>(&probe)) return norm(p - ball->center) <= ball->radius;
    const auto& shell = std::get<ProbeShell>(probe);
    const double s = norm(p);
    return s >= shell.r_lo && s <= shell.r_hi;
}

}  // namespace

void parallel_paths(int64_t n, int threads, const std::function<void(int64_t)>& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || n < 256) {
        for (int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        constexpr int64_t chunk = 64;
        for (;;) {
            const int64_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const int64_t end = std::min(begin + chunk, n);
            try {
                for (int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

WosPathResult wos_path(const Domain& domain, const SimConfig& cfg, double eps, uint64_t path_index,
                       Vec3 start) {
    PathRng rng(cfg.seed, path_index);
    WosPathResult out;
    Vec3 p = start;
    for (int64_t step = 0; step < cfg.max_steps; ++step) {
        const double og = domain.outer_gap(p);
        if (og < eps) {
            out.escaped = true;
            out.terminal = p;
            return out;
        }
        const double dobs = domain.obstacle_gap(p);
        if (dobs < eps) {
            out.escaped = false;
            out.terminal = p;
            return out;
        }
        p += std::min(og, dobs) * rng.unit_sphere();
    }
    out.truncated = true;
    out.terminal = p;
    return out;
}

Estimate wos_escape_prob(const Domain& domain, const SimConfig& cfg) {
    validate_start(domain, cfg.start);
    const double eps = resolve_eps(cfg, domain.L);
    const Vec3 start = nudge_start(domain, cfg.start, eps);
    const int64_t n = cfg.n_paths;
    std::vector<uint8_t> escaped(n), truncated(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        const auto r = wos_path(domain, cfg, eps, uint64_t(i), start);
        escaped[i] = r.escaped ? 1 : 0;
        truncated[i] = r.truncated ? 1 : 0;
    });
    int64_t k = 0, trunc = 0;
    for (int64_t i = 0; i < n; ++i) {
        k += escaped[i];
        trunc += truncated[i];
    }
    return bernoulli_estimate(k, n, cfg, trunc);
}

EmPathResult em_first_passage(const Domain& domain, const SimConfig& cfg,
                              std::span<const Probe> probes, uint64_t path_index,
                              bool record_polyline) {
    PathRng rng(cfg.seed, path_index);
    const double eps = resolve_eps(cfg, domain.L);
    EmPathResult out;
    out.occupation.assign(probes.size(), 0.0);
    Vec3 p = nudge_start(domain, cfg.start, eps);

    int64_t record_stride = 1;
    auto record = [&](const Vec3& v, int64_t step, bool force) {
        if (!record_polyline) return;
        if (!force && step % record_stride != 0) return;
        if (out.polyline.size() >= 100000) {
            // Thin by doubling the stride; keeps the vertex budget bounded.
            std::vector<Vec3> kept;
            kept.reserve(out.polyline.size() / 2 + 1);
            for (size_t j = 0; j < out.polyline.size(); j += 2) kept.push_back(out.polyline[j]);
            out.polyline = std::move(kept);
            record_stride *= 2;
        }
        out.polyline.push_back(v);
    };

    for (int64_t step = 0; step < cfg.max_steps; ++step) {
        const double og = domain.outer_gap(p);
        const double dobs = domain.obstacle_gap(p);
        const bool near = std::min(og, dobs) < 4.0 * eps;
        record(p, step, near || step == 0);
        if (dobs < eps) {
            out.escaped = false;
            out.terminal = p;
            record(p, step, true);
            return out;
        }
        if (og < eps) {
            out.escaped = true;
            out.terminal = p;
            record(p, step, true);
            return out;
        }
        double scale = std::min(og, dobs);
        for (const auto& probe : probes) scale = std::min(scale, probe_scale(probe, p));
        const double sigma = std::min(cfg.dt_clamp, cfg.dt_factor * scale);
        const double h = sigma * sigma;
        for (size_t k = 0; k < probes.size(); ++k)
            if (probe_contains(probes[k], p)) out.occupation[k] += h;
        p += sigma * rng.gauss3();
        out.total_time += h;
    }
    out.truncated = true;
    out.terminal = p;
    record(p, cfg.max_steps, true);
    return out;
}

Estimate em_escape_prob(const Domain& domain, const SimConfig& cfg) {
    validate_start(domain, cfg.start);
    const int64_t n = cfg.n_paths;
    std::vector<uint8_t> escaped(n), truncated(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        const auto r = em_first_passage(domain, cfg, {}, uint64_t(i), false);
        escaped[i] = r.escaped ? 1 : 0;
        truncated[i] = r.truncated ? 1 : 0;
    });
    int64_t k = 0, trunc = 0;
    for (int64_t i = 0; i < n; ++i) {
        k += escaped[i];
        trunc += truncated[i];
    }
    return bernoulli_estimate(k, n, cfg, trunc);
}

double em_free_displacement2(const SimConfig& cfg, uint64_t path_index, double t) {
    PathRng rng(cfg.seed, path_index);
    Vec3 p{0, 0, 0};
    const double h_max = t / 64.0;
    double elapsed = 0.0;
    while (elapsed < t) {
        const double h = std::min(h_max, t - elapsed);
        p += std::sqrt(h) * rng.gauss3();
        elapsed += h;
    }
    return norm2(p);
}

// --------------------------------------------------------------- thorn q's --

namespace {

ThornSet axis_thorn(const ThornProfile& profile, double L, bool clipped, const Vec3& axis) {
    return ThornSet(profile, UnitVector(axis), 1.0,
                    clipped ? std::optional<double>(L / 2.0) : std::nullopt, true,
                    std::max(4.0 * L, 64.0));
}

struct CoupledFlags {
    uint8_t both = 0, base = 0, truncated = 0;
    Vec3 terminal;
};

CoupledFlags coupled_wos_path(const Domain& base_domain, std::span<const Obstacle> extra,
                              double eps, const SimConfig& cfg, uint64_t path_index) {
    PathRng rng(cfg.seed, path_index);
    CoupledFlags out;
    Vec3 p = cfg.start;
    bool hit_extra = false;
    for (int64_t step = 0; step < cfg.max_steps; ++step) {
        const double og = base_domain.outer_gap(p);
        if (og < eps) {
            out.both = hit_extra ? 0 : 1;
            out.base = 1;
            out.terminal = p;
            return out;
        }
        const double db = base_domain.obstacle_gap(p);
        if (db < eps) {
            out.terminal = p;
            return out;  // absorbed by the base set: both indicators 0
        }
        double d = std::min(og, db);
        if (!hit_extra && !extra.empty()) {
            double de = std::numeric_limits<double>::infinity();
            for (const auto& o : extra) de = std::min(de, obstacle_distance(o, p));
            if (de < eps) {
                hit_extra = true;
            } else {
                d = std::min(d, de);
            }
        }
        p += d * rng.unit_sphere();
    }
    out.truncated = 1;
    out.terminal = p;
    return out;
}

}  // namespace

CoupledEscape wos_escape_coupled(const Domain& base_domain, std::span<const Obstacle> extra,
                                 const SimConfig& cfg) {
    validate_start(base_domain, cfg.start);
    const double eps = resolve_eps(cfg, base_domain.L);
    const int64_t n = cfg.n_paths;
    CoupledEscape out;
    out.flags_all.assign(n, 0);
    out.flags_base.assign(n, 0);
    std::vector<uint8_t> truncated(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        const auto f = coupled_wos_path(base_domain, extra, eps, cfg, uint64_t(i));
        out.flags_all[i] = f.both;
        out.flags_base[i] = f.base;
        truncated[i] = f.truncated;
    });
    int64_t k2 = 0, k1 = 0, trunc = 0;
    for (int64_t i = 0; i < n; ++i) {
        k2 += out.flags_all[i];
        k1 += out.flags_base[i];
        trunc += truncated[i];
    }
    out.with_extra = bernoulli_estimate(k2, n, cfg, trunc);
    out.base_only = bernoulli_estimate(k1, n, cfg, trunc);
    return out;
}

Estimate estimate_q(const ThornProfile& profile, double L, bool clipped, const SimConfig& cfg) {
    const ThornSet thorn = axis_thorn(profile, L, clipped, Vec3{0, 0, 1});
    Domain domain{L, {thorn}};
    // The origin is interior by the inner truncation.
    Estimate e = wos_escape_prob(domain, cfg);
    e.meta["profile"] = profile.id();
    e.meta["L"] = std::to_string(L);
    e.meta["clipped"] = clipped ? "1" : "0";
    return e;
}

CoupledQ estimate_q2(const ThornProfile& profile, double L, double theta, bool clipped,
                     const SimConfig& cfg) {
    if (!(theta > 0.0 && theta <= kPi + 1e-12))
        throw std::domain_error("estimate_q2: theta must be in (0, pi]");
    Domain base{L, {axis_thorn(profile, L, clipped, Vec3{0, 0, 1})}};
    const std::vector<Obstacle> extra = {
        axis_thorn(profile, L, clipped, Vec3{std::sin(theta), 0.0, std::cos(theta)})};
    CoupledEscape ce = wos_escape_coupled(base, extra, cfg);
    CoupledQ out;
    out.both_flags = std::move(ce.flags_all);
    out.base_flags = std::move(ce.flags_base);
    out.q2 = ce.with_extra;
    out.q1_coupled = ce.base_only;
    out.q2.meta["profile"] = profile.id();
    out.q2.meta["L"] = std::to_string(L);
    out.q2.meta["theta"] = std::to_string(theta);
    out.q2.meta["clipped"] = clipped ? "1" : "0";
    return out;
}

std::vector<std::vector<uint8_t>> estimate_q_multi(const ThornProfile& profile,
                                                   std::span<const double> L_list,
                                                   const SimConfig& cfg) {
    if (L_list.empty()) throw std::invalid_argument("estimate_q_multi: empty L list");
    for (size_t k = 1; k < L_list.size(); ++k)
        if (!(L_list[k] > L_list[k - 1]))
            throw std::invalid_argument("estimate_q_multi: L list must be increasing");
    const double L_max = L_list.back();
    const ThornSet thorn = axis_thorn(profile, L_max, false, Vec3{0, 0, 1});
    const size_t m = L_list.size();
    const int64_t n = cfg.n_paths;
    std::vector<std::vector<uint8_t>> flags(m, std::vector<uint8_t>(n, 0));
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        PathRng rng(cfg.seed, uint64_t(i));
        Vec3 p = cfg.start;
        size_t reached = 0;  // indicators are monotone: radii are crossed in order
        for (int64_t step = 0; step < cfg.max_steps && reached < m; ++step) {
            const double r = norm(p);
            while (reached < m && r >= L_list[reached] - L_list[reached] * 1e-4) {
                flags[reached][i] = 1;
                ++reached;
            }
            if (reached >= m) break;
            const double og = L_max - r;
            const double db = thorn.distance_lower_bound(p);
            if (db < L_max * 1e-4) break;  // absorbed: remaining radii not reached
            if (og < L_max * 1e-4) break;
            p += std::min(og, db) * rng.unit_sphere();
        }
    });
    return flags;
}

UResult estimate_U(const ThornProfile& profile, double L, double theta, const SimConfig& cfg) {
    auto ratio = [&](double radius, const SimConfig& c) {
        const CoupledQ q = estimate_q2(profile, radius, theta, true, c);
        const double x = q.q2.mean, y = q.q1_coupled.mean;
        const int64_t n = q.q2.n;
        if (!(y > 10.0 * q.q1_coupled.std_error) || y <= 0.0)
            throw InsufficientSignal("estimate_U: q estimate too noisy; increase n_paths");
        Estimate u;
        u.n = n;
        u.seed = c.seed;
        u.mean = x / (y * y);
        // Delta method with the exact coupling covariance cov(X,Y) = x(1-y).
        const double vx = x * (1.0 - x), vy = y * (1.0 - y), cxy = x * (1.0 - y);
        const double var = vx / std::pow(y, 4) + 4.0 * x * x * vy / std::pow(y, 6) -
                           4.0 * x * cxy / std::pow(y, 5);
        u.std_error = std::sqrt(std::max(var, 0.0) / double(n));
        u.warn_max_steps = q.q2.warn_max_steps;
        return u;
    };
    UResult out;
    out.U = ratio(L, cfg);
    SimConfig quarter = cfg;
    quarter.seed = cfg.seed ^ 0xa5a55a5a5a5aa5a5ULL;
    out.U_quarter = ratio(L / 4.0, quarter);
    out.regular = out.U.mean >= out.U_quarter.mean;
    out.U.meta["profile"] = profile.id();
    out.U.meta["L"] = std::to_string(L);
    out.U.meta["theta"] = std::to_string(theta);
    out.U.meta["regular"] = out.regular ? "1" : "0";
    return out;
}

Estimate occupation_density(const Domain& domain, const Vec3& x_probe, double ball_r,
                            const SimConfig& cfg) {
    if (!(ball_r > 0.0)) throw std::domain_error("occupation_density: probe radius must be positive");
    if (norm(x_probe) + ball_r >= domain.L)
        throw std::domain_error("occupation_density: probe crosses the outer boundary");
    for (const auto& o : domain.obstacles)
        if (obstacle_distance(o, x_probe) <= ball_r)
            throw std::domain_error("occupation_density: probe intersects an obstacle");
    if (norm(cfg.start - x_probe) <= ball_r)
        throw std::domain_error("occupation_density: probe contains the start point");
    validate_start(domain, cfg.start);

    const Probe probe = ProbeBall{x_probe, ball_r};
    const int64_t n = cfg.n_paths;
    std::vector<double> occ(n);
    std::vector<uint8_t> truncated(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        const auto r = em_first_passage(domain, cfg, std::span<const Probe>(&probe, 1), uint64_t(i), false);
        occ[i] = r.occupation[0];
        truncated[i] = r.truncated ? 1 : 0;
    });
    const double volume = 4.0 / 3.0 * kPi * ball_r * ball_r * ball_r;
    const auto me = mean_stderr(occ);
    Estimate e;
    e.mean = me.mean / volume;
    e.std_error = me.std_error / volume;
    e.n = n;
    e.seed = cfg.seed;
    int64_t trunc = 0;
    for (int64_t i = 0; i < n; ++i) trunc += truncated[i];
    e.warn_max_steps = trunc * 1000 > n;
    return e;
}

PolarDensity hitting_density_polar(const Domain& domain, int n_bins, const SimConfig& cfg) {
    if (n_bins < 2) throw std::invalid_argument("hitting_density_polar: need >= 2 bins");
    Vec3 axis{0, 0, 1};
    if (!domain.obstacles.empty()) {
        if (domain.obstacles.size() != 1 || !std::holds_alternative<ThornSet>(domain.obstacles[0]))
            throw std::domain_error("hitting_density_polar: domain must hold a single thorn");
        axis = std::get<ThornSet>(domain.obstacles[0]).axis().v;
    }
    validate_start(domain, cfg.start);
    const double eps = resolve_eps(cfg, domain.L);
    const Vec3 start = nudge_start(domain, cfg.start, eps);
    const int64_t n = cfg.n_paths;
    std::vector<int16_t> bin_of(n, -1);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        const auto r = wos_path(domain, cfg, eps, uint64_t(i), start);
        if (!r.escaped || r.truncated) return;
        const double rn = norm(r.terminal);
        const double psi = std::acos(std::min(1.0, std::fabs(dot(r.terminal, axis)) / rn));
        int b = int(psi / (0.5 * kPi) * n_bins);
        b = std::clamp(b, 0, n_bins - 1);
        bin_of[i] = int16_t(b);
    });
    PolarDensity out;
    out.angle_lo.resize(n_bins);
    out.angle_hi.resize(n_bins);
    out.density.resize(n_bins);
    out.std_error.resize(n_bins);
    out.counts.assign(n_bins, 0);
    for (int64_t i = 0; i < n; ++i)
        if (bin_of[i] >= 0) {
            ++out.counts[bin_of[i]];
            ++out.n_escaped;
        }
    for (int b = 0; b < n_bins; ++b) {
        const double lo = 0.5 * kPi * b / n_bins, hi = 0.5 * kPi * (b + 1) / n_bins;
        out.angle_lo[b] = lo;
        out.angle_hi[b] = hi;
        const double band_fraction = std::cos(lo) - std::cos(hi);  // of total solid angle
        const double c = double(out.counts[b]);
        out.density[b] = (c / double(n)) / band_fraction;
        out.std_error[b] = std::sqrt(std::max(c, 1.0) * (1.0 - c / double(n))) / double(n) / band_fraction;
    }
    return out;
}

// ------------------------------------------------------ cylinder first-passage --

namespace {

// P(|Z| exits [z_lo, z_hi] before the radial part reaches wall_r), by WoS in
// the finite cylinder; ties at the wall count as radial hits.
Estimate cyl_axial_first(const Vec3& start, double wall_r, double z_lo, double z_hi,
                         const SimConfig& cfg, uint64_t seed_salt) {
    const int64_t n = cfg.n_paths;
    const double eps = cfg.eps_shell > 0.0 ? cfg.eps_shell : wall_r * 1e-4;
    std::vector<uint8_t> success(n), truncated(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        PathRng rng(cfg.seed ^ seed_salt, uint64_t(i));
        Vec3 p = start;
        for (int64_t step = 0; step < cfg.max_steps; ++step) {
            const double rho = std::hypot(p.x, p.y);
            const double dw = wall_r - rho;
            if (dw < eps) return;  // radial part reached the wall first
            const double dz = std::min(z_hi - p.z, p.z - z_lo);
            if (dz < eps) {
                success[i] = 1;
                return;
            }
            p += std::min(dw, dz) * rng.unit_sphere();
        }
        truncated[i] = 1;
    });
    int64_t k = 0, trunc = 0;
    for (int64_t i = 0; i < n; ++i) {
        k += success[i];
        trunc += truncated[i];
    }
    return bernoulli_estimate(k, n, cfg, trunc);
}

const std::array<Vec3, 5> kCylinderStarts = {Vec3{0, 0, 0}, Vec3{0, 0, 1}, Vec3{0, 0, -1},
                                             Vec3{1, 0, 1}, Vec3{1, 0, -1}};

}  // namespace

CcylEstimate estimate_c_cyl(const SimConfig& cfg) {
    CcylEstimate out;
    double best = -1.0, best_se = 0.0;
    for (size_t s = 0; s < kCylinderStarts.size(); ++s) {
        const Vec3 v = kCylinderStarts[s];
        out.per_start[s] = cyl_axial_first(v, 1.0, v.z - 1.0, v.z + 1.0, cfg, 0x1001 * (s + 1));
        if (out.per_start[s].mean > best) {
            best = out.per_start[s].mean;
            best_se = out.per_start[s].std_error;
        }
    }
    out.c_prime = best;
    out.c_cyl.n = cfg.n_paths;
    out.c_cyl.seed = cfg.seed;
    out.c_cyl.mean = std::sqrt(std::max(best, 0.0));
    out.c_cyl.std_error = best > 0.0 ? best_se / (2.0 * std::sqrt(best)) : 0.0;
    return out;
}

Prop1Estimate estimate_axial_exit(double b, const SimConfig& cfg) {
    if (!(b >= 2.0)) throw std::domain_error("estimate_axial_exit: need b >= 2 (proposition hypothesis)");
    Prop1Estimate out;
    double best = -1.0;
    size_t best_i = 0;
    for (size_t s = 0; s < kCylinderStarts.size(); ++s) {
        out.per_start[s] = cyl_axial_first(kCylinderStarts[s], 1.0, -b, b, cfg, 0x2001 * (s + 1));
        if (out.per_start[s].mean > best) {
            best = out.per_start[s].mean;
            best_i = s;
        }
    }
    out.worst = out.per_start[best_i];
    return out;
}

CylinderAvoid cylinder_avoid_prob(double r, const SimConfig& cfg) {
    if (!(r > 0.0 && r < 0.1)) throw std::domain_error("cylinder_avoid_prob: need r in (0, 0.1)");
    const std::array<double, 1> radii = {r};
    CylinderAvoid out;
    out.from_equator = cylinder_avoid_scan(radii, Vec3{0.5, 0, 0}, cfg).estimates[0];
    SimConfig c2 = cfg;
    c2.seed = cfg.seed ^ 0x77aa77aa11bb11bbULL;
    out.from_pole = cylinder_avoid_scan(radii, Vec3{0, 0, -0.5}, c2).estimates[0];
    return out;
}

CylinderAvoidScan cylinder_avoid_scan(std::span<const double> radii, const Vec3& start,
                                      const SimConfig& cfg) {
    const size_t m = radii.size();
    if (m == 0) throw std::invalid_argument("cylinder_avoid_scan: empty radius list");
    std::vector<double> rs(radii.begin(), radii.end());
    std::sort(rs.begin(), rs.end(), std::greater<>());  // largest (outermost surface) first
    const Vec3 cap_a{0, 0, 0.5}, cap_b{0, 0, 0.75};
    std::vector<CylinderSegment> cyls(m);
    std::vector<double> eps_cyl(m);
    for (size_t k = 0; k < m; ++k) {
        cyls[k] = CylinderSegment{cap_a, cap_b, rs[k]};
        eps_cyl[k] = std::min(1e-4, 0.05 * rs[k]);
    }
    const double eps_outer = 1e-4;
    const int64_t n = cfg.n_paths;
    CylinderAvoidScan out;
    out.flags.assign(m, std::vector<uint8_t>(n, 0));
    std::vector<uint8_t> truncated(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        PathRng rng(cfg.seed, uint64_t(i));
        Vec3 p = start;
        size_t active = 0;  // cylinders 0..active-1 already hit (nested, hit outermost first)
        for (int64_t step = 0; step < cfg.max_steps; ++step) {
            const double og = 1.0 - norm(p);
            if (og < eps_outer) {
                for (size_t k = active; k < m; ++k) out.flags[k][i] = 1;  // avoided
                return;
            }
            if (active >= m) return;  // all hit: nothing left to decide
            double d = og;
            while (active < m) {
                const double dc = cyls[active].distance(p);
                if (dc < eps_cyl[active]) {
                    ++active;  // hit this radius; the next smaller one keeps walking
                    continue;
                }
                d = std::min(d, dc);
                break;
            }
            if (active >= m) return;
            p += d * rng.unit_sphere();
        }
        truncated[i] = 1;
    });
    int64_t trunc = 0;
    for (int64_t i = 0; i < n; ++i) trunc += truncated[i];
    out.estimates.resize(m);
    for (size_t k = 0; k < m; ++k) {
        int64_t s = 0;
        for (int64_t i = 0; i < n; ++i) s += out.flags[k][i];
        out.estimates[k] = bernoulli_estimate(s, n, cfg, trunc);
        std::ostringstream key;
        key << rs[k];
        out.estimates[k].meta["r"] = key.str();
    }
    return out;
}

Estimate wos_annulus2d_inner_first(double a, double r0, double b, const SimConfig& cfg) {
    if (!(0 < a && a <= r0 && r0 <= b && a < b))
        throw std::domain_error("wos_annulus2d_inner_first: need a <= r0 <= b");
    const double eps = cfg.eps_shell > 0.0 ? cfg.eps_shell : b * 1e-4;
    const int64_t n = cfg.n_paths;
    std::vector<uint8_t> inner(n), truncated(n);
    parallel_paths(n, cfg.threads, [&](int64_t i) {
        PathRng rng(cfg.seed, uint64_t(i));
        double x = r0, y = 0.0;
        for (int64_t step = 0; step < cfg.max_steps; ++step) {
            const double rho = std::hypot(x, y);
            if (rho - a < eps) {
                inner[i] = 1;
                return;
            }
            if (b - rho < eps) return;
            const double d = std::min(rho - a, b - rho);
            double cx, cy;
            rng.unit_circle(cx, cy);
            x += d * cx;
            y += d * cy;
        }
        truncated[i] = 1;
    });
    int64_t k = 0, trunc = 0;
    for (int64_t i = 0; i < n; ++i) {
        k += inner[i];
        trunc += truncated[i];
    }
    return bernoulli_estimate(k, n, cfg, trunc);
}

}  // namespace thorn
