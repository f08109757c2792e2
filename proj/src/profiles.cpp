#include "thorn/profiles.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "thorn/quadrature.hpp"
#include "thorn/stats.hpp"

namespace thorn {

ThornProfile ThornProfile::power(double alpha, double z_floor) {
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("power profile: alpha must be in [0,1)");
    if (!(z_floor > 0.0)) throw std::invalid_argument("power profile: z_floor must be positive");
    ThornProfile pr;
    pr.family = ProfileFamily::power;
    pr.alpha = alpha;
    pr.z_floor = z_floor;
    return pr;
}

ThornProfile ThornProfile::subexp(double c, double p, double z_floor) {
    if (!(c > 0.0)) throw std::invalid_argument("subexp profile: c must be positive");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("subexp profile: p must be in (0,1)");
    if (!(z_floor >= 1.0)) throw std::invalid_argument("subexp profile: z_floor must be >= 1");
    ThornProfile pr;
    pr.family = ProfileFamily::subexp;
    pr.c = c;
    pr.p = p;
    pr.z_floor = z_floor;
    return pr;
}

ThornProfile ThornProfile::tabulated(const std::vector<double>& z, const std::vector<double>& f,
                                     double z_floor) {
    if (z.size() != f.size() || z.size() < 2) throw std::invalid_argument("tabulated profile: need >= 2 rows");
    ThornProfile pr;
    pr.family = ProfileFamily::tabulated;
    pr.z_floor = z_floor;
    pr.log_z.reserve(z.size());
    pr.log_f.reserve(z.size());
    for (size_t i = 0; i < z.size(); ++i) {
        if (!(z[i] > 0.0) || !(f[i] > 0.0))
            throw std::invalid_argument("tabulated profile: z and f must be positive");
        if (i > 0 && !(z[i] > z[i - 1]))
            throw std::invalid_argument("tabulated profile: z grid must be strictly increasing");
        pr.log_z.push_back(std::log(z[i]));
        pr.log_f.push_back(std::log(f[i]));
    }
    return pr;
}

ThornProfile ThornProfile::tabulated_from_csv(const std::string& path, double z_floor) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open profile table: " + path);
    std::vector<double> z, f;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double zi, fi;
        if (row >> zi >> fi) {
            z.push_back(zi);
            f.push_back(fi);
        }
    }
    return tabulated(z, f, z_floor);
}

std::string ThornProfile::id() const {
    std::ostringstream s;
    switch (family) {
        case ProfileFamily::power: s << "power(alpha=" << alpha << ")"; break;
        case ProfileFamily::subexp: s << "subexp(c=" << c << ",p=" << p << ")"; break;
        case ProfileFamily::tabulated: s << "tabulated(" << log_z.size() << " rows)"; break;
    }
    return s.str();
}

double eval_f(const ThornProfile& profile, double z) {
    if (!(z >= 0.0)) throw std::domain_error("eval_f: z must be >= 0");
    const double zz = std::max(z, profile.z_floor);
    switch (profile.family) {
        case ProfileFamily::power:
            return std::pow(zz, profile.alpha);
        case ProfileFamily::subexp: {
            const double u = std::log(zz);
            return zz / std::exp(profile.c * std::pow(u, profile.p));
        }
        case ProfileFamily::tabulated: {
            const double lz = std::log(zz);
            const auto& xs = profile.log_z;
            if (lz < xs.front() - 1e-12 || lz > xs.back() + 1e-12)
                throw std::domain_error("eval_f: tabulated profile queried outside its grid");
            const double lzc = std::clamp(lz, xs.front(), xs.back());
            auto it = std::upper_bound(xs.begin(), xs.end(), lzc);
            size_t hi = std::min<size_t>(xs.size() - 1, std::max<ptrdiff_t>(1, it - xs.begin()));
            size_t lo = hi - 1;
            const double t = (lzc - xs[lo]) / (xs[hi] - xs[lo]);
            return std::exp(profile.log_f[lo] + t * (profile.log_f[hi] - profile.log_f[lo]));
        }
    }
    throw std::logic_error("eval_f: unknown family");
}

double eval_g(const ThornProfile& profile, double z) { return z / eval_f(profile, z); }

namespace {

double central_diff_fprime(const ThornProfile& profile, double z) {
    const double h = z * 1e-5;
    return (eval_f(profile, z + h) - eval_f(profile, std::max(z - h, 0.0))) / (2.0 * h);
}

// Geometric grid of n points on [lo, hi].
std::vector<double> geometric_grid(double lo, double hi, int n) {
    std::vector<double> zs(n);
    const double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < n; ++i) zs[i] = std::exp(llo + (lhi - llo) * double(i) / double(n - 1));
    zs.front() = lo;
    zs.back() = hi;
    return zs;
}

double log_g_of_u(const ThornProfile& profile, double u) {
    const double z = std::exp(u);
    return std::log(eval_g(profile, z));
}

}  // namespace

HypothesisReport check_hypotheses(const ThornProfile& profile, double z_lo, double z_hi, int n) {
    if (!(profile.z_floor <= z_lo && z_lo < z_hi)) throw std::invalid_argument("check_hypotheses: need z_floor <= z_lo < z_hi");
    if (n < 16) throw std::invalid_argument("check_hypotheses: need n >= 16");

    HypothesisReport rep;
    const auto zs = geometric_grid(z_lo, z_hi, n);
    std::vector<double> fs(n), gs(n);
    for (int i = 0; i < n; ++i) {
        fs[i] = eval_f(profile, zs[i]);
        gs[i] = zs[i] / fs[i];
    }
    for (int i = 0; i + 1 < n; ++i) {
        if (rep.monotone_f && fs[i + 1] < fs[i] * (1.0 - 1e-12)) {
            rep.monotone_f = false;
            rep.worst_z = zs[i + 1];
        }
        if (rep.monotone_g && gs[i + 1] < gs[i] * (1.0 - 1e-12)) {
            rep.monotone_g = false;
            if (rep.monotone_f) rep.worst_z = zs[i + 1];
        }
    }
    try {
        rep.g1_ge_2 = eval_g(profile, std::max(1.0, profile.z_floor)) >= 2.0;
    } catch (const std::domain_error&) {
        rep.g1_ge_2 = false;  // table does not cover z = 1
    }

    // Tangent-circle containment at each grid point.
    for (int i = 0; i < n && rep.osculating_ok; ++i) {
        const double z0 = zs[i], f0 = fs[i];
        double fp;
        try {
            fp = central_diff_fprime(profile, z0);
        } catch (const std::domain_error&) {
            continue;  // derivative stencil leaves the tabulated support
        }
        const double zc = z0 + f0 * fp;
        const double radius = f0 * std::sqrt(1.0 + fp * fp);
        for (int k = 0; k < 64; ++k) {
            const double t = 6.283185307179586 * (k + 0.5) / 64.0;
            const double zt = zc + radius * std::cos(t);
            const double xt = radius * std::sin(t);
            double fz;
            try {
                fz = eval_f(profile, std::fabs(zt));
            } catch (const std::domain_error&) {
                continue;  // circle leaves the tabulated support; cannot verify there
            }
            if (std::fabs(xt) > fz * (1.0 + 1e-9)) {
                rep.osculating_ok = false;
                rep.worst_z = z0;
                break;
            }
        }
    }
    return rep;
}

IntegralTestResult integral_test(const ThornProfile& profile, double z_min, double z_max, int n) {
    if (!(z_min >= profile.z_floor)) throw std::domain_error("integral_test: z_min below z_floor");
    if (!(z_max / z_min >= 1e3)) throw std::invalid_argument("integral_test: need z_max/z_min >= 1e3");
    if (n < 16) throw std::invalid_argument("integral_test: need n >= 16");

    const double u_min = std::log(z_min), u_max = std::log(z_max);
    // Integrand in u = log z coordinates: 1 / log^2 g(e^u).
    const auto us = geometric_grid(u_min, u_max, n);
    std::vector<double> integrand(n);
    for (int i = 0; i < n; ++i) {
        const double lg = log_g_of_u(profile, us[i]);
        if (!(lg > 0.0)) throw std::domain_error("integral_test: log g <= 0 on the range");
        integrand[i] = 1.0 / (lg * lg);
    }

    IntegralTestResult res;
    res.partial = adaptive_simpson(
        [&](double u) {
            const double lg = log_g_of_u(profile, u);
            return 1.0 / (lg * lg);
        },
        u_min, u_max, 1e-10);

    // Log-log fit of the integrand over the last decade of u.
    std::vector<double> lx, ly;
    for (int i = 0; i < n; ++i) {
        if (us[i] >= u_max / 10.0) {
            lx.push_back(std::log(us[i]));
            ly.push_back(std::log(integrand[i]));
        }
    }
    const auto fit = linear_fit(lx, ly);
    const double p = -fit.slope;
    res.tail_exponent = p;
    // The band (1, 1.1] converges too slowly to call numerically; p = 1 itself
    // diverges, so the dead band sits on the convergent side of the borderline.
    if (p > 1.1)
        res.verdict = IntegralVerdict::converges;
    else if (p <= 1.0 + 1e-9)
        res.verdict = IntegralVerdict::diverges;
    else
        res.verdict = IntegralVerdict::inconclusive;
    return res;
}

const char* verdict_name(IntegralVerdict v) {
    switch (v) {
        case IntegralVerdict::converges: return "converges";
        case IntegralVerdict::diverges: return "diverges";
        case IntegralVerdict::inconclusive: return "inconclusive";
    }
    return "?";
}

}  // namespace thorn
