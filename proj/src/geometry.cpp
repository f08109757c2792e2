#include "thorn/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "thorn/quadrature.hpp"

namespace thorn {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kKnotsPerDecade = 256;
}  // namespace

ThornSet::ThornSet(ThornProfile profile, UnitVector axis, double inner_radius,
                   std::optional<double> clip_radius, bool two_sided, double reach)
    : profile_(std::move(profile)),
      axis_(axis),
      inner_radius_(inner_radius),
      clip_radius_(clip_radius),
      two_sided_(two_sided),
      reach_(reach) {
    if (!(inner_radius_ > 0.0)) throw std::invalid_argument("ThornSet: inner_radius must be positive");
    // clip_radius <= inner_radius leaves an empty set; membership and distance
    // queries handle it (nothing contained, infinite distance).
    if (clip_radius_ && !(*clip_radius_ > 0.0))
        throw std::invalid_argument("ThornSet: clip_radius must be positive");
    if (!(reach_ > profile_.z_floor)) throw std::invalid_argument("ThornSet: reach too small");
    taper_slope_ = eval_f(profile_, profile_.z_floor) / profile_.z_floor;

    // Meridian grid: z = 0, then geometric knots up to max(reach, clip).
    double z_top = reach_;
    if (clip_radius_) z_top = std::max(*clip_radius_ * 1.001, profile_.z_floor * 2.0);
    const double z0 = std::min(1e-3, profile_.z_floor / 8.0);
    knot_z_.push_back(0.0);
    const double step = std::pow(10.0, 1.0 / kKnotsPerDecade);
    for (double z = z0; z < z_top; z *= step) knot_z_.push_back(z);
    knot_z_.push_back(z_top);
    knot_f_.resize(knot_z_.size());
    for (size_t i = 0; i < knot_z_.size(); ++i) knot_f_[i] = radial_bound(knot_z_[i]);
}

double ThornSet::radial_bound(double z) const {
    if (z < profile_.z_floor) return taper_slope_ * z;
    return eval_f(profile_, z);
}

ThornSet::Meridian ThornSet::to_meridian(const Vec3& p) const {
    const double za = dot(p, axis_.v);
    const double r2 = std::max(0.0, norm2(p) - za * za);
    return {za, std::sqrt(r2)};
}

bool ThornSet::contains(const Vec3& p) const {
    const auto [za, r] = to_meridian(p);
    if (!two_sided_ && za < 0.0) return false;
    const double pn2 = norm2(p);
    if (pn2 < inner_radius_ * inner_radius_) return false;
    if (clip_radius_ && pn2 > *clip_radius_ * *clip_radius_) return false;
    return r <= radial_bound(std::fabs(za));
}

double ThornSet::r_lo(double z) const {
    const double s = inner_radius_ * inner_radius_ - z * z;
    return s > 0.0 ? std::sqrt(s) : 0.0;
}

double ThornSet::r_hi(double z) const {
    double rb = radial_bound(z);
    if (clip_radius_) {
        const double s = *clip_radius_ * *clip_radius_ - z * z;
        if (s <= 0.0) return -1.0;  // beyond the clip sphere
        rb = std::min(rb, std::sqrt(s));
    }
    return rb;
}

// Distance from the meridian query point to the vertical region slice at z.
double ThornSet::segment_distance(double z, double zq, double rq) const {
    const double hi = r_hi(z);
    if (hi < 0.0) return kInf;
    const double lo = r_lo(z);
    if (lo > hi) return kInf;
    const double dz = z - zq;
    double dr = 0.0;
    if (rq < lo)
        dr = lo - rq;
    else if (rq > hi)
        dr = rq - hi;
    return std::hypot(dz, dr);
}

double ThornSet::meridian_distance(double zq, double rq) const {
    const size_t nk = knot_z_.size();
    // Initial upper bound: slice through the clamped query height.
    double best_ub = kInf;
    auto consider = [&](double z) {
        const double d = segment_distance(z, zq, rq);
        if (d < best_ub) best_ub = d;
    };
    consider(std::clamp(zq, 0.0, knot_z_.back()));
    consider(profile_.z_floor);
    if (clip_radius_) consider(std::min(*clip_radius_, knot_z_.back()));

    // Sweep cells outward from the query height, keeping certified per-cell
    // lower bounds (monotone f gives the radial extremes at the cell edges).
    auto idx_above = std::upper_bound(knot_z_.begin(), knot_z_.end(), zq) - knot_z_.begin();
    auto cell_box = [&](size_t c, double& lb) -> bool {
        // cell c spans [knot_z_[c], knot_z_[c+1]]
        const double zl = knot_z_[c], zh = knot_z_[c + 1];
        double hi = knot_f_[c + 1];
        if (clip_radius_) {
            const double s = *clip_radius_ * *clip_radius_ - zl * zl;
            if (s <= 0.0) return false;
            hi = std::min(hi, std::sqrt(s));
        }
        const double lo = r_lo(zh);
        if (lo > hi) return false;  // no region inside this cell
        const double dz = (zq < zl) ? zl - zq : (zq > zh ? zq - zh : 0.0);
        double dr = 0.0;
        if (rq < lo)
            dr = lo - rq;
        else if (rq > hi)
            dr = rq - hi;
        lb = std::hypot(dz, dr);
        return true;
    };

    std::vector<size_t> candidates;
    auto scan = [&](size_t c) {
        double lb;
        if (!cell_box(c, lb)) return;
        if (lb < best_ub) {
            candidates.push_back(c);
            // Endpoint slices tighten the upper bound cheaply.
            consider(knot_z_[c]);
            consider(knot_z_[c + 1]);
        }
    };
    // Expand left and right until the axial gap alone exceeds the best bound.
    ptrdiff_t left = std::min<ptrdiff_t>(idx_above - 1, ptrdiff_t(nk) - 2);
    ptrdiff_t right = left + 1;
    while (left >= 0 || right <= ptrdiff_t(nk) - 2) {
        bool progressed = false;
        if (left >= 0) {
            if (zq - knot_z_[left + 1] > best_ub) {
                left = -1;
            } else {
                scan(size_t(left));
                --left;
                progressed = true;
            }
        }
        if (right <= ptrdiff_t(nk) - 2) {
            if (knot_z_[right] - zq > best_ub) {
                right = nk;
            } else {
                scan(size_t(right));
                ++right;
                progressed = true;
            }
        }
        if (!progressed) break;
    }

    // Tail beyond the gridded range (unclipped thorns only): the region there
    // is treated as the full half-plane past the last knot.
    double result = best_ub;
    if (!clip_radius_) {
        const double tail = std::max(0.0, knot_z_.back() - zq);
        if (tail < result) result = tail;
    }

    // Refine surviving cells by golden section on the exact slice distance,
    // guarded by the cell box bound.
    for (size_t c : candidates) {
        double lb;
        if (!cell_box(c, lb)) continue;
        if (lb >= result) continue;
        const double zl = knot_z_[c], zh = knot_z_[c + 1];
        auto slice = [&](double z) { return segment_distance(z, zq, rq); };
        const double tol = std::max(1e-10 * std::max(1.0, zh), 1e-14);
        auto [zmin, dmin] = golden_min(slice, zl, zh, tol);
        // Guard: residual bracket width plus the radial variation of f across it.
        const double guard = tol + std::fabs(radial_bound(std::min(zmin + tol, zh)) -
                                             radial_bound(std::max(zmin - tol, zl)));
        result = std::min(result, std::max(lb, dmin - guard));
    }
    return std::max(0.0, result);
}

double ThornSet::distance_lower_bound(const Vec3& p) const {
    const auto [za, r] = to_meridian(p);
    if (two_sided_) return meridian_distance(std::fabs(za), r);
    return meridian_distance(za, r);
}

double ThornSet::cap_cos(double rho) const {
    if (rho < inner_radius_) return 2.0;
    if (clip_radius_ && rho > *clip_radius_) return 2.0;
    // Largest angle phi with rho sin(phi) <= radial_bound(rho cos(phi)); the
    // left side increases and the right side decreases in phi, so bisect.
    auto inside = [&](double phi) { return rho * std::sin(phi) <= radial_bound(rho * std::cos(phi)); };
    if (inside(1.5707963267948966)) return 0.0;  // whole hemisphere cap
    double lo = 0.0, hi = 1.5707963267948966;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (inside(mid) ? lo : hi) = mid;
    }
    return std::cos(0.5 * (lo + hi));
}

bool CylinderSegment::contains(const Vec3& p) const {
    const Vec3 u = axis_b - axis_a;
    const double len = norm(u);
    if (!(len > 0.0)) throw std::domain_error("CylinderSegment: degenerate axis");
    const Vec3 w = p - axis_a;
    const double t = dot(w, u) / len;
    if (t < 0.0 || t > len) return false;
    const double r2 = norm2(w) - t * t;
    return r2 <= radius * radius;
}

double CylinderSegment::distance(const Vec3& p) const {
    const Vec3 u = axis_b - axis_a;
    const double len = norm(u);
    if (!(len > 0.0)) throw std::domain_error("CylinderSegment: degenerate axis");
    const Vec3 w = p - axis_a;
    const double t = dot(w, u) / len;
    const double r = std::sqrt(std::max(0.0, norm2(w) - t * t));
    const double dz = std::max({-t, t - len, 0.0});
    const double dr = std::max(r - radius, 0.0);
    return std::hypot(dz, dr);
}

bool obstacle_contains(const Obstacle& o, const Vec3& p) {
    return std::visit([&](const auto& s) { return s.contains(p); }, o);
}

double obstacle_distance(const Obstacle& o, const Vec3& p) {
    return std::visit(
        [&]<typename T>(const T& s) {
            if constexpr (std::is_same_v<T, ThornSet>)
                return s.distance_lower_bound(p);
            else
                return s.distance(p);
        },
        o);
}

double Domain::obstacle_gap(const Vec3& p) const {
    double d = kInf;
    for (const auto& o : obstacles) d = std::min(d, obstacle_distance(o, p));
    return d;
}

bool Domain::inside(const Vec3& p) const {
    if (norm(p) >= L) return false;
    for (const auto& o : obstacles)
        if (obstacle_contains(o, p)) return false;
    return true;
}

double Domain::distance(const Vec3& p) const {
    const double og = outer_gap(p);
    if (og < 0.0) throw std::domain_error("domain_distance: point outside the outer ball");
    for (const auto& o : obstacles)
        if (obstacle_contains(o, p)) throw std::domain_error("domain_distance: point inside an obstacle");
    return std::min(og, obstacle_gap(p));
}

ThornSet make_rotated_thorn(const ThornProfile& profile, double theta,
                            std::optional<double> clip_radius, bool two_sided, double reach) {
    if (!(theta >= 0.0 && theta <= 3.14159265358979323846 + 1e-12))
        throw std::domain_error("make_rotated_thorn: theta must be in [0, pi]");
    const UnitVector axis(Vec3{std::sin(theta), 0.0, std::cos(theta)});
    return ThornSet(profile, axis, 1.0, clip_radius, two_sided, reach);
}

namespace {

bool segment_hits(const ThornSet& set, const Vec3& a, const Vec3& b, double da, double db,
                  double guard, int depth) {
    if (da <= guard || db <= guard) return true;
    const double len = norm(b - a);
    if (da + db >= len + 2.0 * guard) return false;  // capsule prune
    if (depth <= 0) return false;
    const Vec3 m = 0.5 * (a + b);
    const double dm = set.distance_lower_bound(m);
    if (dm <= guard) return true;
    return segment_hits(set, a, m, da, dm, guard, depth - 1) ||
           segment_hits(set, m, b, dm, db, guard, depth - 1);
}

}  // namespace

bool path_hits(const ThornSet& set, std::span<const Vec3> polyline, double guard) {
    if (polyline.empty()) throw std::invalid_argument("path_hits: empty polyline");
    std::vector<double> dist(polyline.size());
    for (size_t i = 0; i < polyline.size(); ++i) {
        if (set.contains(polyline[i])) return true;
        dist[i] = set.distance_lower_bound(polyline[i]);
        if (dist[i] <= guard) return true;
    }
    for (size_t i = 0; i + 1 < polyline.size(); ++i) {
        if (segment_hits(set, polyline[i], polyline[i + 1], dist[i], dist[i + 1], guard, 20))
            return true;
    }
    return false;
}

}  // namespace thorn
