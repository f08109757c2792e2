#pragma once

#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "thorn/profiles.hpp"
#include "thorn/vec3.hpp"

namespace thorn {

// Oriented, truncated, optionally clipped thorn body of revolution
//   { |p| >= inner_radius, dist(p, axis) <= radial_bound(|axial coordinate|) },
// with radial_bound(z) = f(z) for z >= z_floor and tapering linearly to 0
// below z_floor. The taper keeps the origin connected to infinity: with the
// frozen profile alone the truncation sphere would be entirely contained in
// the set whenever f(z_floor) >= inner_radius, and every escape probability
// from the origin would vanish.
class ThornSet {
  public:
    ThornSet(ThornProfile profile, UnitVector axis, double inner_radius = 1.0,
             std::optional<double> clip_radius = std::nullopt, bool two_sided = true,
             double reach = 1e4);

    const ThornProfile& profile() const { return profile_; }
    const UnitVector& axis() const { return axis_; }
    double inner_radius() const { return inner_radius_; }
    std::optional<double> clip_radius() const { return clip_radius_; }
    bool two_sided() const { return two_sided_; }
    double reach() const { return reach_; }

    // Radial extent of the body at axial height z >= 0 (taper applied).
    double radial_bound(double z) const;

    bool contains(const Vec3& p) const;

    // Certified lower bound on the Euclidean distance from an exterior point:
    // meridian-plane minimization over a geometric grid of z-brackets (256 per
    // decade), candidates refined by golden section, with a guard bounding the
    // inter-bracket variation through the monotonicity of f.
    double distance_lower_bound(const Vec3& p) const;

    // cos of the half-angle of the spherical cap cut by the thorn on the
    // sphere of radius rho about the origin; > 1 when the sphere misses the set.
    double cap_cos(double rho) const;

  private:
    struct Meridian {
        double z;  // axial coordinate (>= 0 in the folded half-plane)
        double r;  // distance to the axis
    };
    Meridian to_meridian(const Vec3& p) const;
    double meridian_distance(double zq, double rq) const;
    double segment_distance(double z, double zq, double rq) const;
    double r_lo(double z) const;  // inner truncation arc
    double r_hi(double z) const;  // radial bound including clip

    ThornProfile profile_;
    UnitVector axis_;
    double inner_radius_;
    std::optional<double> clip_radius_;
    bool two_sided_;
    double reach_;
    double taper_slope_;          // f(z_floor) / z_floor
    std::vector<double> knot_z_;  // meridian grid, knot_z_[0] = 0
    std::vector<double> knot_f_;  // radial bound at knots (monotone)
};

struct Ball {
    Vec3 center;
    double radius = 1.0;
    bool contains(const Vec3& p) const { return norm(p - center) <= radius; }
    double distance(const Vec3& p) const { return std::max(0.0, norm(p - center) - radius); }
};

// Solid finite cylinder with axis from axis_a to axis_b (flat caps).
struct CylinderSegment {
    Vec3 axis_a, axis_b;
    double radius = 1.0;
    bool contains(const Vec3& p) const;
    double distance(const Vec3& p) const;
};

using Obstacle = std::variant<ThornSet, Ball, CylinderSegment>;

bool obstacle_contains(const Obstacle& o, const Vec3& p);
double obstacle_distance(const Obstacle& o, const Vec3& p);

// Ball of radius L minus a list of obstacles; the arena for first-passage runs.
struct Domain {
    double L = 1.0;
    std::vector<Obstacle> obstacles;

    double outer_gap(const Vec3& p) const { return L - norm(p); }
    double obstacle_gap(const Vec3& p) const;  // +inf with no obstacles
    bool inside(const Vec3& p) const;
    // min(L - |p|, obstacle distances); domain error if p is outside.
    double distance(const Vec3& p) const;
};

ThornSet make_rotated_thorn(const ThornProfile& profile, double theta,
                            std::optional<double> clip_radius = std::nullopt,
                            bool two_sided = true, double reach = 1e4);

inline double domain_distance(const Domain& d, const Vec3& p) { return d.distance(p); }

// Conservative polyline-vs-set test: true if a vertex lies in the set or a
// midpoint recursion (depth <= 20) finds a point within `guard` of it.
bool path_hits(const ThornSet& set, std::span<const Vec3> polyline, double guard);

}  // namespace thorn
