#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "thorn/geometry.hpp"
#include "thorn/rng.hpp"

namespace thorn {

struct SimConfig {
    uint64_t seed = 1;
    int64_t n_paths = 10000;
    double eps_shell = 0.0;  // 0: default to L * 1e-4 at engine start
    double dt_factor = 0.1;
    double dt_clamp = std::numeric_limits<double>::infinity();
    int64_t max_steps = 1000000;
    Vec3 start{0.0, 0.0, 0.0};
    int threads = 1;
};

struct Estimate {
    double mean = 0.0;
    double std_error = 0.0;
    int64_t n = 0;
    uint64_t seed = 0;
    bool warn_max_steps = false;
    std::map<std::string, std::string> meta;
};

// Thrown when a statistical check cannot decide at the configured path count.
struct InsufficientSignal : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Runs fn(path_index) for every index in [0, n) across a worker pool. Results
// must be written into per-path slots; reductions happen afterwards in index
// order, so the outcome is independent of the thread count.
void parallel_paths(int64_t n, int threads, const std::function<void(int64_t)>& fn);

// ---------------------------------------------------------------- engines --

// Walk-on-spheres Bernoulli estimate of P(hit the L-sphere before any obstacle).
Estimate wos_escape_prob(const Domain& domain, const SimConfig& cfg);

struct WosPathResult {
    bool escaped = false;
    bool truncated = false;
    Vec3 terminal;
};
WosPathResult wos_path(const Domain& domain, const SimConfig& cfg, double eps,
                       uint64_t path_index, Vec3 start);

// Occupation probes for the Euler-Maruyama engine.
struct ProbeBall {
    Vec3 center;
    double radius;
};
struct ProbeShell {
    double r_lo, r_hi;
};
using Probe = std::variant<ProbeBall, ProbeShell>;

struct EmPathResult {
    bool escaped = false;
    bool truncated = false;
    Vec3 terminal;
    double total_time = 0.0;
    std::vector<double> occupation;  // one slot per probe
    std::vector<Vec3> polyline;      // decimated to <= 1e5 vertices when recorded
};

// Adaptive Euler-Maruyama first passage: Gaussian increments with per-step
// standard deviation min(dt_clamp, dt_factor * distance), refined near probes.
EmPathResult em_first_passage(const Domain& domain, const SimConfig& cfg,
                              std::span<const Probe> probes, uint64_t path_index,
                              bool record_polyline);

// Batch EM escape estimate (cross-validation against walk-on-spheres).
Estimate em_escape_prob(const Domain& domain, const SimConfig& cfg);

// Squared displacement of a free path run for total time t (sanity checks).
double em_free_displacement2(const SimConfig& cfg, uint64_t path_index, double t);

// ------------------------------------------------------------- estimators --

// One walk per path decides both indicators: the walk runs against base and
// extra obstacles together and, when an extra obstacle absorbs first, keeps
// walking against the base set alone. Pathwise flags_all[i] <= flags_base[i].
struct CoupledEscape {
    Estimate with_extra;  // escaped before hitting anything
    Estimate base_only;   // escaped before hitting the base set, same paths
    std::vector<uint8_t> flags_all, flags_base;
};
CoupledEscape wos_escape_coupled(const Domain& base_domain, std::span<const Obstacle> extra,
                                 const SimConfig& cfg);

// q(L): probability of reaching radius L before the axis-z thorn (clipped at
// L/2 when clipped is set), starting from the origin.
Estimate estimate_q(const ThornProfile& profile, double L, bool clipped, const SimConfig& cfg);

// One walk serves both estimates: the walk runs with both thorns active and,
// when the rotated thorn is hit first, continues against the base thorn only.
// This realizes the same-randomness coupling, so both[i] <= base[i] always.
struct CoupledQ {
    Estimate q2;          // avoid both thorns
    Estimate q1_coupled;  // avoid the axis-z thorn, same driving paths
    std::vector<uint8_t> both_flags, base_flags;
};
CoupledQ estimate_q2(const ThornProfile& profile, double L, double theta, bool clipped,
                     const SimConfig& cfg);

// Per-path escape indicators for every radius in L_list (ascending), from a
// single walk per path in the largest ball: monotone in L by construction.
std::vector<std::vector<uint8_t>> estimate_q_multi(const ThornProfile& profile,
                                                   std::span<const double> L_list,
                                                   const SimConfig& cfg);

struct UResult {
    Estimate U;
    bool regular = false;  // U(L) >= U(L/4)
    Estimate U_quarter;
};
// Second-moment ratio U = q2 / q^2 by the delta method, with the regular-value
// flag from a companion run at L/4. Uses clipped thorns.
UResult estimate_U(const ThornProfile& profile, double L, double theta, const SimConfig& cfg);

// Expected occupation density of a probe ball (Green's function average under
// the convention that free space gives 1 / (2 pi |x - y|)).
Estimate occupation_density(const Domain& domain, const Vec3& x_probe, double ball_r,
                            const SimConfig& cfg);

struct PolarDensity {
    std::vector<double> angle_lo, angle_hi;  // bins over the angle to the thorn axis
    std::vector<double> density;             // normalized so uniform full measure = 1
    std::vector<double> std_error;
    std::vector<int64_t> counts;
    int64_t n_escaped = 0;
};
// Escape-point density over the polar angle for a domain whose single obstacle
// is an axis-z thorn; bins fold the two-sided symmetry into [0, pi/2].
PolarDensity hitting_density_polar(const Domain& domain, int n_bins, const SimConfig& cfg);

struct CcylEstimate {
    Estimate c_cyl;                      // sqrt of the worst-start probability
    std::array<Estimate, 5> per_start;   // center, axis corners, wall corners
    double c_prime = 0.0;                // worst-start probability
};
// P(T^V(1) >= T^Z(z +- 1)) from the 5 canonical starts of the unit cylinder;
// returns c_cyl = sqrt(max). Used as the default c_cyl in BoundParams.
CcylEstimate estimate_c_cyl(const SimConfig& cfg);

// P(T^V(1) >= T^|Z|(b)) from the worst of the same 5 starts.
struct Prop1Estimate {
    Estimate worst;
    std::array<Estimate, 5> per_start;
};
Prop1Estimate estimate_axial_exit(double b, const SimConfig& cfg);

struct CylinderAvoid {
    Estimate from_equator;  // start (1/2, 0, 0)
    Estimate from_pole;     // start (0, 0, -1/2)
};
// P(exit the unit ball before the cylinder of radius r with axis from
// (0,0,1/2) to (0,0,3/4)).
CylinderAvoid cylinder_avoid_prob(double r, const SimConfig& cfg);

// Nested common-random-number scan over descending radii; flags[k][i] is the
// avoid indicator of path i for radii[k], monotone in k pathwise.
struct CylinderAvoidScan {
    std::vector<Estimate> estimates;
    std::vector<std::vector<uint8_t>> flags;
};
CylinderAvoidScan cylinder_avoid_scan(std::span<const double> radii, const Vec3& start,
                                      const SimConfig& cfg);

// Planar walk-on-spheres on the annulus a < |x| < b: P(hit a before b) from
// radius r0 (oracle for the planar radial hitting law).
Estimate wos_annulus2d_inner_first(double a, double r0, double b, const SimConfig& cfg);

}  // namespace thorn
