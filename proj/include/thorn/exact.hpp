#pragma once

#include "thorn/profiles.hpp"
#include "thorn/vec3.hpp"

namespace thorn {

// Constants that the estimates leave non-constructive, collected so every
// symbol has a home. alpha > beta > 2 and gamma in (0,1) parametrize the
// ladder sequences; c_tilde must satisfy c_tilde * log(c_cyl) <= -2 before
// any ladder quantity is evaluated.
struct BoundParams {
    double c_cyl = 0.5;
    double c_q = 1.0;
    double M = 1.0;
    double zeta = 0.0;
    double K1 = 1.0;
    double b_R = 1.0;
    double c_f = 1.0;
    double r_f = 1.0;
    double R_f = 1.0;
    double c_star = 1.0;
    double c_tilde = 20.0;
    double alpha = 3.0;
    double beta = 2.5;
    double gamma = 0.5;
};

// P(radial part hits v1 before v3 | start radius v2) for planar Brownian motion.
double radial_hit_prob(double v1, double v2, double v3);

// P(3-D Brownian motion from radius r hits the sphere of radius b before radius a).
double sphere_escape_prob(double a, double r, double b);

// c_cyl^(b/a): upper bound on P(T^V(a) >= T^|Z|(b)) from any start inside the
// scaled cylinder, valid for b >= 2a.
double cyl_escape_bound(const BoundParams& params, double a, double b);

struct LadderValues {
    double m, r, q, a, rho, b, d;
};

// The scale ladder m_k = k (log k)^alpha, r_k = e^{m_k}, q_k = r_k/(c~ log k),
// a_k = r_k k (log k)^beta, rho_k = c~ a_k log k, b_k = r_{k+1}/(c~ log k),
// d_k = r_k c~ log k. Requires k >= 3.
LadderValues ladder(const BoundParams& params, int k);

// log of the lower bound on q(L): log c_q - sum_{k=k0}^{j(L)} (1/(1-gamma)) (1/k + alpha/(k log k)),
// where j(L) is the smallest j with r_{j-1} >= L.
double qL_lower_bound(const BoundParams& params, double L, int k0 = 3);

struct UBoundResult {
    double value = 0.0;
    bool clamped = false;  // |log theta| <= e: returned M unchanged
};

// M |log theta|^{1/(1-gamma)} (log |log theta|)^zeta for theta in (0, pi/2].
UBoundResult U_upper_bound_power(const BoundParams& params, double theta);

struct ConverseBound {
    double log_sum = 0.0;     // sum_{j=1}^k log(1 - K1/(alpha sqrt(j)))
    double comparison = 0.0;  // -sum_{j=1}^k K1/(alpha sqrt(j)) ~ -(2 K1/alpha) sqrt(k)
};

ConverseBound converse_q_bound(const BoundParams& params, int k);

// b_R exp(c_f (1 + |log theta|) int_R^L ds / (s log^2 g(s))), the closed-form
// solution of the bounding integral equation for U.
double u_theta_solution(const BoundParams& params, const ThornProfile& profile, double theta,
                        double R, double L);

// Expected-occupation-density Green's function of free Brownian motion in R^3
// under the convention Laplacian(phi) = -2 f: 1 / (2 pi |x - y|).
double free_green(const Vec3& x, const Vec3& y);

// The two angle-dependent ladder cutoffs, kept as separate helpers.
double k1_theta_exp(double theta, double alpha);   // exp(|log theta|^{1/(alpha-1)})
double k1_theta_ceil(double theta);                // ceil(log(1/theta))

}  // namespace thorn
