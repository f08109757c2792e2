#pragma once

#include "thorn/exact.hpp"
#include "thorn/sampler.hpp"

namespace thorn {

// Brownian motion absorbed at radii a_prime and L, reduced to the radial
// (Bessel-3) process. The kernel is normalized against expected occupation:
// E_r int_0^tau phi(|B_t|) dt = int G_rad(r, rho) phi(rho) drho.
struct ShellGreen {
    double a_prime = 1.0;
    double L = 4.0;
};

// Closed form from the scale function s(r) = -1/r and speed density 2 r^2:
// G_rad(r, rho) = 2 rho^2 (s(min) - s(a')) (s(L) - s(max)) / (s(L) - s(a')).
double shell_green_radial(const ShellGreen& sg, double r, double rho);

// Quadrature of G_rad over a radial band (occupation of a spherical shell).
double shell_green_band(const ShellGreen& sg, double r, double rho_lo, double rho_hi);

struct CleanGreenConcentric {
    double lhs = 0.0;         // sphere escape probability past the union ball
    double rhs = 0.0;         // h1 h2 + correction
    double product = 0.0;     // h1(y) h2(y)
    double correction = 0.0;  // int h1' h2' G_rad
};

// Fully radial instance of the product identity: C1 = ball(a), C2 = ball(a')
// concentric inside B_L, evaluated at radius y. The correction integral is
// done by adaptive quadrature with the analytic h derivatives.
CleanGreenConcentric clean_green_concentric(double a, double a_prime, double y_radius, double L);

struct CleanGreenBalls {
    Estimate lhs;         // avoid both balls until the L-sphere
    Estimate rhs;         // h1(0) h2(0) + correction
    Estimate h1, h2;      // single-ball escape probabilities at the origin
    double correction = 0.0;
    double correction_se = 0.0;
    bool inconclusive = false;  // a sub-estimate was too noisy to conclude
};

struct BallsMcOptions {
    int64_t n_h = 150000;   // paths for lhs and h_i(0)
    int m_points = 768;     // importance samples for the correction integral
    int64_t n_grad = 2500;  // paths per finite-difference stencil evaluation
    int64_t n_green = 600;  // paths per occupation-density weight
};

// Monte-Carlo check of the identity for two balls: the correction integral is
// importance-sampled from density proportional to free_green(0, x) on B_{L/2},
// with grad h1 . grad h2 by central differences of walk-on-spheres values
// (common random numbers across the six stencil points) and weights
// G(0,x)/free_green(0,x) estimated by occupation density.
CleanGreenBalls clean_green_balls_mc(const Vec3& center1, double r1, const Vec3& center2,
                                     double r2, double L, const SimConfig& cfg,
                                     const BallsMcOptions& opts = {});

struct SubstituteCheck {
    bool regular = false;  // U(L) >= U(L/4); the inequality only applies then
    UResult u;
    Estimate lhs;  // clipped q(L, theta)
    Estimate rhs;  // 2 E[ h1 h2 at the B_{L/4} exit; 0 when absorbed first ]
};

// Pathwise check of q(L,theta) <= 2 int h1 h2 dmu_{L/4,theta}: exits sampled
// by Euler-Maruyama paths killed at the thorns or at the L/4-sphere, h_i
// evaluated at each exit by walk-on-spheres.
SubstituteCheck lemma_substitute_check(const ThornProfile& profile, double L, double theta,
                                       const SimConfig& cfg, int64_t n_h = 2000);

}  // namespace thorn
