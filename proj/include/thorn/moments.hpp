#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "thorn/sampler.hpp"

namespace thorn {

// Near-uniform direction set with equal solid-angle weights summing to 4 pi.
struct DirectionGrid {
    std::vector<Vec3> directions;
    std::vector<double> weights;

    static DirectionGrid fibonacci(int n);
    double total_weight() const;
};

// Per-path solid-angle measure of avoided thorn directions inside B_L, with
// the same-path axis-z avoidance indicator (so E W_L = 4 pi q(L) can be tested
// against a claim about identical quantities).
struct WLRun {
    std::vector<double> w;                 // W_L per path (steradians)
    std::vector<uint64_t> masks;           // packed avoid bits, words_per_path per path
    size_t words_per_path = 0;
    std::vector<uint8_t> z_avoided;        // unclipped axis-z indicator per path
    Estimate EW, EW2, q_z;
    bool mask_bit(int64_t path, int dir) const {
        return (masks[path * words_per_path + dir / 64] >> (dir % 64)) & 1u;
    }
};

// Runs Euler-Maruyama paths from the origin to tau_L and scans which grid
// thorns (clipped at B_L) the recorded path hits. Hit detection tests each
// vertex against the spherical cap the thorn cuts at that radius.
WLRun sample_WL(const ThornProfile& profile, double L, const DirectionGrid& grid,
                const SimConfig& cfg, bool keep_masks = false);

// (E W)^2 / E W^2 with delta-method error; cov01 is the sample covariance of
// (W, W^2) when available from the same run.
Estimate second_moment_bound(const Estimate& EW, const Estimate& EW2, double cov01 = 0.0);

struct FirstMomentRow {
    double L = 0, q = 0, q_se = 0, g = 0, prod = 0, prod_se = 0;
};
struct FirstMomentDiag {
    std::vector<FirstMomentRow> rows;
    double trend_slope = 0.0;  // d log(q g) / d log L, 0 with a single row
};
// Table of (L, q(L), g(L), q g) with a log-log trend fit of the product.
FirstMomentDiag first_moment_diag(const ThornProfile& profile, std::span<const double> L_list,
                                  const SimConfig& cfg);

struct DimensionIntegral {
    double value = 0.0;       // quadrature + tail (when convergent)
    double quadrature = 0.0;  // 2 pi int_{theta_min}^{pi} U theta^-beta sin theta dtheta
    double tail = 0.0;        // power-law extrapolation below theta_min
    double fitted_xi = 0.0;   // U ~ theta^-xi over the smallest tabulated decade
    bool divergent = false;   // xi + beta >= 2
};
// Spherical integral of a tabulated U against theta^-beta; U is interpolated
// log-log between tabulated angles.
DimensionIntegral dimension_integral(std::span<const double> theta, std::span<const double> U,
                                     double beta);

struct AxisIntegral {
    double value = 0.0;          // int over the s-sphere minus both caps of dS/(r r')
    double bound_g = 0.0;        // 16 pi log(pi g(s))
    double abs_log_theta = 0.0;  // shape of the kappa_1 + kappa_2 |log theta| bound
};
// Quadrature of the two-axis surface integral on the s-sphere minus the caps
// cut by the thorn and its rotation by theta.
AxisIntegral axis_integral(const ThornProfile& profile, double s, double theta);

}  // namespace thorn
