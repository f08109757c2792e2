#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace thorn {

// Pairwise (cascade) summation in index order: result is independent of how
// the values were produced across threads.
double pairwise_sum(std::span<const double> xs);

struct MeanErr {
    double mean = 0.0;
    double std_error = 0.0;
};

// Sample mean and standard error of the mean, deterministic reduction.
MeanErr mean_stderr(std::span<const double> xs);

// Sample covariance of paired samples (deterministic reduction).
double sample_cov(std::span<const double> xs, std::span<const double> ys);

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
};

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys);

// Weighted isotonic (nondecreasing) least-squares fit via pool-adjacent-violators.
std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights);

// 99% quantile of the chi-squared distribution (Wilson-Hilferty approximation,
// exact enough for test thresholds at the dof used here).
double chi2_quantile_99(int dof);

}  // namespace thorn
