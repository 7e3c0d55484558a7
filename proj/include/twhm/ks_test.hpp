#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace twhm {

/// Two-sample Kolmogorov-Smirnov statistic: sup |F1 - F2| over the pooled
/// sample, with ties advanced jointly.
inline double ks_statistic(std::vector<double> x, std::vector<double> y) {
    if (x.empty() || y.empty())
        throw std::invalid_argument("ks_statistic: empty sample");
    std::sort(x.begin(), x.end());
    std::sort(y.begin(), y.end());
    const double nx = static_cast<double>(x.size());
    const double ny = static_cast<double>(y.size());
    std::size_t ix = 0, iy = 0;
    double d = 0.0;
    while (ix < x.size() && iy < y.size()) {
        const double v = std::min(x[ix], y[iy]);
        while (ix < x.size() && x[ix] <= v) ++ix;
        while (iy < y.size() && y[iy] <= v) ++iy;
        d = std::max(d, std::abs(static_cast<double>(ix) / nx - static_cast<double>(iy) / ny));
    }
    return d;
}

/// Asymptotic two-sample p-value with the usual effective-sample-size
/// correction: lambda = (sqrt(ne) + 0.12 + 0.11/sqrt(ne)) d and
/// Q(lambda) = 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 lambda^2).
inline double ks_pvalue(double d, std::size_t n1, std::size_t n2) {
    if (n1 == 0 || n2 == 0) throw std::invalid_argument("ks_pvalue: empty sample");
    if (d <= 0.0) return 1.0;
    const double ne = static_cast<double>(n1) * static_cast<double>(n2) /
                      (static_cast<double>(n1) + static_cast<double>(n2));
    const double sq = std::sqrt(ne);
    const double lambda = (sq + 0.12 + 0.11 / sq) * d;
    double sum = 0.0;
    double term_sign = 1.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = std::exp(-2.0 * k * k * lambda * lambda);
        sum += term_sign * term;
        if (term < 1e-16) break;
        term_sign = -term_sign;
    }
    const double q = 2.0 * sum;
    return std::min(1.0, std::max(0.0, q));
}

} // namespace twhm
