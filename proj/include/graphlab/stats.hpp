#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "graphlab/errors.hpp"

namespace graphlab {

struct Moments {
    std::size_t count = 0;
    double mean = 0.0;
    double variance = 0.0; // unbiased sample variance
};

inline Moments sample_moments(const std::vector<double>& xs) {
    Moments m;
    m.count = xs.size();
    if (xs.empty()) return m;
    double sum = 0.0;
    for (double x : xs) sum += x;
    m.mean = sum / static_cast<double>(xs.size());
    if (xs.size() > 1) {
        double ss = 0.0;
        for (double x : xs) ss += (x - m.mean) * (x - m.mean);
        m.variance = ss / static_cast<double>(xs.size() - 1);
    }
    return m;
}

// Regularized lower incomplete gamma P(a, x). Series for x < a+1, continued
// fraction otherwise (Numerical Recipes style).
inline double regularized_gamma_p(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw precondition_error("regularized_gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    const double gln = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - gln);
    }
    // Lentz continued fraction for Q(a, x).
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::fabs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - gln) * h;
    return 1.0 - q;
}

// CDF of chi-square with k degrees of freedom.
inline double chi_square_cdf(double x, double k) {
    if (x <= 0.0) return 0.0;
    return regularized_gamma_p(k / 2.0, x / 2.0);
}

// Quantile of chi-square with k degrees of freedom, by bisection on the CDF.
inline double chi_square_quantile(double p, double k) {
    if (p <= 0.0 || p >= 1.0) throw precondition_error("chi_square_quantile: p must be in (0,1)");
    double lo = 0.0, hi = k + 10.0;
    while (chi_square_cdf(hi, k) < p) hi *= 2.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (chi_square_cdf(mid, k) < p)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

// Pearson chi-square statistic of observed counts against expected counts.
inline double chi_square_statistic(const std::vector<double>& observed,
                                   const std::vector<double>& expected) {
    if (observed.size() != expected.size())
        throw precondition_error("chi_square_statistic: size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) throw precondition_error("chi_square_statistic: expected <= 0");
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

// Two-sample Kolmogorov-Smirnov distance.
inline double ks_distance(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double d = 0.0;
    std::size_t i = 0, j = 0;
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    while (i < a.size() && j < b.size()) {
        const double x = std::min(a[i], b[j]);
        while (i < a.size() && a[i] <= x) ++i;
        while (j < b.size() && b[j] <= x) ++j;
        d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
    }
    return d;
}

// Asymptotic p-value of the two-sample KS statistic.
inline double ks_p_value(double d, std::size_t n_a, std::size_t n_b) {
    const double n = static_cast<double>(n_a) * static_cast<double>(n_b) /
                     static_cast<double>(n_a + n_b);
    const double lambda = (std::sqrt(n) + 0.12 + 0.11 / std::sqrt(n)) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) *
                            std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::clamp(sum, 0.0, 1.0);
}

} // namespace graphlab
