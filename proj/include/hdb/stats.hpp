#pragma once

#include "hdb/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace hdb::stats {

// Quantile of a sorted sample by linear interpolation of order statistics
// (the type-7 estimator): h = (n-1)p, interpolate between floor(h) and the
// next order statistic.
inline double quantile_sorted(std::span<const double> sorted, double p) {
    if (sorted.empty()) throw EmptyInputError();
    if (sorted.size() == 1) return sorted[0];
    p = std::clamp(p, 0.0, 1.0);
    double h = static_cast<double>(sorted.size() - 1) * p;
    auto lo = static_cast<std::size_t>(h);
    if (lo >= sorted.size() - 1) return sorted.back();
    double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

inline double quantile(std::span<const double> values, double p) {
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    return quantile_sorted(sorted, p);
}

struct SummaryStats {
    std::size_t n = 0;
    double mean = 0.0;
    double sd = 0.0; // sample SD, n-1 divisor; 0 for n == 1
    double p2_5 = 0.0;
    double p25 = 0.0;
    double p50 = 0.0;
    double p75 = 0.0;
    double p97_5 = 0.0;
};

inline SummaryStats summarize(std::span<const double> values) {
    if (values.empty()) throw EmptyInputError();
    SummaryStats s;
    s.n = values.size();
    double sum = 0.0;
    for (double v : values) sum += v;
    s.mean = sum / static_cast<double>(s.n);
    if (s.n >= 2) {
        double ss = 0.0;
        for (double v : values) ss += (v - s.mean) * (v - s.mean);
        s.sd = std::sqrt(ss / static_cast<double>(s.n - 1));
    }
    std::vector<double> sorted(values.begin(), values.end());
    std::sort(sorted.begin(), sorted.end());
    s.p2_5 = quantile_sorted(sorted, 0.025);
    s.p25 = quantile_sorted(sorted, 0.25);
    s.p50 = quantile_sorted(sorted, 0.50);
    s.p75 = quantile_sorted(sorted, 0.75);
    s.p97_5 = quantile_sorted(sorted, 0.975);
    return s;
}

// ---------------------------------------------------------------------------
// Regularized incomplete beta and the t distribution
// ---------------------------------------------------------------------------

namespace detail {

// Continued-fraction for the incomplete beta (modified Lentz). Converges for
// x < (a+1)/(a+b+2); callers apply the symmetry transform otherwise.
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIter = 500;
    constexpr double kEps = 3e-16;
    constexpr double kTiny = 1e-300;
    double qab = a + b, qap = a + 1.0, qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kEps) break;
    }
    return h;
}

} // namespace detail

// I_x(a, b) for a, b > 0 and x in [0, 1].
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                      a * std::log(x) + b * std::log1p(-x);
    double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * detail::beta_continued_fraction(a, b, x) / a;
    }
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

inline double student_t_cdf(double t, double df) {
    if (df <= 0.0) throw ValidationError("degrees_of_freedom", "must be positive");
    if (t == 0.0) return 0.5;
    double x = df / (df + t * t);
    double tail = 0.5 * regularized_incomplete_beta(0.5 * df, 0.5, x);
    return t > 0.0 ? 1.0 - tail : tail;
}

// Two-sided tail probability of |T| >= |t| under a t distribution.
inline double student_t_two_sided_p(double t, double df) {
    if (t == 0.0) return 1.0;
    double x = df / (df + t * t);
    return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

// ---------------------------------------------------------------------------
// Welch's unequal-variance t test
// ---------------------------------------------------------------------------

struct WelchResult {
    double t = 0.0;
    double degrees_of_freedom = 0.0;
    double two_sided_p = 1.0;
};

// Both samples need n >= 2. When both variances vanish the statistic is
// degenerate: equal means give p = 1, distinct means p = 0.
inline WelchResult welch_t_test(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2)
        throw ValidationError("sample", "both samples need at least 2 values");
    auto mean_var = [](std::span<const double> v) {
        double m = 0.0;
        for (double x : v) m += x;
        m /= static_cast<double>(v.size());
        double ss = 0.0;
        for (double x : v) ss += (x - m) * (x - m);
        return std::pair<double, double>(m, ss / static_cast<double>(v.size() - 1));
    };
    auto [ma, va] = mean_var(a);
    auto [mb, vb] = mean_var(b);
    double na = static_cast<double>(a.size());
    double nb = static_cast<double>(b.size());

    WelchResult r;
    double se2 = va / na + vb / nb;
    if (se2 == 0.0) {
        r.degrees_of_freedom = na + nb - 2.0;
        if (ma == mb) {
            r.t = 0.0;
            r.two_sided_p = 1.0;
        } else {
            r.t = ma > mb ? std::numeric_limits<double>::infinity()
                          : -std::numeric_limits<double>::infinity();
            r.two_sided_p = 0.0;
        }
        return r;
    }
    r.t = (ma - mb) / std::sqrt(se2);
    r.degrees_of_freedom = se2 * se2 / ((va / na) * (va / na) / (na - 1.0) +
                                        (vb / nb) * (vb / nb) / (nb - 1.0));
    r.two_sided_p = student_t_two_sided_p(r.t, r.degrees_of_freedom);
    return r;
}

// Two-decimal p-value, the convention used in the summary tables.
inline std::string format_p_value(double p) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "%.2f", p);
    return buf;
}

} // namespace hdb::stats
