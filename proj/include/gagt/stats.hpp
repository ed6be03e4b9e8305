#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <vector>

namespace gagt {

// Smallest p-value ever reported; avoids printing a literal 0 for
// vanishingly small tail probabilities.
inline constexpr double kMinPValue = 1e-300;

namespace detail {

// Continued-fraction core of the regularized incomplete beta function
// (Lentz's algorithm), relative tolerance 1e-10.
inline double beta_continued_fraction(double a, double b, double x) {
    constexpr int kMaxIterations = 400;
    constexpr double kTolerance = 1e-10;
    constexpr double kTiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const int m2 = 2 * m;
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
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < kTolerance) break;
    }
    return h;
}

} // namespace detail

// Regularized incomplete beta I_x(a, b).
inline double regularized_incomplete_beta(double a, double b, double x) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("incomplete beta requires a > 0 and b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) return front * detail::beta_continued_fraction(a, b, x) / a;
    return 1.0 - front * detail::beta_continued_fraction(b, a, 1.0 - x) / b;
}

// P(F > f) for an F distribution with (df1, df2) degrees of freedom.
inline double f_tail_probability(double f, double df1, double df2) {
    if (!(df1 > 0.0 && df2 > 0.0)) throw std::invalid_argument("F tail requires positive degrees of freedom");
    if (std::isinf(f)) return 0.0;
    if (!(f > 0.0)) return 1.0;
    return regularized_incomplete_beta(df2 / 2.0, df1 / 2.0, df2 / (df2 + df1 * f));
}

// P(Z > z) for a standard normal Z.
inline double normal_sf(double z) { return 0.5 * std::erfc(z / 1.41421356237309504880); }

// Ordinary least squares y = intercept + slope * x with the one-way ANOVA
// decomposition used throughout the result tables.
struct RegressionResult {
    double slope = 0.0;
    double intercept = 0.0;
    double ss_model = 0.0;
    double ss_residual = 0.0;
    double ss_total = 0.0;
    std::size_t df_model = 1;
    std::size_t df_residual = 0;
    double f_ratio = 0.0;
    double p_value = 1.0;
    double correlation_coefficient = 0.0;
    double r_square_percent = 0.0;
};

inline RegressionResult linear_regression(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw std::invalid_argument("regression inputs differ in length: " + std::to_string(x.size()) + " vs " +
                                    std::to_string(y.size()));
    const std::size_t n = x.size();
    if (n < 3) throw std::invalid_argument("regression needs at least 3 points");

    double x_mean = 0.0, y_mean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        x_mean += x[i];
        y_mean += y[i];
    }
    x_mean /= static_cast<double>(n);
    y_mean /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - x_mean;
        const double dy = y[i] - y_mean;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx == 0.0) throw std::invalid_argument("regression is degenerate: x is constant");

    RegressionResult r;
    r.slope = sxy / sxx;
    r.intercept = y_mean - r.slope * x_mean;
    r.ss_model = r.slope * r.slope * sxx;
    r.ss_total = syy;
    double ss_residual = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double residual = y[i] - (r.intercept + r.slope * x[i]);
        ss_residual += residual * residual;
    }
    r.ss_residual = ss_residual;
    r.df_model = 1;
    r.df_residual = n - 2;

    const double ms_residual = r.ss_residual / static_cast<double>(r.df_residual);
    if (r.ss_total == 0.0) {
        // flat y: nothing to explain
        r.f_ratio = 0.0;
        r.p_value = 1.0;
    } else if (ms_residual == 0.0) {
        r.f_ratio = std::numeric_limits<double>::infinity();
        r.p_value = kMinPValue;
    } else {
        r.f_ratio = r.ss_model / ms_residual;
        r.p_value = std::max(f_tail_probability(r.f_ratio, 1.0, static_cast<double>(r.df_residual)), kMinPValue);
    }
    r.correlation_coefficient = syy > 0.0 ? sxy / std::sqrt(sxx * syy) : 0.0;
    r.r_square_percent = r.ss_total > 0.0 ? 100.0 * r.ss_model / r.ss_total : 0.0;
    return r;
}

enum class Alternative { TwoSided, Greater, Less };

// Rank-sum test result. u_statistic is U for the first sample; z_score is
// the tie-corrected, continuity-corrected normal deviate (reported for
// reference even when the p-value came from exact enumeration).
struct MannWhitneyResult {
    double u_statistic = 0.0;
    double z_score = 0.0;
    double p_value = 1.0;
    std::size_t n_a = 0;
    std::size_t n_b = 0;
};

namespace detail {

// P(U <= u) by enumeration of all C(n_a+n_b, n_a) rank assignments.
// Only valid without ties; n_a+n_b is small (<= 12) wherever this is used.
inline double exact_u_cdf(std::size_t n_a, std::size_t n_b, double u) {
    const std::size_t n = n_a + n_b;
    std::vector<std::size_t> pick(n_a);
    for (std::size_t i = 0; i < n_a; ++i) pick[i] = i;
    const double base = static_cast<double>(n_a * (n_a + 1)) / 2.0;
    std::uint64_t hits = 0, total = 0;
    while (true) {
        double rank_sum = 0.0;
        for (std::size_t idx : pick) rank_sum += static_cast<double>(idx + 1);
        if (rank_sum - base <= u + 1e-12) ++hits;
        ++total;
        // next combination in lexicographic order
        std::size_t i = n_a;
        while (i > 0) {
            --i;
            if (pick[i] != i + n - n_a) {
                ++pick[i];
                for (std::size_t j = i + 1; j < n_a; ++j) pick[j] = pick[j - 1] + 1;
                break;
            }
            if (i == 0) return static_cast<double>(hits) / static_cast<double>(total);
        }
    }
}

} // namespace detail

// Mann-Whitney (Wilcoxon rank-sum) test with midrank tie handling. The
// p-value comes from exact enumeration when n_a + n_b <= 12 and there are no
// ties, otherwise from the normal approximation with tie-corrected variance
// and continuity correction 0.5.
inline MannWhitneyResult mann_whitney(std::span<const double> sample_a, std::span<const double> sample_b,
                                      Alternative alternative = Alternative::TwoSided) {
    if (sample_a.empty() || sample_b.empty()) throw std::invalid_argument("rank-sum test needs two non-empty samples");

    const std::size_t n_a = sample_a.size();
    const std::size_t n_b = sample_b.size();
    const std::size_t n = n_a + n_b;

    struct Entry {
        double value;
        bool from_a;
    };
    std::vector<Entry> pooled;
    pooled.reserve(n);
    for (double v : sample_a) pooled.push_back({v, true});
    for (double v : sample_b) pooled.push_back({v, false});
    std::sort(pooled.begin(), pooled.end(), [](const Entry& l, const Entry& r) { return l.value < r.value; });

    double rank_sum_a = 0.0;
    double tie_sum = 0.0; // sum of t^3 - t over tie groups
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j < n && pooled[j].value == pooled[i].value) ++j;
        const double midrank = static_cast<double>(i + j + 1) / 2.0;
        const double t = static_cast<double>(j - i);
        if (t > 1.0) tie_sum += t * t * t - t;
        for (std::size_t k = i; k < j; ++k)
            if (pooled[k].from_a) rank_sum_a += midrank;
        i = j;
    }

    MannWhitneyResult result;
    result.n_a = n_a;
    result.n_b = n_b;
    const double u_a = rank_sum_a - static_cast<double>(n_a * (n_a + 1)) / 2.0;
    result.u_statistic = u_a;
    const double u_max = static_cast<double>(n_a) * static_cast<double>(n_b);

    const double mu = u_max / 2.0;
    const double variance =
        (u_max / 12.0) * (static_cast<double>(n + 1) - tie_sum / (static_cast<double>(n) * static_cast<double>(n - 1)));
    const double sd = variance > 0.0 ? std::sqrt(variance) : 0.0;

    if (sd > 0.0) {
        double shifted = u_a - mu;
        shifted += shifted > 0.5 ? -0.5 : (shifted < -0.5 ? 0.5 : -shifted);
        result.z_score = shifted / sd;
    }

    const bool exact = n <= 12 && tie_sum == 0.0;
    double p = 1.0;
    if (exact) {
        switch (alternative) {
            case Alternative::TwoSided: {
                const double u_small = std::min(u_a, u_max - u_a);
                p = std::min(1.0, 2.0 * detail::exact_u_cdf(n_a, n_b, u_small));
                break;
            }
            case Alternative::Greater:
                // P(U >= u_a) = P(U <= u_max - u_a) by symmetry
                p = detail::exact_u_cdf(n_a, n_b, u_max - u_a);
                break;
            case Alternative::Less:
                p = detail::exact_u_cdf(n_a, n_b, u_a);
                break;
        }
    } else if (sd == 0.0) {
        p = 1.0;
    } else {
        switch (alternative) {
            case Alternative::TwoSided: {
                const double z = std::max(std::fabs(u_a - mu) - 0.5, 0.0) / sd;
                p = std::min(1.0, 2.0 * normal_sf(z));
                break;
            }
            case Alternative::Greater:
                p = normal_sf((u_a - mu - 0.5) / sd);
                break;
            case Alternative::Less:
                p = normal_sf((mu - u_a - 0.5) / sd);
                break;
        }
    }
    result.p_value = std::max(p, kMinPValue);
    return result;
}

inline double median(std::span<const double> sample) {
    if (sample.empty()) throw std::invalid_argument("median of an empty sample");
    std::vector<double> sorted(sample.begin(), sample.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    if (n % 2 == 1) return sorted[n / 2];
    return (sorted[n / 2 - 1] + sorted[n / 2]) / 2.0;
}

} // namespace gagt
