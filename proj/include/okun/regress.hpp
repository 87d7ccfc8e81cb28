#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "okun/errors.hpp"
#include "okun/series.hpp"

namespace okun {

/**
 * Result of a simple y = intercept + slope·x least-squares fit.
 *
 * residuals[i] = y_i − (intercept + slope·x_i). ssr is their sum of
 * squares, r2 = 1 − ssr/Syy (defined as 1 for a perfect fit on constant y).
 * Standard errors use s² = ssr/(n−2).
 */
struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::size_t n = 0;
    double ssr = 0.0;
    double r2 = 0.0;
    double stderr_slope = 0.0;
    double stderr_intercept = 0.0;
    std::vector<double> residuals;
};

/// Two independent per-segment fits around a break year. `break_year` is the
/// first year of the second regime: pre covers years < break_year, post
/// covers years >= break_year.
struct SegmentedFit {
    int break_year = 0;
    LinearFit pre;
    LinearFit post;
    double combined_r2 = 0.0;
    double total_ssr = 0.0;
    double chow_f = 0.0; // +inf when the segmented fit is perfect
    double chow_critical_5pct = 0.0;
};

/// Ordinary least squares of y on x with an intercept, via centered moments.
inline LinearFit ols(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size())
        throw InfeasibleError("ols: x and y lengths differ (" + std::to_string(x.size()) +
                              " vs " + std::to_string(y.size()) + ")");
    const std::size_t n = x.size();
    if (n < 3)
        throw InfeasibleError("ols needs at least 3 observations, got " + std::to_string(n));

    double mean_x = 0.0, mean_y = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mean_x += x[i];
        mean_y += y[i];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);

    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = x[i] - mean_x;
        const double dy = y[i] - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0.0)
        throw InfeasibleError("ols: zero variance in the regressor");

    LinearFit fit;
    fit.n = n;
    fit.slope = sxy / sxx;
    fit.intercept = mean_y - fit.slope * mean_x;
    fit.residuals.resize(n);
    double ssr = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double e = y[i] - (fit.intercept + fit.slope * x[i]);
        fit.residuals[i] = e;
        ssr += e * e;
    }
    fit.ssr = ssr;
    if (syy > 0.0) {
        fit.r2 = 1.0 - ssr / syy;
        if (fit.r2 < 0.0) fit.r2 = 0.0;
        if (fit.r2 > 1.0) fit.r2 = 1.0;
    } else {
        // constant response: a perfect horizontal line
        fit.r2 = ssr == 0.0 ? 1.0 : 0.0;
    }
    const double s2 = ssr / static_cast<double>(n - 2);
    fit.stderr_slope = std::sqrt(s2 / sxx);
    fit.stderr_intercept =
        std::sqrt(s2 * (1.0 / static_cast<double>(n) + mean_x * mean_x / sxx));
    return fit;
}

inline LinearFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    return ols(std::span<const double>(x), std::span<const double>(y));
}

namespace detail {

/// Picks (x, y) out of the pair according to the orientation.
struct XY {
    std::vector<double> x;
    std::vector<double> y;
};

inline XY orient(const DerivedPair& pair, Orientation o) {
    if (o == Orientation::direct) return {pair.dlng, pair.du};
    return {pair.du, pair.dlng};
}

// 5% critical values of F(2, m) for m = 1..120, m > 120 interpolated in 1/m
// toward the chi-square asymptote.
inline constexpr std::array<double, 120> kF2Crit5pct = {
    199.5000, 19.0000, 9.5521, 6.9443, 5.7861, 5.1433,
    4.7374,   4.4590,  4.2565, 4.1028, 3.9823, 3.8853,
    3.8056,   3.7389,  3.6823, 3.6337, 3.5915, 3.5546,
    3.5219,   3.4928,  3.4668, 3.4434, 3.4221, 3.4028,
    3.3852,   3.3690,  3.3541, 3.3404, 3.3277, 3.3158,
    3.3048,   3.2945,  3.2849, 3.2759, 3.2674, 3.2594,
    3.2519,   3.2448,  3.2381, 3.2317, 3.2257, 3.2199,
    3.2145,   3.2093,  3.2043, 3.1996, 3.1951, 3.1907,
    3.1866,   3.1826,  3.1788, 3.1751, 3.1716, 3.1682,
    3.1650,   3.1619,  3.1588, 3.1559, 3.1531, 3.1504,
    3.1478,   3.1453,  3.1428, 3.1404, 3.1381, 3.1359,
    3.1338,   3.1317,  3.1296, 3.1277, 3.1258, 3.1239,
    3.1221,   3.1203,  3.1186, 3.1170, 3.1154, 3.1138,
    3.1123,   3.1108,  3.1093, 3.1079, 3.1065, 3.1052,
    3.1038,   3.1026,  3.1013, 3.1001, 3.0989, 3.0977,
    3.0966,   3.0954,  3.0943, 3.0933, 3.0922, 3.0912,
    3.0902,   3.0892,  3.0882, 3.0873, 3.0864, 3.0855,
    3.0846,   3.0837,  3.0829, 3.0820, 3.0812, 3.0804,
    3.0796,   3.0788,  3.0781, 3.0773, 3.0766, 3.0759,
    3.0751,   3.0744,  3.0738, 3.0731, 3.0724, 3.0718,
};

inline constexpr double kF2CritAsymptote = 2.9957;

} // namespace detail

/// 5% critical value of F(2, m). Table lookup for m in 1..120, linear
/// interpolation in 1/m beyond.
inline double chow_critical_5pct(std::size_t denominator_dof) {
    if (denominator_dof < 1)
        throw InfeasibleError("chow: denominator degrees of freedom < 1");
    if (denominator_dof <= 120) return detail::kF2Crit5pct[denominator_dof - 1];
    const double t = 120.0 / static_cast<double>(denominator_dof); // 1 at m=120, -> 0
    return detail::kF2CritAsymptote +
           t * (detail::kF2Crit5pct[119] - detail::kF2CritAsymptote);
}

struct ChowResult {
    double f = 0.0;             // +inf when the segmented fit is perfect
    double critical_5pct = 0.0; // 5% point of F(2, n-4)
};

/// Chow F statistic for a break at `break_year` against the pooled
/// single-line fit: F = [(SSR_p − SSR_1 − SSR_2)/2] / [(SSR_1 + SSR_2)/(n−4)].
/// A perfect segmented fit (SSR_1 + SSR_2 = 0) is reported as +infinity:
/// the break is certain.
inline ChowResult chow(const DerivedPair& pair, Orientation orientation, int break_year);

/**
 * Independent OLS on each side of `break_year` (first year of the second
 * regime). combined_r2 pools both regimes against the pooled mean of the
 * dependent variable; chow_f tests the break against the pooled fit.
 */
inline SegmentedFit segmented_fit(const DerivedPair& pair, int break_year,
                                  Orientation orientation) {
    const std::size_t n = pair.size();
    if (break_year <= pair.start_year || break_year > pair.end_year())
        throw InfeasibleError("break year " + std::to_string(break_year) +
                              " outside sample " + std::to_string(pair.start_year) + ".." +
                              std::to_string(pair.end_year()));
    const std::size_t n_pre = static_cast<std::size_t>(break_year - pair.start_year);
    const std::size_t n_post = n - n_pre;
    if (n_pre < 3 || n_post < 3)
        throw InfeasibleError("segment too short at break " + std::to_string(break_year) +
                              " (" + std::to_string(n_pre) + " + " + std::to_string(n_post) +
                              " observations)");

    const detail::XY xy = detail::orient(pair, orientation);
    std::span<const double> x(xy.x), y(xy.y);

    SegmentedFit seg;
    seg.break_year = break_year;
    seg.pre = ols(x.first(n_pre), y.first(n_pre));
    seg.post = ols(x.subspan(n_pre), y.subspan(n_pre));
    seg.total_ssr = seg.pre.ssr + seg.post.ssr;

    double mean_y = 0.0;
    for (double v : y) mean_y += v;
    mean_y /= static_cast<double>(n);
    double tss = 0.0;
    for (double v : y) tss += (v - mean_y) * (v - mean_y);
    if (tss > 0.0) {
        seg.combined_r2 = 1.0 - seg.total_ssr / tss;
        if (seg.combined_r2 < 0.0) seg.combined_r2 = 0.0;
        if (seg.combined_r2 > 1.0) seg.combined_r2 = 1.0;
    } else {
        seg.combined_r2 = seg.total_ssr == 0.0 ? 1.0 : 0.0;
    }

    // Chow statistic against the pooled single-regime fit. A segmented SSR
    // that is zero at the scale of the data means a perfect piecewise fit:
    // the infinite-F sentinel, the break is certain.
    const LinearFit pooled = ols(x, y);
    if (n < 5)
        throw InfeasibleError("chow: denominator degrees of freedom < 1");
    const double dof = static_cast<double>(n - 4);
    const double perfect_eps = 1e-12 * std::max(tss, 1e-30);
    if (seg.total_ssr <= perfect_eps) {
        seg.chow_f = pooled.ssr <= perfect_eps
                         ? 0.0 // the pooled line is already perfect: no break
                         : std::numeric_limits<double>::infinity();
    } else {
        double f = ((pooled.ssr - seg.total_ssr) / 2.0) / (seg.total_ssr / dof);
        seg.chow_f = f < 0.0 ? 0.0 : f; // guard tiny negative rounding
    }
    seg.chow_critical_5pct = chow_critical_5pct(n - 4);
    return seg;
}

inline ChowResult chow(const DerivedPair& pair, Orientation orientation, int break_year) {
    const SegmentedFit seg = segmented_fit(pair, break_year, orientation);
    return {seg.chow_f, seg.chow_critical_5pct};
}

/**
 * Exhaustive grid over every break year that leaves at least `min_segment`
 * observations on each side; returns the fit with minimal total SSR.
 * Ties break toward the earliest year, so the result is deterministic.
 */
inline SegmentedFit break_search(const DerivedPair& pair, Orientation orientation,
                                 std::size_t min_segment = 8) {
    if (min_segment < 3)
        throw InfeasibleError("min_segment must be at least 3");
    const std::size_t n = pair.size();
    if (n < 2 * min_segment)
        throw InfeasibleError("sample too short for break search: " + std::to_string(n) +
                              " observations, need " + std::to_string(2 * min_segment));
    const int first = pair.start_year + static_cast<int>(min_segment);
    const int last = pair.start_year + static_cast<int>(n - min_segment);
    SegmentedFit best;
    bool have_best = false;
    for (int candidate = first; candidate <= last; ++candidate) {
        SegmentedFit fit;
        try {
            fit = segmented_fit(pair, candidate, orientation);
        } catch (const InfeasibleError&) {
            continue; // a zero-variance segment makes this candidate inadmissible
        }
        if (!have_best || fit.total_ssr < best.total_ssr) {
            best = fit;
            have_best = true;
        }
    }
    if (!have_best)
        throw InfeasibleError("no admissible break year in the sample");
    return best;
}

} // namespace okun
