#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "okun/errors.hpp"
#include "okun/regress.hpp"

namespace okun {

/**
 * Residual-quality summary: autocorrelations with a 95% significance band,
 * Durbin-Watson statistic and a non-augmented Dickey-Fuller unit-root test.
 * `degenerate` is set instead when the residuals carry no variance (perfect
 * fits); the other fields are then meaningless and left at defaults.
 */
struct DiagnosticsReport {
    bool degenerate = false;
    std::string note;                // "degenerate: zero variance" when degenerate
    std::vector<double> acf;         // lags 1..max_lag
    double acf_band = 0.0;           // 1.96/sqrt(n)
    double dw = 0.0;                 // Durbin-Watson, in [0, 4]
    double df_stat = 0.0;            // Dickey-Fuller t-ratio
    double df_critical_5pct = 0.0;
    bool unit_root_rejected = false; // df_stat < df_critical_5pct
};

/// Sample autocorrelations r_1..r_max_lag of a series around its mean.
inline std::vector<double> acf(std::span<const double> e, std::size_t max_lag) {
    const std::size_t n = e.size();
    if (max_lag < 1)
        throw InfeasibleError("acf: max_lag must be at least 1");
    if (n < max_lag + 3)
        throw InfeasibleError("acf: series too short for max_lag " + std::to_string(max_lag));
    double mean = 0.0;
    for (double v : e) mean += v;
    mean /= static_cast<double>(n);
    double denom = 0.0;
    for (double v : e) denom += (v - mean) * (v - mean);
    if (denom <= 0.0)
        throw InfeasibleError("acf: zero variance");
    std::vector<double> out(max_lag);
    for (std::size_t k = 1; k <= max_lag; ++k) {
        double num = 0.0;
        for (std::size_t t = k; t < n; ++t)
            num += (e[t] - mean) * (e[t - k] - mean);
        out[k - 1] = num / denom;
    }
    return out;
}

/// DW = Σ(e_t − e_{t−1})² / Σ e_t², near 2 for serially uncorrelated series.
inline double durbin_watson(std::span<const double> e) {
    const std::size_t n = e.size();
    if (n < 3)
        throw InfeasibleError("durbin_watson needs at least 3 observations");
    double ss = 0.0;
    for (double v : e) ss += v * v;
    if (ss <= 0.0)
        throw InfeasibleError("durbin_watson: zero sum of squares");
    double num = 0.0;
    for (std::size_t t = 1; t < n; ++t) {
        const double d = e[t] - e[t - 1];
        num += d * d;
    }
    return std::clamp(num / ss, 0.0, 4.0);
}

/// 5% Dickey-Fuller critical value (constant, no trend), selected by sample
/// size as a step function over the embedded small-sample table.
inline double dickey_fuller_critical_5pct(std::size_t n) {
    if (n <= 25) return -3.00;
    if (n <= 50) return -2.93;
    if (n <= 100) return -2.89;
    if (n <= 250) return -2.88;
    return -2.86;
}

struct DickeyFullerResult {
    double stat = 0.0;
    double critical_5pct = 0.0;
    bool unit_root_rejected = false;
};

/**
 * Non-augmented Dickey-Fuller test with a constant: regresses Δe_t on
 * e_{t−1}, returns the t-ratio of the lag coefficient. The unit root is
 * rejected when the statistic falls below the 5% critical value.
 */
inline DickeyFullerResult dickey_fuller(std::span<const double> e) {
    const std::size_t n = e.size();
    if (n < 10)
        throw InfeasibleError("dickey_fuller needs at least 10 observations");
    std::vector<double> lag(n - 1), diff(n - 1);
    for (std::size_t t = 1; t < n; ++t) {
        lag[t - 1] = e[t - 1];
        diff[t - 1] = e[t] - e[t - 1];
    }
    const LinearFit fit = ols(lag, diff); // throws on zero variance
    if (fit.stderr_slope <= 0.0)
        throw InfeasibleError("dickey_fuller: zero residual variance");
    DickeyFullerResult r;
    r.stat = fit.slope / fit.stderr_slope;
    r.critical_5pct = dickey_fuller_critical_5pct(n);
    r.unit_root_rejected = r.stat < r.critical_5pct;
    return r;
}

/// Default lag horizon for residual autocorrelation summaries.
inline std::size_t default_max_lag(std::size_t n) {
    return std::max<std::size_t>(1, std::min<std::size_t>(10, n / 4));
}

/**
 * Runs the full trio on a residual series. Residuals with (numerically)
 * zero variance produce a degenerate report rather than an error, since a
 * perfect fit is a legitimate outcome on synthetic data.
 */
inline DiagnosticsReport diagnose(std::span<const double> residuals, std::size_t max_lag = 0) {
    const std::size_t n = residuals.size();
    DiagnosticsReport rep;
    double mean = 0.0, ss = 0.0;
    for (double v : residuals) mean += v;
    mean /= n == 0 ? 1.0 : static_cast<double>(n);
    for (double v : residuals) ss += (v - mean) * (v - mean);
    if (n < 10 || ss <= 1e-18 * static_cast<double>(n)) {
        rep.degenerate = true;
        rep.note = n < 10 ? "degenerate: too few residuals" : "degenerate: zero variance";
        return rep;
    }
    if (max_lag == 0) max_lag = default_max_lag(n);
    max_lag = std::min(max_lag, n - 3);
    rep.acf = acf(residuals, max_lag);
    rep.acf_band = 1.96 / std::sqrt(static_cast<double>(n));
    rep.dw = durbin_watson(residuals);
    const DickeyFullerResult df = dickey_fuller(residuals);
    rep.df_stat = df.stat;
    rep.df_critical_5pct = df.critical_5pct;
    rep.unit_root_rejected = df.unit_root_rejected;
    return rep;
}

} // namespace okun
