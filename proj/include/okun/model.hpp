#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "okun/diagnostics.hpp"
#include "okun/errors.hpp"
#include "okun/regress.hpp"
#include "okun/series.hpp"

namespace okun {

/// One (slope, intercept) line. Units depend on the model orientation:
/// direct lines map dlng -> du, reversed lines map du -> dlng.
struct Regime {
    double slope = 0.0;
    double intercept = 0.0;
};

/**
 * A two-regime Okun's-law model. break_year is the first year governed by
 * regime2; regime1 covers all earlier years. Slopes are negative in either
 * orientation: faster growth lowers unemployment.
 */
struct OkunModel {
    std::string country;
    Orientation orientation = Orientation::direct;
    int break_year = 0;
    Regime regime1;
    Regime regime2;
    int sample_start = 0;
    int sample_end = 0;

    /// Throws DataError when the regime/sample structure is inconsistent.
    /// `require_okun_sign` additionally enforces negative slopes, which is
    /// mandatory for presets and serialized models but only a warning for
    /// freshly fitted ones.
    void validate(bool require_okun_sign = true) const {
        if (!(sample_start < break_year && break_year <= sample_end))
            throw DataError("model '" + country + "': break year " +
                            std::to_string(break_year) + " must lie inside sample " +
                            std::to_string(sample_start) + ".." + std::to_string(sample_end));
        if (require_okun_sign && (regime1.slope >= 0.0 || regime2.slope >= 0.0))
            throw DataError("model '" + country + "': slopes must be negative");
    }
};

struct RegimeRef {
    const Regime* coefficients;
    int index;          // 1 or 2
    bool extrapolated;  // year outside the fitted sample
};

/// Selects the regime governing `year`: regime1 iff year < break_year.
/// Out-of-sample years fall through to the nearest regime and are flagged.
inline RegimeRef regime_for(const OkunModel& m, int year) {
    RegimeRef ref;
    ref.index = year < m.break_year ? 1 : 2;
    ref.coefficients = ref.index == 1 ? &m.regime1 : &m.regime2;
    ref.extrapolated = year < m.sample_start || year > m.sample_end;
    return ref;
}

/// Change in unemployment implied by growth `dlng` at `year`, in pp/yr.
/// Reversed models are inverted algebraically: from dlng = c + d·du,
/// du = (dlng − c)/d.
inline double predict_du(const OkunModel& m, int year, double dlng) {
    const Regime& r = *regime_for(m, year).coefficients;
    if (m.orientation == Orientation::direct)
        return r.intercept + r.slope * dlng;
    if (r.slope == 0.0)
        throw InfeasibleError("cannot invert reversed model with zero slope");
    return (dlng - r.intercept) / r.slope;
}

/// Growth implied by unemployment change `du` at `year`, in percent/yr.
inline double predict_dlng(const OkunModel& m, int year, double du) {
    const Regime& r = *regime_for(m, year).coefficients;
    if (m.orientation == Orientation::reversed)
        return r.intercept + r.slope * du;
    if (r.slope == 0.0)
        throw InfeasibleError("cannot invert direct model with zero slope");
    return (du - r.intercept) / r.slope;
}

/// The growth rate at which predicted du = 0 for the given regime (1 or 2):
/// growth above it lowers unemployment. Reversed models return the intercept.
inline double threshold_growth(const OkunModel& m, int regime) {
    const Regime& r = regime == 1 ? m.regime1 : m.regime2;
    if (r.slope == 0.0)
        throw InfeasibleError("threshold undefined for zero slope");
    if (m.orientation == Orientation::direct)
        return -r.intercept / r.slope;
    return r.intercept;
}

/// Sensitivity of du to a 1-percent change in dlng: the direct-form slope.
inline double sensitivity(const OkunModel& m, int regime) {
    const Regime& r = regime == 1 ? m.regime1 : m.regime2;
    if (r.slope == 0.0)
        throw InfeasibleError("sensitivity undefined for zero slope");
    return m.orientation == Orientation::direct ? r.slope : 1.0 / r.slope;
}

/// Algebraic re-orientation: du = a + b·dlng  <=>  dlng = (−a/b) + (1/b)·du.
/// Predictions are preserved exactly (up to rounding).
inline OkunModel convert_orientation(const OkunModel& m, Orientation target) {
    if (m.orientation == target) return m;
    auto flip = [](const Regime& r) {
        if (r.slope == 0.0)
            throw InfeasibleError("cannot re-orient a zero-slope regime");
        return Regime{1.0 / r.slope, -r.intercept / r.slope};
    };
    OkunModel out = m;
    out.orientation = target;
    out.regime1 = flip(m.regime1);
    out.regime2 = flip(m.regime2);
    return out;
}

// ---------------------------------------------------------------------------
// Built-in presets: the published two-regime estimates for six countries.
// Reversed-form coefficients are stored exactly as printed, never converted,
// so they can be audited against the source values digit for digit.
// ---------------------------------------------------------------------------

inline const std::vector<OkunModel>& builtin_presets() {
    static const std::vector<OkunModel> presets = {
        {"us", Orientation::direct, 1985, {-0.42, 1.07}, {-0.62, 1.09}, 1958, 2010},
        {"france", Orientation::reversed, 1987, {-5.0, 4.6}, {-1.5, 1.4}, 1960, 2010},
        {"uk", Orientation::reversed, 1987, {-1.5, 2.5}, {-2.0, 1.7}, 1972, 2010},
        {"canada", Orientation::reversed, 1985, {-2.7, 3.1}, {-2.7, 1.2}, 1960, 2010},
        {"australia", Orientation::reversed, 1995, {-1.7, 2.4}, {-3.0, 1.2}, 1968, 2010},
        {"spain", Orientation::reversed, 1987, {-2.0, 5.0}, {-0.8, 2.1}, 1961, 2010},
    };
    return presets;
}

inline const OkunModel& builtin_preset(const std::string& name) {
    for (const OkunModel& m : builtin_presets())
        if (m.country == name) return m;
    throw UsageError("unknown preset '" + name + "'");
}

// ---------------------------------------------------------------------------
// End-to-end fitting
// ---------------------------------------------------------------------------

/// Break handling for fit_okun: search the grid, fix a given year, or fit a
/// single pooled line.
struct BreakAuto {};
struct BreakNone {};
using BreakSpec = std::variant<BreakAuto, int, BreakNone>;

struct FitOptions {
    std::size_t min_segment = 8;
    bool smooth_ma3 = false;   // MA(3) both derived series before fitting
    std::size_t max_lag = 0;   // 0 = default min(10, n/4)
};

/**
 * Everything fit_okun produces: the packaged model, the underlying fit
 * (segmented, or pooled when break = none), diagnostics on the pooled
 * residuals, and the derived series actually fitted (after any smoothing).
 */
struct FitResult {
    OkunModel model;
    std::optional<SegmentedFit> segmented; // absent for break = none
    std::optional<LinearFit> pooled;       // present for break = none
    DiagnosticsReport diagnostics;
    DerivedPair pair;                      // series entering the regression
    std::vector<double> predicted;         // fitted response per observation
    std::vector<double> residuals;         // pooled residuals, model order
    std::vector<std::string> warnings;
    double r2 = 0.0;                       // combined (or single-fit) R²
    double total_ssr = 0.0;
};

namespace detail {

inline std::vector<double> model_response(const OkunModel& m, const DerivedPair& pair) {
    std::vector<double> out(pair.size());
    for (std::size_t i = 0; i < pair.size(); ++i) {
        const int year = pair.year_of(i);
        out[i] = m.orientation == Orientation::direct ? predict_du(m, year, pair.dlng[i])
                                                      : predict_dlng(m, year, pair.du[i]);
    }
    return out;
}

} // namespace detail

/**
 * derive -> (break_search | segmented_fit | pooled ols) -> OkunModel, with
 * diagnostics on the pooled residuals. The returned model keeps the fitted
 * orientation; slopes with the wrong (non-negative) sign are reported as a
 * warning rather than an error so that exploratory fits always complete.
 */
inline FitResult fit_okun(const CountryDataset& dataset, Orientation orientation,
                          const BreakSpec& break_spec, const FitOptions& options = {}) {
    FitResult result;
    DerivedPair pair = derive(dataset);
    if (options.smooth_ma3) {
        if (pair.size() < 3)
            throw InfeasibleError("too few observations to smooth with MA(3)");
        pair = ma3(pair);
    }
    result.pair = pair;

    OkunModel model;
    model.country = dataset.country();
    model.orientation = orientation;
    model.sample_start = pair.start_year - 1; // first level year
    model.sample_end = pair.end_year();

    if (std::holds_alternative<BreakNone>(break_spec)) {
        const detail::XY xy = detail::orient(pair, orientation);
        LinearFit fit = ols(xy.x, xy.y);
        model.break_year = pair.start_year; // degenerate: regime2 covers everything
        model.regime1 = model.regime2 = Regime{fit.slope, fit.intercept};
        result.r2 = fit.r2;
        result.total_ssr = fit.ssr;
        result.residuals = fit.residuals;
        result.pooled = std::move(fit);
    } else {
        SegmentedFit seg;
        if (std::holds_alternative<BreakAuto>(break_spec)) {
            if (pair.size() < 2 * options.min_segment)
                throw InfeasibleError(
                    "too few observations for break search: " + std::to_string(pair.size()) +
                    ", need " + std::to_string(2 * options.min_segment));
            seg = break_search(pair, orientation, options.min_segment);
        } else {
            seg = segmented_fit(pair, std::get<int>(break_spec), orientation);
        }
        model.break_year = seg.break_year;
        model.regime1 = Regime{seg.pre.slope, seg.pre.intercept};
        model.regime2 = Regime{seg.post.slope, seg.post.intercept};
        result.r2 = seg.combined_r2;
        result.total_ssr = seg.total_ssr;
        result.residuals = seg.pre.residuals;
        result.residuals.insert(result.residuals.end(), seg.post.residuals.begin(),
                                seg.post.residuals.end());
        if (std::isfinite(seg.chow_f) && seg.chow_f < seg.chow_critical_5pct)
            result.warnings.push_back("break not significant at 5% (Chow F = " +
                                      std::to_string(seg.chow_f) + " < critical " +
                                      std::to_string(seg.chow_critical_5pct) + ")");
        result.segmented = std::move(seg);
    }

    model.validate(false);
    if (model.regime1.slope >= 0.0 || model.regime2.slope >= 0.0)
        result.warnings.push_back("fitted slope is not negative; the estimated "
                                  "relation is not Okun-like");
    if (result.r2 < 0.5)
        result.warnings.push_back("low fit quality: combined R² = " +
                                  std::to_string(result.r2) + " < 0.5");

    result.predicted = detail::model_response(model, pair);
    result.diagnostics = diagnose(result.residuals, options.max_lag);
    result.model = std::move(model);
    return result;
}

} // namespace okun
