#pragma once

#include <cinttypes>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <json.hpp>

#include "okun/diagnostics.hpp"
#include "okun/model.hpp"
#include "okun/model_io.hpp"
#include "okun/series.hpp"

namespace okun {

inline constexpr const char* kReportVersionTag = "okun_report_v1";

/// Rounds to 6 significant decimal digits. Report output goes through this
/// so reruns are byte-identical and diffs stay readable.
inline double round6(double v) {
    if (!std::isfinite(v)) return v;
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::strtod(buf, nullptr);
}

/// FNV-1a over raw bytes; the input fingerprint in reports.
inline std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016" PRIx64, h);
    return buf;
}

namespace detail {

inline nlohmann::json rounded(const std::vector<double>& v) {
    nlohmann::json arr = nlohmann::json::array();
    for (double x : v) arr.push_back(round6(x));
    return arr;
}

inline nlohmann::json linear_fit_json(const LinearFit& f) {
    return {{"slope", round6(f.slope)},
            {"intercept", round6(f.intercept)},
            {"n", f.n},
            {"ssr", round6(f.ssr)},
            {"r2", round6(f.r2)},
            {"stderr_slope", round6(f.stderr_slope)},
            {"stderr_intercept", round6(f.stderr_intercept)}};
}

} // namespace detail

inline nlohmann::json diagnostics_to_json(const DiagnosticsReport& d) {
    nlohmann::json j;
    j["degenerate"] = d.degenerate;
    if (d.degenerate) {
        j["note"] = d.note;
        return j;
    }
    j["acf"] = detail::rounded(d.acf);
    j["acf_band"] = round6(d.acf_band);
    j["dw"] = round6(d.dw);
    j["df_stat"] = round6(d.df_stat);
    j["df_critical_5pct"] = round6(d.df_critical_5pct);
    j["unit_root_rejected"] = d.unit_root_rejected;
    return j;
}

/**
 * The single JSON document a fit run emits: command echo, input fingerprint,
 * the fitted model (okun_model_v1, embedded losslessly), per-regime and
 * combined fit statistics, diagnostics, the fitted series for plotting, and
 * warnings. Keys are sorted and numbers rounded to 6 significant digits, so
 * identical inputs and flags produce byte-identical documents.
 */
inline nlohmann::json build_run_report(const std::string& command_echo,
                                       const CountryDataset& input,
                                       const std::string& input_bytes,
                                       const FitResult& fit) {
    nlohmann::json j;
    j["version"] = kReportVersionTag;
    j["command"] = command_echo;
    j["input"] = {{"rows", input.size()},
                  {"year_start", input.start_year()},
                  {"year_end", input.end_year()},
                  {"country", input.country()},
                  {"content_fnv1a", fnv1a_hex(input_bytes)}};
    j["model"] = model_to_json(fit.model, "fitted");

    nlohmann::json stats;
    stats["orientation"] = to_string(fit.model.orientation);
    if (fit.segmented) {
        const SegmentedFit& seg = *fit.segmented;
        stats["mode"] = "segmented";
        stats["break_year"] = seg.break_year;
        stats["pre"] = detail::linear_fit_json(seg.pre);
        stats["post"] = detail::linear_fit_json(seg.post);
        stats["combined_r2"] = round6(seg.combined_r2);
        stats["total_ssr"] = round6(seg.total_ssr);
        if (std::isinf(seg.chow_f)) {
            stats["chow_f"] = "inf";
            stats["break_certain"] = true;
        } else {
            stats["chow_f"] = round6(seg.chow_f);
            stats["break_certain"] = false;
        }
        stats["chow_critical_5pct"] = round6(seg.chow_critical_5pct);
        stats["break_significant"] =
            std::isinf(seg.chow_f) || seg.chow_f > seg.chow_critical_5pct;
    } else {
        stats["mode"] = "pooled";
        stats["fit"] = detail::linear_fit_json(*fit.pooled);
        stats["combined_r2"] = round6(fit.r2);
        stats["total_ssr"] = round6(fit.total_ssr);
    }
    j["fit"] = stats;
    j["diagnostics"] = diagnostics_to_json(fit.diagnostics);

    j["series"] = {{"start_year", fit.pair.start_year},
                   {"du", detail::rounded(fit.pair.du)},
                   {"dlng", detail::rounded(fit.pair.dlng)},
                   {"predicted", detail::rounded(fit.predicted)},
                   {"residuals", detail::rounded(fit.residuals)},
                   {"response", fit.model.orientation == Orientation::direct ? "du" : "dlng"}};
    j["warnings"] = fit.warnings;
    return j;
}

} // namespace okun
