#pragma once

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "okun/csv.hpp"
#include "okun/errors.hpp"
#include "okun/model.hpp"
#include "okun/model_io.hpp"
#include "okun/report.hpp"
#include "okun/simulate.hpp"
#include "okun/svg.hpp"

namespace okun::cli {

inline constexpr const char* kDiagnoseVersionTag = "okun_diagnose_v1";

namespace detail {

inline std::string fmt6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::string join_args(const std::vector<std::string>& args) {
    std::string echo = "okun";
    for (const std::string& a : args) {
        echo += ' ';
        echo += a;
    }
    return echo;
}

inline int parse_int_strict(const std::string& s, const std::string& what) {
    int value = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw UsageError("invalid " + what + " '" + s + "'");
    return value;
}

inline BreakSpec parse_break_spec(const std::string& s) {
    if (s == "auto") return BreakAuto{};
    if (s == "none") return BreakNone{};
    return parse_int_strict(s, "--break value (expected auto|none|YEAR)");
}

inline bool parse_smooth_flag(const std::string& s) {
    if (s == "none") return false;
    if (s == "ma3") return true;
    throw UsageError("invalid --smooth value '" + s + "' (expected none|ma3)");
}

inline std::pair<int, int> parse_year_range(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos)
        throw UsageError("invalid --years '" + s + "' (expected START:END)");
    const int a = parse_int_strict(s.substr(0, colon), "--years start");
    const int b = parse_int_strict(s.substr(colon + 1), "--years end");
    if (b <= a)
        throw UsageError("--years range must satisfy START < END");
    return {a, b};
}

/// Restricts a dataset to [from, to]; 0 means unbounded on that side.
inline CountryDataset slice(const CountryDataset& ds, int from, int to) {
    const int lo = from != 0 ? from : ds.start_year();
    const int hi = to != 0 ? to : ds.end_year();
    if (lo < ds.start_year() || hi > ds.end_year() || lo >= hi)
        throw UsageError("year range " + std::to_string(lo) + ".." + std::to_string(hi) +
                         " not contained in data " + std::to_string(ds.start_year()) + ".." +
                         std::to_string(ds.end_year()));
    if (lo == ds.start_year() && hi == ds.end_year()) return ds;
    const auto offset = static_cast<std::size_t>(lo - ds.start_year());
    const auto count = static_cast<std::size_t>(hi - lo + 1);
    auto cut = [&](const AnnualSeries& s) {
        std::vector<double> v(s.values().begin() + static_cast<std::ptrdiff_t>(offset),
                              s.values().begin() + static_cast<std::ptrdiff_t>(offset + count));
        return AnnualSeries(lo, std::move(v));
    };
    return CountryDataset(ds.country(), cut(ds.gdp_pc()), cut(ds.unemployment()));
}

/// Built-ins plus any okun_model_v1 documents in $OKUN_PRESET_DIR. A user
/// preset that reuses a built-in name is an error, never a silent override.
inline OkunModel resolve_preset(const std::string& name) {
    std::map<std::string, OkunModel> user;
    if (const char* dir = std::getenv("OKUN_PRESET_DIR")) {
        namespace fs = std::filesystem;
        std::error_code ec;
        std::vector<fs::path> files;
        for (const auto& entry : fs::directory_iterator(dir, ec))
            if (entry.path().extension() == ".json") files.push_back(entry.path());
        if (ec)
            throw UsageError("cannot read OKUN_PRESET_DIR '" + std::string(dir) + "'");
        std::sort(files.begin(), files.end());
        for (const auto& path : files) {
            OkunModel m = model_from_string(read_file(path.string()));
            for (const OkunModel& builtin : builtin_presets())
                if (builtin.country == m.country)
                    throw UsageError("user preset '" + m.country + "' (" + path.string() +
                                     ") collides with built-in preset");
            if (!user.emplace(m.country, m).second)
                throw UsageError("duplicate user preset '" + m.country + "'");
        }
    }
    for (const OkunModel& m : builtin_presets())
        if (m.country == name) return m;
    if (auto it = user.find(name); it != user.end()) return it->second;
    throw UsageError("unknown preset '" + name + "'");
}

inline OkunModel resolve_model_flags(const std::string& model_path, const std::string& preset) {
    if (model_path.empty() == preset.empty())
        throw UsageError("exactly one of --model or --preset is required");
    if (!preset.empty()) return resolve_preset(preset);
    return model_from_string(read_file(model_path));
}

struct OutputSink {
    std::string path; // empty = stdout
    std::ostream* out;

    void write(const std::string& content) const {
        if (path.empty()) {
            *out << content;
            return;
        }
        std::ofstream f(path, std::ios::binary);
        if (!f)
            throw DataError("cannot write to '" + path + "'");
        f << content;
    }
};

// --- fit ------------------------------------------------------------------

struct FitFlags {
    std::string input;
    std::string orientation = "direct";
    std::string break_spec = "auto";
    std::string smooth = "none";
    std::string country;
    std::size_t min_segment = 8;
    std::size_t max_lag = 0;
    int from = 0;
    int to = 0;
};

struct FitPipelineResult {
    FitResult fit;
    CountryDataset dataset;
    std::string input_bytes;
};

inline FitPipelineResult run_fit_pipeline(const FitFlags& flags) {
    // Flag values are validated before touching the input so that a bad
    // --orientation is a usage error even when the file is unreadable.
    const Orientation orientation = orientation_from_string(flags.orientation);
    const BreakSpec break_spec = parse_break_spec(flags.break_spec);
    FitOptions options;
    options.min_segment = flags.min_segment;
    options.smooth_ma3 = parse_smooth_flag(flags.smooth);
    options.max_lag = flags.max_lag;

    std::string input_bytes = read_file(flags.input);
    std::string label = flags.country;
    if (label.empty())
        label = std::filesystem::path(flags.input).stem().string();
    CountryDataset dataset =
        slice(parse_csv_text(input_bytes, label), flags.from, flags.to);
    FitResult result = fit_okun(dataset, orientation, break_spec, options);
    return {std::move(result), std::move(dataset), std::move(input_bytes)};
}

inline void cmd_fit(const FitFlags& flags, const std::vector<std::string>& args,
                    const OutputSink& sink, std::ostream& err, bool quiet) {
    FitPipelineResult r = run_fit_pipeline(flags);
    nlohmann::json report = build_run_report(join_args(args), r.dataset, r.input_bytes, r.fit);
    sink.write(report.dump(2) + "\n");
    if (!quiet)
        for (const std::string& w : r.fit.warnings) err << "warning: " << w << "\n";
}

// --- predict ----------------------------------------------------------------

struct PredictFlags {
    std::string model_path;
    std::string preset;
    std::string input; // CSV of (year,dlng) or (year,du)
    std::optional<int> year;
    std::optional<double> dlng;
    std::optional<double> du;
};

inline void cmd_predict(const PredictFlags& flags, const OutputSink& sink) {
    const OkunModel model = resolve_model_flags(flags.model_path, flags.preset);

    struct Query {
        int year;
        double value;
    };
    std::vector<Query> queries;
    bool from_dlng;

    if (!flags.input.empty()) {
        if (flags.year || flags.dlng || flags.du)
            throw UsageError("--input cannot be combined with --year/--dlng/--du");
        std::istringstream in(read_file(flags.input));
        std::string line;
        int line_no = 0;
        bool header_seen = false;
        from_dlng = true;
        while (std::getline(in, line)) {
            ++line_no;
            std::string stripped = okun::detail::trim(line);
            if (stripped.empty() || stripped[0] == '#') continue;
            if (!header_seen) {
                if (stripped == "year,dlng")
                    from_dlng = true;
                else if (stripped == "year,du")
                    from_dlng = false;
                else
                    throw DataError("line " + std::to_string(line_no) +
                                    ": expected header 'year,dlng' or 'year,du'");
                header_seen = true;
                continue;
            }
            auto cells = okun::detail::split_fields(stripped);
            if (cells.size() != 2)
                throw DataError("line " + std::to_string(line_no) + ": expected 2 columns");
            queries.push_back({okun::detail::parse_year(cells[0], line_no),
                               okun::detail::parse_number(cells[1], line_no,
                                                          from_dlng ? "dlng" : "du")});
        }
        if (queries.empty())
            throw DataError("no prediction rows in '" + flags.input + "'");
    } else {
        if (!flags.year)
            throw UsageError("--year is required (or use --input CSV)");
        if (flags.dlng.has_value() == flags.du.has_value())
            throw UsageError("exactly one of --dlng or --du is required");
        from_dlng = flags.dlng.has_value();
        queries.push_back({*flags.year, from_dlng ? *flags.dlng : *flags.du});
    }

    std::string out;
    out += from_dlng ? "year,dlng,predicted_du,regime,extrapolated\n"
                     : "year,du,predicted_dlng,regime,extrapolated\n";
    for (const Query& q : queries) {
        const RegimeRef ref = regime_for(model, q.year);
        const double predicted = from_dlng ? predict_du(model, q.year, q.value)
                                           : predict_dlng(model, q.year, q.value);
        out += std::to_string(q.year) + "," + fmt6(q.value) + "," + fmt6(predicted) + "," +
               std::to_string(ref.index) + "," + (ref.extrapolated ? "yes" : "no") + "\n";
    }
    sink.write(out);
}

// --- diagnose ---------------------------------------------------------------

struct DiagnoseFlags {
    FitFlags fit;          // used when no model/preset is given
    std::string model_path;
    std::string preset;
};

inline void cmd_diagnose(const DiagnoseFlags& flags, const std::vector<std::string>& args,
                         const OutputSink& sink, std::ostream& err, bool quiet) {
    nlohmann::json j;
    j["version"] = kDiagnoseVersionTag;
    j["command"] = join_args(args);

    if (!flags.model_path.empty() || !flags.preset.empty()) {
        // Residuals of a given model on the dataset, no refitting.
        const OkunModel model = resolve_model_flags(flags.model_path, flags.preset);
        const std::string input_bytes = read_file(flags.fit.input);
        CountryDataset dataset = parse_csv_text(
            input_bytes, std::filesystem::path(flags.fit.input).stem().string());
        dataset = slice(dataset, flags.fit.from, flags.fit.to);
        DerivedPair pair = derive(dataset);
        if (parse_smooth_flag(flags.fit.smooth)) pair = ma3(pair);
        const std::vector<double> predicted = okun::detail::model_response(model, pair);
        const std::vector<double>& observed =
            model.orientation == Orientation::direct ? pair.du : pair.dlng;
        std::vector<double> residuals(pair.size());
        for (std::size_t i = 0; i < pair.size(); ++i)
            residuals[i] = observed[i] - predicted[i];
        j["input"] = {{"rows", dataset.size()},
                      {"year_start", dataset.start_year()},
                      {"year_end", dataset.end_year()},
                      {"country", dataset.country()},
                      {"content_fnv1a", fnv1a_hex(input_bytes)}};
        j["model"] = model_to_json(model, flags.preset.empty() ? "file" : "preset");
        j["diagnostics"] = diagnostics_to_json(diagnose(residuals, flags.fit.max_lag));
        j["series"] = {{"start_year", pair.start_year},
                       {"observed", okun::detail::rounded(observed)},
                       {"predicted", okun::detail::rounded(predicted)},
                       {"residuals", okun::detail::rounded(residuals)}};
        sink.write(j.dump(2) + "\n");
        return;
    }

    FitPipelineResult r = run_fit_pipeline(flags.fit);
    j["input"] = {{"rows", r.dataset.size()},
                  {"year_start", r.dataset.start_year()},
                  {"year_end", r.dataset.end_year()},
                  {"country", r.dataset.country()},
                  {"content_fnv1a", fnv1a_hex(r.input_bytes)}};
    j["model"] = model_to_json(r.fit.model, "fitted");
    j["diagnostics"] = diagnostics_to_json(r.fit.diagnostics);
    j["series"] = {{"start_year", r.fit.pair.start_year},
                   {"observed", okun::detail::rounded(r.fit.model.orientation ==
                                                              Orientation::direct
                                                          ? r.fit.pair.du
                                                          : r.fit.pair.dlng)},
                   {"predicted", okun::detail::rounded(r.fit.predicted)},
                   {"residuals", okun::detail::rounded(r.fit.residuals)}};
    sink.write(j.dump(2) + "\n");
    if (!quiet)
        for (const std::string& w : r.fit.warnings) err << "warning: " << w << "\n";
}

// --- simulate ---------------------------------------------------------------

struct SimulateFlags {
    std::string model_path;
    std::string preset;
    std::string years; // "A:B", empty = model sample range
    double noise = 0.0;
    std::uint64_t seed = 0;
    double u0 = 8.0;
    double g0 = 20000.0;
    double growth_mean = 2.5;
    double growth_sd = 2.0;
};

inline void cmd_simulate(const SimulateFlags& flags, const std::vector<std::string>& args,
                         const OutputSink& sink, std::ostream& err, bool quiet) {
    const OkunModel model = resolve_model_flags(flags.model_path, flags.preset);
    SimOptions options;
    options.noise_sd = flags.noise;
    options.seed = flags.seed;
    options.u0 = flags.u0;
    options.g0 = flags.g0;
    options.growth = GrowthSpec{flags.growth_mean, flags.growth_sd};
    if (!flags.years.empty()) {
        const auto [a, b] = parse_year_range(flags.years);
        options.start_year = a;
        options.end_year = b;
    }
    const SimulationResult sim = simulate(model, options);
    sink.write(write_csv(sim.dataset, {join_args(args)}));
    if (sim.clip_events > 0 && !quiet)
        err << "warning: unemployment clipped to [0.5, 99] in " << sim.clip_events
            << " year(s)\n";
}

// --- plot -------------------------------------------------------------------

struct PlotFlags {
    std::string report_path;
    std::string format = "csv";
    std::string smooth = "none";
};

inline void cmd_plot(const PlotFlags& flags, const OutputSink& sink) {
    nlohmann::json report;
    try {
        report = nlohmann::json::parse(read_file(flags.report_path));
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
    OkunModel model;
    int start_year = 0;
    std::vector<double> du, dlng, predicted;
    try {
        if (!report.contains("version") ||
            report.at("version").get<std::string>() != kReportVersionTag)
            throw DataError(std::string("report document is not tagged ") + kReportVersionTag);
        model = model_from_json(report.at("model"));
        const nlohmann::json& series = report.at("series");
        start_year = series.at("start_year").get<int>();
        du = series.at("du").get<std::vector<double>>();
        dlng = series.at("dlng").get<std::vector<double>>();
        predicted = series.at("predicted").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed report: ") + e.what());
    }
    if (du.size() != dlng.size() || du.size() != predicted.size() || du.empty())
        throw DataError("malformed report: series lengths differ");

    const bool direct = model.orientation == Orientation::direct;
    std::vector<double> observed = direct ? du : dlng;
    std::vector<double> regressor = direct ? dlng : du;

    if (parse_smooth_flag(flags.smooth)) {
        if (observed.size() < 3)
            throw InfeasibleError("too few observations to smooth with MA(3)");
        observed = ma3(AnnualSeries(start_year, observed)).values();
        predicted = ma3(AnnualSeries(start_year, predicted)).values();
        regressor = ma3(AnnualSeries(start_year, regressor)).values();
        ++start_year;
    }

    if (flags.format == "csv") {
        std::string out = "year,observed,predicted\n";
        for (std::size_t i = 0; i < observed.size(); ++i)
            out += std::to_string(start_year + static_cast<int>(i)) + "," + fmt6(observed[i]) +
                   "," + fmt6(predicted[i]) + "\n";
        sink.write(out);
        return;
    }
    if (flags.format != "svg")
        throw UsageError("invalid --format '" + flags.format + "' (expected csv|svg)");

    ScatterPlot plot;
    plot.title = (model.country.empty() ? "okun" : model.country) + " fit";
    plot.x_label = direct ? "dlnG, %/yr" : "du, pp/yr";
    plot.y_label = direct ? "du, pp/yr" : "dlnG, %/yr";
    double lo[2] = {0, 0}, hi[2] = {0, 0};
    bool seen[2] = {false, false};
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const int year = start_year + static_cast<int>(i);
        const int regime = year < model.break_year ? 1 : 2;
        plot.points.push_back({regressor[i], observed[i], regime});
        const int r = regime - 1;
        if (!seen[r]) {
            lo[r] = hi[r] = regressor[i];
            seen[r] = true;
        } else {
            lo[r] = std::min(lo[r], regressor[i]);
            hi[r] = std::max(hi[r], regressor[i]);
        }
    }
    for (int r = 0; r < 2; ++r) {
        if (!seen[r]) continue;
        const Regime& coef = r == 0 ? model.regime1 : model.regime2;
        plot.lines.push_back({lo[r], coef.intercept + coef.slope * lo[r], hi[r],
                              coef.intercept + coef.slope * hi[r], r + 1});
    }
    sink.write(render_svg(plot));
}

} // namespace detail

/**
 * Dispatches `okun <fit|predict|diagnose|simulate|plot>`. Returns the process
 * exit code: 0 ok, 1 usage error, 2 bad input data, 3 infeasible fit. Every
 * failure prints a single `error: ...` line to `err`.
 */
inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Okun's-law estimation toolkit"};
    app.require_subcommand(1);
    app.fallthrough(); // allow the global flags after the subcommand too

    std::string output_path;
    bool quiet = false;
    app.add_option("--output", output_path, "Write output to PATH instead of stdout");
    app.add_flag("--quiet", quiet, "Suppress warnings on stderr");

    detail::FitFlags fit_flags;
    CLI::App* fit = app.add_subcommand("fit", "Estimate a two-regime model from CSV data");
    fit->add_option("--input", fit_flags.input, "Input CSV (year,gdp_pc,unemployment)")
        ->required();
    fit->add_option("--orientation", fit_flags.orientation, "direct|reversed (default direct)");
    fit->add_option("--break", fit_flags.break_spec, "auto|none|YEAR (default auto)");
    fit->add_option("--smooth", fit_flags.smooth, "none|ma3 pre-fit smoothing (default none)");
    fit->add_option("--min-segment", fit_flags.min_segment,
                    "Minimum observations per regime (default 8)");
    fit->add_option("--max-lag", fit_flags.max_lag, "ACF lag horizon (default min(10, n/4))");
    fit->add_option("--country", fit_flags.country, "Country label (default: input file stem)");
    fit->add_option("--from", fit_flags.from, "Restrict sample to years >= FROM");
    fit->add_option("--to", fit_flags.to, "Restrict sample to years <= TO");

    detail::PredictFlags predict_flags;
    CLI::App* predict = app.add_subcommand("predict", "Predict du from dlng or vice versa");
    predict->add_option("--model", predict_flags.model_path, "Model JSON file (okun_model_v1)");
    predict->add_option("--preset", predict_flags.preset, "Built-in or user preset name");
    predict->add_option("--input", predict_flags.input, "CSV of queries: year,dlng or year,du");
    int year_val = 0;
    double dlng_val = 0.0, du_val = 0.0;
    CLI::Option* year_opt = predict->add_option("--year", year_val, "Year of the prediction");
    CLI::Option* dlng_opt =
        predict->add_option("--dlng", dlng_val, "Growth of GDP per capita, %/yr");
    CLI::Option* du_opt =
        predict->add_option("--du", du_val, "Change in unemployment rate, pp/yr");

    detail::DiagnoseFlags diag_flags;
    CLI::App* diagnose = app.add_subcommand("diagnose", "Residual diagnostics for a fit/model");
    diagnose->add_option("--input", diag_flags.fit.input, "Input CSV")->required();
    diagnose->add_option("--model", diag_flags.model_path, "Model JSON file to evaluate");
    diagnose->add_option("--preset", diag_flags.preset, "Preset to evaluate");
    diagnose->add_option("--orientation", diag_flags.fit.orientation,
                         "direct|reversed when fitting");
    diagnose->add_option("--break", diag_flags.fit.break_spec, "auto|none|YEAR when fitting");
    diagnose->add_option("--smooth", diag_flags.fit.smooth, "none|ma3 pre-fit smoothing");
    diagnose->add_option("--min-segment", diag_flags.fit.min_segment,
                         "Minimum observations per regime");
    diagnose->add_option("--max-lag", diag_flags.fit.max_lag, "ACF lag horizon");
    diagnose->add_option("--from", diag_flags.fit.from, "Restrict sample to years >= FROM");
    diagnose->add_option("--to", diag_flags.fit.to, "Restrict sample to years <= TO");

    detail::SimulateFlags sim_flags;
    CLI::App* simulate = app.add_subcommand("simulate", "Emit a synthetic dataset as CSV");
    simulate->add_option("--model", sim_flags.model_path, "Model JSON file");
    simulate->add_option("--preset", sim_flags.preset, "Built-in or user preset name");
    simulate->add_option("--noise", sim_flags.noise, "Gaussian noise on du, pp (default 0)");
    simulate->add_option("--seed", sim_flags.seed, "RNG seed (default 0)");
    simulate->add_option("--years", sim_flags.years, "START:END (default model sample)");
    simulate->add_option("--u0", sim_flags.u0, "Initial unemployment rate (default 8)");
    simulate->add_option("--g0", sim_flags.g0, "Initial GDP per capita (default 20000)");
    simulate->add_option("--growth-mean", sim_flags.growth_mean,
                         "Mean of the generated dlng path (default 2.5)");
    simulate->add_option("--growth-sd", sim_flags.growth_sd,
                         "Std dev of the generated dlng path (default 2)");

    detail::PlotFlags plot_flags;
    CLI::App* plot = app.add_subcommand("plot", "Render a run report as CSV or SVG");
    plot->add_option("--report", plot_flags.report_path, "Run report JSON from fit")->required();
    plot->add_option("--format", plot_flags.format, "csv|svg (default csv)");
    plot->add_option("--smooth", plot_flags.smooth, "none|ma3 display smoothing");

    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("okun");
    for (const std::string& a : args) argv.push_back(a.c_str());

    try {
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::CallForHelp&) {
            CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands()[0];
            out << sub->help();
            return 0;
        } catch (const CLI::ParseError& e) {
            throw UsageError(e.what());
        }

        detail::OutputSink sink{output_path, &out};
        if (fit->parsed()) {
            detail::cmd_fit(fit_flags, args, sink, err, quiet);
        } else if (predict->parsed()) {
            if (year_opt->count() > 0) predict_flags.year = year_val;
            if (dlng_opt->count() > 0) predict_flags.dlng = dlng_val;
            if (du_opt->count() > 0) predict_flags.du = du_val;
            detail::cmd_predict(predict_flags, sink);
        } else if (diagnose->parsed()) {
            detail::cmd_diagnose(diag_flags, args, sink, err, quiet);
        } else if (simulate->parsed()) {
            detail::cmd_simulate(sim_flags, args, sink, err, quiet);
        } else if (plot->parsed()) {
            detail::cmd_plot(plot_flags, sink);
        }
        return 0;
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    } catch (const DataError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 1;
    }
}

} // namespace okun::cli
