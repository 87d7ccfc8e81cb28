// Acceptance suite: runs every release criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exits nonzero if any fail.
//
// Criterion 8 (reproduction on real Conference Board / OECD exports) is
// data-dependent and optional: it runs only when OKUN_US_CSV (and optionally
// OKUN_FRANCE_CSV) point at user-supplied files, and is reported as SKIP
// otherwise.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "okun/cli.hpp"
#include "okun/csv.hpp"
#include "okun/model.hpp"
#include "okun/regress.hpp"
#include "okun/simulate.hpp"

using namespace okun;

namespace {

int failures = 0;
int skips = 0;

void report(int criterion, const std::string& name, bool pass, const std::string& detail) {
    std::cout << (pass ? "PASS" : "FAIL") << " criterion " << criterion << " (" << name
              << "): " << detail << "\n";
    if (!pass) ++failures;
}

void report_skip(int criterion, const std::string& name, const std::string& why) {
    std::cout << "SKIP criterion " << criterion << " (" << name << "): " << why << "\n";
    ++skips;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

// ---------------------------------------------------------------------------

void criterion_1_preset_fidelity() {
    struct Row {
        const char* country;
        Orientation orientation;
        int break_year;
        double s1, i1, s2, i2;
    };
    // The published coefficient lists, restated here independently of the
    // preset table in model.hpp.
    const Row rows[] = {
        {"us", Orientation::direct, 1985, -0.42, 1.07, -0.62, 1.09},
        {"france", Orientation::reversed, 1987, -5.0, 4.6, -1.5, 1.4},
        {"uk", Orientation::reversed, 1987, -1.5, 2.5, -2.0, 1.7},
        {"canada", Orientation::reversed, 1985, -2.7, 3.1, -2.7, 1.2},
        {"australia", Orientation::reversed, 1995, -1.7, 2.4, -3.0, 1.2},
        {"spain", Orientation::reversed, 1987, -2.0, 5.0, -0.8, 2.1},
    };
    bool ok = builtin_presets().size() == 6;
    std::string detail;
    for (const Row& r : rows) {
        const OkunModel& m = builtin_preset(r.country);
        const bool match = m.orientation == r.orientation && m.break_year == r.break_year &&
                           m.regime1.slope == r.s1 && m.regime1.intercept == r.i1 &&
                           m.regime2.slope == r.s2 && m.regime2.intercept == r.i2;
        if (!match) {
            ok = false;
            detail += std::string(r.country) + " mismatch; ";
        }
    }
    report(1, "preset fidelity", ok,
           ok ? "all six presets match the published coefficients exactly" : detail);
}

void criterion_2_thresholds() {
    const struct {
        const char* country;
        int regime;
        double expected;
        double tol;
    } rows[] = {
        {"uk", 2, 1.7, 0.0},   {"canada", 2, 1.2, 0.0},    {"australia", 2, 1.2, 0.0},
        {"spain", 2, 2.1, 0.0}, {"france", 2, 1.4, 0.0},    {"us", 2, 1.7581, 1e-4},
    };
    bool ok = true;
    std::string detail;
    for (const auto& r : rows) {
        const double got = threshold_growth(builtin_preset(r.country), r.regime);
        const bool match = r.tol == 0.0 ? got == r.expected : std::abs(got - r.expected) <= r.tol;
        if (!match) {
            ok = false;
            detail += std::string(r.country) + " got " + fmt(got) + "; ";
        }
    }
    report(2, "threshold reproduction", ok,
           ok ? "UK 1.7, Canada 1.2, Australia 1.2, Spain 2.1, France 1.4, US 1.7581 +/- 1e-4"
              : detail);
}

void criterion_3_canada_2010() {
    const double du = predict_du(builtin_preset("canada"), 2010, 2.1);
    const bool ok = std::abs(du - (-0.333)) <= 0.05;
    report(3, "Canada 2010 check", ok,
           "predict_du(canada, 2010, 2.1) = " + fmt(du) + " (target -0.333 +/- 0.05)");
}

void criterion_4_zero_noise_identifiability() {
    bool ok = true;
    std::string detail;
    for (const OkunModel& preset : builtin_presets()) {
        // Alternating growth path centered on each regime's threshold keeps
        // the implied du swings symmetric and the levels far from the clamp.
        std::vector<double> path;
        for (int year = preset.sample_start + 1; year <= preset.sample_end; ++year) {
            const double center = threshold_growth(preset, year < preset.break_year ? 1 : 2);
            path.push_back(center + ((year % 2 == 0) ? 2.0 : -2.0));
        }
        SimOptions opt;
        opt.noise_sd = 0.0;
        opt.u0 = 40.0;
        opt.growth = path;
        const SimulationResult sim = simulate(preset, opt);
        if (sim.clip_events != 0) {
            ok = false;
            detail += std::string(preset.country) + ": unexpected clipping; ";
            continue;
        }
        const FitResult fit = fit_okun(sim.dataset, preset.orientation, BreakAuto{});
        const double err =
            std::max({std::abs(fit.model.regime1.slope - preset.regime1.slope),
                      std::abs(fit.model.regime1.intercept - preset.regime1.intercept),
                      std::abs(fit.model.regime2.slope - preset.regime2.slope),
                      std::abs(fit.model.regime2.intercept - preset.regime2.intercept)});
        if (fit.model.break_year != preset.break_year || err > 1e-9 ||
            std::abs(fit.r2 - 1.0) > 1e-9) {
            ok = false;
            detail += std::string(preset.country) + ": break " + fmt(fit.model.break_year) +
                      ", max coefficient error " + fmt(err) + ", R2 " + fmt(fit.r2) + "; ";
        }
    }
    report(4, "zero-noise identifiability", ok,
           ok ? "all six presets recovered exactly (break, coefficients to 1e-9, R2 = 1)"
              : detail);
}

void criterion_5_noisy_break_recovery() {
    // The growth path alternates +/-8 around 2%/yr with per-seed jitter: the
    // US regimes differ mostly in slope (-0.42 vs -0.62), so wide growth
    // swings are what makes the break location identifiable at sigma=0.5.
    const OkunModel& us = builtin_preset("us");
    const int seeds = 200;
    int within_one = 0;
    double abs_err_sum = 0.0;
    int coef_count = 0;
    for (int s = 0; s < seeds; ++s) {
        SimOptions opt;
        opt.noise_sd = 0.5;
        opt.seed = 40000 + static_cast<std::uint64_t>(s);
        opt.u0 = 30.0;
        std::mt19937 prng(900000 + s);
        std::normal_distribution<double> jitter(0.0, 1.0);
        std::vector<double> path;
        for (int year = us.sample_start + 1; year <= us.sample_end; ++year)
            path.push_back(2.0 + ((year % 2 == 0) ? 8.0 : -8.0) + jitter(prng));
        opt.growth = path;
        const SimulationResult sim = simulate(us, opt);
        const FitResult fit = fit_okun(sim.dataset, Orientation::direct, BreakAuto{});
        if (std::abs(fit.model.break_year - 1985) <= 1) ++within_one;
        abs_err_sum += std::abs(fit.model.regime1.slope - us.regime1.slope) +
                       std::abs(fit.model.regime1.intercept - us.regime1.intercept) +
                       std::abs(fit.model.regime2.slope - us.regime2.slope) +
                       std::abs(fit.model.regime2.intercept - us.regime2.intercept);
        coef_count += 4;
    }
    const double hit_rate = static_cast<double>(within_one) / seeds;
    const double mean_abs_err = abs_err_sum / coef_count;
    const bool ok = hit_rate >= 0.90 && mean_abs_err <= 0.1;
    report(5, "noisy break recovery", ok,
           "break within +/-1 year in " + fmt(100.0 * hit_rate) +
               "% of 200 seeds (need >=90%), mean |coefficient error| = " + fmt(mean_abs_err) +
               " (need <=0.1)");
}

void criterion_6_ols_oracle() {
    std::mt19937 rng(20210);
    std::uniform_real_distribution<double> val(-5.0, 5.0);
    bool ok = true;
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 3 + rng() % 10;
        std::vector<double> x(n), y(n);
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = val(rng);
            y[i] = val(rng);
        }
        LinearFit fit;
        try {
            fit = ols(x, y);
        } catch (const InfeasibleError&) {
            continue;
        }
        double best = std::numeric_limits<double>::infinity();
        const int steps = 25;
        for (int i = -steps; i <= steps; ++i) {
            for (int j = -steps; j <= steps; ++j) {
                const double b = fit.slope + 0.5 * i / steps;
                const double a = fit.intercept + 0.5 * j / steps;
                double ssr = 0.0;
                for (std::size_t k = 0; k < n; ++k) {
                    const double e = y[k] - (a + b * x[k]);
                    ssr += e * e;
                }
                best = std::min(best, ssr);
            }
        }
        worst = std::max(worst, fit.ssr - best);
        if (best < fit.ssr - 1e-6) ok = false;
    }
    report(6, "OLS oracle equivalence", ok,
           "largest grid improvement over OLS = " + fmt(worst) + " (threshold 1e-6)");
}

void criterion_7_diagnostics_calibration() {
    std::mt19937 rng(20211);
    std::normal_distribution<double> d(0.0, 1.0);
    const int seeds = 500;

    int acf_inside = 0, dw_inside = 0, wn_rejected = 0, rw_not_rejected = 0;
    const double band = 1.96 / std::sqrt(200.0);
    for (int s = 0; s < seeds; ++s) {
        std::vector<double> e(200);
        for (double& v : e) v = d(rng);
        if (std::abs(acf(e, 1)[0]) < band) ++acf_inside;
        const double dw = durbin_watson(e);
        if (dw >= 1.6 && dw <= 2.4) ++dw_inside;

        std::vector<double> wn(e.begin(), e.begin() + 100);
        if (dickey_fuller(wn).unit_root_rejected) ++wn_rejected;

        std::vector<double> walk(100);
        walk[0] = d(rng);
        for (int t = 1; t < 100; ++t) walk[t] = walk[t - 1] + d(rng);
        if (!dickey_fuller(walk).unit_root_rejected) ++rw_not_rejected;
    }
    const double acf_rate = static_cast<double>(acf_inside) / seeds;
    const double dw_rate = static_cast<double>(dw_inside) / seeds;
    const double wn_rate = static_cast<double>(wn_rejected) / seeds;
    const double rw_rate = static_cast<double>(rw_not_rejected) / seeds;
    const bool ok = acf_rate >= 0.92 && acf_rate <= 0.98 && dw_rate >= 0.95 &&
                    wn_rate >= 0.90 && rw_rate >= 0.90;
    report(7, "diagnostics calibration", ok,
           "lag-1 ACF inside band " + fmt(100 * acf_rate) + "% (need 95+/-3), DW in [1.6,2.4] " +
               fmt(100 * dw_rate) + "% (need >=95), DF rejects white noise " +
               fmt(100 * wn_rate) + "% (need >=90), DF keeps random walk " + fmt(100 * rw_rate) +
               "% (need >=90)");
}

void criterion_8_paper_scale_reproduction() {
    const char* us_csv = std::getenv("OKUN_US_CSV");
    if (us_csv == nullptr) {
        report_skip(8, "reproduction on real data",
                    "optional; set OKUN_US_CSV (and OKUN_FRANCE_CSV) to user-exported "
                    "Conference Board/OECD CSVs to enable");
        return;
    }
    bool ok = true;
    std::string detail;
    try {
        std::ifstream in(us_csv);
        CountryDataset ds = parse_csv(in, "us");
        DerivedPair full = derive(ds);
        (void)full;
        FitOptions options;
        const FitResult fit = fit_okun(ds, Orientation::direct, BreakAuto{}, options);
        const bool break_ok = std::abs(fit.model.break_year - 1985) <= 1;
        const bool slopes_ok = std::abs(fit.model.regime1.slope - (-0.42)) <= 0.1 &&
                               std::abs(fit.model.regime2.slope - (-0.62)) <= 0.1;
        const bool r2_ok = fit.r2 >= 0.80;
        ok = break_ok && slopes_ok && r2_ok;
        detail = "US break " + fmt(fit.model.break_year) + ", slopes " +
                 fmt(fit.model.regime1.slope) + "/" + fmt(fit.model.regime2.slope) +
                 ", combined R2 " + fmt(fit.r2);
        if (const char* fr_csv = std::getenv("OKUN_FRANCE_CSV")) {
            std::ifstream fin(fr_csv);
            CountryDataset fr = parse_csv(fin, "france");
            const FitResult raw = fit_okun(fr, Orientation::reversed, 1987);
            FitOptions smooth;
            smooth.smooth_ma3 = true;
            const FitResult sm = fit_okun(fr, Orientation::reversed, 1987, smooth);
            ok = ok && sm.r2 > raw.r2;
            detail += "; France R2 raw " + fmt(raw.r2) + " vs smoothed " + fmt(sm.r2);
        }
    } catch (const std::exception& e) {
        ok = false;
        detail = std::string("failed: ") + e.what();
    }
    report(8, "reproduction on real data", ok, detail);
}

void criterion_9_cli_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "okun_acceptance_c9";
    fs::create_directories(dir);
    const fs::path csv = dir / "us.csv";
    const fs::path report_path = dir / "report.json";

    auto run = [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = okun::cli::run_cli(args, out, err);
        return std::pair<int, std::string>(code, out.str());
    };

    bool ok = true;
    std::string detail;
    const std::vector<std::vector<std::string>> commands = {
        {"simulate", "--preset", "us", "--noise", "0.4", "--seed", "9", "--u0", "30"},
        {"--output", csv.string(), "simulate", "--preset", "us", "--noise", "0.4", "--seed",
         "9", "--u0", "30"},
        {"fit", "--input", csv.string(), "--orientation", "direct", "--break", "auto"},
        {"--output", report_path.string(), "fit", "--input", csv.string(), "--orientation",
         "direct", "--break", "auto"},
        {"diagnose", "--input", csv.string(), "--preset", "us"},
        {"predict", "--preset", "canada", "--year", "2010", "--dlng", "2.1"},
        {"plot", "--report", report_path.string()},
        {"plot", "--report", report_path.string(), "--format", "svg"},
    };
    for (const auto& cmd : commands) {
        const auto first = run(cmd);
        const auto second = run(cmd);
        if (first.first != 0 || first != second) {
            ok = false;
            detail += "command '" + cmd[0] + "...' not byte-identical or failed; ";
        }
    }
    report(9, "CLI determinism", ok,
           ok ? "8 command reruns byte-identical (simulate/fit/diagnose/predict/plot)" : detail);
}

} // namespace

int main() {
    criterion_1_preset_fidelity();
    criterion_2_thresholds();
    criterion_3_canada_2010();
    criterion_4_zero_noise_identifiability();
    criterion_5_noisy_break_recovery();
    criterion_6_ols_oracle();
    criterion_7_diagnostics_calibration();
    criterion_8_paper_scale_reproduction();
    criterion_9_cli_determinism();

    std::cout << (failures == 0 ? "ACCEPTANCE OK" : "ACCEPTANCE FAILED") << " ("
              << (9 - failures - skips) << " passed, " << failures << " failed, " << skips
              << " skipped)\n";
    return failures == 0 ? 0 : 1;
}
