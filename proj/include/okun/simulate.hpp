#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <variant>
#include <vector>

#include "okun/errors.hpp"
#include "okun/model.hpp"
#include "okun/series.hpp"

namespace okun {

/**
 * Deterministic random source. mt19937_64 is fully specified by the
 * standard; the uniform and gaussian mappings are implemented here rather
 * than with std distributions, whose algorithms are implementation-defined
 * and would break same-seed reproducibility across standard libraries.
 */
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via the Marsaglia polar method.
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double factor = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * factor;
        have_spare_ = true;
        return u * factor;
    }

private:
    std::mt19937_64 engine_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

/// Growth-path generator spec: seeded Gaussian draws of dlng, percent/yr.
struct GrowthSpec {
    double mean = 2.5;
    double sd = 2.0;
};

/// Either an explicit dlng value per year, or a generator spec.
using GrowthPath = std::variant<std::vector<double>, GrowthSpec>;

struct SimOptions {
    double noise_sd = 0.0;       // Gaussian noise on du, percentage points
    std::uint64_t seed = 0;
    int start_year = 0;          // 0 = model sample_start
    int end_year = 0;            // 0 = model sample_end
    double u0 = 8.0;             // unemployment level in the first year
    double g0 = 20000.0;         // GDP per capita level in the first year
    GrowthPath growth = GrowthSpec{};
};

struct SimulationResult {
    CountryDataset dataset;
    std::size_t clip_events = 0; // years where u had to be clamped to [0.5, 99]
};

/**
 * Builds level series consistent with the model: each year's du is the model
 * prediction for the year's dlng plus Gaussian(0, noise_sd); levels follow
 * G_t = G_{t−1}·exp(dlng_t/100) and u_t = u_{t−1} + du_t, with u clamped to
 * [0.5, 99] and every clamp counted. Deterministic for a given seed.
 */
inline SimulationResult simulate(const OkunModel& model, const SimOptions& options = {}) {
    const int start = options.start_year != 0 ? options.start_year : model.sample_start;
    const int end = options.end_year != 0 ? options.end_year : model.sample_end;
    if (end <= start)
        throw InfeasibleError("simulation range must span at least 2 years");
    if (options.noise_sd < 0.0)
        throw UsageError("noise_sd must be non-negative");
    if (options.u0 < 0.5 || options.u0 > 99.0)
        throw UsageError("u0 must lie in [0.5, 99]");
    if (options.g0 <= 0.0)
        throw UsageError("g0 must be positive");

    const std::size_t n_years = static_cast<std::size_t>(end - start + 1);
    Rng rng(options.seed);

    std::vector<double> dlng;
    if (const auto* given = std::get_if<std::vector<double>>(&options.growth)) {
        if (given->size() != n_years - 1)
            throw InfeasibleError("growth path length " + std::to_string(given->size()) +
                                  " does not match " + std::to_string(n_years - 1) +
                                  " simulated transitions");
        dlng = *given;
    } else {
        const GrowthSpec spec = std::get<GrowthSpec>(options.growth);
        dlng.resize(n_years - 1);
        for (double& v : dlng) v = spec.mean + spec.sd * rng.gaussian();
    }

    std::vector<double> u(n_years), g(n_years);
    u[0] = options.u0;
    g[0] = options.g0;
    std::size_t clips = 0;
    for (std::size_t i = 1; i < n_years; ++i) {
        const int year = start + static_cast<int>(i);
        double du = predict_du(model, year, dlng[i - 1]);
        if (options.noise_sd > 0.0) du += options.noise_sd * rng.gaussian();
        double next = u[i - 1] + du;
        if (next < 0.5) {
            next = 0.5;
            ++clips;
        } else if (next > 99.0) {
            next = 99.0;
            ++clips;
        }
        u[i] = next;
        g[i] = g[i - 1] * std::exp(dlng[i - 1] / 100.0);
    }

    return SimulationResult{
        CountryDataset(model.country, AnnualSeries(start, std::move(g)),
                       AnnualSeries(start, std::move(u))),
        clips};
}

} // namespace okun
