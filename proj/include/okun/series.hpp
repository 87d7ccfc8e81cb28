#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "okun/errors.hpp"

namespace okun {

/**
 * A sequence of annual observations over consecutive calendar years.
 * Observation i belongs to year start_year + i. Values must be finite.
 */
class AnnualSeries {
public:
    AnnualSeries(int start_year, std::vector<double> values)
        : start_year_(start_year), values_(std::move(values)) {
        if (values_.empty())
            throw DataError("annual series must not be empty");
        for (std::size_t i = 0; i < values_.size(); ++i) {
            if (!std::isfinite(values_[i]))
                throw DataError("non-finite value in year " +
                                std::to_string(start_year_ + static_cast<int>(i)));
        }
    }

    int start_year() const { return start_year_; }
    int end_year() const { return start_year_ + static_cast<int>(values_.size()) - 1; }
    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Value for a calendar year; the year must lie inside the series range.
    double at_year(int year) const {
        if (year < start_year() || year > end_year())
            throw DataError("year " + std::to_string(year) + " outside series range");
        return values_[static_cast<std::size_t>(year - start_year_)];
    }

private:
    int start_year_;
    std::vector<double> values_;
};

/**
 * Parallel annual series of real GDP per capita (constant prices, > 0)
 * and the unemployment rate (percent of labour force, in [0, 100))
 * covering the identical year range.
 */
class CountryDataset {
public:
    CountryDataset(std::string country, AnnualSeries gdp_pc, AnnualSeries unemployment)
        : country_(std::move(country)),
          gdp_pc_(std::move(gdp_pc)),
          unemployment_(std::move(unemployment)) {
        if (gdp_pc_.start_year() != unemployment_.start_year() ||
            gdp_pc_.size() != unemployment_.size())
            throw DataError("gdp_pc and unemployment must cover the identical year range");
        for (std::size_t i = 0; i < gdp_pc_.size(); ++i) {
            const int year = gdp_pc_.start_year() + static_cast<int>(i);
            if (gdp_pc_[i] <= 0.0)
                throw DataError("gdp_pc must be positive (year " + std::to_string(year) + ")");
            if (unemployment_[i] < 0.0 || unemployment_[i] >= 100.0)
                throw DataError("unemployment must be in [0, 100) (year " +
                                std::to_string(year) + ")");
        }
    }

    const std::string& country() const { return country_; }
    const AnnualSeries& gdp_pc() const { return gdp_pc_; }
    const AnnualSeries& unemployment() const { return unemployment_; }
    int start_year() const { return gdp_pc_.start_year(); }
    int end_year() const { return gdp_pc_.end_year(); }
    std::size_t size() const { return gdp_pc_.size(); }

private:
    std::string country_;
    AnnualSeries gdp_pc_;
    AnnualSeries unemployment_;
};

/**
 * The differenced variables of the piecewise Okun regression, aligned by year:
 * du[i] and dlng[i] both describe calendar year start_year + i.
 *
 *   du    change in unemployment rate, percentage points per year
 *   dlng  log growth rate of real GDP per capita, percent per year
 */
struct DerivedPair {
    int start_year = 0;
    std::vector<double> du;
    std::vector<double> dlng;

    std::size_t size() const { return du.size(); }
    int end_year() const { return start_year + static_cast<int>(du.size()) - 1; }
    int year_of(std::size_t i) const { return start_year + static_cast<int>(i); }
};

/// Which variable is the regression response. direct: du on dlng.
/// reversed: dlng on du.
enum class Orientation { direct, reversed };

inline std::string to_string(Orientation o) {
    return o == Orientation::direct ? "direct" : "reversed";
}

inline Orientation orientation_from_string(const std::string& s) {
    if (s == "direct") return Orientation::direct;
    if (s == "reversed") return Orientation::reversed;
    throw UsageError("unknown orientation '" + s + "' (expected direct|reversed)");
}

/// 100·(ln g_{i+1} − ln g_i), percent per year. Output starts one year later
/// and is one observation shorter.
inline AnnualSeries log_growth(const AnnualSeries& g) {
    if (g.size() < 2)
        throw InfeasibleError("log_growth needs at least 2 observations");
    std::vector<double> out;
    out.reserve(g.size() - 1);
    for (std::size_t i = 0; i + 1 < g.size(); ++i) {
        if (g[i] <= 0.0 || g[i + 1] <= 0.0)
            throw DataError("log_growth requires positive levels");
        out.push_back(100.0 * (std::log(g[i + 1]) - std::log(g[i])));
    }
    return AnnualSeries(g.start_year() + 1, std::move(out));
}

/// u_{i+1} − u_i. Output starts one year later and is one observation shorter.
inline AnnualSeries first_diff(const AnnualSeries& u) {
    if (u.size() < 2)
        throw InfeasibleError("first_diff needs at least 2 observations");
    std::vector<double> out;
    out.reserve(u.size() - 1);
    for (std::size_t i = 0; i + 1 < u.size(); ++i)
        out.push_back(u[i + 1] - u[i]);
    return AnnualSeries(u.start_year() + 1, std::move(out));
}

/// Centered three-point moving average. Both endpoints are dropped, so the
/// output is two observations shorter and starts one year later.
inline AnnualSeries ma3(const AnnualSeries& s) {
    if (s.size() < 3)
        throw InfeasibleError("ma3 needs at least 3 observations");
    std::vector<double> out;
    out.reserve(s.size() - 2);
    for (std::size_t i = 1; i + 1 < s.size(); ++i)
        out.push_back((s[i - 1] + s[i] + s[i + 1]) / 3.0);
    return AnnualSeries(s.start_year() + 1, std::move(out));
}

/// Differences both sides of the dataset into the regression variables,
/// aligned on the same years.
inline DerivedPair derive(const CountryDataset& ds) {
    if (ds.size() < 2)
        throw InfeasibleError("dataset needs at least 2 years to difference");
    AnnualSeries du = first_diff(ds.unemployment());
    AnnualSeries dlng = log_growth(ds.gdp_pc());
    DerivedPair pair;
    pair.start_year = du.start_year();
    pair.du = du.values();
    pair.dlng = dlng.values();
    return pair;
}

/// MA(3) applied to both members of the pair; keeps year alignment.
inline DerivedPair ma3(const DerivedPair& p) {
    AnnualSeries du = ma3(AnnualSeries(p.start_year, p.du));
    AnnualSeries dlng = ma3(AnnualSeries(p.start_year, p.dlng));
    DerivedPair out;
    out.start_year = du.start_year();
    out.du = du.values();
    out.dlng = dlng.values();
    return out;
}

} // namespace okun
