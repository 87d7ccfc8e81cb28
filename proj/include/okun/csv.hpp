#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <sstream>
#include <string>
#include <vector>

#include "okun/errors.hpp"
#include "okun/series.hpp"

namespace okun {

namespace detail {

inline std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

inline std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    out.push_back(trim(cur));
    return out;
}

inline double parse_number(const std::string& cell, int line_no, const char* column) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    // from_chars accepts "nan" and "inf" spellings; those are not data
    if (ec != std::errc() || ptr != last || cell.empty() || !std::isfinite(value))
        throw DataError("line " + std::to_string(line_no) + ": non-numeric " +
                        column + " '" + cell + "'");
    return value;
}

inline int parse_year(const std::string& cell, int line_no) {
    const char* first = cell.data();
    const char* last = cell.data() + cell.size();
    int value = 0;
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last || cell.empty())
        throw DataError("line " + std::to_string(line_no) + ": non-numeric year '" +
                        cell + "'");
    return value;
}

/// Shortest decimal text that parses back to exactly the same double.
inline std::string format_double(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

} // namespace detail

/**
 * Parses the ingestion format: UTF-8, comma separated, header
 * `year,gdp_pc,unemployment`, one row per year, '.' decimal separator.
 * Lines beginning with '#' are ignored. Rows may arrive unsorted and are
 * reordered ascending by year; duplicate years and gaps are hard errors.
 * Every error message carries the 1-based physical line number.
 */
inline CountryDataset parse_csv(std::istream& in, const std::string& country = "") {
    struct Row {
        int year;
        double gdp;
        double unemp;
        int line_no;
    };
    std::vector<Row> rows;
    std::string line;
    int line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        std::string stripped = detail::trim(line);
        if (stripped.empty() || stripped[0] == '#') continue;
        if (!header_seen) {
            if (stripped != "year,gdp_pc,unemployment")
                throw DataError("line " + std::to_string(line_no) +
                                ": expected header 'year,gdp_pc,unemployment', got '" +
                                stripped + "'");
            header_seen = true;
            continue;
        }
        std::vector<std::string> cells = detail::split_fields(stripped);
        if (cells.size() != 3)
            throw DataError("line " + std::to_string(line_no) + ": expected 3 columns, got " +
                            std::to_string(cells.size()));
        Row r;
        r.year = detail::parse_year(cells[0], line_no);
        r.gdp = detail::parse_number(cells[1], line_no, "gdp_pc");
        r.unemp = detail::parse_number(cells[2], line_no, "unemployment");
        r.line_no = line_no;
        if (r.gdp <= 0.0)
            throw DataError("line " + std::to_string(line_no) + ": gdp_pc must be positive");
        if (r.unemp < 0.0 || r.unemp >= 100.0)
            throw DataError("line " + std::to_string(line_no) +
                            ": unemployment must be in [0, 100)");
        rows.push_back(r);
    }
    if (!header_seen)
        throw DataError("empty input: missing header 'year,gdp_pc,unemployment'");
    if (rows.empty())
        throw DataError("no data rows after header");

    std::stable_sort(rows.begin(), rows.end(),
                     [](const Row& a, const Row& b) { return a.year < b.year; });
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].year == rows[i - 1].year)
            throw DataError("line " + std::to_string(rows[i].line_no) + ": duplicate year " +
                            std::to_string(rows[i].year));
        if (rows[i].year != rows[i - 1].year + 1)
            throw DataError("line " + std::to_string(rows[i].line_no) +
                            ": gap in years between " + std::to_string(rows[i - 1].year) +
                            " and " + std::to_string(rows[i].year));
    }

    std::vector<double> gdp, unemp;
    gdp.reserve(rows.size());
    unemp.reserve(rows.size());
    for (const Row& r : rows) {
        gdp.push_back(r.gdp);
        unemp.push_back(r.unemp);
    }
    const int start = rows.front().year;
    return CountryDataset(country, AnnualSeries(start, std::move(gdp)),
                          AnnualSeries(start, std::move(unemp)));
}

inline CountryDataset parse_csv_text(const std::string& text, const std::string& country = "") {
    std::istringstream in(text);
    return parse_csv(in, country);
}

/// Writes the ingestion format back out. Levels are printed with shortest
/// round-trip precision so parse(write(ds)) reproduces the values exactly.
/// Optional comment lines are emitted before the header, '#'-prefixed.
inline std::string write_csv(const CountryDataset& ds,
                             const std::vector<std::string>& comments = {}) {
    std::string out;
    for (const std::string& c : comments) out += "# " + c + "\n";
    out += "year,gdp_pc,unemployment\n";
    for (std::size_t i = 0; i < ds.size(); ++i) {
        out += std::to_string(ds.start_year() + static_cast<int>(i));
        out += ',';
        out += detail::format_double(ds.gdp_pc()[i]);
        out += ',';
        out += detail::format_double(ds.unemployment()[i]);
        out += '\n';
    }
    return out;
}

} // namespace okun
