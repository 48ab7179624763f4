#pragma once

#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "alphaode/errors.hpp"

#include "json.hpp"

namespace alphaode {

// ---------------------------------------------------------------------------
// RunReport: the machine-readable result of one solver run.  Data sections
// are deterministic; numbers are emitted with 17 significant digits so the
// CSV round-trips bit-exactly.

struct ReportRow {
    double x = 0.0;
    std::vector<double> y;
    std::vector<double> alpha;     // NaN where not applicable
    std::vector<int> fallback;
    double tail = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> exact;     // present iff an oracle was supplied
    std::vector<double> abs_err;
};

struct RunReport {
    std::string problem;
    std::string method;
    std::size_t order = 0;
    double h = 0.0;
    double eps_den = 0.0;
    std::size_t dimension = 0;
    bool has_exact = false;
    std::vector<ReportRow> rows;
    double max_abs_err = 0.0;
    double max_rel_err = 0.0;
};

namespace detail {

inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace detail

inline void write_csv(const RunReport& r, std::ostream& os) {
    os << "x";
    for (std::size_t k = 1; k <= r.dimension; ++k) os << ",y" << k;
    for (std::size_t k = 1; k <= r.dimension; ++k) os << ",alpha" << k;
    for (std::size_t k = 1; k <= r.dimension; ++k) os << ",fallback" << k;
    os << ",tail";
    if (r.has_exact) {
        for (std::size_t k = 1; k <= r.dimension; ++k) os << ",exact" << k;
        for (std::size_t k = 1; k <= r.dimension; ++k) os << ",abserr" << k;
    }
    os << "\n";
    for (const ReportRow& row : r.rows) {
        os << detail::fmt17(row.x);
        for (double v : row.y) os << "," << detail::fmt17(v);
        for (double v : row.alpha) os << "," << detail::fmt17(v);
        for (int v : row.fallback) os << "," << v;
        os << "," << detail::fmt17(row.tail);
        if (r.has_exact) {
            for (double v : row.exact) os << "," << detail::fmt17(v);
            for (double v : row.abs_err) os << "," << detail::fmt17(v);
        }
        os << "\n";
    }
}

/// Parses a data CSV back into (header, numeric rows); NaN cells survive.
struct ParsedCsv {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

inline ParsedCsv parse_csv(std::istream& is) {
    ParsedCsv out;
    std::string line;
    if (!std::getline(is, line)) throw MalformedExpression("empty CSV input");
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) out.header.push_back(cell);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::stringstream ls(line);
        while (std::getline(ls, cell, ',')) row.push_back(std::strtod(cell.c_str(), nullptr));
        out.rows.push_back(std::move(row));
    }
    return out;
}

inline nlohmann::json summary_json(const RunReport& r) {
    nlohmann::json j;
    j["problem"] = r.problem;
    j["method"] = r.method;
    j["config"] = {{"order", r.order}, {"h", r.h}, {"eps_den", r.eps_den}};
    j["dimension"] = r.dimension;
    j["rows"] = r.rows.size();
    if (r.has_exact) {
        j["max_abs_err"] = r.max_abs_err;
        j["max_rel_err"] = r.max_rel_err;
    }
    return j;
}

inline nlohmann::json full_json(const RunReport& r) {
    nlohmann::json j = summary_json(r);
    nlohmann::json rows = nlohmann::json::array();
    for (const ReportRow& row : r.rows) {
        nlohmann::json jr;
        jr["x"] = row.x;
        jr["y"] = row.y;
        jr["alpha"] = row.alpha;
        jr["fallback"] = row.fallback;
        jr["tail"] = row.tail;
        if (r.has_exact) {
            jr["exact"] = row.exact;
            jr["abserr"] = row.abs_err;
        }
        rows.push_back(std::move(jr));
    }
    j["data"] = std::move(rows);
    return j;
}

}  // namespace alphaode
