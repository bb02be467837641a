#pragma once

#include <fstream>
#include <string>
#include <vector>

#include "cdh/cli/config.hpp"

namespace cdh::cli {

/// series.csv row: one sample of a solution, profile or error curve.
struct SeriesRow {
    std::string experiment;
    double t = 0.0;
    double y_or_r = 0.0;
    std::string value_kind;  // solution | profile | error
    double value = 0.0;
};

/// summary.csv row: one checked metric.
struct SummaryRow {
    std::string experiment;
    std::string metric;
    double value = 0.0;
    std::string tolerance;  // human-readable acceptance band
    bool pass = true;
};

inline void write_series_csv(const std::string& path, const std::vector<SeriesRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "experiment,t,y_or_r,value_kind,value\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << format_number(r.t) << ',' << format_number(r.y_or_r) << ',' << r.value_kind << ','
            << format_number(r.value) << '\n';
}

inline void write_summary_csv(const std::string& path, const std::vector<SummaryRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << "experiment,metric,value,tolerance,pass\n";
    for (const auto& r : rows)
        out << r.experiment << ',' << r.metric << ',' << format_number(r.value) << ',' << r.tolerance << ','
            << (r.pass ? "true" : "false") << '\n';
}

}  // namespace cdh::cli
