#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>
#include "ptw/kpp_reference.hpp"
#include "ptw/ptw_solver.hpp"

namespace ptw::io {

/// 17 significant digits ("%.17g"); NaN as "NaN", infinities as "inf"/"-inf".
std::string format_double(double x);

/// Inverse of format_double.
double parse_double(const std::string& text);

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;
};

/// Comma-separated, '\n' line endings, no trailing whitespace.
void write_csv(std::ostream& os, const CsvTable& table);
std::string to_csv(const CsvTable& table);
/// Throws std::invalid_argument on ragged rows or unparsable cells.
CsvTable parse_csv(const std::string& text);

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

struct ChartSpec {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    std::vector<Series> series;
};

/// Self-contained SVG 1.1 line chart on a fixed 800x600 viewBox. Non-finite
/// points (and non-positive x on a log axis) break the polyline.
std::string render_line_chart(const ChartSpec& chart);

nlohmann::ordered_json to_json(const WaveSolution& solution);
nlohmann::ordered_json to_json(const AsymptoticConstants& constants);
/// Accepts the keys written by to_json(AsymptoticConstants). Throws
/// std::invalid_argument when a_inf or b_inf is missing.
AsymptoticConstants constants_from_json(const nlohmann::json& j);

}  // namespace ptw::io
