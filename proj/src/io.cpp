#include "ptw/io.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ptw::io {

std::string format_double(double x) {
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.17g", x);
    return buf.data();
}

double parse_double(const std::string& text) {
    if (text == "NaN") return std::numeric_limits<double>::quiet_NaN();
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    double value = 0.0;
    const char* first = text.data();
    const char* last = first + text.size();
    if (first != last && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec == std::errc::invalid_argument || first == last) {
        throw std::invalid_argument("not a number: '" + text + "'");
    }
    if (ec == std::errc::result_out_of_range) throw std::invalid_argument("out of range: '" + text + "'");
    if (ptr != last) throw std::invalid_argument("trailing characters in '" + text + "'");
    return value;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        os << (i ? "," : "") << table.header[i];
    }
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            os << (i ? "," : "") << format_double(row[i]);
        }
        os << '\n';
    }
}

std::string to_csv(const CsvTable& table) {
    std::ostringstream os;
    write_csv(os, table);
    return os.str();
}

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

CsvTable parse_csv(const std::string& text) {
    CsvTable table;
    std::istringstream is(text);
    std::string line;
    if (!std::getline(is, line)) return table;
    table.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split(line);
        if (cells.size() != table.header.size()) {
            throw std::invalid_argument("CSV row width does not match header");
        }
        std::vector<double> row;
        row.reserve(cells.size());
        for (const auto& c : cells) row.push_back(parse_double(c));
        table.rows.push_back(std::move(row));
    }
    return table;
}

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 600.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 190.0;
constexpr double kTop = 50.0;
constexpr double kBottom = 70.0;

constexpr std::array<const char*, 8> kPalette = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                                                 "#9467bd", "#8c564b", "#e377c2", "#17becf"};

std::string escape_xml(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string fmt(double x, int prec = 2) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%.*f", prec, x);
    return buf.data();
}

std::string tick_label(double x) {
    std::array<char, 40> buf{};
    std::snprintf(buf.data(), buf.size(), "%g", x);
    return buf.data();
}

double nice_step(double span, int target_ticks) {
    const double raw = span / target_ticks;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    const double norm = raw / mag;
    const double nice = norm < 1.5 ? 1.0 : norm < 3.0 ? 2.0 : norm < 7.0 ? 5.0 : 10.0;
    return nice * mag;
}

}  // namespace

std::string render_line_chart(const ChartSpec& chart) {
    auto usable_x = [&](double x) { return std::isfinite(x) && (!chart.log_x || x > 0.0); };
    auto tx = [&](double x) { return chart.log_x ? std::log10(x) : x; };

    double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo;
    double y_lo = x_lo, y_hi = -x_lo;
    for (const auto& s : chart.series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable_x(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_lo = std::min(x_lo, tx(s.x[i]));
            x_hi = std::max(x_hi, tx(s.x[i]));
            y_lo = std::min(y_lo, s.y[i]);
            y_hi = std::max(y_hi, s.y[i]);
        }
    }
    if (!(x_lo <= x_hi)) { x_lo = 0.0; x_hi = 1.0; }
    if (!(y_lo <= y_hi)) { y_lo = 0.0; y_hi = 1.0; }
    if (x_hi == x_lo) { x_lo -= 0.5; x_hi += 0.5; }
    if (y_hi == y_lo) { y_lo -= 0.5; y_hi += 0.5; }
    const double y_pad = 0.05 * (y_hi - y_lo);
    y_lo -= y_pad;
    y_hi += y_pad;

    const double plot_w = kWidth - kLeft - kRight;
    const double plot_h = kHeight - kTop - kBottom;
    auto px = [&](double x) { return kLeft + (tx(x) - x_lo) / (x_hi - x_lo) * plot_w; };
    auto py = [&](double y) { return kTop + (y_hi - y) / (y_hi - y_lo) * plot_h; };

    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"800\" height=\"600\" "
          "viewBox=\"0 0 800 600\">\n"
       << "<rect x=\"0\" y=\"0\" width=\"800\" height=\"600\" fill=\"white\"/>\n"
       << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"30\" text-anchor=\"middle\" "
          "font-family=\"sans-serif\" font-size=\"16\">" << escape_xml(chart.title) << "</text>\n"
       << "<rect x=\"" << fmt(kLeft) << "\" y=\"" << fmt(kTop) << "\" width=\"" << fmt(plot_w)
       << "\" height=\"" << fmt(plot_h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // x ticks: decades on a log axis, nice steps otherwise.
    std::vector<double> x_ticks;
    if (chart.log_x) {
        for (double k = std::ceil(x_lo); k <= std::floor(x_hi); k += 1.0) {
            x_ticks.push_back(std::pow(10.0, k));
        }
    } else {
        const double step = nice_step(x_hi - x_lo, 8);
        for (double t = std::ceil(x_lo / step) * step; t <= x_hi + 1e-12 * step; t += step) {
            x_ticks.push_back(t);
        }
    }
    for (double t : x_ticks) {
        const double x = px(t);
        os << "<line x1=\"" << fmt(x) << "\" y1=\"" << fmt(kTop + plot_h) << "\" x2=\"" << fmt(x)
           << "\" y2=\"" << fmt(kTop + plot_h + 6) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << fmt(x) << "\" y=\"" << fmt(kTop + plot_h + 22)
           << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">"
           << tick_label(t) << "</text>\n";
    }
    const double y_step = nice_step(y_hi - y_lo, 6);
    for (double t = std::ceil(y_lo / y_step) * y_step; t <= y_hi; t += y_step) {
        const double y = py(t);
        os << "<line x1=\"" << fmt(kLeft - 6) << "\" y1=\"" << fmt(y) << "\" x2=\"" << fmt(kLeft)
           << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n"
           << "<text x=\"" << fmt(kLeft - 10) << "\" y=\"" << fmt(y + 4)
           << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\">"
           << tick_label(std::abs(t) < 1e-12 * y_step ? 0.0 : t) << "</text>\n";
    }
    os << "<text x=\"" << fmt(kLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 20)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\">"
       << escape_xml(chart.x_label) << "</text>\n"
       << "<text x=\"20\" y=\"" << fmt(kTop + plot_h / 2)
       << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"14\" "
          "transform=\"rotate(-90 20 " << fmt(kTop + plot_h / 2) << ")\">"
       << escape_xml(chart.y_label) << "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const Series& s = chart.series[k];
        const char* color = kPalette[k % kPalette.size()];
        std::vector<std::string> runs;
        std::string current;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable_x(s.x[i]) || !std::isfinite(s.y[i])) {
                if (!current.empty()) runs.push_back(std::move(current));
                current.clear();
                continue;
            }
            if (!current.empty()) current += ' ';
            current += fmt(px(s.x[i])) + "," + fmt(py(s.y[i]));
        }
        if (!current.empty()) runs.push_back(std::move(current));
        for (const auto& pts : runs) {
            os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\""
               << pts << "\"/>\n";
        }
        const double ly = kTop + 15.0 + 20.0 * static_cast<double>(k);
        const double lx = kWidth - kRight + 15.0;
        os << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 25)
           << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n"
           << "<text x=\"" << fmt(lx + 32) << "\" y=\"" << fmt(ly + 4)
           << "\" font-family=\"sans-serif\" font-size=\"12\">" << escape_xml(s.name)
           << "</text>\n";
    }
    os << "</svg>\n";
    return os.str();
}

nlohmann::ordered_json to_json(const WaveSolution& solution) {
    nlohmann::ordered_json j;
    j["u_c"] = solution.u_c;
    j["v_star"] = solution.v_star;
    j["residual"] = solution.residual;
    j["n_iterations"] = solution.n_iterations;
    j["bracket"] = {solution.bracket.first, solution.bracket.second};
    return j;
}

nlohmann::ordered_json to_json(const AsymptoticConstants& constants) {
    nlohmann::ordered_json j;
    j["a_inf"] = constants.a_inf;
    j["b_inf"] = constants.b_inf;
    j["gamma"] = constants.gamma;
    j["window"] = {constants.fit_window.first, constants.fit_window.second};
    j["residual"] = constants.fit_residual;
    return j;
}

AsymptoticConstants constants_from_json(const nlohmann::json& j) {
    if (!j.is_object() || !j.contains("a_inf") || !j.contains("b_inf")) {
        throw std::invalid_argument("constants JSON needs numeric keys a_inf and b_inf");
    }
    AsymptoticConstants c;
    try {
        c.a_inf = j.at("a_inf").get<double>();
        c.b_inf = j.at("b_inf").get<double>();
        if (j.contains("gamma")) c.gamma = j.at("gamma").get<double>();
        if (j.contains("residual")) c.fit_residual = j.at("residual").get<double>();
        if (j.contains("window")) {
            const auto& w = j.at("window");
            c.fit_window = {w.at(0).get<double>(), w.at(1).get<double>()};
        }
    } catch (const nlohmann::json::exception& e) {
        throw std::invalid_argument(std::string("malformed constants JSON: ") + e.what());
    }
    return c;
}

}  // namespace ptw::io
