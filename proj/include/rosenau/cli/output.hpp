#pragma once

// Result rows, CSV / JSON-lines serialization and log-log SVG plots.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

namespace rosenau::cli {

inline const char* const kCsvHeader = "kernel,epsilon,t,quantity,value,argsup,grid_L,grid_N";

struct ResultRow {
    std::string kernel;
    double epsilon = 0.0;
    double t = 0.0;
    std::string quantity;
    double value = 0.0;
    double argsup = 0.0;
    double grid_length = 0.0;
    std::size_t grid_points = 0;
};

struct CheckRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;
    bool satisfied = false;
    std::string kernel;
    double epsilon = 0.0;
    double t = 0.0;
    std::string initial;
};

/// 17 significant digits; inf/nan spelled as in C.
inline std::string format_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline void write_csv(std::ostream& out, const std::vector<ResultRow>& rows) {
    out << kCsvHeader << '\n';
    for (const auto& r : rows)
        out << r.kernel << ',' << format_real(r.epsilon) << ',' << format_real(r.t) << ',' << r.quantity << ','
            << format_real(r.value) << ',' << format_real(r.argsup) << ',' << format_real(r.grid_length) << ','
            << r.grid_points << '\n';
}

inline void write_csv(const std::string& path, const std::vector<ResultRow>& rows) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    write_csv(out, rows);
}

inline std::vector<ResultRow> read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw std::invalid_argument("cannot open CSV '" + path + "'");
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader)
        throw std::invalid_argument(path + ": header must be '" + std::string(kCsvHeader) + "'");
    std::vector<ResultRow> rows;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty())
            continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string item;
        while (std::getline(ss, item, ','))
            f.push_back(item);
        if (f.size() != 8)
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": expected 8 fields");
        try {
            rows.push_back({f[0], std::stod(f[1]), std::stod(f[2]), f[3], std::stod(f[4]), std::stod(f[5]),
                            std::stod(f[6]), static_cast<std::size_t>(std::stoull(f[7]))});
        } catch (const std::exception&) {
            throw std::invalid_argument(path + ":" + std::to_string(line_no) + ": malformed number");
        }
    }
    return rows;
}

inline void write_checks_jsonl(std::ostream& out, const std::vector<CheckRecord>& checks) {
    for (const auto& c : checks) {
        nlohmann::ordered_json j;
        j["name"] = c.name;
        j["lhs"] = c.lhs;
        j["rhs"] = c.rhs;
        j["margin"] = c.margin;
        j["satisfied"] = c.satisfied;
        j["params"] = {{"kernel", c.kernel}, {"epsilon", c.epsilon}, {"t", c.t}, {"initial", c.initial}};
        out << j.dump() << '\n';
    }
}

inline void write_checks_jsonl(const std::string& path, const std::vector<CheckRecord>& checks) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write '" + path + "'");
    write_checks_jsonl(out, checks);
}

/// Log-log SVG of one quantity against t, one polyline per (kernel, eps),
/// with dashed guides of slope -1/2, -3/4 and -1 in log(1 + t).
inline std::string render_svg(const std::string& quantity, const std::vector<ResultRow>& rows) {
    using Key = std::pair<std::string, double>;
    std::map<Key, std::vector<std::pair<double, double>>> series;
    for (const auto& r : rows)
        if (r.quantity == quantity && r.t > 0.0 && r.value > 0.0 && std::isfinite(r.value))
            series[{r.kernel, r.epsilon}].emplace_back(r.t, r.value);

    const double width = 640, height = 420, left = 70, right = 170, top = 30, bottom = 50;
    const double pw = width - left - right, ph = height - top - bottom;
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (auto& [k, pts] : series) {
        std::sort(pts.begin(), pts.end());
        for (const auto& [t, v] : pts) {
            x0 = std::min(x0, std::log10(1.0 + t));
            x1 = std::max(x1, std::log10(1.0 + t));
            y0 = std::min(y0, std::log10(v));
            y1 = std::max(y1, std::log10(v));
        }
    }
    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << left << "\" y=\"18\">" << quantity << " (log-log)</text>\n";
    if (series.empty()) {
        svg << "<text x=\"" << left << "\" y=\"" << top + ph / 2 << "\">no positive data</text>\n</svg>\n";
        return svg.str();
    }
    if (x1 - x0 < 1e-12) {
        x0 -= 0.5;
        x1 += 0.5;
    }
    if (y1 - y0 < 1e-12) {
        y0 -= 0.5;
        y1 += 0.5;
    }
    auto px = [&](double lx) { return left + (lx - x0) / (x1 - x0) * pw; };
    auto py = [&](double ly) { return top + (y1 - ly) / (y1 - y0) * ph; };
    auto num = [](double x) {
        char b[32];
        std::snprintf(b, sizeof b, "%.2f", x);
        return std::string(b);
    };

    svg << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw << "\" height=\"" << ph
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(std::ceil(x0)); d <= static_cast<int>(std::floor(x1)); ++d)
        svg << "<text x=\"" << num(px(d)) << "\" y=\"" << height - bottom + 16 << "\" text-anchor=\"middle\">1e"
            << d << "</text>\n";
    for (int d = static_cast<int>(std::ceil(y0)); d <= static_cast<int>(std::floor(y1)); ++d)
        svg << "<text x=\"" << left - 6 << "\" y=\"" << num(py(d) + 4) << "\" text-anchor=\"end\">1e" << d
            << "</text>\n";
    svg << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 12 << "\" text-anchor=\"middle\">1 + t</text>\n";

    svg << "<defs><clipPath id=\"plot\"><rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << pw
        << "\" height=\"" << ph << "\"/></clipPath></defs>\n";
    const double guides[] = {-0.5, -0.75, -1.0};
    const char* guide_labels[] = {"slope -1/2", "slope -3/4", "slope -1"};
    for (int i = 0; i < 3; ++i) {
        const double ya = y1, yb = y1 + guides[i] * (x1 - x0);
        svg << "<line x1=\"" << num(px(x0)) << "\" y1=\"" << num(py(ya)) << "\" x2=\"" << num(px(x1))
            << "\" y2=\"" << num(py(yb)) << "\" stroke=\"gray\" stroke-dasharray=\"" << 2 + 3 * i
            << ",4\" clip-path=\"url(#plot)\"/>\n";
        svg << "<text x=\"" << width - right + 10 << "\" y=\"" << top + 14 * (i + 1)
            << "\" fill=\"gray\">- - " << guide_labels[i] << "</text>\n";
    }
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b", "#17becf"};
    int idx = 0;
    for (const auto& [key, pts] : series) {
        const char* col = colors[idx % 7];
        svg << "<polyline fill=\"none\" stroke=\"" << col << "\" stroke-width=\"1.5\" points=\"";
        for (const auto& [t, v] : pts)
            svg << num(px(std::log10(1.0 + t))) << ',' << num(py(std::log10(v))) << ' ';
        svg << "\"/>\n";
        for (const auto& [t, v] : pts)
            svg << "<circle cx=\"" << num(px(std::log10(1.0 + t))) << "\" cy=\"" << num(py(std::log10(v)))
                << "\" r=\"2.5\" fill=\"" << col << "\"/>\n";
        svg << "<text x=\"" << width - right + 10 << "\" y=\"" << top + 60 + 16 * idx << "\" fill=\"" << col
            << "\">" << key.first << " eps=" << format_real(key.second) << "</text>\n";
        ++idx;
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace rosenau::cli
