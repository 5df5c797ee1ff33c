#include "mcmono/output.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "mcmono/errors.hpp"

namespace mcm {

std::string formatDouble(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void SeriesTable::addColumn(const std::string& name, std::vector<double> values) {
    names_.push_back(name);
    cols_.push_back(std::move(values));
}

std::size_t SeriesTable::rowCount() const {
    std::size_t rows = 0;
    for (const auto& c : cols_) rows = std::max(rows, c.size());
    return rows;
}

std::string SeriesTable::toCsv() const {
    std::string out;
    for (std::size_t c = 0; c < names_.size(); ++c) {
        if (c) out += ',';
        out += names_[c];
    }
    out += '\n';
    const std::size_t rows = rowCount();
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols_.size(); ++c) {
            if (c) out += ',';
            if (r < cols_[c].size()) out += formatDouble(cols_[c][r]);
        }
        out += '\n';
    }
    return out;
}

void SeriesTable::writeCsv(const std::string& path) const {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open '" + path + "' for writing");
    const std::string csv = toCsv();
    std::fwrite(csv.data(), 1, csv.size(), f);
    std::fclose(f);
}

void SeriesTable::writeSvg(const std::string& path, const std::vector<std::string>& series,
                           const std::string& title) const {
    const int width = 760, height = 420;
    const int ml = 70, mr = 20, mt = 40, mb = 50;
    if (cols_.empty() || cols_[0].empty()) throw Error("nothing to plot");
    const std::vector<double>& xs = cols_[0];

    std::vector<std::size_t> plotCols;
    for (const auto& name : series) {
        auto it = std::find(names_.begin(), names_.end(), name);
        if (it == names_.end()) throw Error("unknown series '" + name + "'");
        plotCols.push_back(static_cast<std::size_t>(it - names_.begin()));
    }

    double xmin = xs[0], xmax = xs[0], ymin = 0, ymax = 0;
    bool first = true;
    for (double x : xs) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
    }
    for (std::size_t c : plotCols)
        for (double v : cols_[c]) {
            if (!std::isfinite(v)) continue;
            if (first) {
                ymin = ymax = v;
                first = false;
            }
            ymin = std::min(ymin, v);
            ymax = std::max(ymax, v);
        }
    if (xmax - xmin <= 0) xmax = xmin + 1;
    if (ymax - ymin <= 0) {
        ymax += 0.5;
        ymin -= 0.5;
    }
    const double ypad = 0.05 * (ymax - ymin);
    ymin -= ypad;
    ymax += ypad;

    auto px = [&](double x) {
        return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr);
    };
    auto py = [&](double y) {
        return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
    };
    auto num = [](double v) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6g", v);
        return std::string(buf);
    };

    static const char* palette[] = {"#1f6fb2", "#c23b22", "#2e8b57", "#8860b2", "#b8860b"};
    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(width) +
           "\" height=\"" + std::to_string(height) + "\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg += "<text x=\"" + std::to_string(width / 2) + "\" y=\"24\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\" font-size=\"15\">" + title + "</text>\n";
    // Axes.
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(height - mb) + "\" x2=\"" +
           num(width - mr) + "\" y2=\"" + num(height - mb) + "\" stroke=\"black\"/>\n";
    svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(mt) + "\" x2=\"" + num(ml) +
           "\" y2=\"" + num(height - mb) + "\" stroke=\"black\"/>\n";
    for (int i = 0; i <= 5; ++i) {
        const double x = xmin + (xmax - xmin) * i / 5.0;
        const double y = ymin + (ymax - ymin) * i / 5.0;
        svg += "<text x=\"" + num(px(x)) + "\" y=\"" + num(height - mb + 18) +
               "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"11\">" +
               num(x) + "</text>\n";
        svg += "<text x=\"" + num(ml - 6) + "\" y=\"" + num(py(y) + 4) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\">" +
               num(y) + "</text>\n";
        svg += "<line x1=\"" + num(ml) + "\" y1=\"" + num(py(y)) + "\" x2=\"" +
               num(width - mr) + "\" y2=\"" + num(py(y)) +
               "\" stroke=\"#dddddd\" stroke-width=\"0.5\"/>\n";
    }
    for (std::size_t s = 0; s < plotCols.size(); ++s) {
        const auto& col = cols_[plotCols[s]];
        std::string pts;
        for (std::size_t r = 0; r < xs.size() && r < col.size(); ++r) {
            if (!std::isfinite(col[r])) continue;
            pts += num(px(xs[r])) + "," + num(py(col[r])) + " ";
        }
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(palette[s % 5]) +
               "\" stroke-width=\"1.5\" points=\"" + pts + "\"/>\n";
        svg += "<text x=\"" + num(width - mr - 6) + "\" y=\"" + num(mt + 16 + 16 * s) +
               "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" fill=\"" +
               palette[s % 5] + "\">" + names_[plotCols[s]] + "</text>\n";
    }
    svg += "</svg>\n";

    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) throw Error("cannot open '" + path + "' for writing");
    std::fwrite(svg.data(), 1, svg.size(), f);
    std::fclose(f);
}

}  // namespace mcm
