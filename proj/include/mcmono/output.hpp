#pragma once

#include <string>
#include <vector>

namespace mcm {

// Column-oriented table with deterministic CSV serialization: UTF-8, comma
// separators, LF line endings, 17 significant digits.
class SeriesTable {
public:
    void addColumn(const std::string& name, std::vector<double> values);
    std::size_t columnCount() const { return names_.size(); }
    std::size_t rowCount() const;
    const std::vector<std::string>& names() const { return names_; }
    const std::vector<double>& column(std::size_t i) const { return cols_[i]; }

    std::string toCsv() const;
    void writeCsv(const std::string& path) const;

    // Minimal hand-rolled SVG line plot of the named columns against the
    // first column.
    void writeSvg(const std::string& path, const std::vector<std::string>& series,
                  const std::string& title) const;

private:
    std::vector<std::string> names_;
    std::vector<std::vector<double>> cols_;
};

std::string formatDouble(double v);  // %.17g

}  // namespace mcm
