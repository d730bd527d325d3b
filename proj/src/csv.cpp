#include "scrmlmc/csv.hpp"

#include <cstdio>
#include <stdexcept>

namespace scrmlmc {

CsvWriter::CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header)
    : out_(path), columns_(header.size()) {
    if (!out_) throw std::runtime_error("csv: cannot open " + path.string());
    write_row(header);
}

std::string CsvWriter::format_number(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.17g", value);
    return buffer;
}

void CsvWriter::write_row(const std::vector<double>& values) {
    std::vector<std::string> cells;
    cells.reserve(values.size());
    for (double v : values) cells.push_back(format_number(v));
    write_row(cells);
}

void CsvWriter::write_row(const std::vector<std::string>& cells) {
    if (cells.size() != columns_) throw std::runtime_error("csv: row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

}  // namespace scrmlmc
