#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace scrmlmc {

// CSV with a header row, '.' decimal separator and 17 significant digits.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);

    void write_row(const std::vector<double>& values);
    void write_row(const std::vector<std::string>& cells);

    static std::string format_number(double value);

private:
    std::ofstream out_;
    std::size_t columns_;
};

}  // namespace scrmlmc
