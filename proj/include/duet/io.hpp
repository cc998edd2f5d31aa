// io.hpp
// Minimal CSV table support shared by the calibration tables, the fringe
// datasets and the CLI outputs. Columns are doubles addressed by header name;
// formatting is fixed so identical data produces identical bytes.

#pragma once

#include <string>
#include <vector>

namespace duet {

struct CsvTable {
    std::vector<std::string> headers;
    std::vector<std::vector<double>> rows;

    int column_index(const std::string& name) const;  // -1 when absent

    // Throws std::runtime_error when the column is missing.
    std::vector<double> column(const std::string& name) const;
};

CsvTable read_csv(const std::string& path);

// Values are written in shortest round-trip form.
void write_csv(const std::string& path, const CsvTable& table);

std::string format_double(double value);

}  // namespace duet
