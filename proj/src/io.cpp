#include "duet/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace duet {

int CsvTable::column_index(const std::string& name) const {
    for (std::size_t i = 0; i < headers.size(); ++i)
        if (headers[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<double> CsvTable::column(const std::string& name) const {
    const int idx = column_index(name);
    if (idx < 0) throw std::runtime_error("missing CSV column: " + name);
    std::vector<double> values;
    values.reserve(rows.size());
    for (const auto& row : rows) values.push_back(row[static_cast<std::size_t>(idx)]);
    return values;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::stringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    if (!line.empty() && line.back() == ',') fields.emplace_back();
    return fields;
}

}  // namespace

CsvTable read_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    CsvTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    table.headers = split_line(line);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const auto fields = split_line(line);
        if (fields.size() != table.headers.size())
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(table.headers.size()) +
                                     " fields, got " + std::to_string(fields.size()));
        std::vector<double> row;
        row.reserve(fields.size());
        for (const auto& field : fields) {
            std::size_t consumed = 0;
            double value = 0.0;
            try {
                value = std::stod(field, &consumed);
            } catch (const std::exception&) {
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": not a number: '" + field + "'");
            }
            if (consumed != field.size())
                throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                         ": not a number: '" + field + "'");
            row.push_back(value);
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

std::string format_double(double value) {
    // Shortest representation that parses back to the same double.
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof(buffer), value);
    return std::string(buffer, result.ptr);
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < table.headers.size(); ++i) {
        if (i) out << ',';
        out << table.headers[i];
    }
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.headers.size())
            throw std::runtime_error("CSV row width does not match header");
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) out << ',';
            out << format_double(row[i]);
        }
        out << '\n';
    }
    if (!out) throw std::runtime_error("failed writing " + path);
}

}  // namespace duet
