#include "dsf/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dsf/errors.hpp"

namespace dsf {

void CsvTable::add_row(std::vector<double> row) {
    if (row.size() != header.size()) throw ValidationError("csv: row width does not match header");
    rows.push_back(std::move(row));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) v = 0.0;  // no negative zero
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void write_csv(std::ostream& os, const CsvTable& table) {
    for (std::size_t j = 0; j < table.header.size(); ++j) os << (j ? "," : "") << table.header[j];
    os << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t j = 0; j < row.size(); ++j) os << (j ? "," : "") << format_number(row[j]);
        os << '\n';
    }
}

void write_csv(const std::string& path, const CsvTable& table) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw ValidationError("csv: cannot open " + path);
    write_csv(os, table);
    if (!os) throw ValidationError("csv: write failed for " + path);
}

CsvTable read_csv(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw ValidationError("csv: cannot open " + path);
    CsvTable t;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string cell;
        while (std::getline(ss, cell, ',')) out.push_back(cell);
        return out;
    };
    if (!std::getline(is, line)) throw ValidationError("csv: empty file " + path);
    t.header = split(line);
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        for (const auto& c : split(line)) row.push_back(std::strtod(c.c_str(), nullptr));
        t.add_row(std::move(row));
    }
    return t;
}

}  // namespace dsf
