#pragma once

#include <ostream>
#include <string>
#include <vector>

namespace dsf {

/// Column-oriented numeric table. Cells are written in scientific notation
/// with 17 significant digits; rows end with LF.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
};

std::string format_number(double v);
void write_csv(std::ostream& os, const CsvTable& table);
void write_csv(const std::string& path, const CsvTable& table);
/// Parses a file written by write_csv.
CsvTable read_csv(const std::string& path);

}  // namespace dsf
