#pragma once

#include <string>
#include <vector>

#include "mixrate/config.hpp"

namespace mixrate {

// NaN cells are written empty: the column is undefined at that row.
struct CsvTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

std::string format_number(double v);  // %.17g
std::string to_csv(const CsvTable& t);
std::string to_json(const Json& j);  // stable key order, %.17g floats, two-space indent

// Throws IOError on an unwritable path and InvalidParameter on empty results.
void emit_report(const CsvTable& t, const std::string& path);
void emit_report(const Json& j, const std::string& path);

}  // namespace mixrate
