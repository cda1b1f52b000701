#pragma once

// Flat-file output of scan grids.
//
// CSV: header "<axis1>,<axis2>,value,flag", one row per cell in row-major order.
// JSON: {"spec": {...}, "axes": [{"name", "values"}, ...], "values": [...], "flags": [...]}.
// Numbers carry 17 significant digits so a write/read cycle is bit-exact.
// Undefined cells are "nan" in CSV and null in JSON; infinities are "inf"/"-inf".

#include <iosfwd>
#include <string>
#include <vector>

#include "cqed/scan.hpp"

namespace cqed {

/// The data content of a grid file, independent of format.
struct GridTable {
    std::string axis1_name;
    std::string axis2_name;
    std::vector<double> axis1;
    std::vector<double> axis2;
    std::vector<double> values;
    std::vector<CellFlag> flags;
};

GridTable table_of(const WitnessGrid& grid);

void write_csv(const WitnessGrid& grid, std::ostream& out);
void write_json(const WitnessGrid& grid, std::ostream& out);
void write_grid(const WitnessGrid& grid, std::ostream& out, OutputFormat format);
/// Writes to grid.spec.output in grid.spec.format; throws std::runtime_error on I/O failure.
void write_grid_file(const WitnessGrid& grid);

/// Throw std::runtime_error on malformed input.
GridTable read_csv(std::istream& in);
GridTable read_json(std::istream& in);

/// Shortest text that parses back to the same double (17 significant digits).
std::string format_double(double value);
double parse_double(const std::string& text);

}  // namespace cqed
