#include "cqed/scan_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cqed {

namespace {

using nlohmann::json;
// Keeps keys in insertion order so files read spec, axes, values, flags.
using ordered = nlohmann::ordered_json;

ordered spec_json(const ScanSpec& spec) {
    auto axis = [](const Axis& a) {
        return ordered{{"name", to_string(a.name)}, {"min", a.min}, {"max", a.max}, {"step", a.step}};
    };
    return ordered{
        {"quantity", to_string(spec.quantity)},
        {"partition", to_string(spec.partition)},
        {"axes", ordered::array({axis(spec.axis1), axis(spec.axis2)})},
        {"coupling", spec.coupling},
        {"lambda_c", spec.lambda_c},
        {"tau", spec.tau},
        {"t", spec.t},
        {"a", ordered::array({spec.amp_a.real(), spec.amp_a.imag()})},
        {"b", ordered::array({spec.amp_b.real(), spec.amp_b.imag()})},
        {"epsilon", spec.regularizer_eps},
    };
}

ordered value_json(double v) {
    if (std::isnan(v)) return nullptr;
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    return v;
}

double value_from_json(const json& j) {
    if (j.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (j.is_string()) return parse_double(j.get<std::string>());
    return j.get<double>();
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream stream(line);
    while (std::getline(stream, field, ',')) fields.push_back(field);
    return fields;
}

}  // namespace

std::string format_double(double value) {
    char buffer[64];
    const auto result = std::to_chars(buffer, buffer + sizeof buffer, value, std::chars_format::general, 17);
    return std::string(buffer, result.ptr);
}

double parse_double(const std::string& text) {
    double value = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    const auto result = std::from_chars(first, last, value);
    if (result.ec != std::errc() || result.ptr != last) {
        throw std::runtime_error("malformed number '" + text + "'");
    }
    return value;
}

GridTable table_of(const WitnessGrid& grid) {
    return {std::string(to_string(grid.spec.axis1.name)), std::string(to_string(grid.spec.axis2.name)),
            grid.axis1, grid.axis2, grid.values, grid.flags};
}

void write_csv(const WitnessGrid& grid, std::ostream& out) {
    out << to_string(grid.spec.axis1.name) << ',' << to_string(grid.spec.axis2.name) << ",value,flag\n";
    const std::size_t cols = grid.axis2.size();
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        out << format_double(grid.axis1[k / cols]) << ',' << format_double(grid.axis2[k % cols]) << ','
            << format_double(grid.values[k]) << ',' << to_string(grid.flags[k]) << '\n';
    }
}

void write_json(const WitnessGrid& grid, std::ostream& out) {
    ordered doc;
    doc["spec"] = spec_json(grid.spec);
    doc["axes"] = ordered::array({
        ordered{{"name", to_string(grid.spec.axis1.name)}, {"values", grid.axis1}},
        ordered{{"name", to_string(grid.spec.axis2.name)}, {"values", grid.axis2}},
    });
    ordered values = ordered::array();
    ordered flags = ordered::array();
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        values.push_back(value_json(grid.values[k]));
        flags.push_back(to_string(grid.flags[k]));
    }
    doc["values"] = std::move(values);
    doc["flags"] = std::move(flags);
    out << doc.dump() << '\n';
}

void write_grid(const WitnessGrid& grid, std::ostream& out, OutputFormat format) {
    if (format == OutputFormat::Csv) {
        write_csv(grid, out);
    } else {
        write_json(grid, out);
    }
}

void write_grid_file(const WitnessGrid& grid) {
    std::ofstream file(grid.spec.output);
    if (!file) throw std::runtime_error("cannot open '" + grid.spec.output + "' for writing");
    write_grid(grid, file, grid.spec.format);
    if (!file) throw std::runtime_error("failed writing '" + grid.spec.output + "'");
}

GridTable read_csv(std::istream& in) {
    GridTable table;
    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty CSV input");
    const auto header = split_csv_line(line);
    if (header.size() != 4 || header[2] != "value" || header[3] != "flag") {
        throw std::runtime_error("unexpected CSV header '" + line + "'");
    }
    table.axis1_name = header[0];
    table.axis2_name = header[1];

    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) throw std::runtime_error("malformed CSV row '" + line + "'");
        const double x1 = parse_double(fields[0]);
        const double x2 = parse_double(fields[1]);
        // axis1 is the outer loop: a new axis1 value starts a new row.
        if (table.axis1.empty() || table.axis1.back() != x1) table.axis1.push_back(x1);
        if (table.axis1.size() == 1) table.axis2.push_back(x2);
        table.values.push_back(parse_double(fields[2]));
        try {
            table.flags.push_back(parse_cell_flag(fields[3]));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error(e.what());
        }
    }
    if (table.values.size() != table.axis1.size() * table.axis2.size()) {
        throw std::runtime_error("CSV cell count does not match its axes");
    }
    return table;
}

GridTable read_json(std::istream& in) {
    GridTable table;
    try {
        const json doc = json::parse(in);
        const json& axes = doc.at("axes");
        table.axis1_name = axes.at(0).at("name").get<std::string>();
        table.axis2_name = axes.at(1).at("name").get<std::string>();
        table.axis1 = axes.at(0).at("values").get<std::vector<double>>();
        table.axis2 = axes.at(1).at("values").get<std::vector<double>>();
        for (const json& v : doc.at("values")) table.values.push_back(value_from_json(v));
        for (const json& f : doc.at("flags")) table.flags.push_back(parse_cell_flag(f.get<std::string>()));
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("malformed JSON grid: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("malformed JSON grid: ") + e.what());
    }
    if (table.values.size() != table.axis1.size() * table.axis2.size() || table.flags.size() != table.values.size()) {
        throw std::runtime_error("JSON cell count does not match its axes");
    }
    return table;
}

}  // namespace cqed
