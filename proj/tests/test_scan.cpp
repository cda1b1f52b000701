#include <cmath>
#include <cstring>
#include <limits>
#include <sstream>

#include <doctest.h>

#include "cqed/measures.hpp"
#include "cqed/scan.hpp"
#include "cqed/scan_io.hpp"
#include "cqed/witnesses.hpp"

using namespace cqed;

namespace {

ScanSpec small_spec(ScanQuantity quantity, Partition partition) {
    ScanSpec spec;
    spec.quantity = quantity;
    spec.partition = partition;
    spec.axis1 = {AxisName::T, 0.0, 2.0, 0.25};
    spec.axis2 = {AxisName::LambdaC, 0.0, 5.0, 0.5};
    spec.output = "unused.csv";
    return spec;
}

bool same_bits(double x, double y) {
    if (std::isnan(x) && std::isnan(y)) return true;
    std::uint64_t a = 0, b = 0;
    std::memcpy(&a, &x, sizeof a);
    std::memcpy(&b, &y, sizeof b);
    return a == b;
}

void check_table(const GridTable& table, const WitnessGrid& grid) {
    CHECK(table.axis1_name == to_string(grid.spec.axis1.name));
    CHECK(table.axis2_name == to_string(grid.spec.axis2.name));
    REQUIRE(table.axis1.size() == grid.axis1.size());
    REQUIRE(table.axis2.size() == grid.axis2.size());
    REQUIRE(table.values.size() == grid.values.size());
    for (std::size_t i = 0; i < grid.axis1.size(); ++i) CHECK(same_bits(table.axis1[i], grid.axis1[i]));
    for (std::size_t j = 0; j < grid.axis2.size(); ++j) CHECK(same_bits(table.axis2[j], grid.axis2[j]));
    for (std::size_t k = 0; k < grid.values.size(); ++k) {
        CHECK(same_bits(table.values[k], grid.values[k]));
        CHECK(table.flags[k] == grid.flags[k]);
    }
}

}  // namespace

TEST_CASE("axis values") {
    CHECK(Axis{AxisName::T, 0.0, 4.0, 0.02}.values().size() == 201);
    CHECK(Axis{AxisName::LambdaC, 0.0, 4.0, 0.05}.values().size() == 81);
    CHECK(Axis{AxisName::T, 1.0, 1.0, 0.1}.values() == std::vector<double>{1.0});
    const auto v = Axis{AxisName::Tau, 0.0, 1.0, 0.3}.values();
    CHECK(v.size() == 4);
    CHECK(v.back() == doctest::Approx(0.9));
}

TEST_CASE("names round trip") {
    for (auto q : {ScanQuantity::FidelitySurface, ScanQuantity::FidelityDiff, ScanQuantity::TraceDistDiff,
                   ScanQuantity::RelEntropyDiff, ScanQuantity::Chsh, ScanQuantity::ClassicalCorr,
                   ScanQuantity::QuantumDiscord, ScanQuantity::MutualInfo}) {
        CHECK(parse_scan_quantity(to_string(q)) == q);
    }
    for (auto a : {AxisName::T, AxisName::Tau, AxisName::LambdaC}) CHECK(parse_axis_name(to_string(a)) == a);
    for (auto f : {CellFlag::Negative, CellFlag::NonNegative, CellFlag::Violating, CellFlag::Undefined}) {
        CHECK(parse_cell_flag(to_string(f)) == f);
    }
    CHECK(to_string(AxisName::LambdaC) == "lambda_c");
    CHECK_THROWS_AS(parse_axis_name("omega"), std::invalid_argument);
}

TEST_CASE("spec validation") {
    ScanSpec ok = small_spec(ScanQuantity::Chsh, Partition::AtomAtom);
    CHECK_NOTHROW(validate(ok));

    ScanSpec s = ok;
    s.axis1.step = 0.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = ok;
    s.axis2.max = -1.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = ok;
    s.axis2.name = AxisName::T;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = ok;
    s.axis2.name = AxisName::Tau;  // chsh has no lag
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = small_spec(ScanQuantity::QuantumDiscord, Partition::AtomCavityIntra);
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = small_spec(ScanQuantity::RelEntropyDiff, Partition::AtomAtom);
    s.regularizer_eps = 1.5;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
    s = ok;
    s.amp_a = 1.0;
    CHECK_THROWS_AS(validate(s), std::invalid_argument);
}

TEST_CASE("cell classification") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    CHECK(classify(ScanQuantity::FidelityDiff, nan) == CellFlag::Undefined);
    CHECK(classify(ScanQuantity::FidelityDiff, -1e-3) == CellFlag::Negative);
    CHECK(classify(ScanQuantity::FidelityDiff, -1e-12) == CellFlag::NonNegative);
    CHECK(classify(ScanQuantity::FidelityDiff, 0.2) == CellFlag::NonNegative);
    CHECK(classify(ScanQuantity::RelEntropyDiff, -std::numeric_limits<double>::infinity()) == CellFlag::Negative);
    CHECK(classify(ScanQuantity::Chsh, 2.0) == CellFlag::NonNegative);
    CHECK(classify(ScanQuantity::Chsh, 2.0 + 1e-12) == CellFlag::Violating);
    CHECK(classify(ScanQuantity::Chsh, nan) == CellFlag::Undefined);
}

TEST_CASE("cell points follow the axes") {
    ScanSpec spec = small_spec(ScanQuantity::FidelityDiff, Partition::AtomAtom);
    spec.axis2 = {AxisName::Tau, 0.0, 1.0, 0.5};
    spec.lambda_c = 2.5;
    const CellPoint p = cell_point(spec, 0.75, 0.5);
    CHECK(p.t == 0.75);
    CHECK(p.tau == 0.5);
    CHECK(p.params.cavity_decay == 2.5);
    CHECK(evaluate_cell(spec, p) ==
          doctest::Approx(fidelity_difference(Partition::AtomAtom, p.params, 0.75, 0.5).value()).epsilon(1e-15));
}

TEST_CASE("fidelity surface equals the closed forms") {
    const WitnessGrid grid = run_scan(small_spec(ScanQuantity::FidelitySurface, Partition::CavityCavity));
    REQUIRE(grid.values.size() == grid.axis1.size() * grid.axis2.size());
    for (std::size_t i = 0; i < grid.axis1.size(); ++i) {
        for (std::size_t j = 0; j < grid.axis2.size(); ++j) {
            ModelParams params;
            params.cavity_decay = grid.axis2[j];
            CHECK(grid.at(i, j) == fidelity_closed_form(FidelityIndex::F2, params, grid.axis1[i]));
            CHECK(grid.at(i, j) >= 0.0);
            CHECK(grid.at(i, j) <= 1.0);
        }
    }
    // The cross partition has no closed form; the generic fidelity is used.
    const WitnessGrid cross = run_scan(small_spec(ScanQuantity::FidelitySurface, Partition::AtomReservoirCross));
    ModelParams params;
    params.cavity_decay = cross.axis2[3];
    CHECK(cross.at(2, 3) == doctest::Approx(fidelity(reduced_state(Partition::AtomReservoirCross, params, 0.0),
                                                     reduced_state(Partition::AtomReservoirCross, params, cross.axis1[2])))
                                .epsilon(1e-14));
}

TEST_CASE("scans are deterministic and independent of the worker count") {
    ScanSpec spec = small_spec(ScanQuantity::TraceDistDiff, Partition::CavityCavity);
    spec.axis2 = {AxisName::Tau, 0.0, 2.0, 0.25};
    spec.lambda_c = 4.0;
    const WitnessGrid one = run_scan(spec, 1);
    const WitnessGrid four = run_scan(spec, 4);
    REQUIRE(one.values.size() == four.values.size());
    for (std::size_t k = 0; k < one.values.size(); ++k) {
        CHECK(same_bits(one.values[k], four.values[k]));
        CHECK(one.flags[k] == four.flags[k]);
    }
    std::ostringstream a, b;
    write_csv(one, a);
    write_csv(run_scan(spec, 2), b);
    CHECK(a.str() == b.str());
}

TEST_CASE("flags are re-derivable from values") {
    for (auto [q, p] : {std::pair{ScanQuantity::Chsh, Partition::ReservoirReservoir},
                        std::pair{ScanQuantity::FidelityDiff, Partition::AtomReservoirIntra},
                        std::pair{ScanQuantity::RelEntropyDiff, Partition::CavityCavity}}) {
        ScanSpec spec = small_spec(q, p);
        if (q != ScanQuantity::Chsh) spec.axis2 = {AxisName::Tau, 0.0, 2.0, 0.25};
        const WitnessGrid grid = run_scan(spec);
        for (std::size_t k = 0; k < grid.values.size(); ++k) CHECK(grid.flags[k] == classify(q, grid.values[k]));
    }
}

TEST_CASE("summaries") {
    const WitnessGrid fidelity_grid = run_scan(small_spec(ScanQuantity::FidelitySurface, Partition::AtomAtom));
    const GridSummary s = summarize(fidelity_grid);
    CHECK(s.cells == fidelity_grid.values.size());
    CHECK(s.count(CellFlag::Negative) == 0);
    CHECK(s.fraction(CellFlag::Negative) == 0.0);
    CHECK(s.fraction(CellFlag::NonNegative) == 1.0);
    CHECK(s.has_values);
    CHECK(s.max_value == doctest::Approx(1.0));

    // t = 0 column of the atom-atom Bell map holds the maximum 2 sqrt 2.
    ScanSpec chsh_spec = small_spec(ScanQuantity::Chsh, Partition::AtomAtom);
    chsh_spec.axis1 = {AxisName::LambdaC, 0.0, 4.0, 0.5};
    chsh_spec.axis2 = {AxisName::T, 0.0, 0.0, 0.1};
    const GridSummary c = summarize(run_scan(chsh_spec));
    CHECK(c.max_value == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-12));
    CHECK(c.max_at.second == 0.0);
    CHECK(c.count(CellFlag::Violating) == c.cells);

    ScanSpec g_spec = small_spec(ScanQuantity::FidelityDiff, Partition::AtomReservoirIntra);
    g_spec.axis1 = {AxisName::T, 0.0, 4.0, 0.1};
    g_spec.axis2 = {AxisName::Tau, 0.0, 4.0, 0.1};
    const GridSummary g = summarize(run_scan(g_spec));
    CHECK(g.fraction(CellFlag::Negative) > 0.0);
    CHECK(g.fraction(CellFlag::Negative) < 1.0);
    double total = 0.0;
    for (double f : g.fractions) total += f;
    CHECK(total == doctest::Approx(1.0));
}

TEST_CASE("summary of an all-undefined grid") {
    WitnessGrid grid;
    grid.spec = small_spec(ScanQuantity::FidelityDiff, Partition::AtomAtom);
    grid.axis1 = {0.0};
    grid.axis2 = {0.0, 1.0};
    grid.values = {std::nan(""), std::nan("")};
    grid.flags = {CellFlag::Undefined, CellFlag::Undefined};
    const GridSummary s = summarize(grid);
    CHECK_FALSE(s.has_values);
    CHECK(s.fraction(CellFlag::Undefined) == 1.0);
}

TEST_CASE("number formatting round trips") {
    for (double v : {0.0, -0.0, 0.1, 1.0 / 3.0, 2.0 * std::sqrt(2.0), 1e-300, 5e-324, -123456.789e200,
                     std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()}) {
        CHECK(same_bits(parse_double(format_double(v)), v));
    }
    CHECK(std::isnan(parse_double(format_double(std::nan("")))));
    CHECK(parse_double("+1.5") == 1.5);
    CHECK_THROWS_AS(parse_double("1.5x"), std::runtime_error);
    CHECK_THROWS_AS(parse_double(""), std::runtime_error);
}

TEST_CASE("CSV and JSON round trips are bit-exact") {
    ScanSpec spec = small_spec(ScanQuantity::RelEntropyDiff, Partition::CavityCavity);
    spec.axis1 = {AxisName::T, 0.0, 3.2, 0.4};
    spec.axis2 = {AxisName::Tau, 0.0, 3.2, 0.4};
    spec.lambda_c = 0.0;  // lossless: produces undefined and infinite cells
    WitnessGrid grid = run_scan(spec);
    grid.values[1] = -std::numeric_limits<double>::infinity();
    grid.flags[1] = CellFlag::Negative;
    grid.values[2] = std::nan("");
    grid.flags[2] = CellFlag::Undefined;

    std::stringstream csv;
    write_grid(grid, csv, OutputFormat::Csv);
    check_table(read_csv(csv), grid);

    std::stringstream json;
    write_grid(grid, json, OutputFormat::Json);
    check_table(read_json(json), grid);
}

TEST_CASE("CSV layout") {
    ScanSpec spec = small_spec(ScanQuantity::Chsh, Partition::AtomAtom);
    spec.axis1 = {AxisName::T, 0.0, 0.5, 0.5};
    spec.axis2 = {AxisName::LambdaC, 1.0, 1.0, 1.0};
    std::ostringstream out;
    write_csv(run_scan(spec), out);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    CHECK(line == "t,lambda_c,value,flag");
    std::getline(in, line);
    CHECK(line.rfind("0,1,2.8284271247461", 0) == 0);
    CHECK(line.substr(line.size() - 9) == "violating");
}

TEST_CASE("malformed grid files are rejected") {
    std::istringstream empty("");
    CHECK_THROWS_AS(read_csv(empty), std::runtime_error);
    std::istringstream header("a,b,c\n");
    CHECK_THROWS_AS(read_csv(header), std::runtime_error);
    std::istringstream row("t,tau,value,flag\n0,0,1\n");
    CHECK_THROWS_AS(read_csv(row), std::runtime_error);
    std::istringstream flag("t,tau,value,flag\n0,0,1,positive\n");
    CHECK_THROWS_AS(read_csv(flag), std::runtime_error);
    std::istringstream json("{\"axes\": []}");
    CHECK_THROWS_AS(read_json(json), std::runtime_error);
    std::istringstream junk("not json");
    CHECK_THROWS_AS(read_json(junk), std::runtime_error);
}
