#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>

#include "qkd/report.hpp"

using namespace qkd;

TEST_CASE("float formatting is short, exact and locale free") {
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.015) == "0.015");
    CHECK(format_double(0.25) == "0.25");
    CHECK(format_double(1.0 / 3) == "0.333333333333");
    CHECK(format_double(2.0 / 3) == "0.666666666667");
    CHECK(format_double(std::log2(3.0)) == "1.58496250072");
    CHECK(format_double(1e-9) == "1e-09");
}

TEST_CASE("curve table layout") {
    const ProtocolParams params(3, 2);
    const auto samples = info_curve_single(params, linear_grid(0.0, 1.0, 3));
    const std::string csv = curves_csv(samples);
    CHECK(csv.rfind("t,i_ab,i_ae,i_ae_1,p_err\n", 0) == 0);
    CHECK(csv.find("0,1.58496250072,0,0,0\n") != std::string::npos);
    CHECK(csv.find("\n1,0.333333333333,0.333333333333,0.333333333333,0.166666666667\n") !=
          std::string::npos);
    CHECK(curves_csv(samples) == csv);

    const auto doc = curves_json(samples);
    REQUIRE(doc.is_array());
    REQUIRE(doc.size() == 3);
    CHECK(doc[0]["t"] == 0.0);
    CHECK(doc[0]["i_ae_m"].size() == 1);
    CHECK(doc[2]["p_err"].get<double>() == samples[2].p_err);
}

TEST_CASE("threshold table layout") {
    const auto entries = error_thresholds();
    const std::string csv = thresholds_csv(entries);
    CHECK(csv.rfind("d,m,q_err\n", 0) == 0);
    CHECK(csv.find("3,2,0.166666666667\n") != std::string::npos);
    CHECK(csv.find("2,3,0.333333333333\n") != std::string::npos);
    const auto doc = thresholds_json(entries);
    REQUIRE(doc.size() == 5);
    CHECK(doc[0]["d"] == 3);
    CHECK(doc[0]["m"] == 2);
}

TEST_CASE("phase diagram tables") {
    const ProtocolParams params(3, 2);
    const PhaseDiagram diagram = phase_diagram_two(params, 5);
    const std::string csv = phase_csv(diagram);
    CHECK(csv.rfind("x,y,verdict\n", 0) == 0);
    CHECK(csv.find("0,0,secure\n") != std::string::npos);
    CHECK(csv.find("1,1,insecure\n") != std::string::npos);
    // One line per node plus the header.
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 26);

    const std::string boundary = boundary_csv(diagram);
    CHECK(boundary.rfind("row_value,boundary_value\n", 0) == 0);
    CHECK(std::count(boundary.begin(), boundary.end(), '\n') ==
          static_cast<long>(diagram.boundary.size()) + 1);

    const auto doc = phase_json(diagram);
    CHECK(doc["x_name"] == "omega1");
    CHECK(doc["verdicts"].size() == 5);
    CHECK(doc["verdicts"][0][0] == "secure");
    CHECK(doc["boundary"].size() == diagram.boundary.size());
    CHECK(doc["extra_crossings"].empty());
}

TEST_CASE("basis table serialization") {
    const auto doc = mub_table_json(mub_table(3));
    CHECK(doc["dimension"] == 3);
    REQUIRE(doc["bases"].size() == 4);
    CHECK(doc["bases"][0]["label"] == "B3");
    REQUIRE(doc["bases"][1]["vectors"].size() == 3);
    const auto& amplitude = doc["bases"][1]["vectors"][0][0];
    REQUIRE(amplitude.size() == 2);
    CHECK(std::abs(amplitude[0].get<double>() - 1.0 / std::sqrt(3.0)) < 1e-12);
    CHECK(amplitude[1].get<double>() == 0.0);
}

TEST_CASE("simulation statistics serialization") {
    SimConfig config;
    config.params = ProtocolParams(3, 2);
    config.attack = AttackVector({0.5});
    config.rounds = 5000;
    config.seed = 31;
    config.threads = 2;
    const SimulationStats stats = simulate(config);
    const auto doc = stats_json(stats);

    CHECK(doc["config"]["dimension"] == 3);
    CHECK(doc["config"]["omegas"].size() == 1);
    CHECK(doc["config"]["seed"] == 31);
    CHECK(doc["config"]["backend"] == "symbolic");
    // Worker count must not leak into the output.
    CHECK_FALSE(doc["config"].contains("threads"));

    CHECK(doc["sifted_count"] == stats.sifted_count);
    std::uint64_t total = 0;
    for (const auto& row : doc["ab_counts"]) {
        REQUIRE(row.size() == 3);
        for (const auto& cell : row) {
            total += cell.get<std::uint64_t>();
        }
    }
    CHECK(total == stats.sifted_count);
    CHECK(doc["eve_counts"].size() == 1);
    CHECK(doc["estimates"]["p_ab_00"].get<double>() == *stats.p_ab_00());
    CHECK(doc["estimates"]["p_ae_00"].size() == 1);

    SimConfig empty = config;
    empty.rounds = 1;
    empty.seed = 2;  // first round unsifted under this seed
    SimulationStats tiny = simulate(empty);
    if (tiny.sifted_count == 0) {
        CHECK(stats_json(tiny)["estimates"]["p_ab_00"].is_null());
    }
}
