// report.hpp
// Deterministic CSV and JSON rendering of library results.  Floats are
// written with up to 12 significant digits, independent of locale, so byte
// output is stable across runs.

#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "qkd/chain.hpp"
#include "qkd/mub.hpp"
#include "qkd/scan.hpp"

namespace qkd {

std::string format_double(double value);

std::string curves_csv(const std::vector<CurveSample>& samples);
std::string thresholds_csv(const std::vector<ThresholdEntry>& entries);
std::string phase_csv(const PhaseDiagram& diagram);
std::string boundary_csv(const PhaseDiagram& diagram);

nlohmann::ordered_json curves_json(const std::vector<CurveSample>& samples);
nlohmann::ordered_json thresholds_json(const std::vector<ThresholdEntry>& entries);
nlohmann::ordered_json phase_json(const PhaseDiagram& diagram);
nlohmann::ordered_json mub_table_json(const MubTable& table);
// Config echo, count matrices and point estimates.  The thread count is
// deliberately omitted: output must not depend on how work was sharded.
nlohmann::ordered_json stats_json(const SimulationStats& stats);

}  // namespace qkd
