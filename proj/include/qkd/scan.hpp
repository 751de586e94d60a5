// scan.hpp
// Parameter sweeps over the closed forms: information curves, the error
// threshold for every supported protocol variant, and secure/insecure phase
// diagrams with bisected boundaries.

#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qkd/info.hpp"

namespace qkd {

struct CurveSample {
    double t = 0.0;
    double i_ab = 0.0;
    std::vector<double> i_ae_m;
    double i_ae = 0.0;
    double p_err = 0.0;
};

// count >= 2 evenly spaced values with exact endpoints.
std::vector<double> linear_grid(double lo, double hi, int count);

// Single-eavesdropper family omega = (t) sampled over the given grid
// (ascending, within [0,1]).
std::vector<CurveSample> info_curve_single(const ProtocolParams& params,
                                           std::span<const double> omega_grid);

// Same samples ordered by p_err; p_err is monotone in omega, so this is a
// reindexing of info_curve_single.
std::vector<CurveSample> info_vs_error(const ProtocolParams& params,
                                       std::span<const double> omega_grid);

struct ThresholdEntry {
    int dimension = 0;
    int num_bases = 0;
    double q_err = 0.0;
};

// Single-eavesdropper error threshold for every supported (d, M) pair, in
// the fixed order (3,2), (3,3), (3,4), (2,2), (2,3).
std::vector<ThresholdEntry> error_thresholds();

struct BoundaryPoint {
    double row_value = 0.0;
    double boundary_value = 0.0;
};

struct PhaseDiagram {
    std::string x_name;
    std::string y_name;
    std::vector<double> x_values;
    std::vector<double> y_values;
    std::vector<std::uint8_t> secure_flags;      // row-major, y outer, 1 = secure
    std::vector<BoundaryPoint> boundary;         // first secure-to-insecure onset per row
    std::vector<BoundaryPoint> extra_crossings;  // any further sign changes, same rows

    bool secure_at(int row, int col) const {
        return secure_flags[static_cast<size_t>(row) * x_values.size() +
                            static_cast<size_t>(col)] != 0;
    }
};

// Two-eavesdropper diagram: x = omega_1 scanned within each omega_2 row.
PhaseDiagram phase_diagram_two(const ProtocolParams& params, std::span<const double> omega1_grid,
                               std::span<const double> omega2_grid);
PhaseDiagram phase_diagram_two(const ProtocolParams& params, int resolution = 201);

// Identical-omega chain diagram: x = omega, one row per chain length 1..n_max.
PhaseDiagram phase_diagram_collab(const ProtocolParams& params, std::span<const double> omega_grid,
                                  int n_max);
PhaseDiagram phase_diagram_collab(const ProtocolParams& params, int resolution = 201,
                                  int n_max = 100);

}  // namespace qkd
