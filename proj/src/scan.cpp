#include "qkd/scan.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <stdexcept>
#include <string>
#include <utility>

namespace qkd {

namespace {

constexpr double kBoundaryTol = 1e-12;

void check_grid(std::span<const double> grid, double lo, double hi) {
    if (grid.empty()) {
        throw std::invalid_argument("grid must not be empty");
    }
    double prev = lo;
    for (double v : grid) {
        if (!(v >= lo && v <= hi)) {
            throw std::invalid_argument("grid value outside [" + std::to_string(lo) + ", " +
                                        std::to_string(hi) + "]: " + std::to_string(v));
        }
        if (v < prev) {
            throw std::invalid_argument("grid must be ascending");
        }
        prev = v;
    }
}

CurveSample sample_from_report(double t, const InfoReport& report) {
    return CurveSample{t, report.i_ab, report.i_ae_m, report.i_ae, report.p_err};
}

// Endpoints of [lo, hi] carry differing verdicts; shrinks the bracket and
// returns the insecure end, which is where the verdict flips.
double bisect_flip(const std::function<bool(double)>& insecure, double lo, double hi,
                   bool lo_insecure) {
    while (hi - lo > kBoundaryTol) {
        const double mid = 0.5 * (lo + hi);
        if (insecure(mid) == lo_insecure) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return lo_insecure ? lo : hi;
}

// Walks one row, fills its verdicts and appends the refined crossings.  The
// first onset of the insecure verdict goes to `boundary`, any later flips to
// `extra`.
void scan_row(const std::function<double(double)>& margin, std::span<const double> xs,
              double row_value, std::uint8_t* verdicts, std::vector<BoundaryPoint>& boundary,
              std::vector<BoundaryPoint>& extra) {
    const auto insecure = [&margin](double x) { return margin(x) <= 0.0; };
    bool prev = insecure(xs[0]);
    verdicts[0] = prev ? 0 : 1;
    bool have_first = prev;
    if (prev) {
        boundary.push_back({row_value, xs[0]});
    }
    for (size_t c = 1; c < xs.size(); ++c) {
        const bool cur = insecure(xs[c]);
        verdicts[c] = cur ? 0 : 1;
        if (cur != prev) {
            const double x = bisect_flip(insecure, xs[c - 1], xs[c], prev);
            if (!have_first) {
                boundary.push_back({row_value, x});
                have_first = true;
            } else {
                extra.push_back({row_value, x});
            }
            prev = cur;
        }
    }
}

}  // namespace

std::vector<double> linear_grid(double lo, double hi, int count) {
    if (count < 2) {
        throw std::invalid_argument("grid needs at least 2 points");
    }
    if (!(lo < hi)) {
        throw std::invalid_argument("grid bounds must satisfy lo < hi");
    }
    std::vector<double> grid(static_cast<size_t>(count));
    for (int i = 0; i < count; ++i) {
        grid[static_cast<size_t>(i)] = lo + (hi - lo) * (static_cast<double>(i) / (count - 1));
    }
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

std::vector<CurveSample> info_curve_single(const ProtocolParams& params,
                                           std::span<const double> omega_grid) {
    check_grid(omega_grid, 0.0, 1.0);
    std::vector<CurveSample> samples;
    samples.reserve(omega_grid.size());
    for (double t : omega_grid) {
        samples.push_back(sample_from_report(t, info_report(params, AttackVector({t}))));
    }
    return samples;
}

std::vector<CurveSample> info_vs_error(const ProtocolParams& params,
                                       std::span<const double> omega_grid) {
    std::vector<CurveSample> samples = info_curve_single(params, omega_grid);
    std::stable_sort(samples.begin(), samples.end(),
                     [](const CurveSample& a, const CurveSample& b) { return a.p_err < b.p_err; });
    return samples;
}

std::vector<ThresholdEntry> error_thresholds() {
    static constexpr std::array<std::pair<int, int>, 5> kVariants = {
        {{3, 2}, {3, 3}, {3, 4}, {2, 2}, {2, 3}}};
    std::vector<ThresholdEntry> entries;
    entries.reserve(kVariants.size());
    for (const auto& [d, m] : kVariants) {
        const ProtocolParams params(d, m);
        const auto crossing =
            quantum_error(params, [](double t) { return AttackVector({t}); });
        if (!crossing) {
            throw std::logic_error("single-eavesdropper family has no crossing");
        }
        entries.push_back({d, m, crossing->q_err});
    }
    return entries;
}

PhaseDiagram phase_diagram_two(const ProtocolParams& params, std::span<const double> omega1_grid,
                               std::span<const double> omega2_grid) {
    check_grid(omega1_grid, 0.0, 1.0);
    check_grid(omega2_grid, 0.0, 1.0);
    PhaseDiagram diagram;
    diagram.x_name = "omega1";
    diagram.y_name = "omega2";
    diagram.x_values.assign(omega1_grid.begin(), omega1_grid.end());
    diagram.y_values.assign(omega2_grid.begin(), omega2_grid.end());
    diagram.secure_flags.resize(diagram.x_values.size() * diagram.y_values.size());
    for (size_t r = 0; r < diagram.y_values.size(); ++r) {
        const double omega2 = diagram.y_values[r];
        const auto margin = [&params, omega2](double omega1) {
            const InfoReport report = info_report(params, AttackVector({omega1, omega2}));
            return report.i_ab - report.i_ae;
        };
        scan_row(margin, omega1_grid, omega2, &diagram.secure_flags[r * diagram.x_values.size()],
                 diagram.boundary, diagram.extra_crossings);
    }
    return diagram;
}

PhaseDiagram phase_diagram_two(const ProtocolParams& params, int resolution) {
    const std::vector<double> grid = linear_grid(0.0, 1.0, resolution);
    return phase_diagram_two(params, grid, grid);
}

PhaseDiagram phase_diagram_collab(const ProtocolParams& params, std::span<const double> omega_grid,
                                  int n_max) {
    check_grid(omega_grid, 0.0, 1.0);
    if (n_max < 1) {
        throw std::invalid_argument("chain length range must be positive");
    }
    PhaseDiagram diagram;
    diagram.x_name = "omega";
    diagram.y_name = "n";
    diagram.x_values.assign(omega_grid.begin(), omega_grid.end());
    diagram.y_values.resize(static_cast<size_t>(n_max));
    diagram.secure_flags.resize(diagram.x_values.size() * static_cast<size_t>(n_max));
    for (int n = 1; n <= n_max; ++n) {
        diagram.y_values[static_cast<size_t>(n - 1)] = n;
        // The nearest eavesdropper sees the least-disturbed state, so she
        // alone sets i_ae for the identical-omega chain.
        const auto margin = [&params, n](double omega) {
            return mutual_info(params, p_ab_uniform(params, omega, n)) -
                   mutual_info(params, p_ae_uniform(params, omega, 1));
        };
        scan_row(margin, omega_grid, static_cast<double>(n),
                 &diagram.secure_flags[static_cast<size_t>(n - 1) * diagram.x_values.size()],
                 diagram.boundary, diagram.extra_crossings);
    }
    return diagram;
}

PhaseDiagram phase_diagram_collab(const ProtocolParams& params, int resolution, int n_max) {
    const std::vector<double> grid = linear_grid(0.0, 1.0, resolution);
    return phase_diagram_collab(params, grid, n_max);
}

}  // namespace qkd
