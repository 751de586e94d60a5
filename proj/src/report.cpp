#include "qkd/report.hpp"

#include <array>
#include <charconv>

namespace qkd {

namespace {

using ordered_json = nlohmann::ordered_json;

const char* verdict_name(bool secure) { return secure ? "secure" : "insecure"; }

ordered_json count_matrix_json(const CountMatrix& counts, int dim) {
    ordered_json rows = ordered_json::array();
    for (int x = 0; x < dim; ++x) {
        ordered_json row = ordered_json::array();
        for (int y = 0; y < dim; ++y) {
            row.push_back(counts.cells[static_cast<size_t>(x)][static_cast<size_t>(y)]);
        }
        rows.push_back(std::move(row));
    }
    return rows;
}

ordered_json optional_json(const std::optional<double>& value) {
    if (!value) {
        return nullptr;
    }
    return *value;
}

ordered_json boundary_json(const std::vector<BoundaryPoint>& points) {
    ordered_json list = ordered_json::array();
    for (const BoundaryPoint& p : points) {
        list.push_back({{"row_value", p.row_value}, {"boundary_value", p.boundary_value}});
    }
    return list;
}

}  // namespace

std::string format_double(double value) {
    std::array<char, 32> buf{};
    const auto result = std::to_chars(buf.data(), buf.data() + buf.size(), value,
                                      std::chars_format::general, 12);
    return std::string(buf.data(), result.ptr);
}

std::string curves_csv(const std::vector<CurveSample>& samples) {
    const size_t n = samples.empty() ? 0 : samples.front().i_ae_m.size();
    std::string out = "t,i_ab,i_ae";
    for (size_t m = 1; m <= n; ++m) {
        out += ",i_ae_" + std::to_string(m);
    }
    out += ",p_err\n";
    for (const CurveSample& s : samples) {
        out += format_double(s.t) + ',' + format_double(s.i_ab) + ',' + format_double(s.i_ae);
        for (double bits : s.i_ae_m) {
            out += ',' + format_double(bits);
        }
        out += ',' + format_double(s.p_err) + '\n';
    }
    return out;
}

std::string thresholds_csv(const std::vector<ThresholdEntry>& entries) {
    std::string out = "d,m,q_err\n";
    for (const ThresholdEntry& e : entries) {
        out += std::to_string(e.dimension) + ',' + std::to_string(e.num_bases) + ',' +
               format_double(e.q_err) + '\n';
    }
    return out;
}

std::string phase_csv(const PhaseDiagram& diagram) {
    std::string out = "x,y,verdict\n";
    for (size_t r = 0; r < diagram.y_values.size(); ++r) {
        for (size_t c = 0; c < diagram.x_values.size(); ++c) {
            out += format_double(diagram.x_values[c]) + ',' + format_double(diagram.y_values[r]) +
                   ',' +
                   verdict_name(diagram.secure_at(static_cast<int>(r), static_cast<int>(c))) +
                   '\n';
        }
    }
    return out;
}

std::string boundary_csv(const PhaseDiagram& diagram) {
    std::string out = "row_value,boundary_value\n";
    for (const BoundaryPoint& p : diagram.boundary) {
        out += format_double(p.row_value) + ',' + format_double(p.boundary_value) + '\n';
    }
    return out;
}

nlohmann::ordered_json curves_json(const std::vector<CurveSample>& samples) {
    ordered_json list = ordered_json::array();
    for (const CurveSample& s : samples) {
        list.push_back({{"t", s.t},
                        {"i_ab", s.i_ab},
                        {"i_ae", s.i_ae},
                        {"i_ae_m", s.i_ae_m},
                        {"p_err", s.p_err}});
    }
    return list;
}

nlohmann::ordered_json thresholds_json(const std::vector<ThresholdEntry>& entries) {
    ordered_json list = ordered_json::array();
    for (const ThresholdEntry& e : entries) {
        list.push_back({{"d", e.dimension}, {"m", e.num_bases}, {"q_err", e.q_err}});
    }
    return list;
}

nlohmann::ordered_json phase_json(const PhaseDiagram& diagram) {
    ordered_json verdicts = ordered_json::array();
    for (size_t r = 0; r < diagram.y_values.size(); ++r) {
        ordered_json row = ordered_json::array();
        for (size_t c = 0; c < diagram.x_values.size(); ++c) {
            row.push_back(verdict_name(diagram.secure_at(static_cast<int>(r), static_cast<int>(c))));
        }
        verdicts.push_back(std::move(row));
    }
    return ordered_json{{"x_name", diagram.x_name},
                        {"y_name", diagram.y_name},
                        {"x_values", diagram.x_values},
                        {"y_values", diagram.y_values},
                        {"verdicts", std::move(verdicts)},
                        {"boundary", boundary_json(diagram.boundary)},
                        {"extra_crossings", boundary_json(diagram.extra_crossings)}};
}

nlohmann::ordered_json mub_table_json(const MubTable& table) {
    ordered_json bases = ordered_json::array();
    for (const Basis& basis : table.bases) {
        ordered_json vectors = ordered_json::array();
        for (const StateVector& v : basis.vectors) {
            ordered_json amplitudes = ordered_json::array();
            for (const Complex& a : v.amplitudes) {
                amplitudes.push_back({a.real(), a.imag()});
            }
            vectors.push_back(std::move(amplitudes));
        }
        bases.push_back({{"label", basis.label}, {"vectors", std::move(vectors)}});
    }
    return ordered_json{{"dimension", table.dimension}, {"bases", std::move(bases)}};
}

nlohmann::ordered_json stats_json(const SimulationStats& stats) {
    const int d = stats.config.params.dimension;
    ordered_json config{{"dimension", d},
                        {"num_bases", stats.config.params.num_bases},
                        {"omegas", stats.config.attack.omegas},
                        {"rounds", stats.config.rounds},
                        {"seed", stats.config.seed},
                        {"backend",
                         stats.config.backend == Backend::quantum ? "quantum" : "symbolic"},
                        {"pooled", stats.config.pool_symbols}};
    ordered_json eve_counts = ordered_json::array();
    for (const CountMatrix& counts : stats.eve_counts) {
        eve_counts.push_back(count_matrix_json(counts, d));
    }
    ordered_json p_ae = ordered_json::array();
    for (size_t m = 1; m <= stats.eve_counts.size(); ++m) {
        p_ae.push_back(optional_json(stats.p_ae_00(static_cast<int>(m))));
    }
    return ordered_json{{"config", std::move(config)},
                        {"sifted_count", stats.sifted_count},
                        {"sifted_fraction", stats.sifted_fraction()},
                        {"ab_counts", count_matrix_json(stats.ab_counts, d)},
                        {"eve_counts", std::move(eve_counts)},
                        {"estimates",
                         {{"p_ab_00", optional_json(stats.p_ab_00())},
                          {"p_ae_00", std::move(p_ae)},
                          {"p_err", optional_json(stats.p_err())}}}};
}

}  // namespace qkd
