// qkdtool: analysis and simulation front end for the intercept-resend key
// distribution model.  Subcommands emit deterministic CSV/JSON; exit codes
// are 0 success, 2 invariant-check failure, 3 oracle mismatch, 64 usage,
// 74 I/O.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qkd/chain.hpp"
#include "qkd/info.hpp"
#include "qkd/mub.hpp"
#include "qkd/report.hpp"
#include "qkd/scan.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 2;
constexpr int kExitOracleMismatch = 3;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct GridSpec {
    double lo = 0.0;
    double hi = 1.0;
    int count = 201;
};

GridSpec parse_grid_spec(const std::string& text) {
    GridSpec spec;
    std::istringstream in(text);
    char sep1 = 0;
    char sep2 = 0;
    if (!(in >> spec.lo >> sep1 >> spec.hi >> sep2 >> spec.count) || sep1 != ':' || sep2 != ':' ||
        !in.eof()) {
        throw std::invalid_argument("grid spec must look like lo:hi:count, got '" + text + "'");
    }
    return spec;
}

int write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    out << content;
    out.flush();
    if (!out.good()) {
        std::cerr << "error: cannot write " << path << "\n";
        return kExitIo;
    }
    return kExitOk;
}

int emit(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return kExitOk;
    }
    return write_file(out_path, content);
}

std::string json_text(const nlohmann::ordered_json& doc) { return doc.dump(2) + "\n"; }

struct Options {
    int d = 3;
    int m_bases = 2;
    std::vector<double> omegas;
    std::string omega_grid = "0:1:201";
    int n_max = 100;
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 0;
    std::string backend = "symbolic";
    std::string mode = "physical";
    std::string format = "csv";
    std::string out;
    int threads = 1;
    bool no_pool = false;
};

int run_mub_check(const Options& opt) {
    const qkd::MubTable table = qkd::mub_table(opt.d);
    const qkd::MubCheck check = qkd::verify_mub_table(table);
    std::cout << "bases: " << table.bases.size() << "\n"
              << "max orthonormality deviation: "
              << qkd::format_double(check.max_orthonormality_deviation) << "\n"
              << "max unbiased deviation: " << qkd::format_double(check.max_unbiased_deviation)
              << "\n";
    if (!opt.out.empty()) {
        const int code = write_file(opt.out, json_text(qkd::mub_table_json(table)));
        if (code != kExitOk) {
            return code;
        }
    }
    const bool passed = check.passed();
    std::cout << "result: " << (passed ? "PASS" : "FAIL") << "\n";
    return passed ? kExitOk : kExitCheckFailed;
}

std::vector<double> resolve_grid(const Options& opt) {
    if (!opt.omegas.empty()) {
        return opt.omegas;
    }
    const GridSpec spec = parse_grid_spec(opt.omega_grid);
    return qkd::linear_grid(spec.lo, spec.hi, spec.count);
}

int run_curves(const Options& opt) {
    const qkd::ProtocolParams params(opt.d, opt.m_bases);
    const std::vector<qkd::CurveSample> samples = qkd::info_curve_single(params, resolve_grid(opt));
    const std::string content = opt.format == "json" ? json_text(qkd::curves_json(samples))
                                                     : qkd::curves_csv(samples);
    return emit(opt.out, content);
}

int run_table1(const Options& opt) {
    const std::vector<qkd::ThresholdEntry> entries = qkd::error_thresholds();
    const std::string content = opt.format == "json" ? json_text(qkd::thresholds_json(entries))
                                                     : qkd::thresholds_csv(entries);
    return emit(opt.out, content);
}

int emit_phase(const Options& opt, const qkd::PhaseDiagram& diagram) {
    if (opt.format == "json") {
        return emit(opt.out, json_text(qkd::phase_json(diagram)));
    }
    if (opt.out.empty()) {
        throw std::invalid_argument("csv phase output needs --out (a boundary.csv is written "
                                    "next to it)");
    }
    const int code = write_file(opt.out, qkd::phase_csv(diagram));
    if (code != kExitOk) {
        return code;
    }
    const std::filesystem::path boundary_path =
        std::filesystem::path(opt.out).parent_path() / "boundary.csv";
    return write_file(boundary_path.string(), qkd::boundary_csv(diagram));
}

int run_phase2(const Options& opt) {
    const qkd::ProtocolParams params(opt.d, opt.m_bases);
    const GridSpec spec = parse_grid_spec(opt.omega_grid);
    const std::vector<double> grid = qkd::linear_grid(spec.lo, spec.hi, spec.count);
    return emit_phase(opt, qkd::phase_diagram_two(params, grid, grid));
}

int run_phasecollab(const Options& opt) {
    const qkd::ProtocolParams params(opt.d, opt.m_bases);
    const GridSpec spec = parse_grid_spec(opt.omega_grid);
    const std::vector<double> grid = qkd::linear_grid(spec.lo, spec.hi, spec.count);
    return emit_phase(opt, qkd::phase_diagram_collab(params, grid, opt.n_max));
}

struct Comparison {
    std::string label;
    double analytic = 0.0;
    std::optional<double> empirical;
    double se = 0.0;
};

int run_simulate(const Options& opt) {
    qkd::SimConfig config;
    config.params = qkd::ProtocolParams(opt.d, opt.m_bases);
    config.attack = qkd::AttackVector(opt.omegas);
    config.rounds = opt.rounds;
    config.seed = opt.seed;
    config.backend = opt.backend == "quantum" ? qkd::Backend::quantum : qkd::Backend::symbolic;
    config.pool_symbols = !opt.no_pool;
    config.threads = opt.threads;
    const qkd::EveMode mode =
        opt.mode == "paper-literal" ? qkd::EveMode::paper_literal : qkd::EveMode::physical;
    const int n = config.attack.count();
    if (mode == qkd::EveMode::paper_literal && n != 2) {
        throw std::invalid_argument("paper-literal mode needs exactly two eavesdroppers");
    }

    const qkd::SimulationStats stats = qkd::simulate(config);
    const qkd::InfoReport analytic = qkd::info_report(config.params, config.attack, mode);

    std::ostringstream report;
    report << "config: d=" << opt.d << " m=" << opt.m_bases << " omegas=";
    for (int i = 0; i < n; ++i) {
        report << (i ? "," : "") << qkd::format_double(config.attack.omegas[static_cast<size_t>(i)]);
    }
    report << " rounds=" << config.rounds << " seed=" << config.seed << " backend=" << opt.backend
           << " mode=" << opt.mode << "\n";

    const double sift_expect = 1.0 / opt.m_bases;
    const double sift_se =
        std::sqrt(sift_expect * (1.0 - sift_expect) / static_cast<double>(config.rounds));
    report << "sifted: " << stats.sifted_count << " (fraction "
           << qkd::format_double(stats.sifted_fraction()) << ", expected "
           << qkd::format_double(sift_expect) << ")\n";

    std::vector<Comparison> checks;
    const auto sifted = static_cast<double>(stats.sifted_count);
    const auto se_of = [&](double p) {
        return sifted > 0 ? std::sqrt(p * (1.0 - p) / sifted) : 0.0;
    };
    checks.push_back({"p_ab_00", analytic.p_ab_00, stats.p_ab_00(), se_of(analytic.p_ab_00)});
    for (int m = 1; m <= n; ++m) {
        checks.push_back({"p_ae_" + std::to_string(m) + "_00",
                          analytic.p_ae_00[static_cast<size_t>(m - 1)], stats.p_ae_00(m),
                          se_of(analytic.p_ae_00[static_cast<size_t>(m - 1)])});
    }
    checks.push_back({"p_err", analytic.p_err, stats.p_err(), se_of(analytic.p_ab_00) / (opt.d - 1)});

    bool pass = std::abs(stats.sifted_fraction() - sift_expect) <= 4.0 * sift_se;
    for (const Comparison& c : checks) {
        if (!c.empirical) {
            report << c.label << ": insufficient sifted data\n";
            pass = false;
            continue;
        }
        const double delta = *c.empirical - c.analytic;
        const double sigma = c.se > 0.0 ? std::abs(delta) / c.se
                                        : (delta == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
        report << c.label << ": empirical " << qkd::format_double(*c.empirical) << " analytic "
               << qkd::format_double(c.analytic) << " delta " << qkd::format_double(delta) << " ("
               << qkd::format_double(sigma) << " se)\n";
        if (!(sigma <= 4.0)) {
            pass = false;
        }
    }
    report << "verdict: " << (pass ? "PASS" : "FAIL") << "\n";
    std::cout << report.str();

    if (!opt.out.empty()) {
        const int code = write_file(opt.out, json_text(qkd::stats_json(stats)));
        if (code != kExitOk) {
            return code;
        }
    }
    return pass ? kExitOk : kExitOracleMismatch;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Intercept-resend key distribution: exact bases, closed-form security "
                 "analysis, and a seedable protocol simulator"};
    app.require_subcommand(1);
    Options opt;

    const auto add_protocol = [&opt](CLI::App* cmd) {
        cmd->add_option("--d", opt.d, "System dimension")->check(CLI::IsMember({2, 3}));
        cmd->add_option("--m-bases", opt.m_bases, "Number of measurement bases");
    };
    const auto add_output = [&opt](CLI::App* cmd) {
        cmd->add_option("--format", opt.format, "Output format")
            ->check(CLI::IsMember({"csv", "json"}));
        cmd->add_option("--out", opt.out, "Output file path (stdout when omitted)");
    };

    CLI::App* mub = app.add_subcommand("mub-check", "Verify basis orthonormality and overlaps");
    mub->add_option("--d", opt.d, "System dimension")->check(CLI::IsMember({2, 3}));
    mub->add_option("--out", opt.out, "Write the basis table as JSON");

    CLI::App* curves = app.add_subcommand(
        "curves", "Information curves for the single-eavesdropper family");
    add_protocol(curves);
    curves->add_option("--omegas", opt.omegas, "Explicit ascending attack-probability samples")
        ->delimiter(',');
    curves->add_option("--omega-grid", opt.omega_grid, "Sample grid as lo:hi:count");
    add_output(curves);

    CLI::App* table1 = app.add_subcommand(
        "table1", "Error thresholds for every supported (d, m) pair");
    add_output(table1);

    CLI::App* phase2 = app.add_subcommand(
        "phase2", "Secure/insecure diagram over two eavesdroppers' attack probabilities");
    add_protocol(phase2);
    phase2->add_option("--omega-grid", opt.omega_grid, "Axis grid as lo:hi:count");
    add_output(phase2);

    CLI::App* collab = app.add_subcommand(
        "phasecollab", "Secure/insecure diagram for identical-omega chains of length 1..n");
    add_protocol(collab);
    collab->add_option("--omega-grid", opt.omega_grid, "Omega grid as lo:hi:count");
    collab->add_option("--n-max", opt.n_max, "Largest chain length")
        ->check(CLI::PositiveNumber);
    add_output(collab);

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Run the protocol simulator and compare against the closed forms");
    add_protocol(simulate);
    simulate->add_option("--omegas", opt.omegas, "Interception probability per eavesdropper")
        ->delimiter(',')
        ->required();
    simulate->add_option("--rounds", opt.rounds, "Transmission attempts");
    simulate->add_option("--seed", opt.seed, "Generator seed");
    simulate->add_option("--backend", opt.backend, "Measurement backend")
        ->check(CLI::IsMember({"symbolic", "quantum"}));
    simulate->add_option("--mode", opt.mode, "Analytic comparison mode")
        ->check(CLI::IsMember({"physical", "paper-literal"}));
    simulate->add_option("--threads", opt.threads, "Worker count (output is thread-count invariant)")
        ->check(CLI::PositiveNumber);
    simulate->add_flag("--no-pool", opt.no_pool, "Estimate P(0|0) from symbol 0 rows only");
    simulate->add_option("--out", opt.out, "Write full statistics as JSON");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {
            return app.exit(e);
        }
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (mub->parsed()) {
            return run_mub_check(opt);
        }
        if (curves->parsed()) {
            return run_curves(opt);
        }
        if (table1->parsed()) {
            return run_table1(opt);
        }
        if (phase2->parsed()) {
            return run_phase2(opt);
        }
        if (collab->parsed()) {
            return run_phasecollab(opt);
        }
        if (simulate->parsed()) {
            return run_simulate(opt);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    }
    return kExitUsage;
}
