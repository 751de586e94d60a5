#include "qkd/info.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace qkd {

ProtocolParams::ProtocolParams(int d, int m) : dimension(d), num_bases(m) {
    if (d != 2 && d != 3) {
        throw std::invalid_argument("dimension must be 2 or 3, got " + std::to_string(d));
    }
    if (m < 2 || m > d + 1) {
        throw std::invalid_argument("num_bases must be in [2, " + std::to_string(d + 1) +
                                    "] for dimension " + std::to_string(d) + ", got " +
                                    std::to_string(m));
    }
}

AttackVector::AttackVector(std::vector<double> w) : omegas(std::move(w)) {
    for (double omega : omegas) {
        if (!(omega >= 0.0 && omega <= 1.0)) {
            throw std::invalid_argument("interception probability outside [0,1]: " +
                                        std::to_string(omega));
        }
    }
}

double chain_fidelity(const ProtocolParams& params, int j) {
    if (j < 0) {
        throw std::invalid_argument("measurement count must be nonnegative");
    }
    const double d = params.dimension;
    const double m = params.num_bases;
    return 1.0 / d + (1.0 - 1.0 / d) * std::pow(m, -j);
}

double intercept_pattern_weight(std::span<const double> omegas, int k) {
    const int n = static_cast<int>(omegas.size());
    if (k < 0 || k > n) {
        throw std::invalid_argument("pattern size " + std::to_string(k) +
                                    " outside [0, " + std::to_string(n) + "]");
    }
    // E[j] accumulates the weight of "exactly j of the first i skip".
    std::vector<double> weight(static_cast<size_t>(n) + 1, 0.0);
    weight[0] = 1.0;
    for (int i = 0; i < n; ++i) {
        const double skip = 1.0 - omegas[static_cast<size_t>(i)];
        const double hit = omegas[static_cast<size_t>(i)];
        for (int j = i + 1; j >= 1; --j) {
            weight[static_cast<size_t>(j)] =
                weight[static_cast<size_t>(j)] * hit + weight[static_cast<size_t>(j) - 1] * skip;
        }
        weight[0] *= hit;
    }
    return weight[static_cast<size_t>(k)];
}

double p_ab(const ProtocolParams& params, const AttackVector& attack) {
    const int n = attack.count();
    double total = 0.0;
    for (int k = 0; k <= n; ++k) {
        // k eavesdroppers skip, n-k measure.
        total += chain_fidelity(params, n - k) * intercept_pattern_weight(attack.omegas, k);
    }
    return total;
}

double p_ae(const ProtocolParams& params, const AttackVector& attack, int m, EveMode mode) {
    const int n = attack.count();
    if (m < 1 || m > n) {
        throw std::invalid_argument("eavesdropper index " + std::to_string(m) +
                                    " outside chain of length " + std::to_string(n));
    }
    const double omega_m = attack.omegas[static_cast<size_t>(m - 1)];
    const double d = params.dimension;

    if (mode == EveMode::paper_literal) {
        if (n != 2) {
            throw std::invalid_argument("paper_literal mode requires exactly two eavesdroppers");
        }
        if (m == 1) {
            // First eavesdropper credited with a correct record only when the
            // second one also measures.
            return (1.0 - omega_m) / d +
                   chain_fidelity(params, 2) * attack.omegas[0] * attack.omegas[1];
        }
        // m == 2 coincides with the physical expression below.
    }

    // Not measuring yields a uniform guess; measuring reads the symbol after
    // j upstream measurements plus her own, j drawn from the first m-1 omegas.
    std::span<const double> upstream(attack.omegas.data(), static_cast<size_t>(m - 1));
    double measured = 0.0;
    for (int j = 0; j <= m - 1; ++j) {
        // j upstream measure, so m-1-j of them skip.
        measured += chain_fidelity(params, j + 1) * intercept_pattern_weight(upstream, m - 1 - j);
    }
    return (1.0 - omega_m) / d + omega_m * measured;
}

namespace {

double xlog2x(double x) {
    return x > 0.0 ? x * std::log2(x) : 0.0;
}

}  // namespace

double mutual_info(const ProtocolParams& params, double p00) {
    constexpr double kDomainGrace = 1e-12;
    if (p00 < -kDomainGrace || p00 > 1.0 + kDomainGrace) {
        throw std::invalid_argument("conditional probability outside [0,1]: " +
                                    std::to_string(p00));
    }
    p00 = std::clamp(p00, 0.0, 1.0);
    const double d = params.dimension;
    const double rest = 1.0 - p00;
    double bits = std::log2(d) + xlog2x(p00) + xlog2x(rest);
    if (d > 2.0 && rest > 0.0) {
        bits -= rest * std::log2(d - 1.0);
    }
    // Nonnegative by Jensen; guard against rounding at the minimum p00 = 1/d.
    return std::max(bits, 0.0);
}

InfoReport info_report(const ProtocolParams& params, const AttackVector& attack, EveMode mode) {
    InfoReport report;
    report.p_ab_00 = p_ab(params, attack);
    report.i_ab = mutual_info(params, report.p_ab_00);
    report.p_err = (1.0 - report.p_ab_00) / (params.dimension - 1.0);

    const int n = attack.count();
    report.p_ae_00.reserve(static_cast<size_t>(n));
    report.i_ae_m.reserve(static_cast<size_t>(n));
    report.i_ae = 0.0;
    for (int m = 1; m <= n; ++m) {
        const double p = p_ae(params, attack, m, mode);
        report.p_ae_00.push_back(p);
        const double bits = mutual_info(params, p);
        report.i_ae_m.push_back(bits);
        report.i_ae = std::max(report.i_ae, bits);
    }
    report.secure = report.i_ab > report.i_ae;
    return report;
}

double p_ab_uniform(const ProtocolParams& params, double omega, int n) {
    if (!(omega >= 0.0 && omega <= 1.0)) {
        throw std::invalid_argument("interception probability outside [0,1]");
    }
    if (n < 0) {
        throw std::invalid_argument("chain length must be nonnegative");
    }
    const double d = params.dimension;
    const double m = params.num_bases;
    // The base written as (m - omega*(m-1))/m hits 1/m exactly at omega = 1,
    // so the n = 1 form meets p_ae_uniform(m = 1) bit for bit there.
    return 1.0 / d + (1.0 - 1.0 / d) * std::pow((m - omega * (m - 1.0)) / m, n);
}

double p_ae_uniform(const ProtocolParams& params, double omega, int m) {
    if (!(omega >= 0.0 && omega <= 1.0)) {
        throw std::invalid_argument("interception probability outside [0,1]");
    }
    if (m < 1) {
        throw std::invalid_argument("eavesdropper index must be positive");
    }
    const double d = params.dimension;
    const double bases = params.num_bases;
    return 1.0 / d + (1.0 - 1.0 / d) * (omega / bases) *
                         std::pow((bases - omega * (bases - 1.0)) / bases, m - 1);
}

std::optional<QuantumError> quantum_error(const ProtocolParams& params, const AttackFamily& family,
                                          double t_tol, int coarse_steps, EveMode mode) {
    if (!(t_tol > 0.0)) {
        throw std::invalid_argument("tolerance must be positive");
    }
    if (coarse_steps < 2) {
        throw std::invalid_argument("need at least two scan steps");
    }
    // Security margin; a tie already counts as crossed.
    const auto margin = [&](double t) {
        const InfoReport report = info_report(params, family(t), mode);
        return report.i_ab - report.i_ae;
    };
    const auto crossed = [&](double g) { return g <= 0.0; };

    double lo = 0.0;
    double g_lo = margin(lo);
    if (crossed(g_lo)) {
        const InfoReport report = info_report(params, family(0.0), mode);
        return QuantumError{0.0, report.p_err};
    }
    bool found = false;
    double hi = 0.0;
    for (int i = 1; i <= coarse_steps; ++i) {
        const double t = static_cast<double>(i) / coarse_steps;
        const double g = margin(t);
        if (crossed(g)) {
            hi = t;
            found = true;
            break;
        }
        lo = t;
    }
    if (!found) {
        return std::nullopt;
    }
    while (hi - lo > t_tol) {
        const double mid = 0.5 * (lo + hi);
        if (crossed(margin(mid))) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    // Report the first insecure point seen, not the last secure one.
    const InfoReport report = info_report(params, family(hi), mode);
    return QuantumError{hi, report.p_err};
}

}  // namespace qkd
