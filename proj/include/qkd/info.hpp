// info.hpp
// Closed-form conditional probabilities, Shannon mutual informations and
// quantum-error thresholds for a chain of N independent intercept-resend
// eavesdroppers on a d-level protocol with M mutually unbiased bases.
//
// All conditionals are sifted-key probabilities P(0|0); by the symbol
// symmetry of the protocol they determine the full conditional matrix:
// the d-1 wrong symbols share the remaining probability equally.

#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace qkd {

// Protocol dimension d in {2,3} and number of bases M, 2 <= M <= d+1.
struct ProtocolParams {
    int dimension = 3;
    int num_bases = 2;

    ProtocolParams() = default;
    ProtocolParams(int d, int m);  // throws std::invalid_argument if invalid
};

// Interception probabilities (omega_1, ..., omega_N); index 0 is the
// eavesdropper nearest Alice.  Empty means no eavesdropper.
struct AttackVector {
    std::vector<double> omegas;

    AttackVector() = default;
    explicit AttackVector(std::vector<double> w);  // throws if any omega outside [0,1]

    int count() const { return static_cast<int>(omegas.size()); }
};

enum class EveMode {
    physical,       // each eavesdropper's record depends only on the chain upstream of her
    paper_literal,  // variant E1 record coupled to the second eavesdropper (N=2 only)
};

// Probability that the sent symbol survives j intercept-resend measurements
// followed by a sifted readout: 1/d + (1 - 1/d) * M^{-j}.
// Strictly decreasing in j with limit 1/d; equals 1 for the empty chain.
double chain_fidelity(const ProtocolParams& params, int j);

// Probability that exactly k of the listed eavesdroppers do NOT intercept
// while the rest do: the elementary symmetric aggregation
//   sum_{|S|=k} prod_{i in S} (1-omega_i) * prod_{i not in S} omega_i.
// Computed by the subset-convolution recurrence, so omega_i = 0 is safe.
double intercept_pattern_weight(std::span<const double> omegas, int k);

// Sifted conditional probability P_AB(0|0) for the full chain.
double p_ab(const ProtocolParams& params, const AttackVector& attack);

// Sifted conditional probability P_AE_m(0|0) for eavesdropper m (1-based).
// physical mode:      (1-omega_m)/d + omega_m * sum over upstream intercept
//                     patterns of chain_fidelity(j+1).
// paper_literal mode: valid only for N = 2; m = 1 uses the variant
//                     (1-omega_1)/d + chain_fidelity(2) * omega_1 * omega_2.
double p_ae(const ProtocolParams& params, const AttackVector& attack, int m,
            EveMode mode = EveMode::physical);

// Shannon mutual information in bits for a symmetric d-ary channel with
// diagonal conditional p00:
//   log2(d) + p00*log2(p00) + (1-p00)*log2((1-p00)/(d-1)),
// with x*log2(x) := 0 at x = 0.  Zero at p00 = 1/d, log2(d) at p00 = 1.
// Inputs within 1e-12 outside [0,1] are clamped; beyond that throws.
double mutual_info(const ProtocolParams& params, double p00);

// Full per-point analysis.
struct InfoReport {
    double p_ab_00 = 1.0;            // P_AB(0|0)
    std::vector<double> p_ae_00;     // P_AE_m(0|0), m = 1..N
    double i_ab = 0.0;               // bits
    std::vector<double> i_ae_m;      // bits
    double i_ae = 0.0;               // max over eavesdroppers, 0 if N = 0
    double p_err = 0.0;              // (1 - P_AB(0|0)) / (d-1)
    bool secure = true;              // i_ab > i_ae, ties count as insecure
};

InfoReport info_report(const ProtocolParams& params, const AttackVector& attack,
                       EveMode mode = EveMode::physical);

// Collaborating-eavesdropper closed forms (all omega_i equal):
//   P_AB   = 1/d + (1-1/d) * (1 - omega*(M-1)/M)^n
//   P_AE_m = 1/d + (1-1/d) * (omega/M) * (1 - omega*(M-1)/M)^(m-1)
// Identical to p_ab / p_ae on equal-omega vectors.
double p_ab_uniform(const ProtocolParams& params, double omega, int n);
double p_ae_uniform(const ProtocolParams& params, double omega, int m);

// One-parameter family of attacks, t in [0,1].
using AttackFamily = std::function<AttackVector(double)>;

struct QuantumError {
    double t_star = 0.0;  // smallest t where i_ab - i_ae stops being positive
    double q_err = 0.0;   // p_err at t_star
};

// Locates the first point along the family where i_ab - i_ae changes sign
// (a tie counts as crossed), by ascending scan plus bisection to |dt| below
// t_tol.  Returns nullopt if the channel stays strictly secure on [0,1].
std::optional<QuantumError> quantum_error(const ProtocolParams& params,
                                          const AttackFamily& family,
                                          double t_tol = 1e-9,
                                          int coarse_steps = 256,
                                          EveMode mode = EveMode::physical);

}  // namespace qkd
