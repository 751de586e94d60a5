// chain.hpp
// Monte Carlo simulation of the full preparation, interception and
// measurement chain with sifting, plus an exact weighted enumeration of the
// same process used to cross-check the closed forms in info.hpp.

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "qkd/info.hpp"
#include "qkd/rng.hpp"

namespace qkd {

enum class Backend {
    symbolic,  // matched basis reads the symbol, mismatched basis is uniform
    quantum,   // outcomes sampled from squared overlaps of the actual vectors
};

struct SimConfig {
    ProtocolParams params;
    AttackVector attack;
    std::uint64_t rounds = 1'000'000;
    std::uint64_t seed = 0;
    Backend backend = Backend::symbolic;
    bool pool_symbols = true;  // estimate P(0|0) from every matched symbol, not just 0
    int threads = 1;
};

struct EveAction {
    bool intercepted = false;
    int basis = -1;  // measurement basis when intercepting, -1 otherwise
    int record = 0;  // measurement outcome, or the private guess when idle
};

struct RoundRecord {
    int alice_basis = 0;
    int alice_symbol = 0;
    int bob_basis = 0;
    int bob_symbol = 0;
    bool sifted = false;
    std::vector<EveAction> eves;
};

// Symbol-vs-record tallies over sifted rounds, indexed [sent][recorded].
struct CountMatrix {
    std::array<std::array<std::uint64_t, 3>, 3> cells{};

    std::uint64_t total(int dim) const;
    std::uint64_t diagonal(int dim) const;
};

struct SimulationStats {
    SimConfig config;
    std::uint64_t sifted_count = 0;
    CountMatrix ab_counts;
    std::vector<CountMatrix> eve_counts;  // one per eavesdropper

    double sifted_fraction() const;
    // Empty when no sifted round supports the estimate.
    std::optional<double> p_ab_00() const;
    std::optional<double> p_ae_00(int m) const;  // m is 1-based
    std::optional<double> p_err() const;
};

// One full transmission round addressed by its index; pure in
// (config, seed, round_index).
RoundRecord run_round(const SimConfig& config, const EventRng& rng, std::uint64_t round_index);

// Runs config.rounds independent rounds and tallies sifted statistics.
// Identical (config, seed) gives bit-identical stats for any thread count.
SimulationStats simulate(const SimConfig& config);

struct ExactConditionals {
    double p_ab_00 = 1.0;
    std::vector<double> p_ae_00;
};

// Weighted enumeration of every branch of the symbolic process, exact up to
// float rounding.  Supports at most 4 eavesdroppers.
ExactConditionals exact_enumeration(const ProtocolParams& params, const AttackVector& attack);

}  // namespace qkd
