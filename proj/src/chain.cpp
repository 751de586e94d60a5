#include "qkd/chain.hpp"

#include <stdexcept>
#include <string>
#include <thread>
#include <utility>

#include "qkd/mub.hpp"

namespace qkd {

namespace {

// Draw slots within a round.  Alice is party 0, eavesdropper i is party i,
// Bob is party N+1.  Unused slots cost nothing; the generator is counter
// based, so skipping draws never shifts later ones.
constexpr std::uint32_t kDrawBasis = 0;       // Alice and Bob
constexpr std::uint32_t kDrawSymbol = 1;      // Alice prepared symbol, Bob outcome
constexpr std::uint32_t kDrawIntercept = 0;   // eavesdroppers
constexpr std::uint32_t kDrawEveBasis = 1;
constexpr std::uint32_t kDrawOutcome = 2;
constexpr std::uint32_t kDrawGuess = 3;

// All squared overlaps between basis vectors, precomputed so the sampling
// loop stays allocation free.
struct BornTable {
    int num_bases = 0;
    int dim = 0;
    std::vector<double> probs;  // [((from_basis*dim + symbol)*num_bases + to_basis)*dim + outcome]

    explicit BornTable(const MubTable& table)
        : num_bases(static_cast<int>(table.bases.size())), dim(table.dimension) {
        probs.resize(static_cast<size_t>(num_bases) * dim * num_bases * dim);
        for (int fb = 0; fb < num_bases; ++fb) {
            for (int s = 0; s < dim; ++s) {
                for (int tb = 0; tb < num_bases; ++tb) {
                    const std::vector<double> row = born_probabilities(
                        table.bases[static_cast<size_t>(fb)].vectors[static_cast<size_t>(s)],
                        table.bases[static_cast<size_t>(tb)]);
                    for (int o = 0; o < dim; ++o) {
                        probs[index(fb, s, tb, o)] = row[static_cast<size_t>(o)];
                    }
                }
            }
        }
    }

    size_t index(int fb, int s, int tb, int o) const {
        return static_cast<size_t>(((fb * dim + s) * num_bases + tb) * dim + o);
    }

    const double* row(int fb, int s, int tb) const { return &probs[index(fb, s, tb, 0)]; }
};

struct RoundContext {
    const SimConfig& config;
    const BornTable* born = nullptr;  // null for the symbolic backend
    EventRng rng;
};

int measure(const RoundContext& ctx, std::uint64_t round, std::uint32_t party, std::uint32_t draw,
            int state_basis, int state_symbol, int meas_basis) {
    const int d = ctx.config.params.dimension;
    if (ctx.born == nullptr) {
        if (meas_basis == state_basis) {
            return state_symbol;
        }
        return static_cast<int>(ctx.rng.uniform_int(round, party, draw, static_cast<std::uint32_t>(d)));
    }
    const double* p = ctx.born->row(state_basis, state_symbol, meas_basis);
    const double u = ctx.rng.uniform01(round, party, draw);
    double cum = 0.0;
    for (int o = 0; o < d - 1; ++o) {
        cum += p[o];
        if (u < cum) {
            return o;
        }
    }
    return d - 1;
}

void play_round(const RoundContext& ctx, std::uint64_t idx, RoundRecord& rec) {
    const auto m = static_cast<std::uint32_t>(ctx.config.params.num_bases);
    const auto d = static_cast<std::uint32_t>(ctx.config.params.dimension);
    const int n = ctx.config.attack.count();
    const auto bob = static_cast<std::uint32_t>(n + 1);

    rec.alice_basis = static_cast<int>(ctx.rng.uniform_int(idx, 0, kDrawBasis, m));
    rec.alice_symbol = static_cast<int>(ctx.rng.uniform_int(idx, 0, kDrawSymbol, d));
    rec.bob_basis = static_cast<int>(ctx.rng.uniform_int(idx, bob, kDrawBasis, m));
    rec.sifted = rec.bob_basis == rec.alice_basis;
    rec.eves.resize(static_cast<size_t>(n));

    int basis = rec.alice_basis;
    int symbol = rec.alice_symbol;
    for (int i = 0; i < n; ++i) {
        EveAction& act = rec.eves[static_cast<size_t>(i)];
        const auto party = static_cast<std::uint32_t>(i + 1);
        if (ctx.rng.bernoulli(idx, party, kDrawIntercept,
                              ctx.config.attack.omegas[static_cast<size_t>(i)])) {
            act.intercepted = true;
            act.basis = static_cast<int>(ctx.rng.uniform_int(idx, party, kDrawEveBasis, m));
            act.record = measure(ctx, idx, party, kDrawOutcome, basis, symbol, act.basis);
            basis = act.basis;
            symbol = act.record;
        } else {
            act.intercepted = false;
            act.basis = -1;
            act.record = static_cast<int>(ctx.rng.uniform_int(idx, party, kDrawGuess, d));
        }
    }
    rec.bob_symbol = measure(ctx, idx, bob, kDrawSymbol, basis, symbol, rec.bob_basis);
}

void validate(const SimConfig& config) {
    if (config.rounds < 1) {
        throw std::invalid_argument("rounds must be at least 1");
    }
    if (config.threads < 1) {
        throw std::invalid_argument("threads must be at least 1");
    }
}

}  // namespace

std::uint64_t CountMatrix::total(int dim) const {
    std::uint64_t sum = 0;
    for (int x = 0; x < dim; ++x) {
        for (int y = 0; y < dim; ++y) {
            sum += cells[static_cast<size_t>(x)][static_cast<size_t>(y)];
        }
    }
    return sum;
}

std::uint64_t CountMatrix::diagonal(int dim) const {
    std::uint64_t sum = 0;
    for (int x = 0; x < dim; ++x) {
        sum += cells[static_cast<size_t>(x)][static_cast<size_t>(x)];
    }
    return sum;
}

double SimulationStats::sifted_fraction() const {
    return static_cast<double>(sifted_count) / static_cast<double>(config.rounds);
}

namespace {

std::optional<double> diagonal_rate(const CountMatrix& counts, int dim, bool pooled,
                                    std::uint64_t sifted) {
    if (pooled) {
        if (sifted == 0) {
            return std::nullopt;
        }
        return static_cast<double>(counts.diagonal(dim)) / static_cast<double>(sifted);
    }
    std::uint64_t row = 0;
    for (int y = 0; y < dim; ++y) {
        row += counts.cells[0][static_cast<size_t>(y)];
    }
    if (row == 0) {
        return std::nullopt;
    }
    return static_cast<double>(counts.cells[0][0]) / static_cast<double>(row);
}

}  // namespace

std::optional<double> SimulationStats::p_ab_00() const {
    return diagonal_rate(ab_counts, config.params.dimension, config.pool_symbols, sifted_count);
}

std::optional<double> SimulationStats::p_ae_00(int m) const {
    if (m < 1 || m > static_cast<int>(eve_counts.size())) {
        throw std::invalid_argument("eavesdropper index " + std::to_string(m) +
                                    " outside chain of length " +
                                    std::to_string(eve_counts.size()));
    }
    return diagonal_rate(eve_counts[static_cast<size_t>(m - 1)], config.params.dimension,
                         config.pool_symbols, sifted_count);
}

std::optional<double> SimulationStats::p_err() const {
    const std::optional<double> p = p_ab_00();
    if (!p) {
        return std::nullopt;
    }
    return (1.0 - *p) / (config.params.dimension - 1.0);
}

RoundRecord run_round(const SimConfig& config, const EventRng& rng, std::uint64_t round_index) {
    validate(config);
    RoundRecord rec;
    if (config.backend == Backend::quantum) {
        const MubTable table = mub_table(config.params.dimension);
        const BornTable born(table);
        const RoundContext ctx{config, &born, rng};
        play_round(ctx, round_index, rec);
    } else {
        const RoundContext ctx{config, nullptr, rng};
        play_round(ctx, round_index, rec);
    }
    return rec;
}

SimulationStats simulate(const SimConfig& config) {
    validate(config);
    const int n = config.attack.count();
    std::optional<MubTable> table;
    std::optional<BornTable> born;
    if (config.backend == Backend::quantum) {
        table.emplace(mub_table(config.params.dimension));
        born.emplace(*table);
    }
    const RoundContext ctx{config, born ? &*born : nullptr, EventRng(config.seed)};

    struct Shard {
        std::uint64_t sifted = 0;
        CountMatrix ab;
        std::vector<CountMatrix> eve;
    };
    const int workers = config.threads;
    std::vector<Shard> shards(static_cast<size_t>(workers));

    const auto run_shard = [&](int w) {
        Shard& shard = shards[static_cast<size_t>(w)];
        shard.eve.resize(static_cast<size_t>(n));
        const std::uint64_t begin = config.rounds * static_cast<std::uint64_t>(w) /
                                    static_cast<std::uint64_t>(workers);
        const std::uint64_t end = config.rounds * static_cast<std::uint64_t>(w + 1) /
                                  static_cast<std::uint64_t>(workers);
        const auto m = static_cast<std::uint32_t>(config.params.num_bases);
        const auto bob = static_cast<std::uint32_t>(n + 1);
        RoundRecord rec;
        rec.eves.reserve(static_cast<size_t>(n));
        for (std::uint64_t idx = begin; idx < end; ++idx) {
            // Sifting depends only on the two basis draws; unsifted rounds
            // contribute nothing, so the chain is not evaluated for them.
            if (ctx.rng.uniform_int(idx, 0, kDrawBasis, m) !=
                ctx.rng.uniform_int(idx, bob, kDrawBasis, m)) {
                continue;
            }
            play_round(ctx, idx, rec);
            ++shard.sifted;
            ++shard.ab.cells[static_cast<size_t>(rec.alice_symbol)]
                            [static_cast<size_t>(rec.bob_symbol)];
            for (int i = 0; i < n; ++i) {
                ++shard.eve[static_cast<size_t>(i)]
                      .cells[static_cast<size_t>(rec.alice_symbol)]
                            [static_cast<size_t>(rec.eves[static_cast<size_t>(i)].record)];
            }
        }
    };

    if (workers == 1) {
        run_shard(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back(run_shard, w);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    SimulationStats stats;
    stats.config = config;
    stats.eve_counts.resize(static_cast<size_t>(n));
    for (const Shard& shard : shards) {
        stats.sifted_count += shard.sifted;
        for (int x = 0; x < 3; ++x) {
            for (int y = 0; y < 3; ++y) {
                stats.ab_counts.cells[static_cast<size_t>(x)][static_cast<size_t>(y)] +=
                    shard.ab.cells[static_cast<size_t>(x)][static_cast<size_t>(y)];
                for (int i = 0; i < n; ++i) {
                    stats.eve_counts[static_cast<size_t>(i)]
                        .cells[static_cast<size_t>(x)][static_cast<size_t>(y)] +=
                        shard.eve[static_cast<size_t>(i)]
                            .cells[static_cast<size_t>(x)][static_cast<size_t>(y)];
                }
            }
        }
    }
    return stats;
}

ExactConditionals exact_enumeration(const ProtocolParams& params, const AttackVector& attack) {
    const int n = attack.count();
    if (n > 4) {
        throw std::invalid_argument("enumeration supports at most 4 eavesdroppers, got " +
                                    std::to_string(n));
    }
    const int m = params.num_bases;
    const int d = params.dimension;
    ExactConditionals out;
    out.p_ab_00 = 0.0;
    out.p_ae_00.assign(static_cast<size_t>(n), 0.0);

    // Depth-first walk over every intercept pattern, basis choice and
    // mismatched-measurement outcome, carrying the branch weight.  Bob's
    // basis is pinned to Alice's: sifting is independent of the chain, so
    // conditioning on it just removes his basis draw.
    const auto walk = [&](auto&& self, int i, int alice_basis, int basis, int symbol,
                          double weight) -> void {
        if (i == n) {
            if (basis == alice_basis) {
                if (symbol == 0) {
                    out.p_ab_00 += weight;
                }
            } else {
                out.p_ab_00 += weight / d;
            }
            return;
        }
        const double omega = attack.omegas[static_cast<size_t>(i)];
        if (omega < 1.0) {
            const double w = weight * (1.0 - omega);
            out.p_ae_00[static_cast<size_t>(i)] += w / d;  // uniform private guess
            self(self, i + 1, alice_basis, basis, symbol, w);
        }
        if (omega > 0.0) {
            const double per_basis = weight * omega / m;
            for (int eb = 0; eb < m; ++eb) {
                if (eb == basis) {
                    if (symbol == 0) {
                        out.p_ae_00[static_cast<size_t>(i)] += per_basis;
                    }
                    self(self, i + 1, alice_basis, eb, symbol, per_basis);
                } else {
                    const double per_outcome = per_basis / d;
                    out.p_ae_00[static_cast<size_t>(i)] += per_outcome;  // outcome 0 branch
                    for (int o = 0; o < d; ++o) {
                        self(self, i + 1, alice_basis, eb, o, per_outcome);
                    }
                }
            }
        }
    };
    for (int alice_basis = 0; alice_basis < m; ++alice_basis) {
        walk(walk, 0, alice_basis, alice_basis, 0, 1.0 / m);
    }
    return out;
}

}  // namespace qkd
