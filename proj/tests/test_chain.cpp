#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "qkd/chain.hpp"

using namespace qkd;

namespace {

SimConfig make_config(int d, int m, std::vector<double> omegas, std::uint64_t rounds,
                      std::uint64_t seed, Backend backend) {
    SimConfig config;
    config.params = ProtocolParams(d, m);
    config.attack = AttackVector(std::move(omegas));
    config.rounds = rounds;
    config.seed = seed;
    config.backend = backend;
    return config;
}

bool same_counts(const SimulationStats& a, const SimulationStats& b) {
    if (a.sifted_count != b.sifted_count || a.ab_counts.cells != b.ab_counts.cells ||
        a.eve_counts.size() != b.eve_counts.size()) {
        return false;
    }
    for (size_t i = 0; i < a.eve_counts.size(); ++i) {
        if (a.eve_counts[i].cells != b.eve_counts[i].cells) {
            return false;
        }
    }
    return true;
}

}  // namespace

TEST_CASE("enumeration matches the closed forms everywhere") {
    const std::vector<double> steps = {0.0, 0.25, 0.5, 0.75, 1.0};
    for (int d : {2, 3}) {
        for (int m = 2; m <= d + 1; ++m) {
            const ProtocolParams params(d, m);
            for (int n = 0; n <= 3; ++n) {
                std::vector<size_t> odo(static_cast<size_t>(n), 0);
                while (true) {
                    std::vector<double> omegas(static_cast<size_t>(n));
                    for (int i = 0; i < n; ++i) {
                        omegas[static_cast<size_t>(i)] = steps[odo[static_cast<size_t>(i)]];
                    }
                    const AttackVector attack(omegas);
                    const ExactConditionals exact = exact_enumeration(params, attack);
                    CHECK(std::abs(exact.p_ab_00 - p_ab(params, attack)) < 1e-12);
                    for (int mm = 1; mm <= n; ++mm) {
                        CHECK(std::abs(exact.p_ae_00[static_cast<size_t>(mm - 1)] -
                                       p_ae(params, attack, mm)) < 1e-12);
                    }
                    int pos = n - 1;
                    while (pos >= 0 && odo[static_cast<size_t>(pos)] == steps.size() - 1) {
                        odo[static_cast<size_t>(pos)] = 0;
                        --pos;
                    }
                    if (pos < 0) {
                        break;
                    }
                    ++odo[static_cast<size_t>(pos)];
                }
            }
        }
    }
}

TEST_CASE("enumeration pins down the upstream-only weighting") {
    const ProtocolParams params(3, 2);
    const AttackVector attack({0.5, 0.5});
    const ExactConditionals exact = exact_enumeration(params, attack);
    CHECK(std::abs(exact.p_ae_00[1] - 11.0 / 24) < 1e-12);
    // A reading that draws skip patterns from the whole chain instead of the
    // part before the measuring eavesdropper predicts 19/48; the physical
    // process rules it out.
    CHECK(std::abs(exact.p_ae_00[1] - 19.0 / 48) > 0.05);
}

TEST_CASE("enumeration rejects oversized chains") {
    const ProtocolParams params(3, 2);
    CHECK_THROWS_AS(exact_enumeration(params, AttackVector({0.5, 0.5, 0.5, 0.5, 0.5})),
                    std::invalid_argument);
    CHECK_NOTHROW(exact_enumeration(params, AttackVector(std::vector<double>{})));
}

TEST_CASE("untouched channel rounds always agree after sifting") {
    const SimConfig config = make_config(3, 2, {0.0, 0.0}, 1, 11, Backend::symbolic);
    const EventRng rng(config.seed);
    for (std::uint64_t idx = 0; idx < 2000; ++idx) {
        const RoundRecord rec = run_round(config, rng, idx);
        REQUIRE(rec.eves.size() == 2);
        for (const EveAction& act : rec.eves) {
            CHECK_FALSE(act.intercepted);
            CHECK(act.basis == -1);
            CHECK(act.record >= 0);
            CHECK(act.record < 3);
        }
        if (rec.sifted) {
            CHECK(rec.bob_basis == rec.alice_basis);
            CHECK(rec.bob_symbol == rec.alice_symbol);
        }
    }
}

TEST_CASE("matched-basis interception copies the symbol") {
    for (Backend backend : {Backend::symbolic, Backend::quantum}) {
        const SimConfig config = make_config(3, 2, {1.0}, 1, 5, backend);
        const EventRng rng(config.seed);
        int matched = 0;
        for (std::uint64_t idx = 0; idx < 3000; ++idx) {
            const RoundRecord rec = run_round(config, rng, idx);
            REQUIRE(rec.eves[0].intercepted);
            if (rec.sifted && rec.eves[0].basis == rec.alice_basis) {
                CHECK(rec.eves[0].record == rec.alice_symbol);
                CHECK(rec.bob_symbol == rec.alice_symbol);
                ++matched;
            }
        }
        CHECK(matched > 500);
    }
}

TEST_CASE("mismatched quantum measurements land uniformly") {
    const SimConfig config = make_config(3, 2, {1.0}, 1, 17, Backend::quantum);
    const EventRng rng(config.seed);
    std::uint64_t hist[3] = {0, 0, 0};
    for (std::uint64_t idx = 0; idx < 100000; ++idx) {
        const RoundRecord rec = run_round(config, rng, idx);
        if (rec.sifted && rec.eves[0].basis != rec.alice_basis) {
            ++hist[rec.eves[0].record];
        }
    }
    const double total = static_cast<double>(hist[0] + hist[1] + hist[2]);
    REQUIRE(total > 20000);
    const double expected = total / 3.0;
    double chi2 = 0.0;
    for (std::uint64_t h : hist) {
        const double diff = static_cast<double>(h) - expected;
        chi2 += diff * diff / expected;
    }
    CHECK(chi2 < 20.0);  // 2 degrees of freedom
}

TEST_CASE("identical seeds give identical statistics for any sharding") {
    const auto base = make_config(3, 2, {0.5, 0.3}, 20000, 42, Backend::symbolic);
    const SimulationStats reference = simulate(base);
    for (int threads : {1, 2, 3, 5}) {
        SimConfig config = base;
        config.threads = threads;
        CHECK(same_counts(simulate(config), reference));
    }
    SimConfig quantum = base;
    quantum.backend = Backend::quantum;
    quantum.threads = 4;
    SimConfig quantum_single = quantum;
    quantum_single.threads = 1;
    CHECK(same_counts(simulate(quantum), simulate(quantum_single)));
}

TEST_CASE("estimates track the closed forms on both backends") {
    for (Backend backend : {Backend::symbolic, Backend::quantum}) {
        const SimConfig config = make_config(3, 2, {0.7}, 200000, 2024, backend);
        const SimulationStats stats = simulate(config);
        const double sifted = static_cast<double>(stats.sifted_count);

        const double frac_se = std::sqrt(0.25 / static_cast<double>(config.rounds));
        CHECK(std::abs(stats.sifted_fraction() - 0.5) < 4.0 * frac_se);

        const double ab = p_ab(config.params, config.attack);
        const double ab_se = std::sqrt(ab * (1.0 - ab) / sifted);
        CHECK(std::abs(*stats.p_ab_00() - ab) < 5.0 * ab_se);

        const double ae = p_ae(config.params, config.attack, 1);
        const double ae_se = std::sqrt(ae * (1.0 - ae) / sifted);
        CHECK(std::abs(*stats.p_ae_00(1) - ae) < 5.0 * ae_se);

        CHECK(std::abs(*stats.p_err() - (1.0 - *stats.p_ab_00()) / 2.0) < 1e-15);
    }
}

TEST_CASE("per-symbol agreement rates match the pooled rate") {
    const SimConfig config = make_config(3, 2, {0.6}, 300000, 77, Backend::symbolic);
    const SimulationStats stats = simulate(config);
    const double expected = p_ab(config.params, config.attack);
    for (int x = 0; x < 3; ++x) {
        std::uint64_t row = 0;
        for (int y = 0; y < 3; ++y) {
            row += stats.ab_counts.cells[static_cast<size_t>(x)][static_cast<size_t>(y)];
        }
        REQUIRE(row > 0);
        const double rate =
            static_cast<double>(stats.ab_counts.cells[static_cast<size_t>(x)][static_cast<size_t>(x)]) /
            static_cast<double>(row);
        const double se = std::sqrt(expected * (1.0 - expected) / static_cast<double>(row));
        CHECK(std::abs(rate - expected) < 5.0 * se);
    }
}

TEST_CASE("pooling flag switches the estimator") {
    SimConfig config = make_config(3, 2, {0.5}, 50000, 8, Backend::symbolic);
    const SimulationStats pooled = simulate(config);
    config.pool_symbols = false;
    const SimulationStats unpooled = simulate(config);
    CHECK(same_counts(pooled, unpooled));
    std::uint64_t row = 0;
    for (int y = 0; y < 3; ++y) {
        row += unpooled.ab_counts.cells[0][static_cast<size_t>(y)];
    }
    CHECK(*unpooled.p_ab_00() ==
          static_cast<double>(unpooled.ab_counts.cells[0][0]) / static_cast<double>(row));
    CHECK(*pooled.p_ab_00() == static_cast<double>(pooled.ab_counts.diagonal(3)) /
                                   static_cast<double>(pooled.sifted_count));
}

TEST_CASE("a single unsifted round reports no data") {
    for (std::uint64_t seed = 0; seed < 64; ++seed) {
        const SimConfig config = make_config(3, 2, {0.5}, 1, seed, Backend::symbolic);
        const SimulationStats stats = simulate(config);
        if (stats.sifted_count == 0) {
            CHECK_FALSE(stats.p_ab_00().has_value());
            CHECK_FALSE(stats.p_ae_00(1).has_value());
            CHECK_FALSE(stats.p_err().has_value());
            return;
        }
    }
    FAIL("no seed produced an unsifted first round");
}

TEST_CASE("configuration validation") {
    SimConfig config = make_config(3, 2, {0.5}, 0, 1, Backend::symbolic);
    CHECK_THROWS_AS(simulate(config), std::invalid_argument);
    config.rounds = 10;
    config.threads = 0;
    CHECK_THROWS_AS(simulate(config), std::invalid_argument);
    config.threads = 1;
    CHECK_NOTHROW(simulate(config));
    CHECK_THROWS_AS(simulate(config).p_ae_00(2), std::invalid_argument);
}
