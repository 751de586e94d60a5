// rng.hpp
// Philox4x32-10 counter-based generator.  Stateless: every 128-bit counter
// maps to an independent 128-bit block under a 64-bit key, so randomness can
// be addressed by (round, party, draw) and any sharding of the round range
// reproduces identical draws.

#pragma once

#include <array>
#include <cstdint>

namespace qkd {

struct Philox4x32 {
    using Block = std::array<std::uint32_t, 4>;
    using Key = std::array<std::uint32_t, 2>;

    static constexpr std::uint32_t kMult0 = 0xD2511F53u;
    static constexpr std::uint32_t kMult1 = 0xCD9E8D57u;
    static constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
    static constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

    static Block generate(Block counter, Key key) {
        for (int round = 0; round < 10; ++round) {
            const std::uint64_t product0 = static_cast<std::uint64_t>(kMult0) * counter[0];
            const std::uint64_t product1 = static_cast<std::uint64_t>(kMult1) * counter[2];
            const auto hi0 = static_cast<std::uint32_t>(product0 >> 32);
            const auto lo0 = static_cast<std::uint32_t>(product0);
            const auto hi1 = static_cast<std::uint32_t>(product1 >> 32);
            const auto lo1 = static_cast<std::uint32_t>(product1);
            counter = {hi1 ^ counter[1] ^ key[0], lo1, hi0 ^ counter[3] ^ key[1], lo0};
            key[0] += kWeyl0;
            key[1] += kWeyl1;
        }
        return counter;
    }
};

// Addresses one block per (round, party, draw) event under a fixed seed.
class EventRng {
  public:
    explicit EventRng(std::uint64_t seed)
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)} {}

    std::uint64_t bits64(std::uint64_t round, std::uint32_t party, std::uint32_t draw) const {
        const Philox4x32::Block block = Philox4x32::generate(
            {static_cast<std::uint32_t>(round), static_cast<std::uint32_t>(round >> 32), party,
             draw},
            key_);
        return (static_cast<std::uint64_t>(block[0]) << 32) | block[1];
    }

    // Uniform in [0, 1) on the 53-bit grid; never returns 1.
    double uniform01(std::uint64_t round, std::uint32_t party, std::uint32_t draw) const {
        return static_cast<double>(bits64(round, party, draw) >> 11) * 0x1.0p-53;
    }

    // Uniform in [0, bound); bias below bound / 2^64.
    std::uint32_t uniform_int(std::uint64_t round, std::uint32_t party, std::uint32_t draw,
                              std::uint32_t bound) const {
        const std::uint64_t raw = bits64(round, party, draw);
        return static_cast<std::uint32_t>(
            (static_cast<unsigned __int128>(raw) * bound) >> 64);
    }

    // Exact at p = 0 and p = 1.
    bool bernoulli(std::uint64_t round, std::uint32_t party, std::uint32_t draw, double p) const {
        return uniform01(round, party, draw) < p;
    }

  private:
    Philox4x32::Key key_;
};

}  // namespace qkd
