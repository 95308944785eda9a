#pragma once

#include <array>
#include <cstdint>

namespace aitax::sim {

// xoshiro256** seeded through SplitMix64. Integer-only state transitions,
// so a seed yields the same sequence on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed = 0);

    // Independent stream for one draw site: (run seed, site tag, site index).
    static Rng derive(std::uint64_t seed, std::uint64_t site, std::uint64_t index);

    std::uint64_t next();
    double uniform();       // [0, 1)
    double uniform_open();  // (0, 1)
    double normal();        // standard normal, Box-Muller (cosine branch only)
    std::uint64_t below(std::uint64_t n);  // uniform integer in [0, n)

private:
    std::array<std::uint64_t, 4> s_{};
};

std::uint64_t splitmix64(std::uint64_t& state);

// Draw-site tags. Values are part of the reproducibility contract.
namespace site {
inline constexpr std::uint64_t ingest = 0x11;
inline constexpr std::uint64_t detect = 0x12;
inline constexpr std::uint64_t fanout = 0x13;
inline constexpr std::uint64_t partition = 0x14;
inline constexpr std::uint64_t identify = 0x15;
inline constexpr std::uint64_t phase = 0x16;
}  // namespace site

}  // namespace aitax::sim
