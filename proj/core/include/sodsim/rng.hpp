#ifndef SODSIM_RNG_HPP
#define SODSIM_RNG_HPP

#include <cstdint>
#include <string_view>

namespace sodsim {

// xoshiro256++ seeded through splitmix64. Self-contained so that two runs
// with the same seed produce bit-identical streams on any toolchain; the
// standard <random> distributions carry no such guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed);

    // Decorrelated named substream, e.g. Rng::stream(seed, "mobility", node_id).
    static Rng stream(std::uint64_t base_seed, std::string_view tag, std::uint64_t index = 0);

    std::uint64_t next_u64();

    // Uniform double in [0, 1), 53-bit resolution.
    double uniform01();

    double uniform(double lo, double hi);

    // Uniform integer in [0, n), n > 0. Lemire multiply-shift, no rejection.
    std::uint64_t uniform_below(std::uint64_t n);

    double exponential(double mean);

private:
    std::uint64_t state_[4];
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace sodsim

#endif
