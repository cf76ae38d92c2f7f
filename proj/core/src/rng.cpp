#include "sodsim/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace sodsim {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9E3779B97F4A7C15ull);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

namespace {

std::uint64_t rotl(std::uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ull;
    }
    return h;
}

} // namespace

Rng::Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& word : state_) word = splitmix64(sm);
}

Rng Rng::stream(std::uint64_t base_seed, std::string_view tag, std::uint64_t index) {
    std::uint64_t sm = base_seed ^ fnv1a(tag);
    std::uint64_t mixed = splitmix64(sm) + 0x9E3779B97F4A7C15ull * (index + 1);
    return Rng(mixed);
}

std::uint64_t Rng::next_u64() {
    const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
    return lo + uniform01() * (hi - lo);
}

std::uint64_t Rng::uniform_below(std::uint64_t n) {
    if (n == 0) throw std::domain_error("uniform_below: n must be > 0");
    const unsigned __int128 product =
        static_cast<unsigned __int128>(next_u64()) * static_cast<unsigned __int128>(n);
    return static_cast<std::uint64_t>(product >> 64);
}

double Rng::exponential(double mean) {
    if (mean <= 0.0) throw std::domain_error("exponential: mean must be > 0");
    return -mean * std::log1p(-uniform01());
}

} // namespace sodsim
