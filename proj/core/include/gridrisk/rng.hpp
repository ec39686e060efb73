#pragma once

#include <cstdint>
#include <random>

#include "gridrisk/math.hpp"

namespace gridrisk {

// splitmix64 step; used to derive independent substream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = x;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Seed namespaces keep sampling streams used for different purposes disjoint.
enum class SeedSpace : std::uint64_t {
    generation = 1,
    evaluation = 2,
    threshold = 3,
    scenario = 4,
    fitting = 5,
};

// Derives the seed of substream (seed, a, b, c). Streams with distinct
// coordinates never collide in practice.
constexpr std::uint64_t substream(std::uint64_t seed, std::uint64_t a,
                                  std::uint64_t b = 0, std::uint64_t c = 0) {
    std::uint64_t h = splitmix64(seed);
    h = splitmix64(h ^ splitmix64(a));
    h = splitmix64(h ^ splitmix64(b));
    h = splitmix64(h ^ splitmix64(c));
    return h;
}

constexpr std::uint64_t substream(std::uint64_t seed, SeedSpace space,
                                  std::uint64_t b = 0, std::uint64_t c = 0) {
    return substream(seed, static_cast<std::uint64_t>(space), b, c);
}

// Deterministic random stream. Uniform and normal draws are generated by
// explicit bit manipulation and inverse-cdf so output is identical across
// platforms and standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(splitmix64(seed)) {}

    // uniform on the open interval (0, 1)
    double uniform01() {
        const std::uint64_t bits = engine_() >> 11;  // 53 random bits
        return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    double normal() { return math::normal_quantile(uniform01()); }

    std::uint64_t next_u64() { return engine_(); }

    // integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return engine_() % n; }

private:
    std::mt19937_64 engine_;
};

}  // namespace gridrisk
