#include "latwalk/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace latwalk {

std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RandomSource::RandomSource(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream) {
    std::uint64_t state = seed;
    std::uint64_t s0 = splitmix64(state);
    state ^= stream * 0x9e3779b97f4a7c15ULL + 0x632be59bd9b4e019ULL;
    std::uint64_t s1 = splitmix64(state);
    std::uint64_t s2 = splitmix64(state);
    std::uint64_t s3 = splitmix64(state);
    std::seed_seq seq{static_cast<std::uint32_t>(s0), static_cast<std::uint32_t>(s0 >> 32),
                      static_cast<std::uint32_t>(s1), static_cast<std::uint32_t>(s1 >> 32),
                      static_cast<std::uint32_t>(s2), static_cast<std::uint32_t>(s2 >> 32),
                      static_cast<std::uint32_t>(s3), static_cast<std::uint32_t>(s3 >> 32)};
    engine_.seed(seq);
}

std::uint32_t RandomSource::nextBounded(std::uint32_t bound) {
    if (bound == 0) throw std::invalid_argument("nextBounded: bound must be positive");
    while (true) {
        std::uint32_t x = static_cast<std::uint32_t>(nextU64());
        std::uint64_t m = static_cast<std::uint64_t>(x) * bound;
        std::uint32_t low = static_cast<std::uint32_t>(m);
        if (low >= bound) return static_cast<std::uint32_t>(m >> 32);
        std::uint32_t threshold = (0u - bound) % bound;
        if (low >= threshold) return static_cast<std::uint32_t>(m >> 32);
    }
}

double RandomSource::nextExponential(double mean) {
    if (!(mean > 0.0)) throw std::invalid_argument("nextExponential: mean must be positive");
    return -mean * std::log(1.0 - nextUnit());
}

} // namespace latwalk
