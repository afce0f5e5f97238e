#pragma once

#include <cstdint>
#include <random>

namespace latwalk {

/// Seeded random stream. Streams with the same (seed, stream) pair replay
/// identical draws; distinct stream ids are derived by splitmix64 hashing so
/// that per-replica streams are decorrelated. All draws go through the
/// in-house helpers below, never std distributions, so output is identical
/// across standard library implementations.
class RandomSource {
  public:
    explicit RandomSource(std::uint64_t seed, std::uint64_t stream = 0);

    std::uint64_t seed() const { return seed_; }
    std::uint64_t stream() const { return stream_; }

    std::uint64_t nextU64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double nextUnit() {
        return static_cast<double>(nextU64() >> 11) * 0x1.0p-53;
    }

    /// Uniform over {0, ..., bound-1}, bias-free (Lemire rejection).
    std::uint32_t nextBounded(std::uint32_t bound);

    /// Exponential with the given mean.
    double nextExponential(double mean);

  private:
    std::mt19937_64 engine_;
    std::uint64_t seed_;
    std::uint64_t stream_;
};

std::uint64_t splitmix64(std::uint64_t& state);

} // namespace latwalk
