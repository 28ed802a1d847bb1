#pragma once

#include <cstdint>
#include <random>

namespace tailkit {

/// SplitMix64 finaliser; used to derive independent engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed of worker stream `stream` under master seed `seed`. Stream k of seed s
/// is splitmix64(splitmix64(s) + k), so streams never share an engine state
/// and the mapping is fixed across runs and builds.
constexpr std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t stream) {
    return splitmix64(splitmix64(seed) + stream);
}

/// Caller-owned random state: a 64-bit Mersenne Twister plus a cached
/// normal generator. Not shared between threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) {
        return Rng(stream_seed(seed, stream));
    }

    /// Uniform on the open interval (0,1) with 53-bit resolution.
    double uniform() { return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53; }

    double normal() { return normal_(engine_); }

    std::uint64_t bits() { return engine_(); }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace tailkit
