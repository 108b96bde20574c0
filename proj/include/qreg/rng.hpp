#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>

namespace qreg {

// splitmix64 mixer, used for seed derivation and stable hashing.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
    return splitmix64(seed ^ splitmix64(value));
}

inline std::uint64_t hash_span(std::uint64_t seed, std::span<const int> values) {
    std::uint64_t h = splitmix64(seed);
    for (int v : values) h = hash_combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(v)));
    return h;
}

inline std::uint64_t hash_string(std::uint64_t seed, std::string_view s) {
    std::uint64_t h = splitmix64(seed);
    for (unsigned char c : s) h = hash_combine(h, c);
    return h;
}

// Deterministic RNG wrapper. Bounded draws avoid std::uniform_int_distribution,
// whose output is implementation-defined, so seeded results are portable.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : gen_(splitmix64(seed)) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, bound), bound >= 1, via rejection sampling
    std::uint64_t uniform_below(std::uint64_t bound) {
        const std::uint64_t limit = bound * (UINT64_MAX / bound);
        std::uint64_t v;
        do {
            v = next_u64();
        } while (v >= limit);
        return v % bound;
    }

    int uniform_int(int lo, int hi) { // inclusive range
        return lo + static_cast<int>(uniform_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // independent child stream
    Rng split(std::uint64_t stream) { return Rng(hash_combine(next_u64(), stream)); }

  private:
    std::mt19937_64 gen_;
};

} // namespace qreg
