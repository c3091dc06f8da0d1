#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace winp {

// Named substreams derived from one master seed. Each concern (profile
// jitter, core speeds, channel, ...) gets its own generator so that changing
// an unrelated parameter does not perturb the draws of another concern.
inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

class Rng {
public:
    Rng(std::uint64_t master_seed, std::string_view stream)
        : gen_(splitmix64(master_seed ^ fnv1a64(stream))) {}

    Rng(std::uint64_t master_seed, std::string_view stream, std::uint64_t index)
        : gen_(splitmix64(splitmix64(master_seed ^ fnv1a64(stream)) + index)) {}

    // Uniform in [lo, hi); implementation-independent mapping from raw bits.
    double uniform(double lo, double hi) {
        double u = static_cast<double>(gen_() >> 11) * 0x1.0p-53;
        return lo + u * (hi - lo);
    }

    std::uint64_t next_u64() { return gen_(); }

private:
    std::mt19937_64 gen_;
};

// Derived seed for paired sweep cells: both modes of one cell share it.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(master + a) ^ (b * 0x9e3779b97f4a7c15ULL));
}

} // namespace winp
