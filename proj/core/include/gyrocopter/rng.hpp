#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace gyro {

/// 64-bit FNV-1a.
constexpr std::uint64_t fnv1a(std::string_view text, std::uint64_t h = 0xcbf29ce484222325ULL) {
    for (const char c : text) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return h;
}

constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Child seed for a named component: splitmix64(base ^ fnv1a(name)) then folded with
/// each index. Same (base, name, indices) always yields the same stream; distinct names
/// or indices yield unrelated streams.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::string_view component, std::uint64_t a = 0,
                                    std::uint64_t b = 0) {
    std::uint64_t s = splitmix64(base ^ fnv1a(component));
    s = splitmix64(s ^ splitmix64(a + 0x632be59bd9b4e019ULL));
    s = splitmix64(s ^ splitmix64(b + 0x8cb92ba72f3d8dd7ULL));
    return s;
}

/// Seeded deterministic generator. Owns its state; copy to fork.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double normal(double mean = 0.0, double stddev = 1.0) {
        if (stddev == 0.0) return mean;
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }
    double uniform(double lo = 0.0, double hi = 1.0) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    bool bernoulli(double p) {
        if (p >= 1.0) return true;
        if (p <= 0.0) return false;
        return uniform() < p;
    }
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace gyro
