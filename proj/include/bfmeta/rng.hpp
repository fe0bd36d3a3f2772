#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

namespace bfmeta {

// SplitMix64 finalizer; used to derive independent seeds from a master seed
// plus a path of counters (cell index, replication index, ...).
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

constexpr std::uint64_t derive_seed(std::uint64_t master, std::initializer_list<std::uint64_t> path) noexcept {
    std::uint64_t h = splitmix64(master);
    for (auto p : path) h = splitmix64(h ^ splitmix64(p + 0x632be59bd9b4e019ULL));
    return h;
}

// An explicit random stream. Passed by reference where consumed; never global.
class RngStream {
public:
    using engine_type = std::mt19937_64;

    explicit RngStream(std::uint64_t seed) : engine_(seed) {}
    RngStream(std::uint64_t master, std::initializer_list<std::uint64_t> path)
        : engine_(derive_seed(master, path)) {}

    engine_type& engine() noexcept { return engine_; }

    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine_); }
    double normal(double mean = 0.0, double sd = 1.0) { return std::normal_distribution<double>(mean, sd)(engine_); }

    // Open-interval uniform, safe for logit/log transforms.
    double uniform_open() {
        double u;
        do { u = uniform(); } while (u <= 0.0 || u >= 1.0);
        return u;
    }

private:
    engine_type engine_;
};

}  // namespace bfmeta
