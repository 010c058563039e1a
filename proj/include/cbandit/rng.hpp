#pragma once

#include <cstddef>
#include <cstdint>
#include <random>

namespace cbandit {

// splitmix64 finalizer; a bijection on 64-bit words.
inline std::uint64_t mix64(std::uint64_t x) {
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return x;
}

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

/// Seed for one (algorithm, horizon) cell of a sweep.
inline std::uint64_t derive_cell_seed(std::uint64_t base_seed, std::uint64_t algorithm_index,
                                      std::uint64_t horizon) {
    std::uint64_t h = mix64(base_seed + kGolden);
    h = mix64(h ^ (algorithm_index + 1) * kGolden);
    return mix64(h ^ mix64(horizon));
}

/// Seed of replication r. Injective in r for a fixed cell seed.
inline std::uint64_t derive_stream_seed(std::uint64_t cell_seed, std::uint64_t replication) {
    return mix64(cell_seed + (replication + 1) * kGolden);
}

/// Deterministic stream owned by a single replication.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t seed) : engine_(seed) {}

    static RandomStream for_replication(std::uint64_t cell_seed, std::uint64_t replication) {
        return RandomStream(derive_stream_seed(cell_seed, replication));
    }

    double normal() { return normal_(engine_); }

    std::size_t uniform_index(std::size_t n) {
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        return pick(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace cbandit
