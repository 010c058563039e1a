#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "error.hpp"

namespace cbandit {

/// 1/2 + sum_{i=2}^{K} 1/i.
inline double logbar(std::size_t K) {
    double s = 0.5;
    for (std::size_t i = 2; i <= K; ++i) s += 1.0 / static_cast<double>(i);
    return s;
}

inline std::uint64_t min_budget(std::size_t K) { return static_cast<std::uint64_t>(K) + 1; }

namespace detail {

using u128 = unsigned __int128;

inline long double logbar_ld(std::size_t K) {
    long double s = 0.5L;
    for (std::size_t i = 2; i <= K; ++i) s += 1.0L / static_cast<long double>(i);
    return s;
}

inline u128 gcd128(u128 a, u128 b) {
    while (b != 0) {
        const u128 t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// logbar(K) = P / Q with Q = lcm(1..K); ceilings taken in integer arithmetic.
// Returns false when an intermediate would overflow 128 bits.
inline bool exact_phase_lengths(std::size_t K, std::uint64_t T, std::vector<std::uint64_t>& n) {
    const u128 limit = ~u128{0};
    u128 Q = 2;
    for (std::size_t i = 2; i <= K; ++i) {
        const u128 g = gcd128(Q, i);
        if (Q / g > limit / i) return false;
        Q = Q / g * i;
    }
    u128 P = Q / 2;
    for (std::size_t i = 2; i <= K; ++i) P += Q / i;
    const u128 spare = T - K;
    if (spare != 0 && Q > limit / spare) return false;
    const u128 num = spare * Q;
    for (std::size_t k = 1; k < K; ++k) {
        const u128 m = K + 1 - k;
        if (P > limit / m) return false;
        const u128 den = P * m;
        n[k] = static_cast<std::uint64_t>(num / den + (num % den != 0 ? 1 : 0));
    }
    return true;
}

} // namespace detail

struct PhaseSchedule {
    std::size_t K = 0;
    std::uint64_t T = 0;
    double logbar_K = 0.0;
    std::vector<std::uint64_t> n; // n[0] = 0, then n_1 .. n_{K-1}

    /// Pulls issued when every surviving arm reaches n_k in phase k.
    std::uint64_t total_pulls() const {
        std::uint64_t total = 0;
        for (std::size_t k = 1; k < n.size(); ++k) total += (K + 1 - k) * (n[k] - n[k - 1]);
        return total;
    }
};

inline PhaseSchedule sr_schedule(std::size_t K, std::uint64_t T) {
    if (K < 2) throw Error(ErrorCode::WrongArity, "a phase schedule needs at least 2 arms");
    if (T < min_budget(K))
        throw Error(ErrorCode::BudgetTooSmall, "budget " + std::to_string(T) + " is below the minimum " +
                                                   std::to_string(min_budget(K)) + " for " + std::to_string(K) +
                                                   " arms");
    PhaseSchedule s;
    s.K = K;
    s.T = T;
    s.logbar_K = logbar(K);
    s.n.assign(K, 0);
    if (!detail::exact_phase_lengths(K, T, s.n)) {
        const long double spare = static_cast<long double>(T - K);
        const long double lb = detail::logbar_ld(K);
        for (std::size_t k = 1; k < K; ++k)
            s.n[k] = static_cast<std::uint64_t>(std::ceil(spare / (lb * static_cast<long double>(K + 1 - k))));
    }
    return s;
}

} // namespace cbandit
