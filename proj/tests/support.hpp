#pragma once

// Test-side helpers: independent oracles and random instance generators.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <cbandit/analysis.hpp>
#include <cbandit/estimator.hpp>
#include <cbandit/model.hpp>
#include <cbandit/rng.hpp>

namespace support {

using cbandit::AttributePair;
using cbandit::BanditInstance;
using cbandit::BivariateGaussianArm;

inline BanditInstance noiseless(const std::vector<AttributePair>& means, double tau, double a1 = 0.5,
                                double a2 = 0.5) {
    std::vector<BivariateGaussianArm> arms;
    for (const auto& m : means) arms.push_back({m, cbandit::kZeroCovariance});
    return BanditInstance::make(arms, tau, a1, a2);
}

inline BanditInstance correlated(const std::vector<AttributePair>& means, double tau) {
    std::vector<BivariateGaussianArm> arms;
    for (const auto& m : means) arms.push_back({m, {{{1.0, 0.5}, {0.5, 1.0}}}});
    return BanditInstance::make(arms, tau);
}

/// Estimator holding exactly one sample per arm equal to the given means.
inline cbandit::EstimatorState estimates_at(const std::vector<AttributePair>& means) {
    cbandit::EstimatorState s(means.size());
    for (std::size_t i = 0; i < means.size(); ++i) s.update(i, means[i]);
    return s;
}

/// Random instance with unit-variance correlated arms and means in [0,1]^2.
inline BanditInstance random_instance(std::mt19937_64& g, std::size_t K, double tau) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<AttributePair> means;
    for (std::size_t i = 0; i < K; ++i) means.push_back({u(g), u(g)});
    return correlated(means, tau);
}

/// Random instance whose optimal arm is unique and whose capped gaps are all positive.
inline BanditInstance random_feasible_instance(std::mt19937_64& g, std::size_t K) {
    std::uniform_real_distribution<double> u(0.05, 0.95);
    while (true) {
        BanditInstance inst = random_instance(g, K, u(g));
        try {
            const auto a = cbandit::classify_instance(inst);
            if (!a.feasible_flag) continue;
            bool positive = true;
            for (std::size_t i = 0; i < K; ++i)
                if (i != a.optimal_arm && !(a.Delta_to_opt[i] > 0.0)) positive = false;
            if (positive) return inst;
        } catch (const cbandit::Error&) {
        }
    }
}

/// Exact phase lengths from rational arithmetic:
/// n_k = ceil((T - K) / (logbar(K) (K + 1 - k))).
inline std::vector<std::uint64_t> exact_schedule(std::size_t K, std::uint64_t T) {
    using big = boost::multiprecision::cpp_int;
    using q = boost::rational<big>;
    q lb(1, 2);
    for (std::size_t i = 2; i <= K; ++i) lb += q(1, static_cast<long>(i));
    std::vector<std::uint64_t> n(K, 0);
    for (std::size_t k = 1; k < K; ++k) {
        const q x = q(big(T - K)) / (lb * q(big(K + 1 - k)));
        big c = x.numerator() / x.denominator();
        if (c * x.denominator() != x.numerator()) c += 1;
        n[k] = static_cast<std::uint64_t>(c);
    }
    return n;
}

struct TailCheck {
    double frequency = 0.0;
    double bound = 0.0;
    double se = 0.0;
    bool ok = false;
};

/// Tail frequency of |mean of n unit-variance draws| >= gap against 2 exp(-n gap^2 / 2).
inline TailCheck concentration_check(std::uint64_t seed, int n, double gap, int trials) {
    const BivariateGaussianArm arm{{0.0, 0.0}, {{{1.0, 0.0}, {0.0, 1.0}}}};
    cbandit::RandomStream rng(seed);
    int hits = 0;
    for (int t = 0; t < trials; ++t) {
        cbandit::EstimatorState s(1);
        for (int k = 0; k < n; ++k) s.update(0, cbandit::sample_arm(arm, rng));
        if (std::fabs(s.mu_hat(0).objective) >= gap) ++hits;
    }
    TailCheck c;
    c.frequency = static_cast<double>(hits) / trials;
    c.bound = 2.0 * std::exp(-0.5 * n * gap * gap);
    c.se = std::sqrt(c.frequency * (1.0 - c.frequency) / trials);
    c.ok = c.frequency <= c.bound + 3.0 * c.se;
    return c;
}

} // namespace support
