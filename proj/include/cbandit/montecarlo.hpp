#pragma once

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <string>
#include <thread>
#include <vector>

#include "algorithms.hpp"
#include "analysis.hpp"
#include "error.hpp"
#include "model.hpp"
#include "rng.hpp"

namespace cbandit {

inline bool error_event(const AlgoOutput& out, const InstanceAnalysis& truth) {
    return out.recommended_arm != truth.optimal_arm || out.feasibility_flag != truth.feasible_flag;
}

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

inline constexpr double kZ95 = 1.959963984540054;

inline Interval wilson_interval(std::uint64_t successes, std::uint64_t trials, double z = kZ95) {
    if (trials == 0) return {0.0, 1.0};
    const double n = static_cast<double>(trials);
    const double p = static_cast<double>(successes) / n;
    const double z2 = z * z;
    const double denom = 1.0 + z2 / n;
    const double centre = (p + z2 / (2.0 * n)) / denom;
    const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
    return {std::max(0.0, std::min(p, centre - half)), std::min(1.0, std::max(p, centre + half))};
}

struct ErrorEstimate {
    std::string instance_id;
    std::string algorithm;
    std::uint64_t T = 0;
    std::uint64_t runs = 0;
    std::uint64_t errors = 0;
    double e_hat = 0.0;
    double log_e_hat = 0.0;
    double ci_lo = 0.0;
    double ci_hi = 0.0;
    std::uint64_t seed = 0;

    friend bool operator==(const ErrorEstimate&, const ErrorEstimate&) = default;
};

inline ErrorEstimate make_estimate(std::string instance_id, std::string algorithm, std::uint64_t T,
                                   std::uint64_t runs, std::uint64_t errors, std::uint64_t seed) {
    ErrorEstimate e;
    e.instance_id = std::move(instance_id);
    e.algorithm = std::move(algorithm);
    e.T = T;
    e.runs = runs;
    e.errors = errors;
    e.e_hat = static_cast<double>(errors) / static_cast<double>(runs);
    e.log_e_hat = errors == 0 ? -std::numeric_limits<double>::infinity() : std::log(e.e_hat);
    const Interval ci = wilson_interval(errors, runs);
    e.ci_lo = ci.lo;
    e.ci_hi = ci.hi;
    e.seed = seed;
    return e;
}

struct EstimateOptions {
    unsigned threads = 1; // 0 = hardware concurrency
    PullMode mode = PullMode::Batched;
};

inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Error count over replications [first, last) of one cell.
inline std::uint64_t count_errors(const BanditInstance& inst, const InstanceAnalysis& truth, Algorithm algo,
                                  std::uint64_t T, std::uint64_t seed, std::uint64_t first, std::uint64_t last,
                                  PullMode mode) {
    std::uint64_t errors = 0;
    const RunOptions opt{mode, false};
    for (std::uint64_t r = first; r < last; ++r) {
        RandomStream rng = RandomStream::for_replication(seed, r);
        if (error_event(run_algorithm(algo, inst, T, rng, opt), truth)) ++errors;
    }
    return errors;
}

/// Replication r draws from the stream keyed by (seed, r).
inline ErrorEstimate estimate_error(const BanditInstance& inst, const std::string& instance_id, Algorithm algo,
                                    std::uint64_t T, std::uint64_t runs, std::uint64_t seed,
                                    const EstimateOptions& opt = {}) {
    if (runs < 1) throw Error(ErrorCode::ConfigError, "runs must be at least 1");
    const InstanceAnalysis truth = classify_instance(inst);
    if (inst.size() >= 2) (void)sr_schedule(inst.size(), T);
    const unsigned threads = static_cast<unsigned>(std::min<std::uint64_t>(resolve_threads(opt.threads), runs));

    std::uint64_t errors = 0;
    if (threads <= 1) {
        errors = count_errors(inst, truth, algo, T, seed, 0, runs, opt.mode);
    } else {
        std::vector<std::uint64_t> partial(threads, 0);
        std::vector<std::exception_ptr> failures(threads);
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) {
            const std::uint64_t first = runs * t / threads;
            const std::uint64_t last = runs * (t + 1) / threads;
            pool.emplace_back([&, t, first, last] {
                try {
                    partial[t] = count_errors(inst, truth, algo, T, seed, first, last, opt.mode);
                } catch (...) {
                    failures[t] = std::current_exception();
                }
            });
        }
        for (auto& th : pool) th.join();
        for (const auto& f : failures)
            if (f) std::rethrow_exception(f);
        for (std::uint64_t p : partial) errors += p;
    }
    return make_estimate(instance_id, std::string(algorithm_id(algo)), T, runs, errors, seed);
}

struct SweepResult {
    std::vector<ErrorEstimate> records;
    std::string instance_id;
    std::uint64_t base_seed = 0;
    unsigned threads = 1;
    double wall_seconds = 0.0;
};

/// One estimate per (algorithm, T), ordered by algorithm then T. Each cell is
/// seeded from (base_seed, algorithm, T) and can be rerun alone with its seed.
inline SweepResult sweep(const BanditInstance& inst, const std::string& instance_id,
                         const std::vector<Algorithm>& algorithms, const std::vector<std::uint64_t>& horizons,
                         std::uint64_t runs, std::uint64_t base_seed, const EstimateOptions& opt = {}) {
    if (algorithms.empty() || horizons.empty())
        throw Error(ErrorCode::ConfigError, "sweep needs at least one algorithm and one horizon");
    const auto start = std::chrono::steady_clock::now();
    SweepResult res;
    res.instance_id = instance_id;
    res.base_seed = base_seed;
    res.threads = resolve_threads(opt.threads);
    for (Algorithm a : algorithms) {
        for (std::uint64_t T : horizons) {
            const std::uint64_t seed = derive_cell_seed(base_seed, algorithm_index(a), T);
            res.records.push_back(estimate_error(inst, instance_id, a, T, runs, seed, opt));
        }
    }
    res.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return res;
}

/// Ordinary least-squares slope of y on x.
inline double least_squares_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const std::size_t n = std::min(x.size(), y.size());
    if (n < 2) return std::numeric_limits<double>::quiet_NaN();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(n);
    my /= static_cast<double>(n);
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    return sxy / sxx;
}

inline bool intervals_overlap(const ErrorEstimate& a, const ErrorEstimate& b) {
    return a.ci_lo <= b.ci_hi && b.ci_lo <= a.ci_hi;
}

} // namespace cbandit
