#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "error.hpp"
#include "estimator.hpp"
#include "gaps.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "schedule.hpp"

namespace cbandit {

enum class Algorithm { ConstrainedSR, InfeasibleFirst, ClassicalSR };

inline constexpr Algorithm kAllAlgorithms[] = {Algorithm::ConstrainedSR, Algorithm::InfeasibleFirst,
                                               Algorithm::ClassicalSR};

inline std::string_view algorithm_id(Algorithm a) {
    switch (a) {
    case Algorithm::ConstrainedSR: return "csr";
    case Algorithm::InfeasibleFirst: return "if";
    case Algorithm::ClassicalSR: return "sr";
    }
    return "?";
}

inline std::size_t algorithm_index(Algorithm a) { return static_cast<std::size_t>(a); }

inline std::optional<Algorithm> parse_algorithm(std::string_view id) {
    for (Algorithm a : kAllAlgorithms)
        if (algorithm_id(a) == id) return a;
    return std::nullopt;
}

/// PerPull draws every sample; Batched draws each phase's per-arm sum in one step.
enum class PullMode { PerPull, Batched };

struct TraceEvent {
    std::size_t phase = 0;
    std::size_t rejected = 0;
    std::size_t leader = 0;
    std::vector<std::pair<std::size_t, double>> gaps; // (arm, estimated capped gap); csr only

    friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct AlgoOutput {
    std::size_t recommended_arm = 0;
    bool feasibility_flag = false;
    std::uint64_t total_pulls = 0;
    std::vector<TraceEvent> trace;
};

struct RunOptions {
    PullMode mode = PullMode::PerPull;
    bool record_trace = false;
};

inline std::size_t empirical_optimal(const EstimatorState& est, const std::vector<std::size_t>& active, double tau) {
    if (active.empty()) throw Error(ErrorCode::EmptyActiveSet, "no active arms");
    std::optional<std::size_t> best_feasible;
    std::size_t best_any = active.front();
    for (std::size_t i : active) {
        const AttributePair m = est.mu_hat(i);
        if (is_feasible(m.constraint, tau)) {
            if (!best_feasible || m.objective < est.mu_hat(*best_feasible).objective ||
                (m.objective == est.mu_hat(*best_feasible).objective && i < *best_feasible))
                best_feasible = i;
        }
        const double c = est.mu_hat(best_any).constraint;
        if (m.constraint < c || (m.constraint == c && i < best_any)) best_any = i;
    }
    return best_feasible ? *best_feasible : best_any;
}

inline double empirical_Delta(const EstimatorState& est, std::size_t j_hat, std::size_t i, double tau, double a1,
                              double a2) {
    if (i == j_hat) return 0.0;
    return Delta_formula(est.mu_hat(j_hat), est.mu_hat(i), GapParams{tau, a1, a2});
}

namespace detail {

struct Rejection {
    std::size_t arm = 0;
    std::size_t leader = 0;
    std::vector<std::pair<std::size_t, double>> gaps;
};

// Members of `pool` maximizing key(i) exactly.
template <class Key>
std::vector<std::size_t> argmax_set(const std::vector<std::size_t>& pool, Key key) {
    std::vector<std::size_t> out;
    for (std::size_t i : pool) {
        if (out.empty() || key(i) > key(out.front())) {
            out.assign(1, i);
        } else if (key(i) == key(out.front())) {
            out.push_back(i);
        }
    }
    return out;
}

inline Rejection constrained_rejection(const EstimatorState& est, const std::vector<std::size_t>& active,
                                       double tau, double a1, double a2) {
    Rejection r;
    r.leader = empirical_optimal(est, active, tau);
    std::vector<std::size_t> others;
    for (std::size_t i : active) {
        if (i == r.leader) continue;
        others.push_back(i);
        r.gaps.emplace_back(i, empirical_Delta(est, r.leader, i, tau, a1, a2));
    }
    auto gap_of = [&](std::size_t i) {
        for (const auto& [arm, g] : r.gaps)
            if (arm == i) return g;
        return 0.0;
    };
    const auto top = argmax_set(others, gap_of);
    if (top.size() == 1) {
        r.arm = top.front();
        return r;
    }
    std::vector<std::size_t> infeasible;
    std::vector<std::size_t> feasible;
    for (std::size_t i : top) (is_feasible(est.mu_hat(i).constraint, tau) ? feasible : infeasible).push_back(i);
    if (!infeasible.empty()) {
        r.arm = argmax_set(infeasible, [&](std::size_t i) { return est.mu_hat(i).constraint; }).front();
    } else {
        r.arm = argmax_set(feasible, [&](std::size_t i) { return est.mu_hat(i).objective; }).front();
    }
    return r;
}

inline void pull(const BanditInstance& inst, std::size_t arm, std::uint64_t m, EstimatorState& est,
                 RandomStream& rng, PullMode mode) {
    if (m == 0) return;
    if (mode == PullMode::Batched) {
        est.add_batch(arm, sample_sum(inst.arm(arm), m, rng), m);
        return;
    }
    for (std::uint64_t t = 0; t < m; ++t) est.update(arm, sample_arm(inst.arm(arm), rng));
}

// Shared phase loop; `reject` picks the arm to drop from the active set.
template <class RejectFn>
AlgoOutput run_phases(const BanditInstance& inst, std::uint64_t T, RandomStream& rng, const RunOptions& opt,
                      RejectFn reject) {
    const std::size_t K = inst.size();
    EstimatorState est(K);
    AlgoOutput out;
    if (K == 1) {
        if (T < 1) throw Error(ErrorCode::BudgetTooSmall, "a single arm needs a budget of at least 1");
        pull(inst, 0, T, est, rng, opt.mode);
        out.recommended_arm = 0;
        out.feasibility_flag = is_feasible(est.mu_hat(0).constraint, inst.tau());
        out.total_pulls = est.total_pulls();
        return out;
    }
    const PhaseSchedule s = sr_schedule(K, T);
    std::vector<std::size_t> active(K);
    for (std::size_t i = 0; i < K; ++i) active[i] = i;
    for (std::size_t k = 1; k < K; ++k) {
        for (std::size_t i : active) pull(inst, i, s.n[k] - s.n[k - 1], est, rng, opt.mode);
        Rejection r = reject(est, active);
        if (opt.record_trace) out.trace.push_back({k, r.arm, r.leader, std::move(r.gaps)});
        active.erase(std::find(active.begin(), active.end(), r.arm));
    }
    out.recommended_arm = active.front();
    out.feasibility_flag = is_feasible(est.mu_hat(out.recommended_arm).constraint, inst.tau());
    out.total_pulls = est.total_pulls();
    return out;
}

} // namespace detail

inline std::size_t reject_arm(const EstimatorState& est, const std::vector<std::size_t>& active, double tau,
                              double a1, double a2) {
    if (active.size() < 2) throw Error(ErrorCode::EmptyActiveSet, "rejection needs at least 2 active arms");
    return detail::constrained_rejection(est, active, tau, a1, a2).arm;
}

inline AlgoOutput run_constrained_sr(const BanditInstance& inst, std::uint64_t T, RandomStream& rng,
                                     const RunOptions& opt = {}) {
    return detail::run_phases(inst, T, rng, opt, [&](const EstimatorState& est, const std::vector<std::size_t>& a) {
        return detail::constrained_rejection(est, a, inst.tau(), inst.a1(), inst.a2());
    });
}

inline AlgoOutput run_infeasible_first(const BanditInstance& inst, std::uint64_t T, RandomStream& rng,
                                       const RunOptions& opt = {}) {
    const double tau = inst.tau();
    return detail::run_phases(inst, T, rng, opt, [&](const EstimatorState& est, const std::vector<std::size_t>& a) {
        detail::Rejection r;
        r.leader = empirical_optimal(est, a, tau);
        const bool any_infeasible = std::any_of(
            a.begin(), a.end(), [&](std::size_t i) { return !is_feasible(est.mu_hat(i).constraint, tau); });
        const auto top = any_infeasible
                             ? detail::argmax_set(a, [&](std::size_t i) { return est.mu_hat(i).constraint; })
                             : detail::argmax_set(a, [&](std::size_t i) { return est.mu_hat(i).objective; });
        r.arm = top.size() == 1 ? top.front() : top[rng.uniform_index(top.size())];
        return r;
    });
}

inline AlgoOutput run_classical_sr(const BanditInstance& inst, std::uint64_t T, RandomStream& rng,
                                   const RunOptions& opt = {}) {
    return detail::run_phases(inst, T, rng, opt, [&](const EstimatorState& est, const std::vector<std::size_t>& a) {
        detail::Rejection r;
        auto objective = [&](std::size_t i) { return est.mu_hat(i).objective; };
        r.arm = detail::argmax_set(a, objective).front();
        r.leader = detail::argmax_set(a, [&](std::size_t i) { return -objective(i); }).front();
        return r;
    });
}

inline AlgoOutput run_algorithm(Algorithm algo, const BanditInstance& inst, std::uint64_t T, RandomStream& rng,
                                const RunOptions& opt = {}) {
    switch (algo) {
    case Algorithm::ConstrainedSR: return run_constrained_sr(inst, T, rng, opt);
    case Algorithm::InfeasibleFirst: return run_infeasible_first(inst, T, rng, opt);
    case Algorithm::ClassicalSR: return run_classical_sr(inst, T, rng, opt);
    }
    return {};
}

} // namespace cbandit
