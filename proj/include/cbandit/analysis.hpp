#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

#include "error.hpp"
#include "gaps.hpp"
#include "model.hpp"

namespace cbandit {

enum class ArmClass { Optimal, FeasibleSuboptimal, Deceiver, InfeasibleSuboptimal, Infeasible };

inline const char* arm_class_name(ArmClass c) {
    switch (c) {
    case ArmClass::Optimal: return "Optimal";
    case ArmClass::FeasibleSuboptimal: return "FeasibleSuboptimal";
    case ArmClass::Deceiver: return "Deceiver";
    case ArmClass::InfeasibleSuboptimal: return "InfeasibleSuboptimal";
    case ArmClass::Infeasible: return "Infeasible";
    }
    return "Unknown";
}

struct InstanceAnalysis {
    bool feasible_flag = false;
    std::vector<std::size_t> feasible_set;
    std::size_t optimal_arm = 0;
    std::vector<ArmClass> classes;
    std::vector<std::size_t> ordering;
    std::vector<double> delta_to_opt;
    std::vector<double> Delta_to_opt;
    double H1 = 0.0;
    double H2 = 0.0;
};

inline double hardness_H1(const InstanceAnalysis& a) {
    double h = 0.0;
    for (std::size_t i = 0; i < a.Delta_to_opt.size(); ++i) {
        if (i == a.optimal_arm) continue;
        const double d = a.Delta_to_opt[i];
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        h += 1.0 / (d * d);
    }
    return h;
}

inline double hardness_H2(const InstanceAnalysis& a) {
    double h = 0.0;
    for (std::size_t pos = 1; pos < a.ordering.size(); ++pos) {
        const double d = a.Delta_to_opt[a.ordering[pos]];
        if (d == 0.0) return std::numeric_limits<double>::infinity();
        h = std::max(h, static_cast<double>(pos + 1) / (d * d));
    }
    return h;
}

inline InstanceAnalysis classify_instance(const BanditInstance& inst) {
    const std::size_t K = inst.size();
    if (K == 0) throw Error(ErrorCode::EmptyInstance, "instance has no arms");
    const double tau = inst.tau();

    InstanceAnalysis a;
    for (std::size_t i = 0; i < K; ++i)
        if (is_feasible(inst.mean(i).constraint, tau)) a.feasible_set.push_back(i);
    a.feasible_flag = !a.feasible_set.empty();

    std::vector<std::size_t> pool = a.feasible_set;
    if (!a.feasible_flag) {
        pool.resize(K);
        std::iota(pool.begin(), pool.end(), std::size_t{0});
    }
    auto key = [&](std::size_t i) {
        return a.feasible_flag ? inst.mean(i).objective : inst.mean(i).constraint;
    };
    const auto best = *std::min_element(pool.begin(), pool.end(),
                                        [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
    const auto ties = std::count_if(pool.begin(), pool.end(), [&](std::size_t i) { return key(i) == key(best); });
    if (ties > 1) throw Error(ErrorCode::NonUniqueOptimal, "the optimal arm is not unique");
    a.optimal_arm = best;

    const AttributePair& opt = inst.mean(best);
    a.classes.resize(K);
    a.delta_to_opt.assign(K, 0.0);
    a.Delta_to_opt.assign(K, 0.0);
    for (std::size_t i = 0; i < K; ++i) {
        const AttributePair& m = inst.mean(i);
        if (i == best) {
            a.classes[i] = ArmClass::Optimal;
        } else if (!a.feasible_flag) {
            a.classes[i] = ArmClass::Infeasible;
        } else if (is_feasible(m.constraint, tau)) {
            a.classes[i] = ArmClass::FeasibleSuboptimal;
        } else {
            a.classes[i] = m.objective <= opt.objective ? ArmClass::Deceiver : ArmClass::InfeasibleSuboptimal;
        }
        const GapReport g = true_Delta(inst, best, i);
        a.delta_to_opt[i] = g.delta;
        a.Delta_to_opt[i] = g.Delta;
    }

    std::vector<std::size_t> rest;
    for (std::size_t i = 0; i < K; ++i)
        if (i != best) rest.push_back(i);
    std::sort(rest.begin(), rest.end(), [&](std::size_t x, std::size_t y) {
        if (a.Delta_to_opt[x] != a.Delta_to_opt[y]) return a.Delta_to_opt[x] < a.Delta_to_opt[y];
        const bool fx = is_feasible(inst.mean(x).constraint, tau);
        const bool fy = is_feasible(inst.mean(y).constraint, tau);
        if (fx != fy) return fx;
        const double vx = fx ? inst.mean(x).objective : inst.mean(x).constraint;
        const double vy = fx ? inst.mean(y).objective : inst.mean(y).constraint;
        if (vx != vy) return vx < vy;
        return x < y;
    });
    a.ordering.push_back(best);
    a.ordering.insert(a.ordering.end(), rest.begin(), rest.end());

    a.H1 = hardness_H1(a);
    a.H2 = hardness_H2(a);
    return a;
}

enum class LowerBoundCase { FeasibleSuboptimal, Deceiver, InfeasibleSuboptimal, InfeasibleInstance };

inline const char* lower_bound_case_name(LowerBoundCase c) {
    switch (c) {
    case LowerBoundCase::FeasibleSuboptimal: return "feasible-suboptimal";
    case LowerBoundCase::Deceiver: return "deceiver";
    case LowerBoundCase::InfeasibleSuboptimal: return "infeasible-suboptimal";
    case LowerBoundCase::InfeasibleInstance: return "infeasible-instance";
    }
    return "unknown";
}

/// Two-armed rates: `rate_gap` is the squared capped gap, `rate_case` the
/// case-specific form with its constants.
struct LowerBoundReport {
    double rate_gap = 0.0;
    double rate_case = 0.0;
    LowerBoundCase case_kind = LowerBoundCase::FeasibleSuboptimal;
};

inline LowerBoundReport lb_rate_two_arm(const BanditInstance& inst) {
    if (inst.size() != 2) throw Error(ErrorCode::WrongArity, "two-armed rate needs exactly 2 arms");
    const std::size_t j = pair_optimal(inst, 0, 1);
    const std::size_t o = 1 - j;
    const AttributePair& m1 = inst.mean(j);
    const AttributePair& m2 = inst.mean(o);
    const double tau = inst.tau();
    const double a1 = inst.a1();
    const double a2 = inst.a2();
    auto sq = [](double x) { return x * x; };

    LowerBoundReport r;
    r.rate_gap = sq(true_Delta(inst, j, o).Delta);
    if (!is_feasible(m1.constraint, tau)) {
        r.case_kind = LowerBoundCase::InfeasibleInstance;
        r.rate_case = std::min(a1 * sq(m2.constraint - m1.constraint) / 4.0, a2 * sq(m1.constraint - tau));
        return r;
    }
    const double margin = a2 * sq(tau - m1.constraint);
    switch (gap_case(m1, m2, tau)) {
    case GapCase::BothFeasible:
        r.case_kind = LowerBoundCase::FeasibleSuboptimal;
        r.rate_case = 0.5 * std::min(margin, a1 * sq(m2.objective - m1.objective) / 4.0);
        break;
    case GapCase::Deceiver:
        r.case_kind = LowerBoundCase::Deceiver;
        r.rate_case = 0.5 * std::min(margin, a2 * sq(m2.constraint - tau));
        break;
    default:
        r.case_kind = LowerBoundCase::InfeasibleSuboptimal;
        r.rate_case = std::min(margin, std::max(a2 * sq(m2.constraint - tau), a1 * sq(m2.objective - m1.objective)));
        break;
    }
    return r;
}

struct AllInfeasibleReport {
    std::size_t optimal_arm = 0;
    double rate = 0.0;
    /// K / (a2 (mu2(J) - tau)^2), from the gap sqrt(a2) min{mu2(i) - tau, mu2(j) - tau}.
    double H1_cross_check = 0.0;
};

inline AllInfeasibleReport lb_rate_all_infeasible(const BanditInstance& inst) {
    const std::size_t K = inst.size();
    const double tau = inst.tau();
    std::size_t best = 0;
    for (std::size_t i = 0; i < K; ++i) {
        if (is_feasible(inst.mean(i).constraint, tau))
            throw Error(ErrorCode::NotAllInfeasible, "arm " + std::to_string(i + 1) + " is feasible");
        if (inst.mean(i).constraint < inst.mean(best).constraint) best = i;
    }
    const double gap = inst.mean(best).constraint - tau;
    AllInfeasibleReport r;
    r.optimal_arm = best;
    r.rate = inst.a2() * gap * gap;
    double h = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
        const double d = std::sqrt(inst.a2()) * std::min(inst.mean(i).constraint - tau, gap);
        h += 1.0 / (d * d);
    }
    r.H1_cross_check = h;
    return r;
}

} // namespace cbandit
