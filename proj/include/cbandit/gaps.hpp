#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>

#include "error.hpp"
#include "model.hpp"

namespace cbandit {

enum class GapCase { BothFeasible, Deceiver, InfeasibleSuboptimal, BothInfeasible };

inline const char* gap_case_name(GapCase c) {
    switch (c) {
    case GapCase::BothFeasible: return "both-feasible";
    case GapCase::Deceiver: return "deceiver";
    case GapCase::InfeasibleSuboptimal: return "infeasible-suboptimal";
    case GapCase::BothInfeasible: return "both-infeasible";
    }
    return "unknown";
}

struct GapParams {
    double tau = 0.0;
    double a1 = 0.0;
    double a2 = 0.0;
};

struct GapReport {
    std::size_t i = 0;
    std::size_t j = 0;
    double delta = 0.0;
    double Delta = 0.0;
    GapCase case_label = GapCase::BothFeasible;
};

/// Whether x (index ix) wins the two-armed comparison against y (index iy).
inline bool beats_in_pair(const AttributePair& x, std::size_t ix, const AttributePair& y, std::size_t iy,
                          double tau) {
    const bool fx = is_feasible(x.constraint, tau);
    const bool fy = is_feasible(y.constraint, tau);
    if (fx != fy) return fx;
    const double vx = fx ? x.objective : x.constraint;
    const double vy = fx ? y.objective : y.constraint;
    if (vx != vy) return vx < vy;
    return ix < iy;
}

/// Branch of delta for `other` measured against the pair-optimal `opt`.
inline GapCase gap_case(const AttributePair& opt, const AttributePair& other, double tau) {
    if (!is_feasible(opt.constraint, tau)) return GapCase::BothInfeasible;
    if (is_feasible(other.constraint, tau)) return GapCase::BothFeasible;
    return other.objective <= opt.objective ? GapCase::Deceiver : GapCase::InfeasibleSuboptimal;
}

/// delta(opt, other) from means alone; the caller guarantees opt is pair-optimal.
inline double delta_formula(const AttributePair& opt, const AttributePair& other, const GapParams& p) {
    const double r1 = std::sqrt(p.a1);
    const double r2 = std::sqrt(p.a2);
    switch (gap_case(opt, other, p.tau)) {
    case GapCase::BothFeasible: return r1 * (other.objective - opt.objective);
    case GapCase::Deceiver: return r2 * (other.constraint - p.tau);
    case GapCase::InfeasibleSuboptimal:
        return std::max(r2 * (other.constraint - p.tau), r1 * (other.objective - opt.objective));
    case GapCase::BothInfeasible: return r2 * (other.constraint - opt.constraint);
    }
    return 0.0;
}

inline double feasibility_margin(const AttributePair& opt, const GapParams& p) {
    return std::sqrt(p.a2) * std::fabs(p.tau - opt.constraint);
}

inline double Delta_formula(const AttributePair& opt, const AttributePair& other, const GapParams& p) {
    return std::min(feasibility_margin(opt, p), delta_formula(opt, other, p));
}

inline GapParams gap_params(const BanditInstance& inst) { return {inst.tau(), inst.a1(), inst.a2()}; }

inline std::size_t pair_optimal(const BanditInstance& inst, std::size_t i, std::size_t j) {
    return beats_in_pair(inst.mean(i), i, inst.mean(j), j, inst.tau()) ? i : j;
}

inline double true_delta(const BanditInstance& inst, std::size_t i, std::size_t j) {
    if (i == j) return 0.0;
    if (pair_optimal(inst, i, j) != i)
        throw Error(ErrorCode::PairOrderViolation,
                    "arm " + std::to_string(i + 1) + " is not optimal in the pair with arm " + std::to_string(j + 1));
    return delta_formula(inst.mean(i), inst.mean(j), gap_params(inst));
}

inline GapReport true_Delta(const BanditInstance& inst, std::size_t i, std::size_t j) {
    GapReport r;
    r.i = i;
    r.j = j;
    r.delta = true_delta(inst, i, j);
    r.Delta = std::min(feasibility_margin(inst.mean(i), gap_params(inst)), r.delta);
    r.case_label = gap_case(inst.mean(i), inst.mean(j), inst.tau());
    return r;
}

} // namespace cbandit
