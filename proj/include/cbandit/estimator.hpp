#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "model.hpp"

namespace cbandit {

struct ArmEstimate {
    std::uint64_t pulls = 0;
    double sum1 = 0.0;
    double sum2 = 0.0;

    AttributePair mu_hat() const {
        const double n = static_cast<double>(pulls);
        return {sum1 / n, sum2 / n};
    }
};

/// Per-arm pull counts and running sums; mu_hat is undefined at zero pulls.
class EstimatorState {
public:
    explicit EstimatorState(std::size_t arms) : arms_(arms) {}

    void update(std::size_t arm, const AttributePair& sample) { add_batch(arm, sample, 1); }

    /// Records `count` samples whose coordinate sums are `sum`.
    void add_batch(std::size_t arm, const AttributePair& sum, std::uint64_t count) {
        auto& a = arms_.at(arm);
        a.pulls += count;
        a.sum1 += sum.objective;
        a.sum2 += sum.constraint;
    }

    std::size_t size() const { return arms_.size(); }
    std::uint64_t pulls(std::size_t arm) const { return arms_.at(arm).pulls; }
    AttributePair mu_hat(std::size_t arm) const { return arms_.at(arm).mu_hat(); }
    const ArmEstimate& arm(std::size_t i) const { return arms_.at(i); }

    std::uint64_t total_pulls() const {
        std::uint64_t t = 0;
        for (const auto& a : arms_) t += a.pulls;
        return t;
    }

private:
    std::vector<ArmEstimate> arms_;
};

inline EstimatorState update_estimate(EstimatorState state, std::size_t arm, const AttributePair& sample) {
    state.update(arm, sample);
    return state;
}

} // namespace cbandit
