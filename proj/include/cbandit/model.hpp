#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "error.hpp"
#include "rng.hpp"

namespace cbandit {

/// (objective, constraint) attribute vector of an arm, i.e. (mu1, mu2).
struct AttributePair {
    double objective = 0.0;
    double constraint = 0.0;

    friend bool operator==(const AttributePair&, const AttributePair&) = default;
};

using Covariance2 = std::array<std::array<double, 2>, 2>;

inline constexpr Covariance2 kZeroCovariance{{{0.0, 0.0}, {0.0, 0.0}}};

struct BivariateGaussianArm {
    AttributePair mean;
    Covariance2 covariance = kZeroCovariance;
};

/// Lower-triangular factor of a PSD 2x2 matrix; zero variances are allowed.
struct Cholesky2 {
    double l11 = 0.0;
    double l21 = 0.0;
    double l22 = 0.0;
};

inline Cholesky2 cholesky2(const Covariance2& s) {
    Cholesky2 c;
    c.l11 = std::sqrt(s[0][0]);
    c.l21 = c.l11 > 0.0 ? s[1][0] / c.l11 : 0.0;
    c.l22 = std::sqrt(std::max(0.0, s[1][1] - c.l21 * c.l21));
    return c;
}

inline bool is_psd(const Covariance2& s, double eps = 1e-12) {
    if (!std::isfinite(s[0][0]) || !std::isfinite(s[0][1]) || !std::isfinite(s[1][1])) return false;
    if (s[0][1] != s[1][0]) return false;
    if (s[0][0] < 0.0 || s[1][1] < 0.0) return false;
    const double scale = std::max({s[0][0] * s[1][1], s[0][1] * s[0][1], 1.0});
    return s[0][0] * s[1][1] - s[0][1] * s[1][0] >= -eps * scale;
}

/// One draw from the arm. Zero covariance returns the mean exactly.
inline AttributePair sample_arm(const BivariateGaussianArm& arm, RandomStream& rng) {
    const Cholesky2 c = cholesky2(arm.covariance);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    return {arm.mean.objective + c.l11 * z1, arm.mean.constraint + c.l21 * z1 + c.l22 * z2};
}

/// Sum of m independent draws, drawn directly as N(m*mean, m*cov).
inline AttributePair sample_sum(const BivariateGaussianArm& arm, std::uint64_t m, RandomStream& rng) {
    const Cholesky2 c = cholesky2(arm.covariance);
    const double md = static_cast<double>(m);
    const double root = std::sqrt(md);
    const double z1 = rng.normal();
    const double z2 = rng.normal();
    return {md * arm.mean.objective + root * c.l11 * z1,
            md * arm.mean.constraint + root * (c.l21 * z1 + c.l22 * z2)};
}

class BanditInstance {
public:
    /// Validates and builds an instance. Without overrides, a_j = 1/(2 sigma_j^2)
    /// from the marginal variances, which must then agree across arms.
    static BanditInstance make(std::vector<BivariateGaussianArm> arms, double tau,
                               std::optional<double> a1 = std::nullopt,
                               std::optional<double> a2 = std::nullopt) {
        if (arms.empty()) throw Error(ErrorCode::EmptyInstance, "instance has no arms");
        if (!std::isfinite(tau)) throw Error(ErrorCode::ConfigError, "tau must be finite");
        for (std::size_t i = 0; i < arms.size(); ++i) {
            const auto& m = arms[i].mean;
            if (!std::isfinite(m.objective) || !std::isfinite(m.constraint))
                throw Error(ErrorCode::ConfigError, "arm " + std::to_string(i + 1) + ": mean must be finite");
            if (!is_psd(arms[i].covariance))
                throw Error(ErrorCode::ConfigError,
                            "arm " + std::to_string(i + 1) + ": covariance is not symmetric positive semidefinite");
        }
        BanditInstance inst;
        inst.a1_ = resolve_a(a1, arms, 0, "a1");
        inst.a2_ = resolve_a(a2, arms, 1, "a2");
        inst.arms_ = std::move(arms);
        inst.tau_ = tau;
        return inst;
    }

    std::size_t size() const { return arms_.size(); }
    const std::vector<BivariateGaussianArm>& arms() const { return arms_; }
    const BivariateGaussianArm& arm(std::size_t i) const { return arms_.at(i); }
    const AttributePair& mean(std::size_t i) const { return arms_.at(i).mean; }
    double tau() const { return tau_; }
    double a1() const { return a1_; }
    double a2() const { return a2_; }

    /// Same arms and a-values with a different threshold.
    BanditInstance with_tau(double tau) const { return make(arms_, tau, a1_, a2_); }

private:
    BanditInstance() = default;

    static double resolve_a(std::optional<double> given, const std::vector<BivariateGaussianArm>& arms,
                            int dim, const char* name) {
        if (given) {
            if (!(*given > 0.0) || !std::isfinite(*given))
                throw Error(ErrorCode::ConfigError, std::string(name) + " must be positive and finite");
            return *given;
        }
        const double var = arms.front().covariance[dim][dim];
        for (const auto& a : arms) {
            if (a.covariance[dim][dim] != var)
                throw Error(ErrorCode::ConfigError, std::string(name) +
                                                        " cannot be derived: marginal variances differ across arms");
        }
        if (!(var > 0.0))
            throw Error(ErrorCode::ConfigError,
                        std::string(name) + " cannot be derived from zero variance; supply it explicitly");
        return 1.0 / (2.0 * var);
    }

    std::vector<BivariateGaussianArm> arms_;
    double tau_ = 0.0;
    double a1_ = 0.0;
    double a2_ = 0.0;
};

inline bool is_feasible(double constraint, double tau) { return constraint <= tau; }

} // namespace cbandit
