#include <catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <random>

#include <cbandit/analysis.hpp>
#include <cbandit/gaps.hpp>
#include <cbandit/io/presets.hpp>
#include <cbandit/schedule.hpp>

#include "support.hpp"

using namespace cbandit;
using Catch::Approx;

namespace {

BanditInstance pair_instance(AttributePair x, AttributePair y, double tau, double a = 1.0) {
    return support::noiseless({x, y}, tau, a, a);
}

ErrorCode code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected an error");
    return ErrorCode::ConfigError;
}

} // namespace

TEST_CASE("pair_optimal follows the two-armed definition") {
    CHECK(pair_optimal(pair_instance({1, 0.9}, {2, 0.9}, 1), 0, 1) == 0);
    CHECK(pair_optimal(pair_instance({5, 0.9}, {1, 1.5}, 1), 0, 1) == 0);
    CHECK(pair_optimal(pair_instance({0.3, 1.6}, {0.2, 1.1}, 1), 0, 1) == 1);
    CHECK(pair_optimal(pair_instance({1, 0.5}, {1, 0.5}, 1), 1, 0) == 0);
}

TEST_CASE("true_delta branches") {
    const auto a = find_preset("instance-a")->instance;
    CHECK(true_delta(a, 0, 1) == Approx(std::sqrt(0.5) * 4.0).epsilon(1e-12));
    CHECK(true_delta(a, 0, 1) == Approx(2.828427).margin(1e-6));

    const auto dec = pair_instance({1, 0.9}, {0.5, 1.2}, 1);
    CHECK(true_delta(dec, 0, 1) == Approx(0.2).epsilon(1e-12));
    CHECK(true_Delta(dec, 0, 1).case_label == GapCase::Deceiver);

    CHECK(true_delta(pair_instance({1, 0.2}, {1, 0.4}, 1), 0, 1) == 0.0);

    const auto inf_sub = pair_instance({1, 0.9}, {3, 1.5}, 1);
    CHECK(true_delta(inf_sub, 0, 1) == Approx(2.0).epsilon(1e-12));
    CHECK(true_Delta(inf_sub, 0, 1).case_label == GapCase::InfeasibleSuboptimal);
    const auto inf_sub2 = pair_instance({1, 0.9}, {1.1, 1.5}, 1);
    CHECK(true_delta(inf_sub2, 0, 1) == Approx(0.5).epsilon(1e-12));

    const auto both_inf = pair_instance({0.3, 1.6}, {0.2, 1.1}, 1);
    CHECK(true_delta(both_inf, 1, 0) == Approx(0.5).epsilon(1e-12));
    CHECK(true_Delta(both_inf, 1, 0).case_label == GapCase::BothInfeasible);

    CHECK(code_of([&] { true_delta(both_inf, 0, 1); }) == ErrorCode::PairOrderViolation);
    CHECK(true_delta(both_inf, 0, 0) == 0.0);
}

TEST_CASE("true_Delta caps by the feasibility margin") {
    const auto a = find_preset("instance-a")->instance;
    const auto r = true_Delta(a, 0, 1);
    CHECK(r.Delta == Approx(std::min(std::sqrt(0.5) * 0.05, std::sqrt(0.5) * 4.0)).epsilon(1e-12));
    CHECK(r.Delta == Approx(0.0353553).margin(1e-7));
    CHECK(r.case_label == GapCase::BothFeasible);

    CHECK(true_Delta(pair_instance({1, 0.9}, {0.5, 1.2}, 1), 0, 1).Delta == Approx(0.1).epsilon(1e-12));
    CHECK(true_Delta(pair_instance({1, 1.0}, {4, 0.2}, 1), 0, 1).Delta == 0.0);
}

TEST_CASE("hardness indices") {
    const auto a = classify_instance(find_preset("instance-a")->instance);
    CHECK(a.ordering == std::vector<std::size_t>{0, 1, 2});
    const double d = std::sqrt(0.5) * 0.05;
    CHECK(a.H1 == Approx(2.0 / (d * d)).epsilon(1e-12));
    CHECK(a.H1 == Approx(1600.0).epsilon(1e-12));
    CHECK(a.H2 == Approx(3.0 / (d * d)).epsilon(1e-12));
    CHECK(a.H2 == Approx(2400.0).epsilon(1e-12));

    // Delta = 1 and Delta = 0.5 two-armed instances with a loose threshold.
    CHECK(classify_instance(pair_instance({0, 0}, {1, 0}, 5)).H1 == Approx(1.0).epsilon(1e-12));
    CHECK(classify_instance(pair_instance({0, 0}, {0.5, 0}, 5)).H2 == Approx(8.0).epsilon(1e-12));

    const auto boundary = classify_instance(pair_instance({1, 1.0}, {4, 0.2}, 1));
    CHECK(std::isinf(boundary.H1));
    CHECK(std::isinf(boundary.H2));
}

TEST_CASE("ordering tie convention") {
    // Arms 2..4 all share Delta = margin = 0.1: feasible first, then infeasible by mu2.
    const auto inst = support::noiseless({{0, 0.9}, {5, 1.6}, {3, 0.2}, {4, 1.4}, {2, 0.5}}, 1.0, 1.0, 1.0);
    const auto a = classify_instance(inst);
    CHECK(a.ordering == std::vector<std::size_t>{0, 4, 2, 3, 1});
}

TEST_CASE("hardness sandwich on random instances") {
    std::mt19937_64 g(2024);
    std::uniform_int_distribution<std::size_t> kdist(2, 10);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t K = kdist(g);
        const auto a = classify_instance(support::random_feasible_instance(g, K));
        CHECK(a.H2 / 2.0 <= a.H1 * (1 + 1e-12));
        CHECK(a.H1 <= logbar(K) * a.H2 * (1 + 1e-12));
    }
}

TEST_CASE("gap invariants on random pairs") {
    std::mt19937_64 g(77);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 5000; ++trial) {
        const auto inst = support::noiseless({{u(g), u(g)}, {u(g), u(g)}}, u(g), u(g) + 0.1, u(g) + 0.1);
        const std::size_t i = pair_optimal(inst, 0, 1);
        const auto r = true_Delta(inst, i, 1 - i);
        CHECK(r.delta >= 0.0);
        CHECK(r.Delta >= 0.0);
        CHECK(r.Delta <= r.delta);
        CHECK(r.Delta <= std::sqrt(inst.a2()) * std::fabs(inst.tau() - inst.mean(i).constraint));
    }
}

TEST_CASE("huge threshold collapses to the objective gap") {
    std::mt19937_64 g(5);
    std::uniform_real_distribution<double> u(-3.0, 3.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto inst = support::noiseless({{u(g), u(g)}, {u(g), u(g)}}, 1e9, 0.7, 0.3);
        const std::size_t i = pair_optimal(inst, 0, 1);
        const std::size_t j = 1 - i;
        const auto r = true_Delta(inst, i, j);
        CHECK(r.case_label == GapCase::BothFeasible);
        const double obj = std::sqrt(0.7) * (inst.mean(j).objective - inst.mean(i).objective);
        CHECK(r.delta == Approx(obj).epsilon(1e-12));
        CHECK(r.Delta == r.delta);
    }
}

TEST_CASE("joint rescaling leaves gaps and hardness unchanged") {
    std::mt19937_64 g(8);
    std::uniform_int_distribution<std::size_t> kdist(2, 7);
    for (double c : {2.0, 0.37, 13.0}) {
        for (int trial = 0; trial < 200; ++trial) {
            const auto base = support::random_feasible_instance(g, kdist(g));
            std::vector<AttributePair> scaled;
            std::vector<AttributePair> orig;
            for (const auto& arm : base.arms()) {
                orig.push_back(arm.mean);
                scaled.push_back({c * arm.mean.objective, c * arm.mean.constraint});
            }
            const auto x = classify_instance(support::noiseless(orig, base.tau(), 0.5, 0.5));
            const auto y = classify_instance(support::noiseless(scaled, c * base.tau(), 0.5 / (c * c), 0.5 / (c * c)));
            REQUIRE(x.optimal_arm == y.optimal_arm);
            for (std::size_t i = 0; i < orig.size(); ++i) {
                CHECK(y.delta_to_opt[i] == Approx(x.delta_to_opt[i]).epsilon(1e-12).margin(1e-15));
                CHECK(y.Delta_to_opt[i] == Approx(x.Delta_to_opt[i]).epsilon(1e-12).margin(1e-15));
            }
            CHECK(y.H1 == Approx(x.H1).epsilon(1e-12));
            CHECK(y.H2 == Approx(x.H2).epsilon(1e-12));
        }
    }
}

TEST_CASE("two-armed rate formulas") {
    const auto c1 = lb_rate_two_arm(pair_instance({1, 0.9}, {2, 0.95}, 1));
    CHECK(c1.case_kind == LowerBoundCase::FeasibleSuboptimal);
    CHECK(c1.rate_gap == Approx(0.01).epsilon(1e-12));
    CHECK(c1.rate_case == Approx(0.005).epsilon(1e-12));

    const auto c2 = lb_rate_two_arm(pair_instance({1, 0.9}, {0.5, 1.3}, 1));
    CHECK(c2.case_kind == LowerBoundCase::Deceiver);
    CHECK(c2.rate_case == Approx(0.005).epsilon(1e-12));
    CHECK(c2.rate_gap == Approx(0.01).epsilon(1e-12));

    // min{0.01, max{0.25, 4}} with no halving.
    const auto c3 = lb_rate_two_arm(pair_instance({1, 0.9}, {3, 1.5}, 1));
    CHECK(c3.case_kind == LowerBoundCase::InfeasibleSuboptimal);
    CHECK(c3.rate_case == Approx(0.01).epsilon(1e-12));
    const auto c3b = lb_rate_two_arm(pair_instance({1, 0.2}, {1.3, 1.1}, 1));
    CHECK(c3b.rate_case == Approx(std::min(0.64, std::max(0.01, 0.09))).epsilon(1e-12));

    // a1 enters the first term exactly as printed.
    const auto c4 = lb_rate_two_arm(support::noiseless({{0.3, 1.6}, {0.2, 1.1}}, 1.0, 2.0, 0.5));
    CHECK(c4.case_kind == LowerBoundCase::InfeasibleInstance);
    CHECK(c4.rate_case == Approx(std::min(2.0 * 0.25 / 4.0, 0.5 * 0.01)).epsilon(1e-12));
    const auto c4b = lb_rate_two_arm(support::noiseless({{0.3, 1.2}, {0.2, 1.1}}, 1.0, 0.5, 0.5));
    CHECK(c4b.rate_case == Approx(std::min(0.5 * 0.01 / 4.0, 0.5 * 0.01)).epsilon(1e-12));

    const auto zero = lb_rate_two_arm(pair_instance({1, 1.0}, {2, 0.5}, 1));
    CHECK(zero.rate_gap == 0.0);
    CHECK(zero.rate_case == 0.0);

    CHECK(code_of([] { lb_rate_two_arm(find_preset("instance-a")->instance); }) == ErrorCode::WrongArity);
}

TEST_CASE("two-armed gap rate ignores arm labels") {
    std::mt19937_64 g(31);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 2000; ++trial) {
        const AttributePair x{u(g), u(g)}, y{u(g), u(g)};
        const double tau = u(g);
        const auto r1 = lb_rate_two_arm(pair_instance(x, y, tau));
        const auto r2 = lb_rate_two_arm(pair_instance(y, x, tau));
        CHECK(r1.rate_gap == r2.rate_gap);
        CHECK(r1.rate_case == r2.rate_case);
        CHECK(r1.rate_gap >= 0.0);
    }
}

TEST_CASE("all-infeasible rate") {
    const auto d = lb_rate_all_infeasible(find_preset("instance-d")->instance);
    CHECK(d.optimal_arm == 2);
    CHECK(d.rate == Approx(0.005).epsilon(1e-12));
    CHECK(d.H1_cross_check == Approx(4.0 / d.rate).epsilon(1e-12));

    const auto one = lb_rate_all_infeasible(support::noiseless({{0.0, 3.0}}, 2.0, 1.0, 1.0));
    CHECK(one.rate == Approx(1.0).epsilon(1e-12));
    CHECK(code_of([] { lb_rate_all_infeasible(find_preset("instance-c")->instance); }) == ErrorCode::NotAllInfeasible);
}
