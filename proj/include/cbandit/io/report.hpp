#pragma once

#include <cmath>
#include <string>

#include <json.hpp>

#include "../algorithms.hpp"
#include "../analysis.hpp"
#include "../montecarlo.hpp"

namespace cbandit {

// Infinities become the strings "inf" / "-inf".
inline nlohmann::json json_number(double v) {
    if (std::isinf(v)) return v < 0 ? "-inf" : "inf";
    if (std::isnan(v)) return "nan";
    return v;
}

/// Arm numbers in reports are 1-based.
inline nlohmann::json analysis_report(const std::string& id, const BanditInstance& inst) {
    const InstanceAnalysis a = classify_instance(inst);
    nlohmann::json j;
    j["instance_id"] = id;
    j["tau"] = inst.tau();
    j["a1"] = inst.a1();
    j["a2"] = inst.a2();
    j["feasible"] = a.feasible_flag;
    j["optimal_arm"] = a.optimal_arm + 1;
    nlohmann::json arms = nlohmann::json::array();
    for (std::size_t i = 0; i < inst.size(); ++i) {
        nlohmann::json r;
        r["arm"] = i + 1;
        r["mean"] = {inst.mean(i).objective, inst.mean(i).constraint};
        r["class"] = arm_class_name(a.classes[i]);
        r["delta"] = json_number(a.delta_to_opt[i]);
        r["Delta"] = json_number(a.Delta_to_opt[i]);
        if (i != a.optimal_arm) r["gap_case"] = gap_case_name(gap_case(inst.mean(a.optimal_arm), inst.mean(i), inst.tau()));
        arms.push_back(r);
    }
    j["arms"] = arms;
    nlohmann::json order = nlohmann::json::array();
    for (std::size_t i : a.ordering) order.push_back(i + 1);
    j["ordering"] = order;
    j["H1"] = json_number(a.H1);
    j["H2"] = json_number(a.H2);
    if (inst.size() == 2) {
        const LowerBoundReport lb = lb_rate_two_arm(inst);
        j["two_arm_rate"] = {{"case", lower_bound_case_name(lb.case_kind)},
                             {"rate_gap", json_number(lb.rate_gap)},
                             {"rate_case", json_number(lb.rate_case)}};
    }
    if (!a.feasible_flag) {
        const AllInfeasibleReport lb = lb_rate_all_infeasible(inst);
        j["all_infeasible_rate"] = {{"rate", json_number(lb.rate)},
                                    {"H1_cross_check", json_number(lb.H1_cross_check)}};
    }
    return j;
}

inline nlohmann::json estimate_json(const ErrorEstimate& e) {
    return {{"instance_id", e.instance_id}, {"algorithm", e.algorithm}, {"T", e.T},
            {"runs", e.runs},               {"errors", e.errors},       {"e_hat", json_number(e.e_hat)},
            {"log_e_hat", json_number(e.log_e_hat)}, {"ci_lo", json_number(e.ci_lo)},
            {"ci_hi", json_number(e.ci_hi)}, {"seed", e.seed}};
}

inline nlohmann::json sweep_json(const SweepResult& s, PullMode mode) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& e : s.records) rows.push_back(estimate_json(e));
    return {{"instance_id", s.instance_id},
            {"base_seed", s.base_seed},
            {"threads", s.threads},
            {"sampling", mode == PullMode::Batched ? "batched" : "per-pull"},
            {"wall_seconds", s.wall_seconds},
            {"records", rows}};
}

inline std::string format_trace_event(const std::string& algorithm, std::uint64_t T, const TraceEvent& ev) {
    std::string line = "algorithm=" + algorithm + " T=" + std::to_string(T) + " phase=" + std::to_string(ev.phase) +
                       " rejected=" + std::to_string(ev.rejected + 1) + " leader=" + std::to_string(ev.leader + 1);
    if (!ev.gaps.empty()) {
        line += " gaps=";
        for (std::size_t k = 0; k < ev.gaps.size(); ++k) {
            if (k) line += ';';
            line += std::to_string(ev.gaps[k].first + 1) + ':' + json_number(ev.gaps[k].second).dump();
        }
    }
    return line;
}

} // namespace cbandit
