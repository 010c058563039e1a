#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include <json.hpp>

#include "../algorithms.hpp"
#include "../analysis.hpp"
#include "../error.hpp"
#include "../model.hpp"
#include "presets.hpp"

namespace cbandit {

struct InstanceSpec {
    std::string id;
    BanditInstance instance;
    std::uint64_t default_runs = 0;
};

struct ExperimentConfig {
    std::optional<InstanceSpec> instance;
    std::vector<Algorithm> algorithms{Algorithm::ConstrainedSR, Algorithm::InfeasibleFirst};
    std::vector<std::uint64_t> horizons{1000, 2000, 3000, 4000, 5000, 6000, 7000, 8000, 9000, 10000};
    std::optional<std::uint64_t> runs;
    std::uint64_t seed = 1;
    unsigned threads = 0; // 0 = auto
    PullMode sampling = PullMode::Batched;
    std::string out;
    std::string json;
    std::string trace;

    std::uint64_t effective_runs() const { return runs ? *runs : instance ? instance->default_runs : 0; }
};

namespace config_detail {

using nlohmann::json;

[[noreturn]] inline void invalid(const std::string& field, const std::string& what) {
    throw Error(ErrorCode::ValidationError, "field '" + field + "': " + what);
}

inline double number(const json& j, const std::string& field) {
    if (!j.is_number()) invalid(field, "expected a number");
    return j.get<double>();
}

inline std::uint64_t count(const json& j, const std::string& field) {
    if (!j.is_number_integer() || (j.is_number_integer() && !j.is_number_unsigned() && j.get<std::int64_t>() < 0))
        invalid(field, "expected a non-negative integer");
    return j.get<std::uint64_t>();
}

inline AttributePair pair_of(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2) invalid(field, "expected [objective, constraint]");
    return {number(j[0], field + "[0]"), number(j[1], field + "[1]")};
}

inline Covariance2 matrix_of(const json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_array() || j[0].size() != 2 || !j[1].is_array() ||
        j[1].size() != 2)
        invalid(field, "expected a 2x2 matrix [[s11, s12], [s21, s22]]");
    Covariance2 c{};
    for (int r = 0; r < 2; ++r)
        for (int k = 0; k < 2; ++k) c[r][k] = number(j[r][k], field);
    return c;
}

inline void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& prefix) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key())) invalid(prefix + item.key(), "unknown field");
}

inline bool valid_id(std::string_view id) {
    return !id.empty() && id.find_first_of(",\"\n\r") == std::string_view::npos;
}

inline InstanceSpec instance_from_json(const json& j) {
    if (j.is_string()) {
        const auto name = j.get<std::string>();
        auto p = find_preset(name);
        if (!p) invalid("instance", "unknown preset '" + name + "'");
        return {p->name, p->instance, p->default_runs};
    }
    if (!j.is_object()) invalid("instance", "expected a preset name or an object");
    reject_unknown(j, {"id", "arms", "covariance", "tau", "a1", "a2"}, "instance.");
    if (!j.contains("tau")) invalid("instance.tau", "required field is missing");
    if (!j.contains("arms")) invalid("instance.arms", "required field is missing");
    const double tau = number(j["tau"], "instance.tau");
    std::optional<Covariance2> shared;
    if (j.contains("covariance")) shared = matrix_of(j["covariance"], "instance.covariance");
    const auto& arms_j = j["arms"];
    if (!arms_j.is_array() || arms_j.empty()) invalid("instance.arms", "expected a non-empty list");
    std::vector<BivariateGaussianArm> arms;
    for (std::size_t i = 0; i < arms_j.size(); ++i) {
        const std::string f = "instance.arms[" + std::to_string(i) + "]";
        const auto& a = arms_j[i];
        BivariateGaussianArm arm;
        if (a.is_array()) {
            arm.mean = pair_of(a, f);
            if (!shared) invalid(f, "no per-arm covariance and no shared instance.covariance");
            arm.covariance = *shared;
        } else if (a.is_object()) {
            reject_unknown(a, {"mean", "covariance"}, f + ".");
            if (!a.contains("mean")) invalid(f + ".mean", "required field is missing");
            arm.mean = pair_of(a["mean"], f + ".mean");
            if (a.contains("covariance")) {
                arm.covariance = matrix_of(a["covariance"], f + ".covariance");
            } else if (shared) {
                arm.covariance = *shared;
            } else {
                invalid(f + ".covariance", "required field is missing");
            }
        } else {
            invalid(f, "expected [objective, constraint] or {mean, covariance}");
        }
        arms.push_back(arm);
    }
    std::optional<double> a1;
    std::optional<double> a2;
    if (j.contains("a1")) a1 = number(j["a1"], "instance.a1");
    if (j.contains("a2")) a2 = number(j["a2"], "instance.a2");
    std::string id = "custom";
    if (j.contains("id")) {
        if (!j["id"].is_string() || !valid_id(j["id"].get<std::string>()))
            invalid("instance.id", "expected a non-empty string without commas, quotes or newlines");
        id = j["id"].get<std::string>();
    }
    try {
        BanditInstance inst = BanditInstance::make(std::move(arms), tau, a1, a2);
        bool feasible = false;
        for (const auto& arm : inst.arms()) feasible = feasible || is_feasible(arm.mean.constraint, tau);
        return {id, inst, feasible ? 100000u : 10000u};
    } catch (const Error& e) {
        invalid("instance", e.what());
    }
}

inline std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < std::min(byte > 0 ? byte - 1 : 0, text.size()); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

} // namespace config_detail

inline std::vector<Algorithm> parse_algorithm_list(const std::vector<std::string>& ids, const std::string& field) {
    std::vector<Algorithm> out;
    for (const auto& id : ids) {
        auto a = parse_algorithm(id);
        if (!a) config_detail::invalid(field, "unknown algorithm '" + id + "' (expected csr, if or sr)");
        if (std::find(out.begin(), out.end(), *a) != out.end())
            config_detail::invalid(field, "algorithm '" + id + "' listed twice");
        out.push_back(*a);
    }
    if (out.empty()) config_detail::invalid(field, "at least one algorithm is required");
    return out;
}

inline void validate_horizons(const std::vector<std::uint64_t>& h, const std::string& field) {
    if (h.empty()) config_detail::invalid(field, "at least one horizon is required");
    for (std::size_t i = 1; i < h.size(); ++i)
        if (h[i] <= h[i - 1]) config_detail::invalid(field, "horizons must be strictly ascending");
}

/// "1000,2000,5000" or "start:stop:step" (inclusive).
inline std::vector<std::uint64_t> parse_horizons(std::string_view text) {
    auto num = [&](std::string_view s) {
        std::uint64_t v = 0;
        const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
        if (r.ec != std::errc() || r.ptr != s.data() + s.size() || s.empty())
            config_detail::invalid("horizons", "bad integer '" + std::string(s) + "'");
        return v;
    };
    std::vector<std::uint64_t> out;
    if (text.find(':') != std::string_view::npos) {
        const auto a = text.find(':');
        const auto b = text.find(':', a + 1);
        if (b == std::string_view::npos) config_detail::invalid("horizons", "range form is start:stop:step");
        const auto start = num(text.substr(0, a));
        const auto stop = num(text.substr(a + 1, b - a - 1));
        const auto step = num(text.substr(b + 1));
        if (step == 0) config_detail::invalid("horizons", "step must be positive");
        for (std::uint64_t t = start; t <= stop; t += step) out.push_back(t);
    } else {
        std::size_t start = 0;
        while (start <= text.size()) {
            const auto comma = text.find(',', start);
            out.push_back(num(text.substr(start, comma - start)));
            if (comma == std::string_view::npos) break;
            start = comma + 1;
        }
    }
    validate_horizons(out, "horizons");
    return out;
}

/// "auto" maps to 0, resolved to the hardware thread count at run time.
inline unsigned parse_threads(std::string_view text) {
    if (text == "auto") return 0;
    unsigned v = 0;
    const auto r = std::from_chars(text.data(), text.data() + text.size(), v);
    if (r.ec != std::errc() || r.ptr != text.data() + text.size() || v == 0)
        config_detail::invalid("threads", "expected a positive integer or 'auto'");
    return v;
}

inline PullMode parse_sampling(std::string_view text) {
    if (text == "batched") return PullMode::Batched;
    if (text == "per-pull") return PullMode::PerPull;
    config_detail::invalid("sampling", "expected 'batched' or 'per-pull'");
}

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    using namespace config_detail;
    if (!j.is_object()) invalid("<root>", "expected an object");
    reject_unknown(j, {"instance", "algorithms", "horizons", "runs", "seed", "threads", "sampling", "out", "json", "trace"},
                   "");
    ExperimentConfig c;
    if (j.contains("instance")) c.instance = instance_from_json(j["instance"]);
    if (j.contains("algorithms")) {
        const auto& a = j["algorithms"];
        if (!a.is_array()) invalid("algorithms", "expected a list of identifiers");
        std::vector<std::string> ids;
        for (const auto& x : a) {
            if (!x.is_string()) invalid("algorithms", "expected a list of identifiers");
            ids.push_back(x.get<std::string>());
        }
        c.algorithms = parse_algorithm_list(ids, "algorithms");
    }
    if (j.contains("horizons")) {
        const auto& h = j["horizons"];
        if (!h.is_array()) invalid("horizons", "expected a list of integers");
        c.horizons.clear();
        for (const auto& x : h) c.horizons.push_back(count(x, "horizons"));
        validate_horizons(c.horizons, "horizons");
    }
    if (j.contains("runs")) {
        c.runs = count(j["runs"], "runs");
        if (*c.runs < 1) invalid("runs", "must be at least 1");
    }
    if (j.contains("seed")) c.seed = count(j["seed"], "seed");
    if (j.contains("threads")) {
        const auto& t = j["threads"];
        if (t.is_string()) {
            c.threads = parse_threads(t.get<std::string>());
        } else {
            const auto v = count(t, "threads");
            if (v == 0) invalid("threads", "expected a positive integer or 'auto'");
            c.threads = static_cast<unsigned>(v);
        }
    }
    if (j.contains("sampling")) {
        if (!j["sampling"].is_string()) invalid("sampling", "expected 'batched' or 'per-pull'");
        c.sampling = parse_sampling(j["sampling"].get<std::string>());
    }
    for (const char* key : {"out", "json", "trace"}) {
        if (!j.contains(key)) continue;
        if (!j[key].is_string()) invalid(key, "expected a path string");
        const auto v = j[key].get<std::string>();
        if (std::string_view(key) == "out") c.out = v;
        else if (std::string_view(key) == "json") c.json = v;
        else c.trace = v;
    }
    return c;
}

inline ExperimentConfig parse_config(std::string_view text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text.begin(), text.end());
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, col] = config_detail::line_column(text, e.byte);
        throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ", column " + std::to_string(col) +
                                               ": malformed JSON");
    }
    return config_from_json(j);
}

inline ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ConfigError, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

} // namespace cbandit
