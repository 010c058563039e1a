#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "../model.hpp"

namespace cbandit {

struct Preset {
    std::string name;
    BanditInstance instance;
    std::uint64_t default_runs;
};

inline constexpr Covariance2 kExperimentCovariance{{{1.0, 0.5}, {0.5, 1.0}}};

inline BanditInstance preset_instance(const std::vector<AttributePair>& means, double tau) {
    std::vector<BivariateGaussianArm> arms;
    for (const auto& m : means) arms.push_back({m, kExperimentCovariance});
    return BanditInstance::make(std::move(arms), tau);
}

inline std::vector<Preset> presets() {
    return {
        {"instance-a", preset_instance({{1.0, 0.95}, {5.0, 0.001}, {10.0, 0.001}}, 1.0), 100000},
        {"instance-b", preset_instance({{1.0, 0.995}, {2.0, 1.005}, {12.0, 0.001}}, 1.0), 100000},
        {"instance-c", preset_instance({{0.3, 0.45}, {0.35, 0.45}, {0.2, 0.8}, {0.5, 0.8}}, 0.5), 100000},
        {"instance-d", preset_instance({{0.3, 1.6}, {0.4, 1.7}, {0.2, 1.1}, {0.5, 1.2}}, 1.0), 10000},
    };
}

inline std::optional<Preset> find_preset(std::string_view name) {
    for (auto& p : presets())
        if (p.name == name) return p;
    return std::nullopt;
}

} // namespace cbandit
