#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <cbandit/algorithms.hpp>
#include <cbandit/analysis.hpp>
#include <cbandit/io/config.hpp>
#include <cbandit/io/csv.hpp>
#include <cbandit/io/presets.hpp>
#include <cbandit/io/report.hpp>
#include <cbandit/montecarlo.hpp>

namespace {

using namespace cbandit;

struct Flags {
    std::string config;
    std::string instance;
    std::string algorithms;
    std::string horizons;
    std::string threads;
    std::string sampling;
    std::string out;
    std::string json;
    std::string trace;
    std::uint64_t runs = 0;
    std::uint64_t seed = 0;
};

bool given(const CLI::App& cmd, const std::string& name) {
    const CLI::Option* o = cmd.get_option_no_throw(name);
    return o != nullptr && o->count() > 0;
}

ExperimentConfig build_config(const Flags& f, const CLI::App& cmd) {
    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config_file(f.config);
    if (!f.instance.empty()) {
        auto p = find_preset(f.instance);
        if (!p) throw Error(ErrorCode::ValidationError, "field 'instance': unknown preset '" + f.instance + "'");
        c.instance = InstanceSpec{p->name, p->instance, p->default_runs};
    }
    if (!c.instance) throw Error(ErrorCode::ValidationError, "field 'instance': required (use --instance or --config)");
    if (!f.algorithms.empty()) {
        std::vector<std::string> ids;
        std::stringstream ss(f.algorithms);
        for (std::string id; std::getline(ss, id, ',');) ids.push_back(id);
        c.algorithms = parse_algorithm_list(ids, "algorithms");
    }
    if (!f.horizons.empty()) c.horizons = parse_horizons(f.horizons);
    if (given(cmd, "--runs")) {
        if (f.runs < 1) throw Error(ErrorCode::ValidationError, "field 'runs': must be at least 1");
        c.runs = f.runs;
    }
    if (given(cmd, "--seed")) c.seed = f.seed;
    if (!f.threads.empty()) c.threads = parse_threads(f.threads);
    if (!f.sampling.empty()) c.sampling = parse_sampling(f.sampling);
    if (!f.out.empty()) c.out = f.out;
    if (!f.json.empty()) c.json = f.json;
    if (!f.trace.empty()) c.trace = f.trace;
    return c;
}

// Writes through a temporary file renamed into place.
void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
        out << content;
        if (!out.flush()) throw Error(ErrorCode::ConfigError, "cannot write '" + path + "'");
    }
    std::filesystem::rename(tmp, path);
}

int cmd_run(const ExperimentConfig& c) {
    const InstanceSpec& spec = *c.instance;
    const EstimateOptions opt{c.threads, c.sampling};
    const SweepResult res = sweep(spec.instance, spec.id, c.algorithms, c.horizons, c.effective_runs(), c.seed, opt);

    std::string trace;
    if (!c.trace.empty()) {
        for (Algorithm a : c.algorithms) {
            for (std::uint64_t T : c.horizons) {
                RandomStream rng =
                    RandomStream::for_replication(derive_cell_seed(c.seed, algorithm_index(a), T), 0);
                const AlgoOutput outp = run_algorithm(a, spec.instance, T, rng, RunOptions{c.sampling, true});
                for (const auto& ev : outp.trace) trace += format_trace_event(std::string(algorithm_id(a)), T, ev) + '\n';
            }
        }
    }

    const std::string csv = to_csv(res.records);
    if (c.out.empty()) {
        std::cout << csv;
    } else {
        write_file(c.out, csv);
    }
    if (!c.json.empty()) write_file(c.json, sweep_json(res, c.sampling).dump(2) + "\n");
    if (!c.trace.empty()) write_file(c.trace, trace);
    return 0;
}

int cmd_analyze(const ExperimentConfig& c) {
    const std::string text = analysis_report(c.instance->id, c.instance->instance).dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
    } else {
        write_file(c.out, text);
    }
    return 0;
}

int cmd_presets() {
    nlohmann::json all = nlohmann::json::array();
    for (const auto& p : presets()) {
        nlohmann::json arms = nlohmann::json::array();
        for (const auto& a : p.instance.arms())
            arms.push_back({{"mean", {a.mean.objective, a.mean.constraint}},
                            {"covariance", {{a.covariance[0][0], a.covariance[0][1]},
                                            {a.covariance[1][0], a.covariance[1][1]}}}});
        all.push_back({{"name", p.name},
                       {"tau", p.instance.tau()},
                       {"a1", p.instance.a1()},
                       {"a2", p.instance.a2()},
                       {"default_runs", p.default_runs},
                       {"arms", arms}});
    }
    std::cout << all.dump(2) << "\n";
    return 0;
}

void add_common(CLI::App* cmd, Flags& f) {
    cmd->add_option("--config", f.config, "JSON experiment config; flags override its values");
    cmd->add_option("--instance", f.instance, "preset name (instance-a .. instance-d)");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Constrained fixed-budget best-arm identification lab"};
    app.require_subcommand(1);
    Flags f;

    auto* run = app.add_subcommand("run", "estimate error probabilities over a horizon sweep");
    add_common(run, f);
    run->add_option("--algorithms", f.algorithms, "comma-separated subset of csr,if,sr");
    run->add_option("--horizons", f.horizons, "comma list or start:stop:step");
    run->add_option("--runs", f.runs, "replications per cell");
    run->add_option("--seed", f.seed, "base seed");
    run->add_option("--threads", f.threads, "worker threads or 'auto'");
    run->add_option("--sampling", f.sampling, "batched (default) or per-pull");
    run->add_option("--out", f.out, "CSV path (default stdout)");
    run->add_option("--json", f.json, "JSON mirror path");
    run->add_option("--trace", f.trace, "write rejection traces of replication 0 of every cell");

    auto* analyze = app.add_subcommand("analyze", "classification, gaps, hardness and rate report");
    add_common(analyze, f);
    analyze->add_option("--out", f.out, "report path (default stdout)");

    auto* list = app.add_subcommand("presets", "print the built-in instances");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) return cmd_presets();
        if (*run) return cmd_run(build_config(f, *run));
        if (*analyze) return cmd_analyze(build_config(f, *analyze));
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
