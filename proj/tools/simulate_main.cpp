#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "heatcoord/experiment.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Day-ahead simulator of coordinated residential space-heating demand response"};

    std::string config_path;
    std::string case_override;
    std::string out_override;
    std::uint64_t seed_override = 0;
    long long households_override = -1;
    int max_passes_override = -1;
    int threads_override = -1;
    bool emit_default = false;

    app.add_option("--config", config_path, "Path to the JSON config file");
    app.add_option("--case", case_override,
                   "baseline|uncoordinated|coordinated|comfort-a|comfort-b|comfort-c");
    app.add_option("--seed", seed_override, "Master RNG seed (overrides config)");
    app.add_option("--out", out_override, "Output directory (overrides config)");
    app.add_option("--households", households_override, "Household count (overrides config)");
    app.add_option("--max-passes", max_passes_override, "Coordination pass cap (overrides config)");
    app.add_option("--threads", threads_override, "Worker threads for parallel stages");
    app.add_flag("--emit-default-config", emit_default,
                 "Print the default config JSON with every documented default and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        if (emit_default) {
            std::cout << heatcoord::config_to_json_string(heatcoord::default_config()) << "\n";
            return 0;
        }

        heatcoord::ExperimentConfig cfg =
            config_path.empty() ? heatcoord::default_config()
                                : heatcoord::load_config_file(config_path);
        if (!case_override.empty()) cfg.run.experiment_case = heatcoord::parse_case(case_override);
        if (app.count("--seed")) {
            cfg.run.seed = seed_override;
            cfg.population.rng_seed = seed_override;
        }
        if (!out_override.empty()) cfg.run.out_dir = out_override;
        if (households_override >= 0)
            cfg.population.household_count = static_cast<int>(households_override);
        if (max_passes_override > 0) cfg.run.max_passes = max_passes_override;
        if (threads_override >= 0) cfg.run.threads = threads_override;

        const auto t0 = std::chrono::steady_clock::now();
        const auto result = heatcoord::run_experiment(cfg);
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

        const auto& m = result.metrics;
        std::printf("case              : %s\n", m.experiment.name.c_str());
        std::printf("households        : %d (excluded %d)\n", m.households_requested,
                    m.households_excluded);
        std::printf("baseline cost     : %.2f GBP\n", m.baseline.total_cost_gbp);
        std::printf("case cost         : %.2f GBP (%+.2f%% reduction)\n",
                    m.experiment.total_cost_gbp, m.experiment.cost_reduction_pct);
        std::printf("morning peak      : %.2f MW (shaving %.2f%%)\n", m.experiment.morning_peak_mw,
                    m.experiment.morning_shaving_pct);
        std::printf("evening peak      : %.2f MW (shaving %.2f%%)\n", m.experiment.evening_peak_mw,
                    m.experiment.evening_shaving_pct);
        if (!m.convergence.empty() && m.experiment.passes > 0)
            std::printf("passes            : %d (%s, %lld shifts, %lld compensations)\n",
                        m.experiment.passes, m.experiment.converged ? "converged" : "pass cap hit",
                        m.experiment.shifts, m.experiment.compensations);
        std::printf("safety violations : %lld\n", m.safety_violations);
        std::printf("wall time         : %.1f s\n", secs);
        std::printf("outputs           : %s\n", cfg.run.out_dir.c_str());
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
