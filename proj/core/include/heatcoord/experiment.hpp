#pragma once

#include <string>
#include <vector>

#include "heatcoord/config.hpp"
#include "heatcoord/metrics.hpp"

namespace heatcoord {

struct ExperimentResult {
    RunMetrics metrics;
    std::vector<double> baseline_demand_mw;
    std::vector<double> case_demand_mw;
    std::vector<double> baseline_price;
    std::vector<double> case_price;
    std::vector<double> mean_temp_baseline_c;
    std::vector<double> mean_temp_case_c;
    bool converged = true;
    int passes = 0;
    std::vector<std::string> written_files;
};

// Runs the configured case end to end: profile + population + baselines, the
// case itself, metrics, and (when write_files) the CSV/JSON artifacts in
// config.run.out_dir. The baseline is always computed first; every other case
// starts from it.
ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files = true);

}  // namespace heatcoord
