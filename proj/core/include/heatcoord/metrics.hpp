#pragma once

#include <string>
#include <vector>

#include "heatcoord/coordinator.hpp"
#include "heatcoord/market.hpp"

namespace heatcoord {

// Fixed windows the reported peaks are searched in.
struct PeakWindows {
    double morning_start_h = 4.0;
    double morning_end_h = 12.0;
    double evening_start_h = 16.0;
    double evening_end_h = 24.0;
};

struct DemandPeaks {
    double morning_mw = 0.0;
    double evening_mw = 0.0;
    int morning_step = -1;
    int evening_step = -1;
};

DemandPeaks find_peaks(const std::vector<double>& demand_mw, double dt_hours,
                       const PeakWindows& windows);

struct CaseMetrics {
    std::string name;
    double total_cost_gbp = 0.0;
    double cost_reduction_pct = 0.0;     // vs baseline, positive = cheaper
    double morning_peak_mw = 0.0;
    double evening_peak_mw = 0.0;
    double morning_shaving_pct = 0.0;
    double evening_shaving_pct = 0.0;
    double mean_comfort_index = 0.0;
    double mean_awake_abs_dev_c = 0.0;   // population mean |T - ref| over awake steps
    bool converged = true;
    int passes = 0;
    long long shifts = 0;
    long long compensations = 0;
};

// Demand-side metrics of one case against the baseline profile. Throws when
// the baseline vector is missing or sized differently.
CaseMetrics compute_demand_metrics(const std::string& name,
                                   const std::vector<double>& baseline_demand_mw,
                                   const std::vector<double>& case_demand_mw,
                                   const CostCoefficients& coeffs, double dt_hours,
                                   const PeakWindows& windows = {});

struct RunMetrics {
    CaseMetrics baseline;
    CaseMetrics experiment;
    std::vector<PassStats> convergence;
    long long safety_violations = 0;
    int households_requested = 0;
    int households_excluded = 0;
    std::string config_hash;
    std::uint64_t seed = 0;
    PeakWindows peak_windows;
    std::vector<std::string> assumptions;
};

}  // namespace heatcoord
