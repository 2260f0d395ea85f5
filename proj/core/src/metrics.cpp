#include "heatcoord/metrics.hpp"

#include <cmath>
#include <stdexcept>

namespace heatcoord {

DemandPeaks find_peaks(const std::vector<double>& demand_mw, double dt_hours,
                       const PeakWindows& windows) {
    DemandPeaks peaks;
    const int n = static_cast<int>(demand_mw.size());
    for (int t = 0; t < n; ++t) {
        const double mid_h = (t + 0.5) * dt_hours;
        if (mid_h >= windows.morning_start_h && mid_h < windows.morning_end_h &&
            (peaks.morning_step < 0 || demand_mw[t] > peaks.morning_mw)) {
            peaks.morning_mw = demand_mw[t];
            peaks.morning_step = t;
        }
        if (mid_h >= windows.evening_start_h && mid_h < windows.evening_end_h &&
            (peaks.evening_step < 0 || demand_mw[t] > peaks.evening_mw)) {
            peaks.evening_mw = demand_mw[t];
            peaks.evening_step = t;
        }
    }
    return peaks;
}

CaseMetrics compute_demand_metrics(const std::string& name,
                                   const std::vector<double>& baseline_demand_mw,
                                   const std::vector<double>& case_demand_mw,
                                   const CostCoefficients& coeffs, double dt_hours,
                                   const PeakWindows& windows) {
    if (baseline_demand_mw.empty())
        throw std::invalid_argument("compute_demand_metrics: baseline demand missing");
    if (baseline_demand_mw.size() != case_demand_mw.size())
        throw std::invalid_argument("compute_demand_metrics: demand vector length mismatch");

    const auto base_peaks = find_peaks(baseline_demand_mw, dt_hours, windows);
    const auto case_peaks = find_peaks(case_demand_mw, dt_hours, windows);
    const double base_cost = total_cost(baseline_demand_mw, coeffs, dt_hours);

    CaseMetrics m;
    m.name = name;
    m.total_cost_gbp = total_cost(case_demand_mw, coeffs, dt_hours);
    m.cost_reduction_pct = base_cost != 0.0 ? (base_cost - m.total_cost_gbp) / base_cost * 100.0
                                            : 0.0;
    m.morning_peak_mw = case_peaks.morning_mw;
    m.evening_peak_mw = case_peaks.evening_mw;
    m.morning_shaving_pct =
        base_peaks.morning_mw != 0.0
            ? (base_peaks.morning_mw - case_peaks.morning_mw) / base_peaks.morning_mw * 100.0
            : 0.0;
    m.evening_shaving_pct =
        base_peaks.evening_mw != 0.0
            ? (base_peaks.evening_mw - case_peaks.evening_mw) / base_peaks.evening_mw * 100.0
            : 0.0;
    return m;
}

}  // namespace heatcoord
