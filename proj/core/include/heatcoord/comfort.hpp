#pragma once

#include <optional>
#include <vector>

#include "heatcoord/thermal.hpp"

namespace heatcoord {

// Per-step comfort flexibility e[t] = 1/(upper[t] - lower[t]) in 1/degC.
// Narrow band = strict requirement = heavy weight in the comfort index.
std::vector<double> comfort_flexibility(const ComfortSpec& comfort);

// Comfort index: negative flexibility-weighted mean absolute deviation from
// the reference. Steps with nobody at home contribute zero (the reference is
// undefined there). Always <= 0; closer to zero is better.
double comfort_index(const std::vector<double>& trace, const ComfortSpec& comfort,
                     const std::vector<double>& flexibility);

// Feasibility of switching ON one extra step t0: the heater must be OFF there
// (theta_a) and the warmed trace must stay under the upper bound at every
// later step (theta_b).
struct ThetaFeasibility {
    std::vector<std::uint8_t> theta_a;
    std::vector<std::uint8_t> theta_b;
    std::vector<std::uint8_t> theta;   // theta_a ∘ theta_b
};

ThetaFeasibility theta_feasibility(const Schedule& schedule, const std::vector<double>& trace,
                                   const ComfortSpec& comfort, const PropagationMatrices& mats);

// Extra energy cost of compensating at each step: P * price[t] * theta[t] * dt.
std::vector<double> compensation_cost(const std::vector<double>& price,
                                      const std::vector<std::uint8_t>& theta,
                                      double rated_power_kw, double dt_hours);

// Comfort index change from switching ON at t0 (trace rises by Gamma(i, t0)
// for i >= t0). May be negative when the overheat overshoots the reference.
double comfort_gain(const std::vector<double>& trace, const ComfortSpec& comfort,
                    const std::vector<double>& flexibility, const PropagationMatrices& mats,
                    int t0);

struct CompensationChoice {
    int t0 = -1;
    double cost_gbp = 0.0;
    double gain = 0.0;
};

// Most cost-effective compensation: argmax gain/cost over steps with
// theta = 1, cost below the shift saving, and strictly positive gain.
// Ties break to the smallest t0.
std::optional<CompensationChoice> select_compensation(const std::vector<std::uint8_t>& theta,
                                                      const std::vector<double>& comp_cost,
                                                      double shift_saving_gbp,
                                                      const std::vector<double>& gains);

// Switches ON step t0 in place and warms the trace by Gamma(., t0).
// Throws std::logic_error if the heater is already ON at t0.
void apply_compensation(Schedule& schedule, std::vector<double>& trace,
                        const PropagationMatrices& mats, int t0);

// Fused selection used by the coordinator: builds theta, costs and gains
// internally and returns the winner without materializing per-step vectors
// for infeasible candidates.
std::optional<CompensationChoice> find_best_compensation(
    const Schedule& schedule, const std::vector<double>& trace, const ComfortSpec& comfort,
    const std::vector<double>& flexibility, const PropagationMatrices& mats,
    const std::vector<double>& price, double rated_power_kw, double dt_hours,
    double shift_saving_gbp);

}  // namespace heatcoord
