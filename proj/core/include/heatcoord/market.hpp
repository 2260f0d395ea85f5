#pragma once

#include <vector>

#include "heatcoord/thermal.hpp"

namespace heatcoord {

// Quadratic generation cost f(x) = 0.5*a*x^2 + b*x, x in MW.
struct CostCoefficients {
    double a = 0.03;   // GBP/MW^2 h
    double b = 12.0;   // GBP/MWh

    void validate() const;
};

// Marginal generation cost a*D + b in GBP/MWh.
double marginal_price(double demand_mw, const CostCoefficients& coeffs);

// Total generation cost sum_t f(D_t)*dt in GBP.
double total_cost(const std::vector<double>& demand_mw, const CostCoefficients& coeffs,
                  double dt_hours);

// Pi(t1, t2) = p[t1] - p[t2], row-major N*N. Antisymmetric, zero diagonal.
std::vector<double> price_difference_matrix(const std::vector<double>& price);

// System-level demand accounting shared by all households. Aggregate demand
// and price are maintained incrementally; every mutation goes through
// apply_power_deltas (single-writer contract).
struct SystemState {
    std::vector<double> non_heat_mw;
    std::vector<double> res_mw;
    std::vector<double> net_mw;       // non_heat - res
    std::vector<double> demand_mw;    // net + sum_j eps_j * P_j (MW)
    std::vector<double> price;        // a*D + b
    CostCoefficients coeffs;
    double dt_hours = 0.0;

    int steps() const { return static_cast<int>(demand_mw.size()); }
    double cost() const { return total_cost(demand_mw, coeffs, dt_hours); }

    // Incremental form of the demand balance: adds delta_mw at each index and
    // refreshes the price there. Throws std::runtime_error if a resulting
    // demand goes negative (mis-specified scenario).
    void apply_power_deltas(const std::vector<int>& t_indices,
                            const std::vector<double>& deltas_mw);
    void apply_power_delta(int t, double delta_mw);
};

// Builds a consistent SystemState from the net-demand inputs and the current
// schedules of all households (kW rated powers converted to MW here).
SystemState build_system_state(std::vector<double> non_heat_mw, std::vector<double> res_mw,
                               const CostCoefficients& coeffs, double dt_hours,
                               const std::vector<const Schedule*>& schedules,
                               const std::vector<double>& rated_power_kw);

// Batch re-evaluation of the demand balance from scratch; oracle counterpart
// of the incremental updates.
std::vector<double> aggregate_from_schedules(const std::vector<double>& net_mw,
                                             const std::vector<const Schedule*>& schedules,
                                             const std::vector<double>& rated_power_kw);

constexpr double kKwToMw = 1e-3;

}  // namespace heatcoord
