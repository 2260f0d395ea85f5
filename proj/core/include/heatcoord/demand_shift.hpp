#pragma once

#include <optional>
#include <vector>

#include "heatcoord/market.hpp"
#include "heatcoord/thermal.hpp"

namespace heatcoord {

// Feasibility calculus for exchanging one ON step (t1) with one OFF step (t2).
// All matrices are row-major N*N with zero diagonals; sigma is the Hadamard
// product of the three factors and savings carries the bill change in GBP.
struct ShiftFeasibility {
    int n = 0;
    std::vector<std::uint8_t> sigma_a;   // heater status allows the exchange
    std::vector<std::uint8_t> sigma_b;   // comfort band respected at all later steps
    std::vector<std::uint8_t> sigma_c;   // demand order preserved after the exchange
    std::vector<std::uint8_t> sigma;
    std::vector<double> savings;
};

struct ShiftChoice {
    int t1 = -1;   // ON step the power leaves
    int t2 = -1;   // OFF step the power moves to
    double saving_gbp = 0.0;   // at pre-shift prices
};

// sigma_a(t1,t2) = max{0, eps[t1] - eps[t2]}.
std::vector<std::uint8_t> sigma_status(const Schedule& schedule);

// sigma_b(t1,t2) = 1 iff applying the exchange keeps every affected step of
// the trace inside the comfort band. Direct bound check on the shifted trace;
// this is the defining implementation, the swept variant in find_best_shift
// is the optimized equivalent.
std::vector<std::uint8_t> sigma_temperature(const std::vector<double>& trace,
                                            const ComfortSpec& comfort,
                                            const PropagationMatrices& mats);

// sigma_c(t1,t2) = 1 iff D[t1] - D[t2] >= 2*P (P in MW), which keeps the
// post-shift demands ordered D+[t1] >= D+[t2] and hence the price order.
std::vector<std::uint8_t> sigma_cost_saving(const std::vector<double>& demand_mw,
                                            double rated_power_kw);

ShiftFeasibility compose_and_price(const std::vector<std::uint8_t>& sigma_a,
                                   const std::vector<std::uint8_t>& sigma_b,
                                   const std::vector<std::uint8_t>& sigma_c,
                                   const std::vector<double>& price_diff,
                                   double rated_power_kw, double dt_hours);

// Argmax of the savings matrix over feasible pairs; empty when no strictly
// positive saving exists (the household-level convergence signal). Ties break
// to the smallest t1, then smallest t2.
std::optional<ShiftChoice> select_best_shift(const ShiftFeasibility& feas);

// Applies the exchange in place: flips the two schedule bits and adds the
// closed-form temperature delta to the trace. Throws std::logic_error if the
// status precondition fails (stale feasibility matrices).
void apply_shift(Schedule& schedule, std::vector<double>& trace,
                 const PropagationMatrices& mats, int t1, int t2);

// Fused equivalent of building the matrices and selecting the best shift,
// without materializing anything: O(N^2) per call via running prefix checks
// and suffix headroom minima. enforce_demand_order=false drops the sigma_c
// factor (used by the uncoordinated case, where prices are frozen).
// Precondition: trace currently satisfies the comfort band.
std::optional<ShiftChoice> find_best_shift(const Schedule& schedule,
                                           const std::vector<double>& trace,
                                           const ComfortSpec& comfort,
                                           const PropagationMatrices& mats,
                                           const std::vector<double>& demand_mw,
                                           const std::vector<double>& price,
                                           double rated_power_kw, double dt_hours,
                                           bool enforce_demand_order = true);

}  // namespace heatcoord
