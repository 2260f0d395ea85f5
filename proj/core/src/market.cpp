#include "heatcoord/market.hpp"

#include <cassert>
#include <stdexcept>
#include <string>

namespace heatcoord {

void CostCoefficients::validate() const {
    if (!(a > 0.0))
        throw std::invalid_argument("CostCoefficients: a must be positive (strict convexity)");
    if (b < 0.0)
        throw std::invalid_argument("CostCoefficients: b must be non-negative");
}

double marginal_price(double demand_mw, const CostCoefficients& coeffs) {
    return coeffs.a * demand_mw + coeffs.b;
}

double total_cost(const std::vector<double>& demand_mw, const CostCoefficients& coeffs,
                  double dt_hours) {
    double sum = 0.0;
    for (double d : demand_mw) sum += (0.5 * coeffs.a * d + coeffs.b) * d;
    return sum * dt_hours;
}

std::vector<double> price_difference_matrix(const std::vector<double>& price) {
    const int n = static_cast<int>(price.size());
    std::vector<double> pi(static_cast<std::size_t>(n) * n);
    for (int t1 = 0; t1 < n; ++t1)
        for (int t2 = 0; t2 < n; ++t2)
            pi[static_cast<std::size_t>(t1) * n + t2] = price[t1] - price[t2];
    return pi;
}

void SystemState::apply_power_delta(int t, double delta_mw) {
    assert(t >= 0 && t < steps());
    const double updated = demand_mw[t] + delta_mw;
    if (updated < 0.0)
        throw std::runtime_error("SystemState: aggregate demand would go negative at step " +
                                 std::to_string(t) + " (" + std::to_string(updated) + " MW)");
    demand_mw[t] = updated;
    price[t] = marginal_price(updated, coeffs);
}

void SystemState::apply_power_deltas(const std::vector<int>& t_indices,
                                     const std::vector<double>& deltas_mw) {
    if (t_indices.size() != deltas_mw.size())
        throw std::invalid_argument("SystemState: index/delta length mismatch");
    for (std::size_t k = 0; k < t_indices.size(); ++k)
        apply_power_delta(t_indices[k], deltas_mw[k]);
}

std::vector<double> aggregate_from_schedules(const std::vector<double>& net_mw,
                                             const std::vector<const Schedule*>& schedules,
                                             const std::vector<double>& rated_power_kw) {
    assert(schedules.size() == rated_power_kw.size());
    std::vector<double> demand = net_mw;
    const int n = static_cast<int>(net_mw.size());
    for (std::size_t j = 0; j < schedules.size(); ++j) {
        const Schedule& eps = *schedules[j];
        assert(static_cast<int>(eps.size()) == n);
        const double p_mw = rated_power_kw[j] * kKwToMw;
        for (int t = 0; t < n; ++t)
            if (eps[t]) demand[t] += p_mw;
    }
    return demand;
}

SystemState build_system_state(std::vector<double> non_heat_mw, std::vector<double> res_mw,
                               const CostCoefficients& coeffs, double dt_hours,
                               const std::vector<const Schedule*>& schedules,
                               const std::vector<double>& rated_power_kw) {
    coeffs.validate();
    if (non_heat_mw.size() != res_mw.size())
        throw std::invalid_argument("build_system_state: profile lengths differ");
    SystemState s;
    s.coeffs = coeffs;
    s.dt_hours = dt_hours;
    s.non_heat_mw = std::move(non_heat_mw);
    s.res_mw = std::move(res_mw);
    const int n = static_cast<int>(s.non_heat_mw.size());
    s.net_mw.resize(n);
    for (int t = 0; t < n; ++t) s.net_mw[t] = s.non_heat_mw[t] - s.res_mw[t];
    s.demand_mw = aggregate_from_schedules(s.net_mw, schedules, rated_power_kw);
    s.price.resize(n);
    for (int t = 0; t < n; ++t) {
        if (s.demand_mw[t] < 0.0)
            throw std::runtime_error("build_system_state: negative aggregate demand at step " +
                                     std::to_string(t));
        s.price[t] = marginal_price(s.demand_mw[t], coeffs);
    }
    return s;
}

}  // namespace heatcoord
