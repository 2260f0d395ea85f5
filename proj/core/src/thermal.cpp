#include "heatcoord/thermal.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heatcoord {

void ThermalParams::validate() const {
    if (!(psi > 0.0) || !(psi < 1.0))
        throw std::invalid_argument("ThermalParams: psi must lie in (0, 1), got " + std::to_string(psi));
    if (!(gamma > 0.0))
        throw std::invalid_argument("ThermalParams: gamma must be positive");
    if (!(rated_power_kw > 0.0))
        throw std::invalid_argument("ThermalParams: rated power must be positive");
    if (!(dt_hours > 0.0))
        throw std::invalid_argument("ThermalParams: dt must be positive");
    if (upsilon.empty())
        throw std::invalid_argument("ThermalParams: upsilon is empty");
}

void ComfortSpec::validate() const {
    const std::size_t n = lower.size();
    if (upper.size() != n || reference.size() != n || at_home.size() != n)
        throw std::invalid_argument("ComfortSpec: vector lengths differ");
    for (std::size_t t = 0; t < n; ++t) {
        if (!(lower[t] < upper[t]))
            throw std::invalid_argument("ComfortSpec: lower >= upper at step " + std::to_string(t));
    }
}

ThermalParams derive_discrete_params(double c_eq_kwh_per_c, double k_eq_kw_per_c,
                                     const std::vector<double>& outdoor_c,
                                     double rated_power_kw,
                                     const std::vector<double>& passive_gain_kw,
                                     double dt_hours) {
    if (!(c_eq_kwh_per_c > 0.0) || !(k_eq_kw_per_c > 0.0) || !(dt_hours > 0.0))
        throw std::invalid_argument("derive_discrete_params: c_eq, k_eq and dt must be positive");
    if (outdoor_c.size() != passive_gain_kw.size())
        throw std::invalid_argument("derive_discrete_params: outdoor and passive gain lengths differ");

    ThermalParams p;
    p.psi = std::exp(-k_eq_kw_per_c * dt_hours / c_eq_kwh_per_c);
    p.gamma = (1.0 - p.psi) * rated_power_kw / k_eq_kw_per_c;
    p.rated_power_kw = rated_power_kw;
    p.dt_hours = dt_hours;
    p.upsilon.resize(outdoor_c.size());
    for (std::size_t t = 0; t < outdoor_c.size(); ++t)
        p.upsilon[t] = (1.0 - p.psi) * (outdoor_c[t] + passive_gain_kw[t] / k_eq_kw_per_c);
    return p;
}

double step_temperature(double temp_c, int eps_t, const ThermalParams& params, int t) {
    assert(eps_t == 0 || eps_t == 1);
    assert(t >= 0 && t < params.steps());
    return params.psi * temp_c + params.gamma * static_cast<double>(eps_t) + params.upsilon[t];
}

PropagationMatrices build_propagation_matrices(const ThermalParams& params) {
    const int n = params.steps();
    PropagationMatrices m;
    m.psi = params.psi;
    m.gamma = params.gamma;
    m.psi_pow.resize(n + 1);
    m.psi_pow[0] = 1.0;
    for (int k = 1; k <= n; ++k) m.psi_pow[k] = m.psi_pow[k - 1] * params.psi;
    m.Psi.assign(m.psi_pow.begin() + 1, m.psi_pow.end());
    m.Upsilon.resize(n);
    double acc = 0.0;
    for (int t = 0; t < n; ++t) {
        acc = params.psi * acc + params.upsilon[t];
        m.Upsilon[t] = acc;
    }
    return m;
}

std::vector<double> PropagationMatrices::gamma_dense() const {
    const int n = steps();
    std::vector<double> g(static_cast<std::size_t>(n) * n, 0.0);
    for (int t = 0; t < n; ++t)
        for (int s = 0; s <= t; ++s)
            g[static_cast<std::size_t>(t) * n + s] = gamma * psi_pow[t - s];
    return g;
}

std::vector<double> propagate(double t0_c, const Schedule& schedule,
                              const PropagationMatrices& mats) {
    const int n = mats.steps();
    assert(static_cast<int>(schedule.size()) == n);
    std::vector<double> trace(n);
    for (int t = 0; t < n; ++t) {
        double heat = 0.0;
        for (int s = 0; s <= t; ++s)
            if (schedule[s]) heat += mats.psi_pow[t - s];
        trace[t] = mats.Psi[t] * t0_c + mats.gamma * heat + mats.Upsilon[t];
    }
    return trace;
}

BoundsCheck check_bounds(const std::vector<double>& trace, const ComfortSpec& comfort) {
    const int n = static_cast<int>(trace.size());
    for (int t = 0; t < n; ++t) {
        if (trace[t] < comfort.lower[t] || trace[t] > comfort.upper[t])
            return {false, t};
    }
    return {true, -1};
}

}  // namespace heatcoord
