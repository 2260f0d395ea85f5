#pragma once

#include <cstdint>
#include <vector>

namespace heatcoord {

// Binary heater schedule, one 0/1 entry per sampling step.
using Schedule = std::vector<std::uint8_t>;

// First-order discrete thermal model of one household:
//   T[t] = psi * T[t-1] + gamma * eps[t] + upsilon[t]
// where T[t] is the indoor temperature at the end of step t and eps[t]
// is the heater status during step t.
struct ThermalParams {
    double psi = 0.0;                // retention factor per step, 0 < psi < 1
    double gamma = 0.0;              // degC gained by one ON step
    std::vector<double> upsilon;     // degC exogenous drive per step
    double rated_power_kw = 0.0;
    double dt_hours = 0.0;

    int steps() const { return static_cast<int>(upsilon.size()); }
    void validate() const;           // throws std::invalid_argument
};

// Comfort band and occupancy for one household. All vectors have one entry
// per step; reference must equal the band midpoint wherever at_home is set.
struct ComfortSpec {
    std::vector<double> lower;
    std::vector<double> upper;
    std::vector<double> reference;
    std::vector<std::uint8_t> at_home;

    int steps() const { return static_cast<int>(lower.size()); }
    void validate() const;
};

// Compact form of the dynamics over the full horizon:
//   T = Psi * T0 + Gamma * eps + Upsilon
// Gamma is lower-triangular with Gamma(t, s) = gamma * psi^(t-s); since it is
// fully determined by the psi-power table it is not stored dense, only
// materialized on demand for small instances.
struct PropagationMatrices {
    double psi = 0.0;
    double gamma = 0.0;
    std::vector<double> psi_pow;   // psi^0 .. psi^N
    std::vector<double> Psi;       // psi^1 .. psi^N, free-response weights
    std::vector<double> Upsilon;   // accumulated exogenous drive

    int steps() const { return static_cast<int>(Psi.size()); }

    double gamma_at(int t, int s) const {
        return t >= s ? gamma * psi_pow[t - s] : 0.0;
    }
    // Row-major N*N dense Gamma; intended for tests and small instances.
    std::vector<double> gamma_dense() const;
};

// Exact zero-order-hold discretization of the continuous RC model
//   c_eq * dT/dt = -(T - T_out) * k_eq + Q
// with Q = rated_power during ON steps plus a passive gain profile.
ThermalParams derive_discrete_params(double c_eq_kwh_per_c, double k_eq_kw_per_c,
                                     const std::vector<double>& outdoor_c,
                                     double rated_power_kw,
                                     const std::vector<double>& passive_gain_kw,
                                     double dt_hours);

// One application of the recursion; eps_t must be 0 or 1, t < steps().
double step_temperature(double temp_c, int eps_t, const ThermalParams& params, int t);

PropagationMatrices build_propagation_matrices(const ThermalParams& params);

// Full temperature trace for a schedule; equals iterating step_temperature.
std::vector<double> propagate(double t0_c, const Schedule& schedule,
                              const PropagationMatrices& mats);

struct BoundsCheck {
    bool ok = true;
    int first_violation = -1;   // earliest violating step when !ok
};

// Closed-interval check of the trace against the comfort band.
BoundsCheck check_bounds(const std::vector<double>& trace, const ComfortSpec& comfort);

}  // namespace heatcoord
