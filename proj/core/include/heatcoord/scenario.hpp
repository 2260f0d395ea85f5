#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "heatcoord/household.hpp"
#include "heatcoord/market.hpp"

namespace heatcoord {

struct GaussianSpec {
    double mean = 0.0;
    double sd = 0.0;
};

// One contiguous block of the day; start is the previous segment's end
// (the first starts at hour 0, the last must end at hour 24).
struct SegmentSpec {
    DayPeriod kind = DayPeriod::Sleep;
    double end_hour = 24.0;
    double lower_c = 16.0;
    double upper_c = 20.0;
};

struct OccupancyTemplate {
    std::vector<SegmentSpec> segments;
    double boundary_sd_h = 1.0;   // jitter of interior segment boundaries
    double bound_sd_c = 1.0;      // per-household level shift of all bands
    // Bands narrower than one ON-step gain (gamma ~ 2 C) leave a binary
    // thermostat no room to cycle; template validation rejects them.
    double min_band_c = 2.5;

    void validate() const;
};

// Diurnal template behind the exogenous drive: upsilon[t] =
// (1 - psi) * (T_out(t) + household offset + step noise).
struct UpsilonTemplate {
    double outdoor_base_c = 7.0;
    double outdoor_amplitude_c = 2.5;
    double outdoor_peak_hour = 14.0;
    double household_offset_sd_c = 0.75;
    double step_noise_sd_c = 0.3;
};

struct PopulationSpec {
    int household_count = 0;
    GaussianSpec psi{0.94, 0.05};
    GaussianSpec gamma{2.0, 0.1};
    GaussianSpec rated_power_kw{3.0, 0.3};
    double psi_clamp_lo = 0.80;
    double psi_clamp_hi = 0.995;
    double gamma_clamp_lo = 0.5;
    double gamma_clamp_hi = 4.0;
    double rated_clamp_lo_kw = 0.5;
    double rated_clamp_hi_kw = 10.0;
    double initial_temp_sd_c = 0.5;
    UpsilonTemplate upsilon;
    std::uint64_t rng_seed = 1;
    int retry_cap = 100;

    void validate() const;
};

OccupancyTemplate default_occupancy_template();

// Samples the household population. Deterministic given rng_seed; household i
// draws from its own substream, so results do not depend on household_count.
std::vector<Household> sample_population(const PopulationSpec& spec,
                                         const OccupancyTemplate& occupancy, int n_steps,
                                         double dt_hours);

// Reference-tracking thermostat with anticipatory start: during at-home steps
// the feasible choice closest to the reference wins; elsewhere the heater runs
// only when coasting would drop below the backward feasibility threshold
// (the minimum temperature from which all future lower bounds remain
// reachable at rated power). Sets schedule, trace and baseline_feasible.
void baseline_schedule(Household& hh);

// Runs baseline_schedule for everyone and drops infeasible households.
// Returns the number excluded.
int generate_baselines(std::vector<Household>& households);

struct UncoordinatedStats {
    long long total_shifts = 0;
    long long total_compensations = 0;
    int iteration_cap_hits = 0;
};

// Case with no coordination: every household independently iterates its
// shift+compensation loop to a fixed point against the frozen baseline
// prices. The demand-order factor sigma_c is disabled (no price feedback to
// protect) and prices never update. Parallel across households.
UncoordinatedStats uncoordinated_schedules(std::vector<Household>& households,
                                           const std::vector<double>& frozen_prices,
                                           double dt_hours, bool compensation_enabled,
                                           int max_iterations_per_household = 1000,
                                           int threads = 0);

struct SystemProfileConfig {
    double daily_energy_mwh = 16000.0;   // integral of the non-heat profile
    double base_weight = 1.0;
    double morning_peak_hour = 8.0;
    double morning_sd_h = 2.0;
    double morning_weight = 0.5;
    double evening_peak_hour = 19.0;
    double evening_sd_h = 2.5;
    double evening_weight = 0.7;
    std::vector<double> non_heat_mw;   // optional explicit override
    std::vector<double> res_mw;        // optional, defaults to zero
    bool allow_negative_net = false;

    void validate() const;
};

struct SystemProfile {
    std::vector<double> non_heat_mw;
    std::vector<double> res_mw;
    std::vector<double> net_mw;
};

// Smooth double-peak non-heat demand scaled to the configured daily energy,
// plus the renewable profile; net demand per the demand balance.
SystemProfile build_system_profile(const SystemProfileConfig& config, int n_steps,
                                   double dt_hours);

// Template values that are modelling assumptions rather than published
// inputs; exported into run metadata.
std::vector<std::string> scenario_assumptions();

}  // namespace heatcoord
