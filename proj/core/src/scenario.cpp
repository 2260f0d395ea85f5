#include "heatcoord/scenario.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "heatcoord/comfort.hpp"
#include "heatcoord/demand_shift.hpp"
#include "heatcoord/rng.hpp"

namespace heatcoord {

void OccupancyTemplate::validate() const {
    if (segments.empty())
        throw std::invalid_argument("OccupancyTemplate: no segments");
    double prev = 0.0;
    for (const auto& s : segments) {
        if (!(s.end_hour > prev))
            throw std::invalid_argument("OccupancyTemplate: segment ends must increase");
        if (!(s.upper_c - s.lower_c >= min_band_c))
            throw std::invalid_argument("OccupancyTemplate: band narrower than min_band_c");
        prev = s.end_hour;
    }
    if (std::abs(prev - 24.0) > 1e-9)
        throw std::invalid_argument("OccupancyTemplate: segments must tile 24 h");
    if (boundary_sd_h < 0.0 || bound_sd_c < 0.0)
        throw std::invalid_argument("OccupancyTemplate: negative standard deviation");
}

void PopulationSpec::validate() const {
    if (household_count < 1)
        throw std::invalid_argument("PopulationSpec: household_count must be >= 1");
    if (psi.sd < 0.0 || gamma.sd < 0.0 || rated_power_kw.sd < 0.0)
        throw std::invalid_argument("PopulationSpec: negative standard deviation");
    if (!(psi_clamp_lo > 0.0 && psi_clamp_hi < 1.0 && psi_clamp_lo <= psi_clamp_hi))
        throw std::invalid_argument("PopulationSpec: psi clamp must lie inside (0, 1)");
    if (!(gamma_clamp_lo > 0.0 && gamma_clamp_lo <= gamma_clamp_hi))
        throw std::invalid_argument("PopulationSpec: bad gamma clamp");
    if (!(rated_clamp_lo_kw > 0.0 && rated_clamp_lo_kw <= rated_clamp_hi_kw))
        throw std::invalid_argument("PopulationSpec: bad rated power clamp");
}

OccupancyTemplate default_occupancy_template() {
    // Sleep band reaches up to 21.5 C so the corridor between the awake floor
    // (19 C) and the bedtime ceiling stays wider than one gamma step; a binary
    // heater cannot thread a transition narrower than its ON quantum.
    OccupancyTemplate t;
    t.segments = {
        {DayPeriod::Sleep, 7.0, 16.0, 21.5},
        {DayPeriod::Awake, 9.0, 18.0, 22.5},
        {DayPeriod::Away, 17.0, 5.0, 30.0},
        {DayPeriod::Awake, 23.0, 18.0, 22.5},
        {DayPeriod::Sleep, 24.0, 16.0, 21.5},
    };
    t.boundary_sd_h = 1.0;
    t.bound_sd_c = 1.0;
    return t;
}

namespace {

double clamp(double x, double lo, double hi) { return std::min(hi, std::max(lo, x)); }

struct SampledSegment {
    DayPeriod kind;
    double end_hour;
    double lower_c;
    double upper_c;
};

// Jitters segment boundaries (retrying draws that collapse a segment) and
// shifts every band by one household-level offset. Shifting lower and upper
// together keeps band widths and transition corridors at their template
// values; independent per-bound jitter would routinely produce bands narrower
// than the gamma quantum, which no binary thermostat can hold.
std::vector<SampledSegment> sample_segments(const OccupancyTemplate& tmpl,
                                            std::mt19937_64& rng, double dt_hours,
                                            int retry_cap) {
    const int n_seg = static_cast<int>(tmpl.segments.size());
    std::normal_distribution<double> unit(0.0, 1.0);
    const double level_offset = tmpl.bound_sd_c * unit(rng);
    for (int attempt = 0; attempt < retry_cap; ++attempt) {
        std::vector<SampledSegment> out(n_seg);
        bool ok = true;
        double prev_end = 0.0;
        for (int s = 0; s < n_seg; ++s) {
            const auto& seg = tmpl.segments[s];
            double end = seg.end_hour;
            if (s + 1 < n_seg)   // last boundary is the fixed end of day
                end += tmpl.boundary_sd_h * unit(rng);
            out[s] = {seg.kind, end, seg.lower_c + level_offset, seg.upper_c + level_offset};
            // Strict ordering only: a segment shorter than one step simply
            // covers no step midpoint on coarse grids.
            if (end <= prev_end || end > 24.0) ok = false;
            prev_end = end;
        }
        if (ok) return out;
    }
    throw std::runtime_error("sample_segments: retry cap exhausted, template too tight");
}

}  // namespace

std::vector<Household> sample_population(const PopulationSpec& spec,
                                         const OccupancyTemplate& occupancy, int n_steps,
                                         double dt_hours) {
    spec.validate();
    occupancy.validate();
    if (n_steps < 2) throw std::invalid_argument("sample_population: n_steps too small");

    std::vector<Household> households(spec.household_count);
    const double two_pi = 2.0 * std::numbers::pi;

    auto build_one = [&](int i) {
        Household& hh = households[i];
        hh.id = i;
        auto rng = substream(spec.rng_seed, static_cast<std::uint64_t>(i));
        std::normal_distribution<double> unit(0.0, 1.0);

        ThermalParams p;
        p.psi = clamp(spec.psi.mean + spec.psi.sd * unit(rng), spec.psi_clamp_lo,
                      spec.psi_clamp_hi);
        p.gamma = clamp(spec.gamma.mean + spec.gamma.sd * unit(rng), spec.gamma_clamp_lo,
                        spec.gamma_clamp_hi);
        p.rated_power_kw = clamp(spec.rated_power_kw.mean + spec.rated_power_kw.sd * unit(rng),
                                 spec.rated_clamp_lo_kw, spec.rated_clamp_hi_kw);
        p.dt_hours = dt_hours;

        const auto segments = sample_segments(occupancy, rng, dt_hours, spec.retry_cap);

        ComfortSpec c;
        c.lower.resize(n_steps);
        c.upper.resize(n_steps);
        c.reference.resize(n_steps);
        c.at_home.resize(n_steps);
        hh.period.resize(n_steps);
        for (int t = 0; t < n_steps; ++t) {
            const double mid_h = (t + 0.5) * dt_hours;
            std::size_t s = 0;
            while (s + 1 < segments.size() && mid_h >= segments[s].end_hour) ++s;
            c.lower[t] = segments[s].lower_c;
            c.upper[t] = segments[s].upper_c;
            c.reference[t] = 0.5 * (segments[s].lower_c + segments[s].upper_c);
            c.at_home[t] = segments[s].kind != DayPeriod::Away ? 1 : 0;
            hh.period[t] = segments[s].kind;
        }

        const double offset = spec.upsilon.household_offset_sd_c * unit(rng);
        p.upsilon.resize(n_steps);
        for (int t = 0; t < n_steps; ++t) {
            const double mid_h = (t + 0.5) * dt_hours;
            const double outdoor =
                spec.upsilon.outdoor_base_c +
                spec.upsilon.outdoor_amplitude_c *
                    std::cos(two_pi * (mid_h - spec.upsilon.outdoor_peak_hour) / 24.0) +
                offset + spec.upsilon.step_noise_sd_c * unit(rng);
            p.upsilon[t] = (1.0 - p.psi) * outdoor;
        }
        p.validate();
        c.validate();

        hh.params = std::move(p);
        hh.mats = build_propagation_matrices(hh.params);
        hh.comfort = std::move(c);
        hh.flexibility = comfort_flexibility(hh.comfort);
        double e_sum = 0.0;
        int e_count = 0;
        for (int t = 0; t < n_steps; ++t) {
            if (hh.comfort.at_home[t]) {
                e_sum += hh.flexibility[t];
                ++e_count;
            }
        }
        hh.flexibility_const = e_count > 0 ? e_sum / e_count : 1.0;
        hh.initial_temp_c = hh.comfort.reference[0] + spec.initial_temp_sd_c * unit(rng);
    };

    for (int i = 0; i < spec.household_count; ++i) build_one(i);
    return households;
}

void baseline_schedule(Household& hh) {
    const int n = hh.params.steps();
    const double psi = hh.params.psi;
    const double gamma = hh.params.gamma;
    const auto& ups = hh.params.upsilon;
    const auto& c = hh.comfort;

    // Feasibility corridor: floor[t] is the minimum temperature from which
    // every future lower bound stays reachable at rated power; ceil[t] the
    // maximum from which every future upper bound stays reachable by coasting.
    std::vector<double> floor_c(n), ceil_c(n);
    floor_c[n - 1] = c.lower[n - 1];
    ceil_c[n - 1] = c.upper[n - 1];
    for (int t = n - 2; t >= 0; --t) {
        floor_c[t] = std::max(c.lower[t], (floor_c[t + 1] - gamma - ups[t + 1]) / psi);
        ceil_c[t] = std::min(c.upper[t], (ceil_c[t + 1] - ups[t + 1]) / psi);
    }

    hh.schedule.assign(n, 0);
    hh.trace.assign(n, 0.0);
    hh.baseline_feasible = true;

    double temp = hh.initial_temp_c;
    for (int t = 0; t < n; ++t) {
        const double t_off = psi * temp + ups[t];
        const double t_on = t_off + gamma;
        const bool off_ok = t_off >= floor_c[t] && t_off <= ceil_c[t];
        const bool on_ok = t_on >= floor_c[t] && t_on <= ceil_c[t];

        int choice;
        if (c.at_home[t]) {
            if (off_ok && on_ok)
                choice = std::abs(t_on - c.reference[t]) < std::abs(t_off - c.reference[t]) ? 1 : 0;
            else if (off_ok || on_ok)
                choice = on_ok ? 1 : 0;
            else {
                hh.baseline_feasible = false;
                // carry on with the less-violating choice so the trace stays defined
                choice = std::abs(t_on - c.reference[t]) < std::abs(t_off - c.reference[t]) ? 1 : 0;
            }
        } else {
            choice = t_off < floor_c[t] ? 1 : 0;
            const double chosen = choice ? t_on : t_off;
            if (chosen < c.lower[t] || chosen > c.upper[t]) hh.baseline_feasible = false;
        }

        temp = choice ? t_on : t_off;
        hh.schedule[t] = static_cast<std::uint8_t>(choice);
        hh.trace[t] = temp;
    }

    if (hh.baseline_feasible && !check_bounds(hh.trace, c).ok) hh.baseline_feasible = false;
}

int generate_baselines(std::vector<Household>& households) {
    for (auto& hh : households) baseline_schedule(hh);
    const auto dropped = std::count_if(households.begin(), households.end(),
                                       [](const Household& h) { return !h.baseline_feasible; });
    if (dropped > 0) {
        households.erase(std::remove_if(households.begin(), households.end(),
                                        [](const Household& h) { return !h.baseline_feasible; }),
                         households.end());
    }
    return static_cast<int>(dropped);
}

UncoordinatedStats uncoordinated_schedules(std::vector<Household>& households,
                                           const std::vector<double>& frozen_prices,
                                           double dt_hours, bool compensation_enabled,
                                           int max_iterations_per_household, int threads) {
    // Dummy demand vector: the demand-order factor is disabled, prices frozen.
    const std::vector<double> no_demand(frozen_prices.size(), 0.0);

    if (threads <= 0)
        threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    threads = std::min<int>(threads, std::max<std::size_t>(households.size(), 1));

    std::vector<UncoordinatedStats> per_thread(threads);
    auto worker = [&](int w) {
        auto& stats = per_thread[w];
        for (std::size_t i = w; i < households.size(); i += threads) {
            Household& hh = households[i];
            int iter = 0;
            for (; iter < max_iterations_per_household; ++iter) {
                auto shift = find_best_shift(hh.schedule, hh.trace, hh.comfort, hh.mats,
                                             no_demand, frozen_prices, hh.rated_power_kw(),
                                             dt_hours, /*enforce_demand_order=*/false);
                if (!shift) break;
                apply_shift(hh.schedule, hh.trace, hh.mats, shift->t1, shift->t2);
                ++stats.total_shifts;
                if (compensation_enabled) {
                    auto comp = find_best_compensation(hh.schedule, hh.trace, hh.comfort,
                                                       hh.flexibility, hh.mats, frozen_prices,
                                                       hh.rated_power_kw(), dt_hours,
                                                       shift->saving_gbp);
                    if (comp) {
                        apply_compensation(hh.schedule, hh.trace, hh.mats, comp->t0);
                        ++stats.total_compensations;
                    }
                }
            }
            if (iter == max_iterations_per_household) ++stats.iteration_cap_hits;
        }
    };

    if (threads == 1) {
        worker(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (int w = 0; w < threads; ++w) pool.emplace_back(worker, w);
        for (auto& th : pool) th.join();
    }

    UncoordinatedStats total;
    for (const auto& s : per_thread) {
        total.total_shifts += s.total_shifts;
        total.total_compensations += s.total_compensations;
        total.iteration_cap_hits += s.iteration_cap_hits;
    }
    return total;
}

void SystemProfileConfig::validate() const {
    if (non_heat_mw.empty() && !(daily_energy_mwh > 0.0))
        throw std::invalid_argument("SystemProfileConfig: daily energy must be positive");
    if (base_weight < 0.0 || morning_weight < 0.0 || evening_weight < 0.0)
        throw std::invalid_argument("SystemProfileConfig: negative shape weight");
    if (!(morning_sd_h > 0.0) || !(evening_sd_h > 0.0))
        throw std::invalid_argument("SystemProfileConfig: peak widths must be positive");
    for (double v : non_heat_mw)
        if (v < 0.0) throw std::invalid_argument("SystemProfileConfig: negative non-heat demand");
}

SystemProfile build_system_profile(const SystemProfileConfig& config, int n_steps,
                                   double dt_hours) {
    config.validate();
    SystemProfile prof;

    if (!config.non_heat_mw.empty()) {
        if (static_cast<int>(config.non_heat_mw.size()) != n_steps)
            throw std::invalid_argument("build_system_profile: non_heat override length mismatch");
        prof.non_heat_mw = config.non_heat_mw;
    } else {
        auto bump = [](double h, double peak, double sd) {
            const double z = (h - peak) / sd;
            return std::exp(-0.5 * z * z);
        };
        std::vector<double> shape(n_steps);
        double integral = 0.0;
        for (int t = 0; t < n_steps; ++t) {
            const double h = (t + 0.5) * dt_hours;
            shape[t] = config.base_weight +
                       config.morning_weight * bump(h, config.morning_peak_hour, config.morning_sd_h) +
                       config.evening_weight * bump(h, config.evening_peak_hour, config.evening_sd_h);
            integral += shape[t] * dt_hours;
        }
        const double scale = config.daily_energy_mwh / integral;
        prof.non_heat_mw.resize(n_steps);
        for (int t = 0; t < n_steps; ++t) prof.non_heat_mw[t] = shape[t] * scale;
    }

    if (!config.res_mw.empty()) {
        if (static_cast<int>(config.res_mw.size()) != n_steps)
            throw std::invalid_argument("build_system_profile: res override length mismatch");
        prof.res_mw = config.res_mw;
    } else {
        prof.res_mw.assign(n_steps, 0.0);
    }

    prof.net_mw.resize(n_steps);
    for (int t = 0; t < n_steps; ++t) {
        prof.net_mw[t] = prof.non_heat_mw[t] - prof.res_mw[t];
        if (prof.net_mw[t] < 0.0 && !config.allow_negative_net)
            throw std::invalid_argument("build_system_profile: negative net demand at step " +
                                        std::to_string(t) + " (set allow_negative_net to permit)");
    }
    return prof;
}

std::vector<std::string> scenario_assumptions() {
    return {
        "occupancy_template_defaults_assumed: segment times and bands are plausible defaults, "
        "not published values",
        "upsilon_diurnal_template_assumed: sinusoidal outdoor-temperature proxy, published input "
        "is a box plot without tabulated values",
        "rated_power_distribution_assumed: Gaussian(3 kW, 0.3 kW), no published value",
        "non_heat_profile_assumed: parametric double-peak curve, no published tabulation",
    };
}

}  // namespace heatcoord
