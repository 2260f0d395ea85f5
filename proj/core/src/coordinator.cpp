#include "heatcoord/coordinator.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "heatcoord/comfort.hpp"
#include "heatcoord/demand_shift.hpp"

namespace heatcoord {

namespace {

// Counts band violations beyond tol on the suffix the last operation touched.
long long audit_suffix(const Household& hh, int from, double tol, int* bad_step) {
    long long violations = 0;
    const int n = static_cast<int>(hh.trace.size());
    for (int i = from; i < n; ++i) {
        if (hh.trace[i] < hh.comfort.lower[i] - tol || hh.trace[i] > hh.comfort.upper[i] + tol) {
            if (violations == 0 && bad_step) *bad_step = i;
            ++violations;
        }
    }
    return violations;
}

const std::vector<double>& visit_flexibility(const Household& hh, FlexibilityMode mode,
                                             std::vector<double>& scratch) {
    if (mode == FlexibilityMode::TimeVarying) return hh.flexibility;
    scratch.assign(hh.flexibility.size(), hh.flexibility_const);
    return scratch;
}

}  // namespace

CoordinationRun run_coordination(std::vector<Household>& households, SystemState& state,
                                 const CoordinationConfig& config) {
    const int n = state.steps();
    CoordinationRun run;
    run.passes.push_back({0, state.cost(), 0, 0});

    std::vector<int> order(households.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 order_rng(config.order_seed);

    std::vector<double> flex_scratch;

    int pass = 0;
    bool converged = false;
    while (!converged && pass < config.max_passes) {
        ++pass;
        if (config.visit_order == VisitOrder::SeededRandom)
            std::shuffle(order.begin(), order.end(), order_rng);

        long long pass_shifts = 0;
        long long pass_comps = 0;
        for (int idx : order) {
            Household& hh = households[idx];
            const double p_mw = hh.rated_power_kw() * kKwToMw;

            auto shift = find_best_shift(hh.schedule, hh.trace, hh.comfort, hh.mats,
                                         state.demand_mw, state.price, hh.rated_power_kw(),
                                         state.dt_hours, /*enforce_demand_order=*/true);
            if (!shift) continue;

            if (config.audit_shifts)
                run.shift_records.push_back({hh.id, shift->t1, shift->t2,
                                             state.demand_mw[shift->t1],
                                             state.demand_mw[shift->t2], p_mw});

            apply_shift(hh.schedule, hh.trace, hh.mats, shift->t1, shift->t2);
            state.apply_power_delta(shift->t1, -p_mw);
            state.apply_power_delta(shift->t2, p_mw);
            ++pass_shifts;

            if (config.safety_audit) {
                int bad = -1;
                const long long v = audit_suffix(hh, std::min(shift->t1, shift->t2),
                                                 config.safety_tol_c, &bad);
                if (v > 0 && run.safety_violations == 0) {
                    run.first_violation_household = hh.id;
                    run.first_violation_step = bad;
                }
                run.safety_violations += v;
            }

            if (config.compensation_enabled) {
                const auto& flex = visit_flexibility(hh, config.flexibility_mode, flex_scratch);
                auto comp = find_best_compensation(hh.schedule, hh.trace, hh.comfort, flex,
                                                   hh.mats, state.price, hh.rated_power_kw(),
                                                   state.dt_hours, shift->saving_gbp);
                if (comp) {
                    apply_compensation(hh.schedule, hh.trace, hh.mats, comp->t0);
                    state.apply_power_delta(comp->t0, p_mw);
                    ++pass_comps;
                    if (config.safety_audit) {
                        int bad = -1;
                        const long long v =
                            audit_suffix(hh, comp->t0, config.safety_tol_c, &bad);
                        if (v > 0 && run.safety_violations == 0) {
                            run.first_violation_household = hh.id;
                            run.first_violation_step = bad;
                        }
                        run.safety_violations += v;
                    }
                }
            }
        }

        run.passes.push_back({pass, state.cost(), pass_shifts, pass_comps});
        run.total_shifts += pass_shifts;
        run.total_compensations += pass_comps;
        converged = pass_shifts == 0;

        if (config.consistency_check) {
            std::vector<const Schedule*> schedules;
            std::vector<double> rated;
            schedules.reserve(households.size());
            rated.reserve(households.size());
            for (const auto& hh : households) {
                schedules.push_back(&hh.schedule);
                rated.push_back(hh.rated_power_kw());
            }
            const auto rebuilt = aggregate_from_schedules(state.net_mw, schedules, rated);
            for (int t = 0; t < n; ++t) {
                const double scale = std::max({1.0, std::abs(rebuilt[t]),
                                               std::abs(state.demand_mw[t])});
                const double rel = std::abs(rebuilt[t] - state.demand_mw[t]) / scale;
                run.max_state_rel_diff = std::max(run.max_state_rel_diff, rel);
            }
            run.state_consistent = run.max_state_rel_diff <= 1e-9;
        }
    }

    run.pass_count = pass;
    run.converged = converged;

    // Drift of the incrementally maintained traces against the recursion.
    for (const auto& hh : households) {
        double temp = hh.initial_temp_c;
        for (int t = 0; t < n; ++t) {
            temp = step_temperature(temp, hh.schedule[t], hh.params, t);
            run.max_trace_drift_c = std::max(run.max_trace_drift_c,
                                             std::abs(temp - hh.trace[t]));
        }
    }
    return run;
}

std::vector<AuditEntry> cost_decrement_audit(const CoordinationRun& run,
                                             const CostCoefficients& coeffs, double dt_hours) {
    auto f = [&](double d) { return (0.5 * coeffs.a * d + coeffs.b) * d; };
    std::vector<AuditEntry> audit;
    audit.reserve(run.shift_records.size());
    for (const auto& r : run.shift_records) {
        const double before = f(r.d1_mw) + f(r.d2_mw);
        const double after = f(r.d1_mw - r.rated_mw) + f(r.d2_mw + r.rated_mw);
        AuditEntry e;
        e.household = r.household;
        e.t1 = r.t1;
        e.t2 = r.t2;
        e.decrement_gbp = (before - after) * dt_hours;
        e.bound_gbp = coeffs.a * r.rated_mw * r.rated_mw * dt_hours;
        e.ok = e.decrement_gbp >= e.bound_gbp;
        audit.push_back(e);
    }
    return audit;
}

bool verify_equilibrium(const std::vector<Household>& households, const SystemState& state,
                        int j, double tolerance_gbp, std::uint64_t max_enumeration) {
    const auto& hh = households[static_cast<std::size_t>(j)];
    const int n = state.steps();
    if (n > 24)
        throw std::runtime_error("verify_equilibrium: horizon too long for enumeration");
    const std::uint64_t total = 1ull << n;
    if (total > max_enumeration)
        throw std::runtime_error("verify_equilibrium: 2^N exceeds enumeration guard");

    const double p_mw = hh.rated_power_kw() * kKwToMw;
    const int k_on = hh.on_count();

    // Demand with household j removed; candidate schedules add back on top.
    std::vector<double> base(n);
    for (int t = 0; t < n; ++t)
        base[t] = state.demand_mw[t] - (hh.schedule[t] ? p_mw : 0.0);

    auto schedule_cost = [&](const Schedule& eps) {
        double sum = 0.0;
        for (int t = 0; t < n; ++t) {
            const double d = base[t] + (eps[t] ? p_mw : 0.0);
            sum += (0.5 * state.coeffs.a * d + state.coeffs.b) * d;
        }
        return sum * state.dt_hours;
    };

    const double current_cost = schedule_cost(hh.schedule);

    Schedule candidate(n, 0);
    for (std::uint64_t mask = 0; mask < total; ++mask) {
        if (std::popcount(mask) != k_on) continue;
        for (int t = 0; t < n; ++t) candidate[t] = (mask >> t) & 1u;
        const auto trace = propagate(hh.initial_temp_c, candidate, hh.mats);
        if (!check_bounds(trace, hh.comfort).ok) continue;
        if (schedule_cost(candidate) < current_cost - tolerance_gbp) return false;
    }
    return true;
}

}  // namespace heatcoord
