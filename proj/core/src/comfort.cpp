#include "heatcoord/comfort.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "heatcoord/market.hpp"

namespace heatcoord {

std::vector<double> comfort_flexibility(const ComfortSpec& comfort) {
    const int n = comfort.steps();
    std::vector<double> e(n);
    for (int t = 0; t < n; ++t) {
        const double band = comfort.upper[t] - comfort.lower[t];
        if (!(band > 0.0))
            throw std::invalid_argument("comfort_flexibility: non-positive band at step " +
                                        std::to_string(t));
        e[t] = 1.0 / band;
    }
    return e;
}

double comfort_index(const std::vector<double>& trace, const ComfortSpec& comfort,
                     const std::vector<double>& flexibility) {
    const int n = static_cast<int>(trace.size());
    assert(comfort.steps() == n && static_cast<int>(flexibility.size()) == n);
    double sum = 0.0;
    for (int t = 0; t < n; ++t) {
        if (!comfort.at_home[t]) continue;
        sum += flexibility[t] * std::abs(trace[t] - comfort.reference[t]);
    }
    return -sum / static_cast<double>(n);
}

ThetaFeasibility theta_feasibility(const Schedule& schedule, const std::vector<double>& trace,
                                   const ComfortSpec& comfort, const PropagationMatrices& mats) {
    const int n = mats.steps();
    ThetaFeasibility f;
    f.theta_a.resize(n);
    f.theta_b.resize(n);
    f.theta.resize(n);
    for (int t0 = 0; t0 < n; ++t0) {
        f.theta_a[t0] = schedule[t0] ? 0 : 1;
        bool ok = true;
        for (int i = t0; i < n; ++i) {
            if (trace[i] + mats.gamma_at(i, t0) > comfort.upper[i]) {
                ok = false;
                break;
            }
        }
        f.theta_b[t0] = ok ? 1 : 0;
        f.theta[t0] = f.theta_a[t0] & f.theta_b[t0];
    }
    return f;
}

std::vector<double> compensation_cost(const std::vector<double>& price,
                                      const std::vector<std::uint8_t>& theta,
                                      double rated_power_kw, double dt_hours) {
    const int n = static_cast<int>(price.size());
    const double p_mw = rated_power_kw * kKwToMw;
    std::vector<double> cost(n, 0.0);
    for (int t = 0; t < n; ++t)
        if (theta[t]) cost[t] = p_mw * price[t] * dt_hours;
    return cost;
}

double comfort_gain(const std::vector<double>& trace, const ComfortSpec& comfort,
                    const std::vector<double>& flexibility, const PropagationMatrices& mats,
                    int t0) {
    const int n = mats.steps();
    assert(t0 >= 0 && t0 < n);
    double sum = 0.0;
    for (int i = t0; i < n; ++i) {
        if (!comfort.at_home[i]) continue;
        const double dev = std::abs(trace[i] - comfort.reference[i]);
        const double dev_after = std::abs(trace[i] + mats.gamma_at(i, t0) - comfort.reference[i]);
        sum += flexibility[i] * (dev - dev_after);
    }
    return sum / static_cast<double>(n);
}

std::optional<CompensationChoice> select_compensation(const std::vector<std::uint8_t>& theta,
                                                      const std::vector<double>& comp_cost,
                                                      double shift_saving_gbp,
                                                      const std::vector<double>& gains) {
    const int n = static_cast<int>(theta.size());
    CompensationChoice best;
    double best_ratio = 0.0;
    bool found = false;
    for (int t0 = 0; t0 < n; ++t0) {
        if (!theta[t0]) continue;
        if (!(comp_cost[t0] < shift_saving_gbp)) continue;
        if (!(gains[t0] > 0.0)) continue;
        const double ratio = comp_cost[t0] > 0.0 ? gains[t0] / comp_cost[t0]
                                                 : std::numeric_limits<double>::infinity();
        if (!found || ratio > best_ratio) {
            best = {t0, comp_cost[t0], gains[t0]};
            best_ratio = ratio;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

void apply_compensation(Schedule& schedule, std::vector<double>& trace,
                        const PropagationMatrices& mats, int t0) {
    const int n = mats.steps();
    if (t0 < 0 || t0 >= n)
        throw std::logic_error("apply_compensation: step out of range");
    if (schedule[t0] != 0)
        throw std::logic_error("apply_compensation: heater already ON at step " +
                               std::to_string(t0));
    schedule[t0] = 1;
    for (int i = t0; i < n; ++i) trace[i] += mats.gamma_at(i, t0);
}

std::optional<CompensationChoice> find_best_compensation(
    const Schedule& schedule, const std::vector<double>& trace, const ComfortSpec& comfort,
    const std::vector<double>& flexibility, const PropagationMatrices& mats,
    const std::vector<double>& price, double rated_power_kw, double dt_hours,
    double shift_saving_gbp) {
    const int n = mats.steps();
    const double gamma = mats.gamma;
    const double psi = mats.psi;
    const double p_mw = rated_power_kw * kKwToMw;

    // Cheapest OFF step already too expensive: nothing can qualify. This is
    // the common case once prices flatten, and it skips all gain work.
    {
        double min_price = std::numeric_limits<double>::infinity();
        for (int t = 0; t < n; ++t)
            if (!schedule[t] && price[t] < min_price) min_price = price[t];
        if (!(p_mw * min_price * dt_hours < shift_saving_gbp)) return std::nullopt;
    }

    // theta_b via suffix minima of upper-headroom against the decay profile.
    thread_local std::vector<double> up_room;
    up_room.resize(n);
    {
        double acc = (comfort.upper[n - 1] - trace[n - 1]) / gamma;
        up_room[n - 1] = acc;
        for (int s = n - 2; s >= 0; --s) {
            acc = acc / psi;
            const double own = (comfort.upper[s] - trace[s]) / gamma;
            if (own < acc) acc = own;
            up_room[s] = acc;
        }
    }

    CompensationChoice best;
    double best_ratio = 0.0;
    bool found = false;
    for (int t0 = 0; t0 < n; ++t0) {
        if (schedule[t0]) continue;
        if (!(up_room[t0] >= 1.0)) continue;
        const double cost = p_mw * price[t0] * dt_hours;
        if (!(cost < shift_saving_gbp)) continue;
        const double gain = comfort_gain(trace, comfort, flexibility, mats, t0);
        if (!(gain > 0.0)) continue;
        const double ratio = cost > 0.0 ? gain / cost : std::numeric_limits<double>::infinity();
        if (!found || ratio > best_ratio) {
            best = {t0, cost, gain};
            best_ratio = ratio;
            found = true;
        }
    }
    if (!found) return std::nullopt;
    return best;
}

}  // namespace heatcoord
