#include "heatcoord/demand_shift.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <string>

namespace heatcoord {

std::vector<std::uint8_t> sigma_status(const Schedule& schedule) {
    const int n = static_cast<int>(schedule.size());
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
    for (int t1 = 0; t1 < n; ++t1) {
        if (!schedule[t1]) continue;
        for (int t2 = 0; t2 < n; ++t2)
            if (!schedule[t2] && t1 != t2) m[static_cast<std::size_t>(t1) * n + t2] = 1;
    }
    return m;
}

std::vector<std::uint8_t> sigma_temperature(const std::vector<double>& trace,
                                            const ComfortSpec& comfort,
                                            const PropagationMatrices& mats) {
    const int n = mats.steps();
    assert(static_cast<int>(trace.size()) == n);
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
    for (int t1 = 0; t1 < n; ++t1) {
        for (int t2 = 0; t2 < n; ++t2) {
            if (t1 == t2) continue;
            const int lo = t1 < t2 ? t1 : t2;
            bool ok = true;
            for (int i = lo; i < n; ++i) {
                const double shifted = trace[i] + mats.gamma_at(i, t2) - mats.gamma_at(i, t1);
                if (shifted < comfort.lower[i] || shifted > comfort.upper[i]) {
                    ok = false;
                    break;
                }
            }
            if (ok) m[static_cast<std::size_t>(t1) * n + t2] = 1;
        }
    }
    return m;
}

std::vector<std::uint8_t> sigma_cost_saving(const std::vector<double>& demand_mw,
                                            double rated_power_kw) {
    if (!(rated_power_kw > 0.0))
        throw std::invalid_argument("sigma_cost_saving: rated power must be positive");
    const int n = static_cast<int>(demand_mw.size());
    const double threshold = 2.0 * rated_power_kw * kKwToMw;
    std::vector<std::uint8_t> m(static_cast<std::size_t>(n) * n, 0);
    for (int t1 = 0; t1 < n; ++t1)
        for (int t2 = 0; t2 < n; ++t2)
            if (t1 != t2 && demand_mw[t1] - demand_mw[t2] >= threshold)
                m[static_cast<std::size_t>(t1) * n + t2] = 1;
    return m;
}

ShiftFeasibility compose_and_price(const std::vector<std::uint8_t>& sigma_a,
                                   const std::vector<std::uint8_t>& sigma_b,
                                   const std::vector<std::uint8_t>& sigma_c,
                                   const std::vector<double>& price_diff,
                                   double rated_power_kw, double dt_hours) {
    const std::size_t nn = sigma_a.size();
    if (sigma_b.size() != nn || sigma_c.size() != nn || price_diff.size() != nn)
        throw std::invalid_argument("compose_and_price: matrix size mismatch");
    ShiftFeasibility f;
    f.n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(nn))));
    f.sigma_a = sigma_a;
    f.sigma_b = sigma_b;
    f.sigma_c = sigma_c;
    f.sigma.resize(nn);
    f.savings.resize(nn);
    const double p_mw = rated_power_kw * kKwToMw;
    for (std::size_t k = 0; k < nn; ++k) {
        f.sigma[k] = sigma_a[k] & sigma_b[k] & sigma_c[k];
        f.savings[k] = f.sigma[k] ? p_mw * price_diff[k] * dt_hours : 0.0;
    }
    return f;
}

std::optional<ShiftChoice> select_best_shift(const ShiftFeasibility& feas) {
    const int n = feas.n;
    ShiftChoice best;
    bool found = false;
    for (int t1 = 0; t1 < n; ++t1) {
        for (int t2 = 0; t2 < n; ++t2) {
            const double s = feas.savings[static_cast<std::size_t>(t1) * n + t2];
            if (s > 0.0 && (!found || s > best.saving_gbp)) {
                best = {t1, t2, s};
                found = true;
            }
        }
    }
    if (!found) return std::nullopt;
    return best;
}

void apply_shift(Schedule& schedule, std::vector<double>& trace,
                 const PropagationMatrices& mats, int t1, int t2) {
    const int n = mats.steps();
    if (t1 < 0 || t1 >= n || t2 < 0 || t2 >= n || t1 == t2)
        throw std::logic_error("apply_shift: invalid step pair");
    if (schedule[t1] != 1 || schedule[t2] != 0)
        throw std::logic_error("apply_shift: stale feasibility, heater status mismatch at (" +
                               std::to_string(t1) + ", " + std::to_string(t2) + ")");
    schedule[t1] = 0;
    schedule[t2] = 1;
    const int lo = t1 < t2 ? t1 : t2;
    for (int i = lo; i < n; ++i)
        trace[i] += mats.gamma_at(i, t2) - mats.gamma_at(i, t1);
}

namespace {

// Suffix headroom minima: out[s] = min_{i >= s} margin[i] / (gamma * psi^(i-s)).
// The exchange adds gamma*psi^(i-s)*(1 - psi^delta) at steps i >= s, so the
// aggregate constraint over the suffix collapses to (1 - psi^delta) <= out[s].
void suffix_headroom(const std::vector<double>& margin, double gamma, int n, double psi,
                     std::vector<double>& out) {
    out.resize(n);
    double acc = margin[n - 1] / gamma;
    out[n - 1] = acc;
    for (int s = n - 2; s >= 0; --s) {
        acc = acc / psi;
        const double own = margin[s] / gamma;
        if (own < acc) acc = own;
        out[s] = acc;
    }
}

inline bool better_choice(double saving, int t1, int t2, bool found, const ShiftChoice& cur) {
    if (!found || saving > cur.saving_gbp) return true;
    if (saving < cur.saving_gbp) return false;
    if (t1 != cur.t1) return t1 < cur.t1;
    return t2 < cur.t2;
}

}  // namespace

std::optional<ShiftChoice> find_best_shift(const Schedule& schedule,
                                           const std::vector<double>& trace,
                                           const ComfortSpec& comfort,
                                           const PropagationMatrices& mats,
                                           const std::vector<double>& demand_mw,
                                           const std::vector<double>& price,
                                           double rated_power_kw, double dt_hours,
                                           bool enforce_demand_order) {
    const int n = mats.steps();
    const double gamma = mats.gamma;
    const double psi = mats.psi;
    const double* psi_pow = mats.psi_pow.data();
    const double p_mw = rated_power_kw * kKwToMw;
    const double demand_gap = 2.0 * p_mw;

    thread_local std::vector<double> m_lo, m_up, up_room, lo_room;
    m_lo.resize(n);
    m_up.resize(n);
    for (int i = 0; i < n; ++i) {
        m_lo[i] = trace[i] - comfort.lower[i];
        m_up[i] = comfort.upper[i] - trace[i];
    }
    suffix_headroom(m_up, gamma, n, psi, up_room);
    suffix_headroom(m_lo, gamma, n, psi, lo_room);

    ShiftChoice best;
    bool found = false;

    // Shift to a later step: the trace dips by gamma*psi^(i-t1) on [t1, t2)
    // and rises by gamma*psi^(i-t2)*(1 - psi^(t2-t1)) from t2 on.
    for (int t1 = 0; t1 < n - 1; ++t1) {
        if (!schedule[t1]) continue;
        for (int t2 = t1 + 1; t2 < n; ++t2) {
            if (gamma * psi_pow[t2 - 1 - t1] > m_lo[t2 - 1]) break;
            if (schedule[t2]) continue;
            const double dp = price[t1] - price[t2];
            if (dp <= 0.0) continue;
            if (enforce_demand_order && !(demand_mw[t1] - demand_mw[t2] >= demand_gap)) continue;
            if (!(1.0 - psi_pow[t2 - t1] <= up_room[t2])) continue;
            if (better_choice(dp, t1, t2, found, best)) {
                best = {t1, t2, dp};
                found = true;
            }
        }
    }

    // Shift to an earlier step: the trace rises by gamma*psi^(i-t2) on
    // [t2, t1) and dips by gamma*psi^(i-t1)*(1 - psi^(t1-t2)) from t1 on.
    for (int t2 = 0; t2 < n - 1; ++t2) {
        if (schedule[t2]) continue;
        for (int t1 = t2 + 1; t1 < n; ++t1) {
            if (gamma * psi_pow[t1 - 1 - t2] > m_up[t1 - 1]) break;
            if (!schedule[t1]) continue;
            const double dp = price[t1] - price[t2];
            if (dp <= 0.0) continue;
            if (enforce_demand_order && !(demand_mw[t1] - demand_mw[t2] >= demand_gap)) continue;
            if (!(1.0 - psi_pow[t1 - t2] <= lo_room[t1])) continue;
            if (better_choice(dp, t1, t2, found, best)) {
                best = {t1, t2, dp};
                found = true;
            }
        }
    }

    if (!found) return std::nullopt;
    best.saving_gbp = p_mw * best.saving_gbp * dt_hours;
    return best;
}

}  // namespace heatcoord
