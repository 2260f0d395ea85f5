#pragma once

#include <cstdint>
#include <vector>

#include "heatcoord/thermal.hpp"

namespace heatcoord {

enum class DayPeriod : std::uint8_t { Sleep = 0, Awake = 1, Away = 2 };

// One participating household: thermal model, comfort requirement and the
// current heating schedule with its induced temperature trace. Immutable
// after scenario generation except for schedule/trace, which only the
// coordinating loop mutates.
struct Household {
    int id = 0;
    ThermalParams params;
    PropagationMatrices mats;
    ComfortSpec comfort;
    std::vector<double> flexibility;       // e[t] = 1/(upper-lower)
    double flexibility_const = 0.0;        // mean at-home e, for constant-mode runs
    std::vector<DayPeriod> period;         // sleep/awake/away labels per step
    double initial_temp_c = 0.0;

    Schedule schedule;
    std::vector<double> trace;
    bool baseline_feasible = true;

    double rated_power_kw() const { return params.rated_power_kw; }
    int on_count() const {
        int c = 0;
        for (auto e : schedule) c += e;
        return c;
    }
};

}  // namespace heatcoord
