#pragma once

#include <cstdint>
#include <vector>

#include "heatcoord/household.hpp"
#include "heatcoord/market.hpp"

namespace heatcoord {

enum class FlexibilityMode { TimeVarying, Constant };
enum class VisitOrder { FixedIndex, SeededRandom };

struct CoordinationConfig {
    int max_passes = 100;
    bool compensation_enabled = true;
    FlexibilityMode flexibility_mode = FlexibilityMode::TimeVarying;
    VisitOrder visit_order = VisitOrder::FixedIndex;
    std::uint64_t order_seed = 0;
    bool audit_shifts = false;      // keep per-shift demand snapshots
    bool safety_audit = true;       // bound check after every application
    double safety_tol_c = 1e-9;
    bool consistency_check = true;  // batch demand rebuild after each pass
};

struct PassStats {
    int pass = 0;
    double total_cost_gbp = 0.0;
    long long shifts = 0;
    long long compensations = 0;
};

// Pre-shift demand snapshot; enough to recompute the exact cost decrement.
struct ShiftRecord {
    int household = 0;
    int t1 = 0;
    int t2 = 0;
    double d1_mw = 0.0;
    double d2_mw = 0.0;
    double rated_mw = 0.0;
};

struct CoordinationRun {
    std::vector<PassStats> passes;   // passes[0] is the initial state
    bool converged = false;
    int pass_count = 0;
    long long total_shifts = 0;
    long long total_compensations = 0;
    std::vector<ShiftRecord> shift_records;

    long long safety_violations = 0;
    int first_violation_household = -1;
    int first_violation_step = -1;
    bool state_consistent = true;       // incremental vs batch rebuild, 1e-9 rel
    double max_state_rel_diff = 0.0;
    double max_trace_drift_c = 0.0;     // final traces vs step-by-step recursion
};

// Sequential best-response sweep: every pass visits each household once; a
// visited household applies at most one best demand shift and, when one was
// applied, at most one comfort compensation; prices update after every
// application. Terminates on the first pass with zero shifts or at the
// max-pass cap (converged=false, results still returned).
CoordinationRun run_coordination(std::vector<Household>& households, SystemState& state,
                                 const CoordinationConfig& config);

struct AuditEntry {
    int household = 0;
    int t1 = 0;
    int t2 = 0;
    double decrement_gbp = 0.0;   // exact cost drop of this shift
    double bound_gbp = 0.0;       // a * P^2 * dt
    bool ok = false;              // decrement >= bound
};

// Checks every recorded shift against the theoretical minimum decrement
// a*P^2*dt of the total generation cost. Requires audit_shifts during the run.
std::vector<AuditEntry> cost_decrement_audit(const CoordinationRun& run,
                                             const CostCoefficients& coeffs, double dt_hours);

// Equal-energy unilateral optimality certificate for household j: enumerates
// every comfort-feasible schedule with the same ON count and returns true iff
// none lowers the total cost by more than `tolerance` (others held fixed).
// Throws std::runtime_error when the instance exceeds the enumeration guard.
bool verify_equilibrium(const std::vector<Household>& households, const SystemState& state,
                        int j, double tolerance_gbp = 0.0,
                        std::uint64_t max_enumeration = 1u << 20);

}  // namespace heatcoord
