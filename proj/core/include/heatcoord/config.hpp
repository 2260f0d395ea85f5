#pragma once

#include <cstdint>
#include <string>

#include "heatcoord/coordinator.hpp"
#include "heatcoord/scenario.hpp"

namespace heatcoord {

enum class ExperimentCase {
    Baseline,        // reference-tracking thermostats only
    Uncoordinated,   // independent arbitrage against frozen baseline prices
    Coordinated,     // full sequential best-response with compensation
    ComfortA,        // coordinated, compensation disabled
    ComfortB,        // coordinated, constant comfort flexibility
    ComfortC,        // coordinated, time-varying flexibility (same machinery
                     // as Coordinated, kept as a separate label for reports)
};

std::string case_name(ExperimentCase c);
ExperimentCase parse_case(const std::string& name);   // throws on unknown name

struct RunSettings {
    double dt_hours = 0.25;
    int n_steps = 96;
    ExperimentCase experiment_case = ExperimentCase::Coordinated;
    int max_passes = 100;
    std::uint64_t seed = 1;
    std::string out_dir = "out";
    FlexibilityMode flexibility_mode = FlexibilityMode::TimeVarying;
    bool compensation_enabled = true;
    int temp_export_households = 4;
    bool audit_shifts = false;
    bool safety_audit = true;
    int uncoordinated_iteration_cap = 1000;
    int threads = 0;   // 0 = hardware concurrency
};

struct ExperimentConfig {
    PopulationSpec population;
    OccupancyTemplate occupancy = default_occupancy_template();
    CostCoefficients cost;
    SystemProfileConfig system_profile;
    RunSettings run;

    void validate() const;   // includes dt * n_steps == 24 h
};

ExperimentConfig default_config();

// JSON round-trip; top-level keys: population, occupancy, cost,
// system_profile, run. Unknown keys are rejected.
ExperimentConfig parse_config_json(const std::string& json_text);
std::string config_to_json_string(const ExperimentConfig& config, int indent = 2);
ExperimentConfig load_config_file(const std::string& path);

// FNV-1a over the canonical JSON dump with non-semantic fields (output
// directory, thread count) removed.
std::string config_hash_hex(const ExperimentConfig& config);

}  // namespace heatcoord
