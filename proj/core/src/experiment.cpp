#include "heatcoord/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

#include "heatcoord/comfort.hpp"
#include "heatcoord/rng.hpp"

namespace heatcoord {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

struct PopulationStats {
    std::vector<double> mean_temp_c;
    double mean_comfort_index = 0.0;
    double mean_awake_abs_dev_c = 0.0;
};

PopulationStats population_stats(const std::vector<Household>& households, int n) {
    PopulationStats s;
    s.mean_temp_c.assign(n, 0.0);
    if (households.empty()) return s;
    double index_sum = 0.0;
    double dev_sum = 0.0;
    long long awake_count = 0;
    for (const auto& hh : households) {
        index_sum += comfort_index(hh.trace, hh.comfort, hh.flexibility);
        for (int t = 0; t < n; ++t) {
            s.mean_temp_c[t] += hh.trace[t];
            if (hh.period[t] == DayPeriod::Awake) {
                dev_sum += std::abs(hh.trace[t] - hh.comfort.reference[t]);
                ++awake_count;
            }
        }
    }
    const double h = static_cast<double>(households.size());
    for (auto& v : s.mean_temp_c) v /= h;
    s.mean_comfort_index = index_sum / h;
    s.mean_awake_abs_dev_c = awake_count > 0 ? dev_sum / static_cast<double>(awake_count) : 0.0;
    return s;
}

void write_file(const fs::path& path, const std::string& content,
                std::vector<std::string>& written) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
    out << content;
    written.push_back(path.string());
}

std::string timestamp_utc() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t tt = std::chrono::system_clock::to_time_t(now);
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&tt, &tm_utc);
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

json case_metrics_json(const CaseMetrics& m) {
    return {
        {"name", m.name},
        {"total_cost_gbp", m.total_cost_gbp},
        {"cost_reduction_pct", m.cost_reduction_pct},
        {"morning_peak_mw", m.morning_peak_mw},
        {"evening_peak_mw", m.evening_peak_mw},
        {"morning_shaving_pct", m.morning_shaving_pct},
        {"evening_shaving_pct", m.evening_shaving_pct},
        {"mean_comfort_index", m.mean_comfort_index},
        {"mean_awake_abs_dev_c", m.mean_awake_abs_dev_c},
        {"converged", m.converged},
        {"passes", m.passes},
        {"shifts", m.shifts},
        {"compensations", m.compensations},
    };
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config, bool write_files) {
    config.validate();
    const int n = config.run.n_steps;
    const double dt = config.run.dt_hours;
    const ExperimentCase which = config.run.experiment_case;

    const auto profile = build_system_profile(config.system_profile, n, dt);
    auto households = sample_population(config.population, config.occupancy, n, dt);
    const int requested = static_cast<int>(households.size());
    const int excluded = generate_baselines(households);

    auto system_state = [&]() {
        std::vector<const Schedule*> schedules;
        std::vector<double> rated;
        schedules.reserve(households.size());
        rated.reserve(households.size());
        for (const auto& hh : households) {
            schedules.push_back(&hh.schedule);
            rated.push_back(hh.rated_power_kw());
        }
        return build_system_state(profile.non_heat_mw, profile.res_mw, config.cost, dt,
                                  schedules, rated);
    };

    SystemState state = system_state();

    ExperimentResult result;
    result.baseline_demand_mw = state.demand_mw;
    result.baseline_price = state.price;
    const auto base_stats = population_stats(households, n);
    result.mean_temp_baseline_c = base_stats.mean_temp_c;

    CoordinationRun coordination;
    bool ran_coordination = false;

    switch (which) {
        case ExperimentCase::Baseline:
            break;
        case ExperimentCase::Uncoordinated: {
            const auto frozen = state.price;
            uncoordinated_schedules(households, frozen, dt, config.run.compensation_enabled,
                                    config.run.uncoordinated_iteration_cap, config.run.threads);
            state = system_state();   // rebuild demand and prices from final schedules
            break;
        }
        case ExperimentCase::Coordinated:
        case ExperimentCase::ComfortA:
        case ExperimentCase::ComfortB:
        case ExperimentCase::ComfortC: {
            CoordinationConfig cc;
            cc.max_passes = config.run.max_passes;
            cc.compensation_enabled =
                which == ExperimentCase::ComfortA ? false : config.run.compensation_enabled;
            cc.flexibility_mode = which == ExperimentCase::ComfortB ? FlexibilityMode::Constant
                                                                    : config.run.flexibility_mode;
            cc.audit_shifts = config.run.audit_shifts;
            cc.safety_audit = config.run.safety_audit;
            coordination = run_coordination(households, state, cc);
            ran_coordination = true;
            break;
        }
    }

    result.case_demand_mw = state.demand_mw;
    result.case_price = state.price;
    const auto case_stats = population_stats(households, n);
    result.mean_temp_case_c = case_stats.mean_temp_c;

    RunMetrics& metrics = result.metrics;
    metrics.baseline = compute_demand_metrics("baseline", result.baseline_demand_mw,
                                              result.baseline_demand_mw, config.cost, dt,
                                              metrics.peak_windows);
    metrics.baseline.mean_comfort_index = base_stats.mean_comfort_index;
    metrics.baseline.mean_awake_abs_dev_c = base_stats.mean_awake_abs_dev_c;
    metrics.experiment = compute_demand_metrics(case_name(which), result.baseline_demand_mw,
                                                result.case_demand_mw, config.cost, dt,
                                                metrics.peak_windows);
    metrics.experiment.mean_comfort_index = case_stats.mean_comfort_index;
    metrics.experiment.mean_awake_abs_dev_c = case_stats.mean_awake_abs_dev_c;

    if (ran_coordination) {
        metrics.convergence = coordination.passes;
        metrics.experiment.converged = coordination.converged;
        metrics.experiment.passes = coordination.pass_count;
        metrics.experiment.shifts = coordination.total_shifts;
        metrics.experiment.compensations = coordination.total_compensations;
        metrics.safety_violations = coordination.safety_violations;
        result.converged = coordination.converged;
        result.passes = coordination.pass_count;
        if (!coordination.state_consistent)
            throw std::runtime_error("run_experiment: incremental demand state diverged from "
                                     "batch rebuild");
    } else {
        metrics.convergence.push_back({0, metrics.baseline.total_cost_gbp, 0, 0});
        if (which != ExperimentCase::Baseline)
            metrics.convergence.push_back({1, metrics.experiment.total_cost_gbp, 0, 0});
    }

    metrics.households_requested = requested;
    metrics.households_excluded = excluded;
    metrics.config_hash = config_hash_hex(config);
    metrics.seed = config.run.seed;
    metrics.assumptions = scenario_assumptions();

    if (!write_files) return result;

    const fs::path out_dir(config.run.out_dir);
    fs::create_directories(out_dir);

    {   // aggregate_demand.csv
        std::string csv = "t_index,hour,D_baseline_mw";
        const bool two = which != ExperimentCase::Baseline;
        if (two) csv += ",D_" + case_name(which) + "_mw";
        csv += "\n";
        for (int t = 0; t < n; ++t) {
            csv += std::to_string(t) + "," + fmt((t + 0.5) * dt) + "," +
                   fmt(result.baseline_demand_mw[t]);
            if (two) csv += "," + fmt(result.case_demand_mw[t]);
            csv += "\n";
        }
        write_file(out_dir / "aggregate_demand.csv", csv, result.written_files);
    }
    {   // prices.csv
        std::string csv = "t_index,hour,price_baseline_gbp_per_mwh";
        const bool two = which != ExperimentCase::Baseline;
        if (two) csv += ",price_" + case_name(which) + "_gbp_per_mwh";
        csv += "\n";
        for (int t = 0; t < n; ++t) {
            csv += std::to_string(t) + "," + fmt((t + 0.5) * dt) + "," +
                   fmt(result.baseline_price[t]);
            if (two) csv += "," + fmt(result.case_price[t]);
            csv += "\n";
        }
        write_file(out_dir / "prices.csv", csv, result.written_files);
    }
    {   // convergence.csv
        std::string csv = "pass,total_cost_gbp,shifts,compensations\n";
        for (const auto& p : metrics.convergence)
            csv += std::to_string(p.pass) + "," + fmt(p.total_cost_gbp) + "," +
                   std::to_string(p.shifts) + "," + std::to_string(p.compensations) + "\n";
        write_file(out_dir / "convergence.csv", csv, result.written_files);
    }
    {   // household_temps.csv: a small seeded sample, mirrors per-household plots
        std::string csv = "household_id,t_index,temp_c,ref_c,lower_c,upper_c\n";
        const int want = std::min<int>(config.run.temp_export_households,
                                       static_cast<int>(households.size()));
        std::vector<int> ids(households.size());
        for (std::size_t i = 0; i < households.size(); ++i) ids[i] = static_cast<int>(i);
        auto rng = substream(config.run.seed, 0x7e4d5);
        std::shuffle(ids.begin(), ids.end(), rng);
        std::vector<int> chosen(ids.begin(), ids.begin() + want);
        std::sort(chosen.begin(), chosen.end());
        for (int idx : chosen) {
            const auto& hh = households[idx];
            for (int t = 0; t < n; ++t)
                csv += std::to_string(hh.id) + "," + std::to_string(t) + "," +
                       fmt(hh.trace[t]) + "," + fmt(hh.comfort.reference[t]) + "," +
                       fmt(hh.comfort.lower[t]) + "," + fmt(hh.comfort.upper[t]) + "\n";
        }
        write_file(out_dir / "household_temps.csv", csv, result.written_files);
    }
    {   // mean_temperature.csv
        std::string csv = "t_index,hour,mean_temp_baseline_c";
        const bool two = which != ExperimentCase::Baseline;
        if (two) csv += ",mean_temp_" + case_name(which) + "_c";
        csv += "\n";
        for (int t = 0; t < n; ++t) {
            csv += std::to_string(t) + "," + fmt((t + 0.5) * dt) + "," +
                   fmt(result.mean_temp_baseline_c[t]);
            if (two) csv += "," + fmt(result.mean_temp_case_c[t]);
            csv += "\n";
        }
        write_file(out_dir / "mean_temperature.csv", csv, result.written_files);
    }
    {   // metrics.json
        json j;
        j["schema_version"] = 1;
        j["timestamp_utc"] = timestamp_utc();
        j["case"] = case_name(which);
        j["seed"] = metrics.seed;
        j["config_hash"] = metrics.config_hash;
        j["n_steps"] = n;
        j["dt_hours"] = dt;
        j["households_requested"] = metrics.households_requested;
        j["households_excluded"] = metrics.households_excluded;
        j["safety_violations"] = metrics.safety_violations;
        j["peak_windows"] = {{"morning_start_h", metrics.peak_windows.morning_start_h},
                             {"morning_end_h", metrics.peak_windows.morning_end_h},
                             {"evening_start_h", metrics.peak_windows.evening_start_h},
                             {"evening_end_h", metrics.peak_windows.evening_end_h}};
        j["baseline"] = case_metrics_json(metrics.baseline);
        j["case_metrics"] = case_metrics_json(metrics.experiment);
        json conv = json::array();
        for (const auto& p : metrics.convergence)
            conv.push_back({{"pass", p.pass},
                            {"total_cost_gbp", p.total_cost_gbp},
                            {"shifts", p.shifts},
                            {"compensations", p.compensations}});
        j["convergence"] = conv;
        j["assumptions"] = metrics.assumptions;
        write_file(out_dir / "metrics.json", j.dump(2) + "\n", result.written_files);
    }

    return result;
}

}  // namespace heatcoord
