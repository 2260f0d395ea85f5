#include "heatcoord/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace heatcoord {

using nlohmann::json;

std::string case_name(ExperimentCase c) {
    switch (c) {
        case ExperimentCase::Baseline: return "baseline";
        case ExperimentCase::Uncoordinated: return "uncoordinated";
        case ExperimentCase::Coordinated: return "coordinated";
        case ExperimentCase::ComfortA: return "comfort-a";
        case ExperimentCase::ComfortB: return "comfort-b";
        case ExperimentCase::ComfortC: return "comfort-c";
    }
    return "unknown";
}

ExperimentCase parse_case(const std::string& name) {
    for (ExperimentCase c : {ExperimentCase::Baseline, ExperimentCase::Uncoordinated,
                             ExperimentCase::Coordinated, ExperimentCase::ComfortA,
                             ExperimentCase::ComfortB, ExperimentCase::ComfortC})
        if (case_name(c) == name) return c;
    throw std::invalid_argument("unknown case '" + name + "'");
}

void ExperimentConfig::validate() const {
    population.validate();
    occupancy.validate();
    cost.validate();
    system_profile.validate();
    if (run.n_steps < 2) throw std::invalid_argument("run.n_steps must be >= 2");
    if (!(run.dt_hours > 0.0)) throw std::invalid_argument("run.dt_hours must be positive");
    if (std::abs(run.dt_hours * run.n_steps - 24.0) > 1e-9)
        throw std::invalid_argument("run.dt_hours * run.n_steps must equal 24 h");
    if (run.max_passes < 1) throw std::invalid_argument("run.max_passes must be >= 1");
    if (run.temp_export_households < 0)
        throw std::invalid_argument("run.temp_export_households must be >= 0");
}

ExperimentConfig default_config() {
    ExperimentConfig cfg;
    cfg.population.household_count = 200000;
    return cfg;
}

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> known,
                    const std::string& where) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool ok = false;
        for (const char* k : known)
            if (it.key() == k) ok = true;
        if (!ok) throw std::invalid_argument("unknown config key '" + where + "." + it.key() + "'");
    }
}

template <typename T>
void get_if(const json& j, const char* key, T& out) {
    if (j.contains(key)) out = j.at(key).get<T>();
}

void get_gaussian(const json& j, const char* key, GaussianSpec& g) {
    if (!j.contains(key)) return;
    const auto& v = j.at(key);
    reject_unknown(v, {"mean", "sd"}, key);
    get_if(v, "mean", g.mean);
    get_if(v, "sd", g.sd);
}

json gaussian_to_json(const GaussianSpec& g) { return {{"mean", g.mean}, {"sd", g.sd}}; }

DayPeriod parse_period(const std::string& s) {
    if (s == "sleep") return DayPeriod::Sleep;
    if (s == "awake") return DayPeriod::Awake;
    if (s == "away") return DayPeriod::Away;
    throw std::invalid_argument("unknown segment kind '" + s + "'");
}

const char* period_name(DayPeriod p) {
    switch (p) {
        case DayPeriod::Sleep: return "sleep";
        case DayPeriod::Awake: return "awake";
        case DayPeriod::Away: return "away";
    }
    return "sleep";
}

}  // namespace

ExperimentConfig parse_config_json(const std::string& json_text) {
    const json j = json::parse(json_text);
    ExperimentConfig cfg = default_config();
    reject_unknown(j, {"population", "occupancy", "cost", "system_profile", "run"}, "<top>");

    if (j.contains("population")) {
        const auto& p = j.at("population");
        reject_unknown(p,
                       {"household_count", "psi", "gamma", "rated_power_kw", "psi_clamp",
                        "gamma_clamp", "rated_power_clamp_kw", "initial_temp_sd_c", "upsilon",
                        "rng_seed", "retry_cap"},
                       "population");
        get_if(p, "household_count", cfg.population.household_count);
        get_gaussian(p, "psi", cfg.population.psi);
        get_gaussian(p, "gamma", cfg.population.gamma);
        get_gaussian(p, "rated_power_kw", cfg.population.rated_power_kw);
        if (p.contains("psi_clamp")) {
            cfg.population.psi_clamp_lo = p.at("psi_clamp").at(0).get<double>();
            cfg.population.psi_clamp_hi = p.at("psi_clamp").at(1).get<double>();
        }
        if (p.contains("gamma_clamp")) {
            cfg.population.gamma_clamp_lo = p.at("gamma_clamp").at(0).get<double>();
            cfg.population.gamma_clamp_hi = p.at("gamma_clamp").at(1).get<double>();
        }
        if (p.contains("rated_power_clamp_kw")) {
            cfg.population.rated_clamp_lo_kw = p.at("rated_power_clamp_kw").at(0).get<double>();
            cfg.population.rated_clamp_hi_kw = p.at("rated_power_clamp_kw").at(1).get<double>();
        }
        get_if(p, "initial_temp_sd_c", cfg.population.initial_temp_sd_c);
        get_if(p, "rng_seed", cfg.population.rng_seed);
        get_if(p, "retry_cap", cfg.population.retry_cap);
        if (p.contains("upsilon")) {
            const auto& u = p.at("upsilon");
            reject_unknown(u,
                           {"outdoor_base_c", "outdoor_amplitude_c", "outdoor_peak_hour",
                            "household_offset_sd_c", "step_noise_sd_c"},
                           "population.upsilon");
            get_if(u, "outdoor_base_c", cfg.population.upsilon.outdoor_base_c);
            get_if(u, "outdoor_amplitude_c", cfg.population.upsilon.outdoor_amplitude_c);
            get_if(u, "outdoor_peak_hour", cfg.population.upsilon.outdoor_peak_hour);
            get_if(u, "household_offset_sd_c", cfg.population.upsilon.household_offset_sd_c);
            get_if(u, "step_noise_sd_c", cfg.population.upsilon.step_noise_sd_c);
        }
    }

    if (j.contains("occupancy")) {
        const auto& o = j.at("occupancy");
        reject_unknown(o, {"segments", "boundary_sd_h", "bound_sd_c", "min_band_c"}, "occupancy");
        get_if(o, "boundary_sd_h", cfg.occupancy.boundary_sd_h);
        get_if(o, "bound_sd_c", cfg.occupancy.bound_sd_c);
        get_if(o, "min_band_c", cfg.occupancy.min_band_c);
        if (o.contains("segments")) {
            cfg.occupancy.segments.clear();
            for (const auto& s : o.at("segments")) {
                reject_unknown(s, {"kind", "end_hour", "lower_c", "upper_c"},
                               "occupancy.segments[]");
                SegmentSpec seg;
                seg.kind = parse_period(s.at("kind").get<std::string>());
                seg.end_hour = s.at("end_hour").get<double>();
                seg.lower_c = s.at("lower_c").get<double>();
                seg.upper_c = s.at("upper_c").get<double>();
                cfg.occupancy.segments.push_back(seg);
            }
        }
    }

    if (j.contains("cost")) {
        const auto& c = j.at("cost");
        reject_unknown(c, {"a_gbp_per_mw2h", "b_gbp_per_mwh"}, "cost");
        get_if(c, "a_gbp_per_mw2h", cfg.cost.a);
        get_if(c, "b_gbp_per_mwh", cfg.cost.b);
    }

    if (j.contains("system_profile")) {
        const auto& s = j.at("system_profile");
        reject_unknown(s,
                       {"daily_energy_mwh", "base_weight", "morning_peak_hour", "morning_sd_h",
                        "morning_weight", "evening_peak_hour", "evening_sd_h", "evening_weight",
                        "non_heat_mw", "res_mw", "allow_negative_net"},
                       "system_profile");
        get_if(s, "daily_energy_mwh", cfg.system_profile.daily_energy_mwh);
        get_if(s, "base_weight", cfg.system_profile.base_weight);
        get_if(s, "morning_peak_hour", cfg.system_profile.morning_peak_hour);
        get_if(s, "morning_sd_h", cfg.system_profile.morning_sd_h);
        get_if(s, "morning_weight", cfg.system_profile.morning_weight);
        get_if(s, "evening_peak_hour", cfg.system_profile.evening_peak_hour);
        get_if(s, "evening_sd_h", cfg.system_profile.evening_sd_h);
        get_if(s, "evening_weight", cfg.system_profile.evening_weight);
        get_if(s, "non_heat_mw", cfg.system_profile.non_heat_mw);
        get_if(s, "res_mw", cfg.system_profile.res_mw);
        get_if(s, "allow_negative_net", cfg.system_profile.allow_negative_net);
    }

    if (j.contains("run")) {
        const auto& r = j.at("run");
        reject_unknown(r,
                       {"dt_hours", "n_steps", "case", "max_passes", "seed", "out_dir",
                        "flexibility_mode", "compensation_enabled", "temp_export_households",
                        "audit_shifts", "safety_audit", "uncoordinated_iteration_cap", "threads"},
                       "run");
        get_if(r, "dt_hours", cfg.run.dt_hours);
        get_if(r, "n_steps", cfg.run.n_steps);
        if (r.contains("case")) cfg.run.experiment_case = parse_case(r.at("case").get<std::string>());
        get_if(r, "max_passes", cfg.run.max_passes);
        get_if(r, "seed", cfg.run.seed);
        get_if(r, "out_dir", cfg.run.out_dir);
        if (r.contains("flexibility_mode")) {
            const auto m = r.at("flexibility_mode").get<std::string>();
            if (m == "time-varying") cfg.run.flexibility_mode = FlexibilityMode::TimeVarying;
            else if (m == "constant") cfg.run.flexibility_mode = FlexibilityMode::Constant;
            else throw std::invalid_argument("unknown flexibility_mode '" + m + "'");
        }
        get_if(r, "compensation_enabled", cfg.run.compensation_enabled);
        get_if(r, "temp_export_households", cfg.run.temp_export_households);
        get_if(r, "audit_shifts", cfg.run.audit_shifts);
        get_if(r, "safety_audit", cfg.run.safety_audit);
        get_if(r, "uncoordinated_iteration_cap", cfg.run.uncoordinated_iteration_cap);
        get_if(r, "threads", cfg.run.threads);
    }

    // The population seed follows the run seed unless set explicitly.
    if (!(j.contains("population") && j.at("population").contains("rng_seed")))
        cfg.population.rng_seed = cfg.run.seed;

    cfg.validate();
    return cfg;
}

namespace {

json config_to_json(const ExperimentConfig& cfg) {
    json segs = json::array();
    for (const auto& s : cfg.occupancy.segments)
        segs.push_back({{"kind", period_name(s.kind)},
                        {"end_hour", s.end_hour},
                        {"lower_c", s.lower_c},
                        {"upper_c", s.upper_c}});
    json j;
    j["population"] = {
        {"household_count", cfg.population.household_count},
        {"psi", gaussian_to_json(cfg.population.psi)},
        {"gamma", gaussian_to_json(cfg.population.gamma)},
        {"rated_power_kw", gaussian_to_json(cfg.population.rated_power_kw)},
        {"psi_clamp", {cfg.population.psi_clamp_lo, cfg.population.psi_clamp_hi}},
        {"gamma_clamp", {cfg.population.gamma_clamp_lo, cfg.population.gamma_clamp_hi}},
        {"rated_power_clamp_kw",
         {cfg.population.rated_clamp_lo_kw, cfg.population.rated_clamp_hi_kw}},
        {"initial_temp_sd_c", cfg.population.initial_temp_sd_c},
        {"upsilon",
         {{"outdoor_base_c", cfg.population.upsilon.outdoor_base_c},
          {"outdoor_amplitude_c", cfg.population.upsilon.outdoor_amplitude_c},
          {"outdoor_peak_hour", cfg.population.upsilon.outdoor_peak_hour},
          {"household_offset_sd_c", cfg.population.upsilon.household_offset_sd_c},
          {"step_noise_sd_c", cfg.population.upsilon.step_noise_sd_c}}},
        {"rng_seed", cfg.population.rng_seed},
        {"retry_cap", cfg.population.retry_cap},
    };
    j["occupancy"] = {
        {"segments", segs},
        {"boundary_sd_h", cfg.occupancy.boundary_sd_h},
        {"bound_sd_c", cfg.occupancy.bound_sd_c},
        {"min_band_c", cfg.occupancy.min_band_c},
    };
    j["cost"] = {{"a_gbp_per_mw2h", cfg.cost.a}, {"b_gbp_per_mwh", cfg.cost.b}};
    j["system_profile"] = {
        {"daily_energy_mwh", cfg.system_profile.daily_energy_mwh},
        {"base_weight", cfg.system_profile.base_weight},
        {"morning_peak_hour", cfg.system_profile.morning_peak_hour},
        {"morning_sd_h", cfg.system_profile.morning_sd_h},
        {"morning_weight", cfg.system_profile.morning_weight},
        {"evening_peak_hour", cfg.system_profile.evening_peak_hour},
        {"evening_sd_h", cfg.system_profile.evening_sd_h},
        {"evening_weight", cfg.system_profile.evening_weight},
        {"non_heat_mw", cfg.system_profile.non_heat_mw},
        {"res_mw", cfg.system_profile.res_mw},
        {"allow_negative_net", cfg.system_profile.allow_negative_net},
    };
    j["run"] = {
        {"dt_hours", cfg.run.dt_hours},
        {"n_steps", cfg.run.n_steps},
        {"case", case_name(cfg.run.experiment_case)},
        {"max_passes", cfg.run.max_passes},
        {"seed", cfg.run.seed},
        {"out_dir", cfg.run.out_dir},
        {"flexibility_mode",
         cfg.run.flexibility_mode == FlexibilityMode::TimeVarying ? "time-varying" : "constant"},
        {"compensation_enabled", cfg.run.compensation_enabled},
        {"temp_export_households", cfg.run.temp_export_households},
        {"audit_shifts", cfg.run.audit_shifts},
        {"safety_audit", cfg.run.safety_audit},
        {"uncoordinated_iteration_cap", cfg.run.uncoordinated_iteration_cap},
        {"threads", cfg.run.threads},
    };
    return j;
}

}  // namespace

std::string config_to_json_string(const ExperimentConfig& config, int indent) {
    return config_to_json(config).dump(indent);
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string config_hash_hex(const ExperimentConfig& config) {
    json j = config_to_json(config);
    j["run"].erase("out_dir");
    j["run"].erase("threads");
    const std::string dump = j.dump();
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char ch : dump) {
        h ^= ch;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace heatcoord
