#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uavplan/errors.hpp"

namespace uavplan {

// Defaults reproduce the reference experiment setup: a 1000x1000 m field with
// ten UAVs hovering at 100 m over two 20 m base stations, 2 MHz links, 32 mW
// radios, -100 dBm noise, -60 dB reference gain, and a 10.2 kg rotorcraft.

struct CodingConfig {
    std::int64_t matrix_size = 1000;
    std::int64_t storage_fraction = 2;
    std::string split_mode = "paper"; // or "minimize_k"
    bool has_explicit_split = false;
    double split_s = 1.0;
    std::int64_t split_t = 1;
    double bits_per_symbol = 64.0;
};

struct UavConfig {
    double height_m = 100.0;
    double cpu_hz = 1e9;
    double cycles_per_bit = 20.0;
    double bandwidth_hz = 2e6;
    double tx_power_w = 0.032;
    double rx_power_w = 0.032;
};

struct RotorcraftConfig {
    double weight_kg = 10.2;
    bool weight_is_force = false; // interpret weight_kg as newtons directly
    double air_density = 1.225;
    double rotor_radius_m = 0.5;
    double disc_area_m2 = 0.79;
    double blade_angular_velocity = 400.0;
    double tip_speed = 200.0;
    double rotor_solidity = 0.05;
    double fuselage_drag_ratio = 0.3;
    double induced_velocity_hover = 7.2;
    double profile_drag_coeff = 0.012;
    double induced_power_factor = 0.1;
};

struct BsConfig {
    double height_m = 20.0;
    double cpu_hz = 2e10;
    std::int64_t workers = 15;
    double service_cost = 0.2;
};

struct RadioConfig {
    double noise_dbm = -100.0;
    double beta0_db = -60.0;
};

struct CostsConfig {
    double alpha1 = 0.6;
    double alpha2 = 4e-4;
};

struct TopologyConfig {
    std::int64_t uav_count = 10;
    std::int64_t bs_count = 2;
    double field_size_m = 1000.0;
    double grid_cell_m = 25.0;
    std::uint64_t seed = 1;
    std::optional<std::vector<std::array<double, 2>>> uav_positions;
    std::optional<std::vector<std::array<double, 2>>> bs_positions;
};

struct ScenarioConfig {
    std::string source = "generate"; // or "file"
    std::string file;
    double failure_prob = 0.2;
    std::int64_t shortfall_count = 1;
    std::optional<std::vector<double>> shortfall_weights; // over counts 1..len
    std::string generation = "enumerate"; // or "expand", "sample"
    std::uint64_t sample_seed = 0;
    std::uint64_t enumeration_cap = 1ull << 20;
};

struct SolverConfig {
    bool clamp_shortfall_to_offload = false;
    std::uint64_t oracle_cap = 10'000'000;
    std::string evf_rounding = "half_up"; // or "ceiling"
    std::vector<std::int64_t> fixed_shortfall; // DIP only; empty means all zero
    std::int64_t fixed_point_scale = 1'000'000'000;
};

struct CostStructureConfig {
    std::int64_t offload_min = 4;
    std::int64_t offload_max = 12;
    double local_cost_scale = 1e6; // prices local computation out
    std::int64_t workers_override = 100;
};

struct ScalabilityConfig {
    std::int64_t uav_min = 1;
    std::int64_t uav_max = 0; // 0: up to topology.uav_count
    std::int64_t workers_override = 0; // 0: keep bs.workers
    double kink_multiple = 3.0;
};

struct EvfCompareConfig {
    double multiplier_min = 0.0;
    double multiplier_max = 5.0;
    std::int64_t points = 20;
    std::int64_t workers_override = 100;
};

struct MonteCarloConfig {
    std::uint64_t trials = 100'000;
    std::uint64_t seed = 7;
};

struct OutputConfig {
    std::string directory = "out";
    bool stamp = false; // wall-clock timestamps break byte-reproducibility
};

struct RunConfig {
    CodingConfig coding;
    UavConfig uav;
    RotorcraftConfig rotorcraft;
    BsConfig bs;
    RadioConfig radio;
    CostsConfig costs;
    TopologyConfig topology;
    ScenarioConfig scenarios;
    SolverConfig solver;
    CostStructureConfig cost_structure;
    ScalabilityConfig scalability;
    EvfCompareConfig evf_compare;
    MonteCarloConfig monte_carlo;
    OutputConfig output;
};

inline double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

namespace cfgdetail {

using nlohmann::json;

inline void check_keys(const json& j, const std::string& path,
                       std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw Error(Errc::parse, path + ": expected an object");
    for (const auto& item : j.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) {
            throw Error(Errc::parse, "unknown config key: " + path + "." + item.key());
        }
    }
}

inline double jnum(const json& j, const char* key, double def, const std::string& path) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_number()) throw Error(Errc::parse, path + "." + key + ": expected a number");
    return j.at(key).get<double>();
}

inline std::int64_t jint(const json& j, const char* key, std::int64_t def, const std::string& path) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_number_integer()) {
        throw Error(Errc::parse, path + "." + key + ": expected an integer");
    }
    return j.at(key).get<std::int64_t>();
}

inline std::uint64_t juint(const json& j, const char* key, std::uint64_t def,
                           const std::string& path) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_number_unsigned() && !j.at(key).is_number_integer()) {
        throw Error(Errc::parse, path + "." + key + ": expected an unsigned integer");
    }
    const std::int64_t v = j.at(key).get<std::int64_t>();
    if (v < 0) throw Error(Errc::parse, path + "." + key + ": expected an unsigned integer");
    return static_cast<std::uint64_t>(v);
}

inline bool jbool(const json& j, const char* key, bool def, const std::string& path) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_boolean()) throw Error(Errc::parse, path + "." + key + ": expected a bool");
    return j.at(key).get<bool>();
}

inline std::string jstr(const json& j, const char* key, const std::string& def,
                        const std::string& path) {
    if (!j.contains(key)) return def;
    if (!j.at(key).is_string()) throw Error(Errc::parse, path + "." + key + ": expected a string");
    return j.at(key).get<std::string>();
}

inline std::vector<std::array<double, 2>> jpositions(const json& j, const char* key,
                                                     const std::string& path) {
    const json& arr = j.at(key);
    if (!arr.is_array()) throw Error(Errc::parse, path + "." + key + ": expected an array");
    std::vector<std::array<double, 2>> out;
    for (const json& p : arr) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number() || !p[1].is_number()) {
            throw Error(Errc::parse, path + "." + key + ": expected [x, y] pairs");
        }
        out.push_back({p[0].get<double>(), p[1].get<double>()});
    }
    return out;
}

inline void require_positive(double v, const std::string& field) {
    if (!(v > 0.0)) throw Error(Errc::validation, field + " must be positive");
}

inline void require_nonnegative(double v, const std::string& field) {
    if (v < 0.0) throw Error(Errc::validation, field + " must be nonnegative");
}

} // namespace cfgdetail

inline RunConfig parse_config(const nlohmann::json& j) {
    using namespace cfgdetail;
    RunConfig c;
    check_keys(j, "config",
               {"coding", "uav", "rotorcraft", "bs", "radio", "costs", "topology", "scenarios",
                "solver", "cost_structure", "scalability", "evf_compare", "monte_carlo", "output"});
    if (j.contains("coding")) {
        const auto& s = j.at("coding");
        check_keys(s, "coding",
                   {"matrix_size", "storage_fraction", "split_mode", "split_s", "split_t",
                    "bits_per_symbol"});
        c.coding.matrix_size = jint(s, "matrix_size", c.coding.matrix_size, "coding");
        c.coding.storage_fraction = jint(s, "storage_fraction", c.coding.storage_fraction, "coding");
        c.coding.split_mode = jstr(s, "split_mode", c.coding.split_mode, "coding");
        if (s.contains("split_s") != s.contains("split_t")) {
            throw Error(Errc::parse, "coding: split_s and split_t must be given together");
        }
        if (s.contains("split_s")) {
            c.coding.has_explicit_split = true;
            c.coding.split_s = jnum(s, "split_s", 1.0, "coding");
            c.coding.split_t = jint(s, "split_t", 1, "coding");
        }
        c.coding.bits_per_symbol = jnum(s, "bits_per_symbol", c.coding.bits_per_symbol, "coding");
    }
    if (j.contains("uav")) {
        const auto& s = j.at("uav");
        check_keys(s, "uav",
                   {"height_m", "cpu_hz", "cycles_per_bit", "bandwidth_hz", "tx_power_w",
                    "rx_power_w"});
        c.uav.height_m = jnum(s, "height_m", c.uav.height_m, "uav");
        c.uav.cpu_hz = jnum(s, "cpu_hz", c.uav.cpu_hz, "uav");
        c.uav.cycles_per_bit = jnum(s, "cycles_per_bit", c.uav.cycles_per_bit, "uav");
        c.uav.bandwidth_hz = jnum(s, "bandwidth_hz", c.uav.bandwidth_hz, "uav");
        c.uav.tx_power_w = jnum(s, "tx_power_w", c.uav.tx_power_w, "uav");
        c.uav.rx_power_w = jnum(s, "rx_power_w", c.uav.rx_power_w, "uav");
    }
    if (j.contains("rotorcraft")) {
        const auto& s = j.at("rotorcraft");
        check_keys(s, "rotorcraft",
                   {"weight_kg", "weight_is_force", "air_density", "rotor_radius_m", "disc_area_m2",
                    "blade_angular_velocity", "tip_speed", "rotor_solidity", "fuselage_drag_ratio",
                    "induced_velocity_hover", "profile_drag_coeff", "induced_power_factor"});
        auto& r = c.rotorcraft;
        r.weight_kg = jnum(s, "weight_kg", r.weight_kg, "rotorcraft");
        r.weight_is_force = jbool(s, "weight_is_force", r.weight_is_force, "rotorcraft");
        r.air_density = jnum(s, "air_density", r.air_density, "rotorcraft");
        r.rotor_radius_m = jnum(s, "rotor_radius_m", r.rotor_radius_m, "rotorcraft");
        r.disc_area_m2 = jnum(s, "disc_area_m2", r.disc_area_m2, "rotorcraft");
        r.blade_angular_velocity = jnum(s, "blade_angular_velocity", r.blade_angular_velocity, "rotorcraft");
        r.tip_speed = jnum(s, "tip_speed", r.tip_speed, "rotorcraft");
        r.rotor_solidity = jnum(s, "rotor_solidity", r.rotor_solidity, "rotorcraft");
        r.fuselage_drag_ratio = jnum(s, "fuselage_drag_ratio", r.fuselage_drag_ratio, "rotorcraft");
        r.induced_velocity_hover = jnum(s, "induced_velocity_hover", r.induced_velocity_hover, "rotorcraft");
        r.profile_drag_coeff = jnum(s, "profile_drag_coeff", r.profile_drag_coeff, "rotorcraft");
        r.induced_power_factor = jnum(s, "induced_power_factor", r.induced_power_factor, "rotorcraft");
    }
    if (j.contains("bs")) {
        const auto& s = j.at("bs");
        check_keys(s, "bs", {"height_m", "cpu_hz", "workers", "service_cost"});
        c.bs.height_m = jnum(s, "height_m", c.bs.height_m, "bs");
        c.bs.cpu_hz = jnum(s, "cpu_hz", c.bs.cpu_hz, "bs");
        c.bs.workers = jint(s, "workers", c.bs.workers, "bs");
        c.bs.service_cost = jnum(s, "service_cost", c.bs.service_cost, "bs");
    }
    if (j.contains("radio")) {
        const auto& s = j.at("radio");
        check_keys(s, "radio", {"noise_dbm", "beta0_db"});
        c.radio.noise_dbm = jnum(s, "noise_dbm", c.radio.noise_dbm, "radio");
        c.radio.beta0_db = jnum(s, "beta0_db", c.radio.beta0_db, "radio");
    }
    if (j.contains("costs")) {
        const auto& s = j.at("costs");
        check_keys(s, "costs", {"alpha1", "alpha2"});
        c.costs.alpha1 = jnum(s, "alpha1", c.costs.alpha1, "costs");
        c.costs.alpha2 = jnum(s, "alpha2", c.costs.alpha2, "costs");
    }
    if (j.contains("topology")) {
        const auto& s = j.at("topology");
        check_keys(s, "topology",
                   {"uav_count", "bs_count", "field_size_m", "grid_cell_m", "seed",
                    "uav_positions", "bs_positions"});
        c.topology.uav_count = jint(s, "uav_count", c.topology.uav_count, "topology");
        c.topology.bs_count = jint(s, "bs_count", c.topology.bs_count, "topology");
        c.topology.field_size_m = jnum(s, "field_size_m", c.topology.field_size_m, "topology");
        c.topology.grid_cell_m = jnum(s, "grid_cell_m", c.topology.grid_cell_m, "topology");
        c.topology.seed = juint(s, "seed", c.topology.seed, "topology");
        if (s.contains("uav_positions")) {
            c.topology.uav_positions = jpositions(s, "uav_positions", "topology");
        }
        if (s.contains("bs_positions")) {
            c.topology.bs_positions = jpositions(s, "bs_positions", "topology");
        }
    }
    if (j.contains("scenarios")) {
        const auto& s = j.at("scenarios");
        check_keys(s, "scenarios",
                   {"source", "file", "failure_prob", "shortfall_count", "shortfall_weights",
                    "generation", "sample_seed", "enumeration_cap"});
        c.scenarios.source = jstr(s, "source", c.scenarios.source, "scenarios");
        c.scenarios.file = jstr(s, "file", c.scenarios.file, "scenarios");
        c.scenarios.failure_prob = jnum(s, "failure_prob", c.scenarios.failure_prob, "scenarios");
        c.scenarios.shortfall_count = jint(s, "shortfall_count", c.scenarios.shortfall_count, "scenarios");
        if (s.contains("shortfall_weights")) {
            const auto& w = s.at("shortfall_weights");
            if (!w.is_array()) {
                throw Error(Errc::parse, "scenarios.shortfall_weights: expected an array");
            }
            std::vector<double> weights;
            for (const auto& v : w) {
                if (!v.is_number()) {
                    throw Error(Errc::parse, "scenarios.shortfall_weights: expected numbers");
                }
                weights.push_back(v.get<double>());
            }
            c.scenarios.shortfall_weights = std::move(weights);
        }
        c.scenarios.generation = jstr(s, "generation", c.scenarios.generation, "scenarios");
        c.scenarios.sample_seed = juint(s, "sample_seed", c.scenarios.sample_seed, "scenarios");
        c.scenarios.enumeration_cap = juint(s, "enumeration_cap", c.scenarios.enumeration_cap, "scenarios");
    }
    if (j.contains("solver")) {
        const auto& s = j.at("solver");
        check_keys(s, "solver",
                   {"clamp_shortfall_to_offload", "oracle_cap", "evf_rounding", "fixed_shortfall",
                    "fixed_point_scale"});
        c.solver.clamp_shortfall_to_offload =
            jbool(s, "clamp_shortfall_to_offload", c.solver.clamp_shortfall_to_offload, "solver");
        c.solver.oracle_cap = juint(s, "oracle_cap", c.solver.oracle_cap, "solver");
        c.solver.evf_rounding = jstr(s, "evf_rounding", c.solver.evf_rounding, "solver");
        if (s.contains("fixed_shortfall")) {
            const auto& arr = s.at("fixed_shortfall");
            if (!arr.is_array()) {
                throw Error(Errc::parse, "solver.fixed_shortfall: expected an array");
            }
            for (const auto& v : arr) {
                if (!v.is_number_integer()) {
                    throw Error(Errc::parse, "solver.fixed_shortfall: expected integers");
                }
                c.solver.fixed_shortfall.push_back(v.get<std::int64_t>());
            }
        }
        c.solver.fixed_point_scale = jint(s, "fixed_point_scale", c.solver.fixed_point_scale, "solver");
    }
    if (j.contains("cost_structure")) {
        const auto& s = j.at("cost_structure");
        check_keys(s, "cost_structure",
                   {"offload_min", "offload_max", "local_cost_scale", "workers_override"});
        c.cost_structure.offload_min = jint(s, "offload_min", c.cost_structure.offload_min, "cost_structure");
        c.cost_structure.offload_max = jint(s, "offload_max", c.cost_structure.offload_max, "cost_structure");
        c.cost_structure.local_cost_scale = jnum(s, "local_cost_scale", c.cost_structure.local_cost_scale, "cost_structure");
        c.cost_structure.workers_override = jint(s, "workers_override", c.cost_structure.workers_override, "cost_structure");
    }
    if (j.contains("scalability")) {
        const auto& s = j.at("scalability");
        check_keys(s, "scalability", {"uav_min", "uav_max", "workers_override", "kink_multiple"});
        c.scalability.uav_min = jint(s, "uav_min", c.scalability.uav_min, "scalability");
        c.scalability.uav_max = jint(s, "uav_max", c.scalability.uav_max, "scalability");
        c.scalability.workers_override = jint(s, "workers_override", c.scalability.workers_override, "scalability");
        c.scalability.kink_multiple = jnum(s, "kink_multiple", c.scalability.kink_multiple, "scalability");
    }
    if (j.contains("evf_compare")) {
        const auto& s = j.at("evf_compare");
        check_keys(s, "evf_compare",
                   {"multiplier_min", "multiplier_max", "points", "workers_override"});
        c.evf_compare.multiplier_min = jnum(s, "multiplier_min", c.evf_compare.multiplier_min, "evf_compare");
        c.evf_compare.multiplier_max = jnum(s, "multiplier_max", c.evf_compare.multiplier_max, "evf_compare");
        c.evf_compare.points = jint(s, "points", c.evf_compare.points, "evf_compare");
        c.evf_compare.workers_override = jint(s, "workers_override", c.evf_compare.workers_override, "evf_compare");
    }
    if (j.contains("monte_carlo")) {
        const auto& s = j.at("monte_carlo");
        check_keys(s, "monte_carlo", {"trials", "seed"});
        c.monte_carlo.trials = juint(s, "trials", c.monte_carlo.trials, "monte_carlo");
        c.monte_carlo.seed = juint(s, "seed", c.monte_carlo.seed, "monte_carlo");
    }
    if (j.contains("output")) {
        const auto& s = j.at("output");
        check_keys(s, "output", {"directory", "stamp"});
        c.output.directory = jstr(s, "directory", c.output.directory, "output");
        c.output.stamp = jbool(s, "stamp", c.output.stamp, "output");
    }
    return c;
}

/// Field-by-field validation with named paths. Called after parsing and after
/// any command-line overrides.
inline void validate_config(const RunConfig& c) {
    using namespace cfgdetail;
    if (c.coding.matrix_size < 1) throw Error(Errc::validation, "coding.matrix_size must be >= 1");
    if (c.coding.storage_fraction < 1) {
        throw Error(Errc::validation, "coding.storage_fraction must be >= 1");
    }
    if (c.coding.split_mode != "paper" && c.coding.split_mode != "minimize_k") {
        throw Error(Errc::validation, "coding.split_mode must be 'paper' or 'minimize_k'");
    }
    require_positive(c.coding.bits_per_symbol, "coding.bits_per_symbol");
    require_positive(c.uav.height_m, "uav.height_m");
    require_positive(c.uav.cpu_hz, "uav.cpu_hz");
    require_positive(c.uav.cycles_per_bit, "uav.cycles_per_bit");
    require_positive(c.uav.bandwidth_hz, "uav.bandwidth_hz");
    require_positive(c.uav.tx_power_w, "uav.tx_power_w");
    require_nonnegative(c.uav.rx_power_w, "uav.rx_power_w");
    require_positive(c.rotorcraft.weight_kg, "rotorcraft.weight_kg");
    require_positive(c.rotorcraft.air_density, "rotorcraft.air_density");
    require_positive(c.rotorcraft.rotor_radius_m, "rotorcraft.rotor_radius_m");
    require_positive(c.rotorcraft.disc_area_m2, "rotorcraft.disc_area_m2");
    require_positive(c.rotorcraft.blade_angular_velocity, "rotorcraft.blade_angular_velocity");
    require_positive(c.rotorcraft.tip_speed, "rotorcraft.tip_speed");
    require_positive(c.rotorcraft.rotor_solidity, "rotorcraft.rotor_solidity");
    require_positive(c.rotorcraft.fuselage_drag_ratio, "rotorcraft.fuselage_drag_ratio");
    require_positive(c.rotorcraft.induced_velocity_hover, "rotorcraft.induced_velocity_hover");
    require_positive(c.rotorcraft.profile_drag_coeff, "rotorcraft.profile_drag_coeff");
    require_positive(c.rotorcraft.induced_power_factor, "rotorcraft.induced_power_factor");
    require_nonnegative(c.bs.height_m, "bs.height_m");
    require_positive(c.bs.cpu_hz, "bs.cpu_hz");
    if (c.bs.workers < 1) throw Error(Errc::validation, "bs.workers must be >= 1");
    require_nonnegative(c.bs.service_cost, "bs.service_cost");
    require_nonnegative(c.costs.alpha1, "costs.alpha1");
    require_nonnegative(c.costs.alpha2, "costs.alpha2");
    if (c.topology.uav_count < 1) throw Error(Errc::validation, "topology.uav_count must be >= 1");
    if (c.topology.bs_count < 1) throw Error(Errc::validation, "topology.bs_count must be >= 1");
    require_positive(c.topology.field_size_m, "topology.field_size_m");
    require_positive(c.topology.grid_cell_m, "topology.grid_cell_m");
    if (c.uav.height_m <= c.bs.height_m) {
        throw Error(Errc::validation, "uav.height_m must exceed bs.height_m for line of sight");
    }
    auto check_positions = [&](const std::optional<std::vector<std::array<double, 2>>>& pos,
                               std::int64_t count, const std::string& field) {
        if (!pos) return;
        if (static_cast<std::int64_t>(pos->size()) != count) {
            throw Error(Errc::validation,
                        field + " must list exactly " + std::to_string(count) + " positions");
        }
        for (const auto& p : *pos) {
            for (double v : p) {
                if (v < 0.0 || v > c.topology.field_size_m) {
                    throw Error(Errc::validation, field + ": position outside the field");
                }
                const double snapped = std::nearbyint(v / c.topology.grid_cell_m) * c.topology.grid_cell_m;
                if (std::abs(v - snapped) > 1e-9) {
                    throw Error(Errc::validation, field + ": position not on the grid");
                }
            }
        }
    };
    check_positions(c.topology.uav_positions, c.topology.uav_count, "topology.uav_positions");
    check_positions(c.topology.bs_positions, c.topology.bs_count, "topology.bs_positions");
    if (c.scenarios.source != "generate" && c.scenarios.source != "file") {
        throw Error(Errc::validation, "scenarios.source must be 'generate' or 'file'");
    }
    if (c.scenarios.source == "file" && c.scenarios.file.empty()) {
        throw Error(Errc::validation, "scenarios.file is required when scenarios.source is 'file'");
    }
    if (c.scenarios.source == "generate" && !c.scenarios.file.empty()) {
        throw Error(Errc::validation,
                    "exactly one scenario source: remove scenarios.file or set source to 'file'");
    }
    if (!(c.scenarios.failure_prob >= 0.0 && c.scenarios.failure_prob <= 1.0)) {
        throw Error(Errc::validation, "scenarios.failure_prob must lie in [0, 1]");
    }
    if (c.scenarios.shortfall_count < 1) {
        throw Error(Errc::validation, "scenarios.shortfall_count must be >= 1");
    }
    if (c.scenarios.generation != "enumerate" && c.scenarios.generation != "expand" &&
        c.scenarios.generation != "sample") {
        throw Error(Errc::validation,
                    "scenarios.generation must be 'enumerate', 'expand', or 'sample'");
    }
    if (c.solver.evf_rounding != "half_up" && c.solver.evf_rounding != "ceiling") {
        throw Error(Errc::validation, "solver.evf_rounding must be 'half_up' or 'ceiling'");
    }
    if (c.solver.fixed_point_scale < 1) {
        throw Error(Errc::validation, "solver.fixed_point_scale must be >= 1");
    }
    for (std::int64_t s : c.solver.fixed_shortfall) {
        if (s < 0) throw Error(Errc::validation, "solver.fixed_shortfall entries must be >= 0");
    }
    if (c.cost_structure.workers_override < 1) {
        throw Error(Errc::validation, "cost_structure.workers_override must be >= 1");
    }
    require_positive(c.cost_structure.local_cost_scale, "cost_structure.local_cost_scale");
    if (c.scalability.uav_min < 1) throw Error(Errc::validation, "scalability.uav_min must be >= 1");
    if (c.scalability.workers_override < 0) {
        throw Error(Errc::validation, "scalability.workers_override must be >= 0");
    }
    require_positive(c.scalability.kink_multiple, "scalability.kink_multiple");
    if (c.evf_compare.points < 1) throw Error(Errc::validation, "evf_compare.points must be >= 1");
    if (c.evf_compare.multiplier_min < 0.0 ||
        c.evf_compare.multiplier_max < c.evf_compare.multiplier_min) {
        throw Error(Errc::validation, "evf_compare multiplier range is invalid");
    }
    if (c.evf_compare.workers_override < 1) {
        throw Error(Errc::validation, "evf_compare.workers_override must be >= 1");
    }
    if (c.monte_carlo.trials < 1) throw Error(Errc::validation, "monte_carlo.trials must be >= 1");
    if (c.output.directory.empty()) throw Error(Errc::validation, "output.directory must be set");
}

inline RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::parse, "cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw Error(Errc::parse, "config parse error in " + path + ": " + e.what());
    }
    RunConfig c = parse_config(j);
    validate_config(c);
    return c;
}

/// Canonical JSON image of the effective configuration. nlohmann::json keeps
/// object keys sorted, so the dump is stable and hashable.
inline nlohmann::json config_to_json(const RunConfig& c) {
    nlohmann::json j;
    j["coding"]["matrix_size"] = c.coding.matrix_size;
    j["coding"]["storage_fraction"] = c.coding.storage_fraction;
    j["coding"]["split_mode"] = c.coding.split_mode;
    if (c.coding.has_explicit_split) {
        j["coding"]["split_s"] = c.coding.split_s;
        j["coding"]["split_t"] = c.coding.split_t;
    }
    j["coding"]["bits_per_symbol"] = c.coding.bits_per_symbol;
    j["uav"] = {{"height_m", c.uav.height_m},
                {"cpu_hz", c.uav.cpu_hz},
                {"cycles_per_bit", c.uav.cycles_per_bit},
                {"bandwidth_hz", c.uav.bandwidth_hz},
                {"tx_power_w", c.uav.tx_power_w},
                {"rx_power_w", c.uav.rx_power_w}};
    j["rotorcraft"] = {{"weight_kg", c.rotorcraft.weight_kg},
                       {"weight_is_force", c.rotorcraft.weight_is_force},
                       {"air_density", c.rotorcraft.air_density},
                       {"rotor_radius_m", c.rotorcraft.rotor_radius_m},
                       {"disc_area_m2", c.rotorcraft.disc_area_m2},
                       {"blade_angular_velocity", c.rotorcraft.blade_angular_velocity},
                       {"tip_speed", c.rotorcraft.tip_speed},
                       {"rotor_solidity", c.rotorcraft.rotor_solidity},
                       {"fuselage_drag_ratio", c.rotorcraft.fuselage_drag_ratio},
                       {"induced_velocity_hover", c.rotorcraft.induced_velocity_hover},
                       {"profile_drag_coeff", c.rotorcraft.profile_drag_coeff},
                       {"induced_power_factor", c.rotorcraft.induced_power_factor}};
    j["bs"] = {{"height_m", c.bs.height_m},
               {"cpu_hz", c.bs.cpu_hz},
               {"workers", c.bs.workers},
               {"service_cost", c.bs.service_cost}};
    j["radio"] = {{"noise_dbm", c.radio.noise_dbm}, {"beta0_db", c.radio.beta0_db}};
    j["costs"] = {{"alpha1", c.costs.alpha1}, {"alpha2", c.costs.alpha2}};
    j["topology"] = {{"uav_count", c.topology.uav_count},
                     {"bs_count", c.topology.bs_count},
                     {"field_size_m", c.topology.field_size_m},
                     {"grid_cell_m", c.topology.grid_cell_m},
                     {"seed", c.topology.seed}};
    if (c.topology.uav_positions) j["topology"]["uav_positions"] = *c.topology.uav_positions;
    if (c.topology.bs_positions) j["topology"]["bs_positions"] = *c.topology.bs_positions;
    j["scenarios"] = {{"source", c.scenarios.source},
                      {"failure_prob", c.scenarios.failure_prob},
                      {"shortfall_count", c.scenarios.shortfall_count},
                      {"generation", c.scenarios.generation},
                      {"sample_seed", c.scenarios.sample_seed},
                      {"enumeration_cap", c.scenarios.enumeration_cap}};
    if (!c.scenarios.file.empty()) j["scenarios"]["file"] = c.scenarios.file;
    if (c.scenarios.shortfall_weights) {
        j["scenarios"]["shortfall_weights"] = *c.scenarios.shortfall_weights;
    }
    j["solver"] = {{"clamp_shortfall_to_offload", c.solver.clamp_shortfall_to_offload},
                   {"oracle_cap", c.solver.oracle_cap},
                   {"evf_rounding", c.solver.evf_rounding},
                   {"fixed_point_scale", c.solver.fixed_point_scale}};
    if (!c.solver.fixed_shortfall.empty()) j["solver"]["fixed_shortfall"] = c.solver.fixed_shortfall;
    j["cost_structure"] = {{"offload_min", c.cost_structure.offload_min},
                           {"offload_max", c.cost_structure.offload_max},
                           {"local_cost_scale", c.cost_structure.local_cost_scale},
                           {"workers_override", c.cost_structure.workers_override}};
    j["scalability"] = {{"uav_min", c.scalability.uav_min},
                        {"uav_max", c.scalability.uav_max},
                        {"workers_override", c.scalability.workers_override},
                        {"kink_multiple", c.scalability.kink_multiple}};
    j["evf_compare"] = {{"multiplier_min", c.evf_compare.multiplier_min},
                        {"multiplier_max", c.evf_compare.multiplier_max},
                        {"points", c.evf_compare.points},
                        {"workers_override", c.evf_compare.workers_override}};
    j["monte_carlo"] = {{"trials", c.monte_carlo.trials}, {"seed", c.monte_carlo.seed}};
    j["output"] = {{"directory", c.output.directory}, {"stamp", c.output.stamp}};
    return j;
}

inline std::uint64_t fnv1a64(const std::string& s) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char ch : s) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    return h;
}

/// Hash of the semantic configuration. The output section (directory,
/// stamping) cannot change any computed value and is excluded, so reports
/// written to different places from the same setup compare equal.
inline std::string config_hash(const RunConfig& c) {
    nlohmann::json j = config_to_json(c);
    j.erase("output");
    const std::uint64_t h = fnv1a64(j.dump());
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace uavplan
