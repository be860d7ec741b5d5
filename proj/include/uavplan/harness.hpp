#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "uavplan/config.hpp"
#include "uavplan/experiments.hpp"
#include "uavplan/instance.hpp"
#include "uavplan/scenario.hpp"
#include "uavplan/solver.hpp"

namespace uavplan {

inline CodingParams coding_from(const RunConfig& c) {
    if (c.coding.has_explicit_split) {
        return make_coding_params(c.coding.matrix_size, c.coding.storage_fraction,
                                  c.coding.split_s, c.coding.split_t);
    }
    const SplitMode mode =
        c.coding.split_mode == "minimize_k" ? SplitMode::minimize_k : SplitMode::paper;
    return select_split(c.coding.matrix_size, c.coding.storage_fraction, mode);
}

inline SolverOptions solver_options_from(const RunConfig& c) {
    SolverOptions o;
    o.clamp_shortfall_to_offload = c.solver.clamp_shortfall_to_offload;
    o.oracle_cap = c.solver.oracle_cap;
    o.evf_rounding =
        c.solver.evf_rounding == "ceiling" ? EvfRounding::ceiling : EvfRounding::half_up;
    o.fixed_point_scale = c.solver.fixed_point_scale;
    return o;
}

inline Topology topology_from(const RunConfig& c) {
    if (c.topology.uav_positions && c.topology.bs_positions) {
        Topology t;
        t.uav_positions = *c.topology.uav_positions;
        t.bs_positions = *c.topology.bs_positions;
        t.field_size = c.topology.field_size_m;
        t.grid_cell = c.topology.grid_cell_m;
        t.seed = c.topology.seed;
        return t;
    }
    if (c.topology.uav_positions || c.topology.bs_positions) {
        throw Error(Errc::validation,
                    "topology positions must be given for both UAVs and BSs, or neither");
    }
    return generate_topology(c.topology.uav_count, c.topology.bs_count, c.topology.field_size_m,
                             c.topology.grid_cell_m, c.topology.seed);
}

/// Weight is configured in kilograms and converted to newtons with g = 9.8
/// unless the config says the raw value already is a force.
inline RotorcraftParams rotorcraft_from(const RunConfig& c) {
    RotorcraftParams r;
    r.weight_n = c.rotorcraft.weight_is_force ? c.rotorcraft.weight_kg
                                              : c.rotorcraft.weight_kg * 9.8;
    r.air_density = c.rotorcraft.air_density;
    r.rotor_radius = c.rotorcraft.rotor_radius_m;
    r.disc_area = c.rotorcraft.disc_area_m2;
    r.blade_angular_velocity = c.rotorcraft.blade_angular_velocity;
    r.tip_speed = c.rotorcraft.tip_speed;
    r.rotor_solidity = c.rotorcraft.rotor_solidity;
    r.fuselage_drag_ratio = c.rotorcraft.fuselage_drag_ratio;
    r.induced_velocity_hover = c.rotorcraft.induced_velocity_hover;
    r.profile_drag_coeff = c.rotorcraft.profile_drag_coeff;
    r.induced_power_factor = c.rotorcraft.induced_power_factor;
    return r;
}

inline NetworkInstance make_instance(const RunConfig& c) {
    const Topology topo = topology_from(c);
    NetworkInstance inst;
    inst.coding = coding_from(c);
    inst.bits_per_symbol = c.coding.bits_per_symbol;
    inst.radio.noise_power_w = dbm_to_watts(c.radio.noise_dbm);
    inst.radio.reference_gain = db_to_linear(c.radio.beta0_db);
    inst.coefficients.alpha_time = c.costs.alpha1;
    inst.coefficients.alpha_energy = c.costs.alpha2;
    const RotorcraftParams rotor = rotorcraft_from(c);
    for (const auto& pos : topo.uav_positions) {
        UavSpec u;
        u.position = {pos[0], pos[1], c.uav.height_m};
        u.cpu_hz = c.uav.cpu_hz;
        u.cycles_per_bit = c.uav.cycles_per_bit;
        u.bandwidth_hz = c.uav.bandwidth_hz;
        u.tx_power_w = c.uav.tx_power_w;
        u.rx_power_w = c.uav.rx_power_w;
        u.rotorcraft = rotor;
        inst.uavs.push_back(u);
    }
    for (const auto& pos : topo.bs_positions) {
        BsSpec b;
        b.position = {pos[0], pos[1], c.bs.height_m};
        b.cpu_hz = c.bs.cpu_hz;
        b.worker_count = c.bs.workers;
        b.service_cost = c.bs.service_cost;
        inst.bss.push_back(b);
    }
    return inst;
}

/// Scenario set for the given UAV count: generated from the independent
/// failure model, or read from the configured file (projected down when the
/// file covers more UAVs than needed).
inline ScenarioSet scenario_set_from(const RunConfig& c, std::int64_t k, std::int64_t uav_count) {
    if (c.scenarios.source == "file") {
        ScenarioSet set = read_scenario_file(c.scenarios.file);
        if (set.uav_count < uav_count) {
            throw Error(Errc::dimension_mismatch,
                        "scenario file covers " + std::to_string(set.uav_count) +
                            " UAVs, instance needs " + std::to_string(uav_count));
        }
        if (set.uav_count > uav_count) set = project_prefix(set, uav_count);
        return validate(set, k);
    }
    ShortfallDistribution dist =
        c.scenarios.shortfall_weights
            ? ShortfallDistribution::from_weights(*c.scenarios.shortfall_weights)
            : ShortfallDistribution::point_mass(c.scenarios.shortfall_count);
    GenerationMode mode = GenerationMode::enumerate;
    if (c.scenarios.generation == "expand") mode = GenerationMode::expand;
    if (c.scenarios.generation == "sample") mode = GenerationMode::sample;
    return validate(
        generate_independent(uav_count, c.scenarios.failure_prob, dist, mode,
                             c.scenarios.enumeration_cap, c.scenarios.sample_seed),
        k);
}

inline SolveReport run_solve(const RunConfig& c, const std::string& mode) {
    const NetworkInstance inst = make_instance(c);
    const PlanningProblem prob = make_problem(inst);
    const SolverOptions opts = solver_options_from(c);
    if (mode == "dip") {
        std::vector<std::int64_t> shortfall = c.solver.fixed_shortfall;
        if (shortfall.empty()) {
            shortfall.assign(inst.uavs.size(), 0);
        } else if (shortfall.size() == 1) {
            shortfall.assign(inst.uavs.size(), shortfall[0]);
        }
        return solve_dip(prob, shortfall, opts);
    }
    const ScenarioSet set =
        scenario_set_from(c, prob.recovery_threshold, static_cast<std::int64_t>(inst.uavs.size()));
    if (mode == "sip") return solve_sip(prob, set, opts);
    if (mode == "evf") return solve_evf(prob, set, opts);
    if (mode == "oracle") return brute_force_oracle(prob, set, opts);
    throw Error(Errc::validation, "unknown solve mode: " + mode);
}

/// The cost-structure study's primitive network: the first UAV and first BS,
/// with the first-stage local option priced out and the worker pool
/// overridden. Corrections keep their physical price; the second stage is the
/// point of the study.
inline std::pair<PlanningProblem, ScenarioSet> cost_structure_inputs(const RunConfig& c) {
    NetworkInstance inst = make_instance(c);
    inst.uavs.resize(1);
    inst.bss.resize(1);
    inst.bss[0].worker_count = c.cost_structure.workers_override;
    PlanningProblem prob = make_problem(inst);
    for (double& v : prob.local_cost) v *= c.cost_structure.local_cost_scale;
    const ScenarioSet set = scenario_set_from(c, prob.recovery_threshold, 1);
    return {std::move(prob), set};
}

inline CostStructureResult run_experiment_cost_structure(const RunConfig& c) {
    auto [prob, set] = cost_structure_inputs(c);
    CostStructureResult r = run_cost_structure_sweep(prob, set, c.cost_structure.offload_min,
                                                     c.cost_structure.offload_max,
                                                     solver_options_from(c));
    r.sweep.notes.push_back("seed: " + std::to_string(c.topology.seed));
    return r;
}

inline ScalabilityResult run_experiment_scalability(const RunConfig& c) {
    NetworkInstance inst = make_instance(c);
    if (c.scalability.workers_override > 0) {
        for (BsSpec& b : inst.bss) b.worker_count = c.scalability.workers_override;
    }
    const std::int64_t y_max = c.scalability.uav_max > 0
                                   ? c.scalability.uav_max
                                   : static_cast<std::int64_t>(inst.uavs.size());
    const ScenarioSet base_set = scenario_set_from(c, inst.coding.recovery_threshold,
                                                   static_cast<std::int64_t>(inst.uavs.size()));
    ScalabilityResult r = run_scalability_sweep(inst, base_set, c.scalability.uav_min, y_max,
                                                c.scalability.kink_multiple, solver_options_from(c));
    r.sweep.notes.push_back("seed: " + std::to_string(c.topology.seed));
    return r;
}

inline EvfCompareResult run_experiment_evf_compare(const RunConfig& c) {
    NetworkInstance inst = make_instance(c);
    for (BsSpec& b : inst.bss) b.worker_count = c.evf_compare.workers_override;
    const PlanningProblem prob = make_problem(inst);
    const ScenarioSet set = scenario_set_from(c, prob.recovery_threshold,
                                              static_cast<std::int64_t>(inst.uavs.size()));
    std::vector<double> multipliers;
    const std::int64_t n = c.evf_compare.points;
    for (std::int64_t i = 0; i < n; ++i) {
        const double frac = n == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(n - 1);
        multipliers.push_back(c.evf_compare.multiplier_min +
                              frac * (c.evf_compare.multiplier_max - c.evf_compare.multiplier_min));
    }
    EvfCompareResult r = run_evf_comparison_sweep(prob, set, multipliers, solver_options_from(c));
    r.sweep.notes.push_back("seed: " + std::to_string(c.topology.seed));
    return r;
}

/// Diagnostic constants that are reported but deliberately kept out of every
/// objective: the worst-case wait for computing all copies alone, and the
/// hover cost over that wait, which is common to all allocations.
inline std::string diagnostics_text(const RunConfig& c) {
    const NetworkInstance inst = make_instance(c);
    const UavSpec& u = inst.uavs.front();
    char buf[160];
    std::string out = "diagnostics:\n";
    std::snprintf(buf, sizeof buf, "  recovery threshold k: %lld\n",
                  static_cast<long long>(inst.coding.recovery_threshold));
    out += buf;
    std::snprintf(buf, sizeof buf, "  threshold wait (all copies computed alone): %.6f s\n",
                  threshold_time(u, inst.coding, inst.bits_per_symbol));
    out += buf;
    std::snprintf(buf, sizeof buf,
                  "  hover cost over the threshold wait (not in objectives): %.6f\n",
                  hover_threshold_cost(u, inst.coding, inst.coefficients, inst.bits_per_symbol));
    out += buf;
    return out;
}

inline MonteCarloResult run_experiment_monte_carlo(const RunConfig& c) {
    const NetworkInstance inst = make_instance(c);
    const PlanningProblem prob = make_problem(inst);
    const SolverOptions opts = solver_options_from(c);
    const ScenarioSet set = scenario_set_from(c, prob.recovery_threshold,
                                              static_cast<std::int64_t>(inst.uavs.size()));
    const SolveReport sip = solve_sip(prob, set, opts);
    return monte_carlo_validate(sip.allocation, prob, set, c.monte_carlo.trials,
                                c.monte_carlo.seed, opts);
}

} // namespace uavplan
