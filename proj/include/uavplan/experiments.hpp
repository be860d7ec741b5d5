#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "uavplan/errors.hpp"
#include "uavplan/instance.hpp"
#include "uavplan/rng.hpp"
#include "uavplan/scenario.hpp"
#include "uavplan/solver.hpp"

namespace uavplan {

struct Topology {
    std::vector<std::array<double, 2>> uav_positions;
    std::vector<std::array<double, 2>> bs_positions;
    double field_size = 1000.0;
    double grid_cell = 25.0;
    std::uint64_t seed = 0;
};

/// Places UAV charging stations and base stations on distinct grid cells of a
/// square field, uniformly at random but fully determined by the seed.
inline Topology generate_topology(std::int64_t uav_count, std::int64_t bs_count, double field_size,
                                  double grid_cell, std::uint64_t seed) {
    if (uav_count < 1 || bs_count < 1) throw Error(Errc::validation, "need at least one UAV and BS");
    if (!(field_size > 0.0) || !(grid_cell > 0.0)) {
        throw Error(Errc::validation, "field and grid sizes must be positive");
    }
    const std::int64_t cells_per_axis = static_cast<std::int64_t>(field_size / grid_cell);
    const std::int64_t cells = cells_per_axis * cells_per_axis;
    const std::int64_t entities = uav_count + bs_count;
    if (entities > cells) {
        throw Error(Errc::placement, "cannot place " + std::to_string(entities) +
                                         " entities on " + std::to_string(cells) + " grid cells");
    }
    // partial Fisher-Yates over cell indices; draws are seed-deterministic
    std::vector<std::int64_t> pool(static_cast<std::size_t>(cells));
    for (std::int64_t i = 0; i < cells; ++i) pool[static_cast<std::size_t>(i)] = i;
    Rng rng(seed);
    Topology topo;
    topo.field_size = field_size;
    topo.grid_cell = grid_cell;
    topo.seed = seed;
    for (std::int64_t i = 0; i < entities; ++i) {
        const std::int64_t j =
            i + static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(cells - i)));
        std::swap(pool[static_cast<std::size_t>(i)], pool[static_cast<std::size_t>(j)]);
        const std::int64_t cell = pool[static_cast<std::size_t>(i)];
        const std::array<double, 2> pos = {
            static_cast<double>(cell % cells_per_axis) * grid_cell,
            static_cast<double>(cell / cells_per_axis) * grid_cell,
        };
        if (i < uav_count) {
            topo.uav_positions.push_back(pos);
        } else {
            topo.bs_positions.push_back(pos);
        }
    }
    return topo;
}

/// Generic sweep output: one row per sweep point plus free-form header notes.
struct SweepResult {
    std::string name;
    std::vector<std::string> columns;       // first column is the sweep variable
    std::vector<std::vector<double>> rows;
    std::vector<std::string> plot_series;   // columns echoed into the plot file
    std::vector<std::string> notes;         // extra "key: value" header lines
};

namespace detail {

inline std::string fmt_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace detail

/// Marginal distribution of the first uav_count components. Scenarios mapping
/// to the same projected pattern are merged; order follows first occurrence.
inline ScenarioSet project_prefix(const ScenarioSet& set, std::int64_t uav_count) {
    if (uav_count < 1 || uav_count > set.uav_count) {
        throw Error(Errc::dimension_mismatch, "cannot project scenario set to " +
                                                  std::to_string(uav_count) + " UAVs");
    }
    ScenarioSet out;
    out.uav_count = uav_count;
    for (const Scenario& s : set.scenarios) {
        Scenario p;
        p.shortfall_flags.assign(s.shortfall_flags.begin(),
                                 s.shortfall_flags.begin() + uav_count);
        p.shortfall_counts.assign(s.shortfall_counts.begin(),
                                  s.shortfall_counts.begin() + uav_count);
        p.probability = s.probability;
        bool merged = false;
        for (Scenario& existing : out.scenarios) {
            if (existing.shortfall_flags == p.shortfall_flags &&
                existing.shortfall_counts == p.shortfall_counts) {
                existing.probability += p.probability;
                merged = true;
                break;
            }
        }
        if (!merged) out.scenarios.push_back(std::move(p));
    }
    return out;
}

// ---------------------------------------------------------------------------
// Cost structure study: one UAV, one BS, local computation priced out; sweep
// the forced offload count and watch stage-1 cost rise while expected
// stage-2 cost falls.
// ---------------------------------------------------------------------------

struct CostStructureResult {
    SweepResult sweep;
    SolveReport sip;
};

inline CostStructureResult run_cost_structure_sweep(const PlanningProblem& prob,
                                                    const ScenarioSet& set,
                                                    std::int64_t offload_min,
                                                    std::int64_t offload_max,
                                                    const SolverOptions& opts = {}) {
    if (prob.uav_count() != 1 || prob.bs_count() != 1) {
        throw Error(Errc::validation, "cost-structure study expects exactly one UAV and one BS");
    }
    if (offload_min < prob.recovery_threshold) {
        throw Error(Errc::infeasible_point,
                    "offload sweep must start at the recovery threshold k=" +
                        std::to_string(prob.recovery_threshold));
    }
    if (offload_max < offload_min) {
        throw Error(Errc::validation, "empty offload sweep range");
    }
    CostStructureResult result;
    result.sweep.name = "cost_structure";
    result.sweep.columns = {"offload_copies", "stage1_cost", "expected_stage2_cost", "total_cost"};
    result.sweep.plot_series = {"stage1_cost", "expected_stage2_cost", "total_cost"};
    for (std::int64_t o = offload_min; o <= offload_max; ++o) {
        const Allocation alloc =
            make_allocation({0}, {{o}}, set, prob.recovery_threshold, opts.clamp_shortfall_to_offload);
        const SolveReport rep = evaluate_total_cost(alloc, prob, set, opts);
        result.sweep.rows.push_back({static_cast<double>(o), rep.stage1_cost,
                                     rep.expected_recourse_cost, rep.total_cost});
    }
    result.sip = solve_sip(prob, set, opts);
    result.sweep.notes.push_back("sip_total_cost: " + detail::fmt_double(result.sip.total_cost));
    result.sweep.notes.push_back("sip_offload_copies: " +
                                 std::to_string(result.sip.allocation.offload_total(0)));
    return result;
}

// ---------------------------------------------------------------------------
// Scalability study: grow the network one UAV at a time, solve exactly, and
// flag the point where aggregate offload demand outgrows worker capacity.
// ---------------------------------------------------------------------------

/// Second-difference kink rule: a point fires when the second difference of
/// the total-cost series exceeds `multiple` times the median absolute second
/// difference (plus a tiny numerical floor). Returns the series index where
/// the break first takes effect. Kinks at the first or last point are
/// invisible to a second difference and cannot be detected.
inline std::optional<std::size_t> detect_kink(const std::vector<double>& totals, double multiple) {
    if (totals.size() < 3) return std::nullopt;
    std::vector<double> sd(totals.size() - 2);
    double max_abs = 0.0;
    for (double v : totals) max_abs = std::max(max_abs, std::abs(v));
    for (std::size_t i = 1; i + 1 < totals.size(); ++i) {
        sd[i - 1] = totals[i + 1] - 2.0 * totals[i] + totals[i - 1];
    }
    std::vector<double> mags(sd.size());
    for (std::size_t i = 0; i < sd.size(); ++i) mags[i] = std::abs(sd[i]);
    std::sort(mags.begin(), mags.end());
    const double median = mags.size() % 2 == 1
                              ? mags[mags.size() / 2]
                              : 0.5 * (mags[mags.size() / 2 - 1] + mags[mags.size() / 2]);
    const double threshold = multiple * std::max(median, 1e-12 * max_abs);
    for (std::size_t i = 0; i < sd.size(); ++i) {
        if (sd[i] > threshold) return i + 2; // slope break applies from the next point on
    }
    return std::nullopt;
}

struct ScalabilityResult {
    SweepResult sweep;
    std::optional<std::int64_t> kink_uav_count; // Y at which the detector fired
    std::int64_t capacity_total = 0;
};

inline ScalabilityResult run_scalability_sweep(const NetworkInstance& base,
                                               const ScenarioSet& base_set, std::int64_t y_min,
                                               std::int64_t y_max, double kink_multiple,
                                               const SolverOptions& opts = {}) {
    if (y_min < 1 || y_max > static_cast<std::int64_t>(base.uavs.size()) || y_min > y_max) {
        throw Error(Errc::validation, "UAV sweep range outside the base instance");
    }
    ScalabilityResult result;
    result.sweep.name = "scalability";
    result.sweep.columns = {"uav_count",      "total_cost",     "stage1_cost",
                            "recourse_cost",  "offload_demand", "offload_used",
                            "capacity_total", "nodes_explored"};
    result.sweep.plot_series = {"total_cost"};
    for (std::int64_t cap : make_problem(base).worker_caps) result.capacity_total += cap;
    std::vector<double> totals;
    std::vector<std::int64_t> demands;
    for (std::int64_t y = y_min; y <= y_max; ++y) {
        const NetworkInstance inst = truncate_uavs(base, static_cast<std::size_t>(y));
        const PlanningProblem prob = make_problem(inst);
        const ScenarioSet set = project_prefix(base_set, y);
        const SolveReport rep = solve_sip(prob, set, opts);
        // capacity-relaxed demand: what the network would offload with
        // unlimited workers
        PlanningProblem relaxed = prob;
        const std::int64_t big = y * (prob.recovery_threshold + set.max_shortfall());
        for (std::int64_t& cap : relaxed.worker_caps) cap = big;
        const SolveReport relaxed_rep = solve_sip(relaxed, set, opts);
        std::int64_t demand = 0, used = 0;
        for (std::size_t u = 0; u < relaxed_rep.allocation.local.size(); ++u) {
            demand += relaxed_rep.allocation.offload_total(u);
        }
        for (std::size_t u = 0; u < rep.allocation.local.size(); ++u) {
            used += rep.allocation.offload_total(u);
        }
        totals.push_back(rep.total_cost);
        demands.push_back(demand);
        result.sweep.rows.push_back({static_cast<double>(y), rep.total_cost, rep.stage1_cost,
                                     rep.expected_recourse_cost, static_cast<double>(demand),
                                     static_cast<double>(used),
                                     static_cast<double>(result.capacity_total),
                                     static_cast<double>(rep.nodes_explored)});
    }
    if (const auto idx = detect_kink(totals, kink_multiple)) {
        result.kink_uav_count = y_min + static_cast<std::int64_t>(*idx);
        result.sweep.notes.push_back("kink_uav_count: " + std::to_string(*result.kink_uav_count));
    } else {
        result.sweep.notes.push_back("kink_uav_count: none");
    }
    return result;
}

// ---------------------------------------------------------------------------
// EVF comparison: sweep a multiplier on the correction price and record the
// exact stochastic optimum next to the expected-value baseline.
// ---------------------------------------------------------------------------

struct EvfCompareResult {
    SweepResult sweep;
};

inline EvfCompareResult run_evf_comparison_sweep(const PlanningProblem& prob,
                                                 const ScenarioSet& set,
                                                 const std::vector<double>& multipliers,
                                                 const SolverOptions& opts = {}) {
    if (multipliers.empty()) throw Error(Errc::validation, "empty multiplier sweep");
    EvfCompareResult result;
    result.sweep.name = "evf_compare";
    result.sweep.columns = {"correction_multiplier", "sip_total", "evf_total", "gap",
                            "sip_stage1",            "sip_recourse", "evf_stage1", "evf_recourse"};
    result.sweep.plot_series = {"sip_total", "evf_total"};
    for (double mult : multipliers) {
        if (mult < 0.0) throw Error(Errc::validation, "correction multiplier must be nonnegative");
        PlanningProblem scaled = prob;
        for (double& c : scaled.correction_cost) c *= mult;
        const SolveReport sip = solve_sip(scaled, set, opts);
        const SolveReport evf = solve_evf(scaled, set, opts);
        result.sweep.rows.push_back({mult, sip.total_cost, evf.total_cost,
                                     evf.total_cost - sip.total_cost, sip.stage1_cost,
                                     sip.expected_recourse_cost, evf.stage1_cost,
                                     evf.expected_recourse_cost});
    }
    return result;
}

// ---------------------------------------------------------------------------
// Monte-Carlo cross-validation of the analytic expected recourse cost.
// ---------------------------------------------------------------------------

struct MonteCarloResult {
    double analytic_recourse = 0.0;
    double empirical_mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t seed = 0;
};

inline MonteCarloResult monte_carlo_validate(const Allocation& alloc, const PlanningProblem& prob,
                                             const ScenarioSet& scenario_set, std::uint64_t trials,
                                             std::uint64_t seed, const SolverOptions& opts = {}) {
    if (trials == 0) throw Error(Errc::validation, "need at least one trial");
    const ScenarioSet set = validate(scenario_set, prob.recovery_threshold);
    const SolveReport analytic = evaluate_total_cost(alloc, prob, set, opts);
    // realized recourse cost per scenario, precomputed once
    std::vector<double> realized(set.scenarios.size(), 0.0);
    for (std::size_t w = 0; w < set.scenarios.size(); ++w) {
        const Scenario& s = set.scenarios[w];
        double cost = 0.0;
        for (std::size_t y = 0; y < prob.uav_count(); ++y) {
            if (s.shortfall_flags[y]) {
                cost += static_cast<double>(alloc.recourse[y][w]) * prob.correction_cost[y];
            }
        }
        realized[w] = cost;
    }
    Rng rng(seed);
    double sum = 0.0, sum_sq = 0.0;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const double x = realized[sample_index(set, rng)];
        sum += x;
        sum_sq += x * x;
    }
    MonteCarloResult r;
    r.trials = trials;
    r.seed = seed;
    r.analytic_recourse = analytic.expected_recourse_cost;
    r.empirical_mean = sum / static_cast<double>(trials);
    const double n = static_cast<double>(trials);
    const double var = trials > 1 ? std::max(0.0, (sum_sq - n * r.empirical_mean * r.empirical_mean) / (n - 1.0)) : 0.0;
    r.std_error = std::sqrt(var / n);
    return r;
}

inline void write_monte_carlo_file(const MonteCarloResult& r, const std::string& out_dir,
                                   const std::string& config_hash, const std::string& version) {
    const std::string path = out_dir + "/monte_carlo_results.csv";
    std::ofstream out(path);
    if (!out) throw Error(Errc::validation, "cannot write " + path);
    out << "# monte_carlo results\n";
    out << "# artifact_version: " << version << "\n";
    out << "# config_hash: " << config_hash << "\n";
    out << "# columns: analytic_recourse,empirical_mean,std_error,abs_error,trials,seed\n";
    out << "analytic_recourse,empirical_mean,std_error,abs_error,trials,seed\n";
    out << detail::fmt_double(r.analytic_recourse) << ',' << detail::fmt_double(r.empirical_mean)
        << ',' << detail::fmt_double(r.std_error) << ','
        << detail::fmt_double(std::abs(r.empirical_mean - r.analytic_recourse)) << ',' << r.trials
        << ',' << r.seed << "\n";
}

// ---------------------------------------------------------------------------
// File output: one delimited result file per sweep with documented columns,
// plus a plot-data file with the x column and the selected series.
// ---------------------------------------------------------------------------

inline void write_sweep_files(const SweepResult& sweep, const std::string& out_dir,
                              const std::string& config_hash, const std::string& version) {
    const std::string results_path = out_dir + "/" + sweep.name + "_results.csv";
    std::ofstream out(results_path);
    if (!out) throw Error(Errc::validation, "cannot write " + results_path);
    out << "# " << sweep.name << " sweep results\n";
    out << "# artifact_version: " << version << "\n";
    out << "# config_hash: " << config_hash << "\n";
    for (const std::string& note : sweep.notes) out << "# " << note << "\n";
    out << "# columns: ";
    for (std::size_t i = 0; i < sweep.columns.size(); ++i) {
        out << (i ? "," : "") << sweep.columns[i];
    }
    out << "\n";
    for (std::size_t i = 0; i < sweep.columns.size(); ++i) out << (i ? "," : "") << sweep.columns[i];
    out << "\n";
    for (const auto& row : sweep.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            out << (i ? "," : "") << detail::fmt_double(row[i]);
        }
        out << "\n";
    }
    out.close();

    const std::string plot_path = out_dir + "/" + sweep.name + "_plot.csv";
    std::ofstream plot(plot_path);
    if (!plot) throw Error(Errc::validation, "cannot write " + plot_path);
    std::vector<std::size_t> idx{0};
    for (const std::string& series : sweep.plot_series) {
        for (std::size_t i = 0; i < sweep.columns.size(); ++i) {
            if (sweep.columns[i] == series) idx.push_back(i);
        }
    }
    plot << "# " << sweep.name << " plot data\n";
    plot << "# config_hash: " << config_hash << "\n";
    for (std::size_t j = 0; j < idx.size(); ++j) plot << (j ? "," : "") << sweep.columns[idx[j]];
    plot << "\n";
    for (const auto& row : sweep.rows) {
        for (std::size_t j = 0; j < idx.size(); ++j) {
            plot << (j ? "," : "") << detail::fmt_double(row[idx[j]]);
        }
        plot << "\n";
    }
}

} // namespace uavplan
