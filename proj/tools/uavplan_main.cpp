// Command-line front end: configuration in, solve reports and sweep files out.
// All numeric work happens in the library; this file only wires flags to
// modules and serializes results.

#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "uavplan/config.hpp"
#include "uavplan/experiments.hpp"
#include "uavplan/harness.hpp"
#include "uavplan/report.hpp"
#include "uavplan/scenario.hpp"
#include "uavplan/version.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::string scenario_file;
    std::optional<std::uint64_t> seed;
    std::optional<double> bits_per_symbol;
    std::optional<std::int64_t> shortfall;
    bool clamp_shortfall = false;
    bool weight_is_force = false;
    bool stamp = false;
};

void add_common_flags(CLI::App& cmd, CommonFlags& flags) {
    cmd.add_option("--config", flags.config_path, "JSON configuration file");
    cmd.add_option("--out", flags.out_dir, "output directory (overrides config)");
    cmd.add_option("--seed", flags.seed, "override topology and sampling seeds");
    cmd.add_option("--scenario-file", flags.scenario_file, "scenario file (switches source to file)");
    cmd.add_option("--bits-per-symbol", flags.bits_per_symbol, "bits per coded symbol");
    cmd.add_flag("--clamp-shortfall", flags.clamp_shortfall,
                 "clamp shortfalls to the number of offloaded copies");
    cmd.add_flag("--weight-is-force", flags.weight_is_force,
                 "treat the configured UAV weight as newtons, not kilograms");
    cmd.add_flag("--stamp", flags.stamp, "embed a wall-clock timestamp in reports");
}

uavplan::RunConfig effective_config(const CommonFlags& flags) {
    uavplan::RunConfig c =
        flags.config_path.empty() ? uavplan::RunConfig{} : uavplan::load_config(flags.config_path);
    if (flags.seed) {
        c.topology.seed = *flags.seed;
        c.monte_carlo.seed = *flags.seed;
    }
    if (!flags.scenario_file.empty()) {
        c.scenarios.source = "file";
        c.scenarios.file = flags.scenario_file;
    }
    if (flags.bits_per_symbol) c.coding.bits_per_symbol = *flags.bits_per_symbol;
    if (flags.clamp_shortfall) c.solver.clamp_shortfall_to_offload = true;
    if (flags.weight_is_force) c.rotorcraft.weight_is_force = true;
    if (flags.shortfall) c.solver.fixed_shortfall = {*flags.shortfall};
    if (!flags.out_dir.empty()) c.output.directory = flags.out_dir;
    if (flags.stamp) c.output.stamp = true;
    uavplan::validate_config(c);
    return c;
}

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    char buf[32];
    std::tm tm_utc{};
    gmtime_r(&now, &tm_utc);
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
    return buf;
}

int run_solve_cmd(const CommonFlags& flags, const std::string& mode) {
    const uavplan::RunConfig cfg = effective_config(flags);
    const uavplan::SolveReport report = uavplan::run_solve(cfg, mode);
    uavplan::SolveReportRecord record;
    record.report = report;
    record.config_hash = uavplan::config_hash(cfg);
    record.seed = cfg.topology.seed;
    record.scenario_count =
        report.allocation.recourse.empty() ? 0
                                           : static_cast<std::int64_t>(report.allocation.recourse[0].size());
    if (cfg.output.stamp) record.timestamp = utc_timestamp();
    std::filesystem::create_directories(cfg.output.directory);
    {
        std::ofstream out(cfg.output.directory + "/solve_report.csv");
        if (!out) throw uavplan::Error(uavplan::Errc::validation, "cannot write solve_report.csv");
        uavplan::write_report_record(record, out);
    }
    const std::string summary = uavplan::summary_text(record) + uavplan::diagnostics_text(cfg);
    {
        std::ofstream out(cfg.output.directory + "/solve_summary.txt");
        out << summary;
    }
    std::cout << summary;
    return 0;
}

int run_experiment_cmd(const CommonFlags& flags, const std::string& which) {
    const uavplan::RunConfig cfg = effective_config(flags);
    const std::string hash = uavplan::config_hash(cfg);
    std::filesystem::create_directories(cfg.output.directory);
    if (which == "cost-structure") {
        const uavplan::CostStructureResult r = uavplan::run_experiment_cost_structure(cfg);
        uavplan::write_sweep_files(r.sweep, cfg.output.directory, hash, uavplan::kArtifactVersion);
        std::cout << "cost-structure sweep: " << r.sweep.rows.size() << " points, optimum total "
                  << r.sip.total_cost << " at " << r.sip.allocation.offload_total(0)
                  << " offloaded copies\n";
    } else if (which == "scalability") {
        const uavplan::ScalabilityResult r = uavplan::run_experiment_scalability(cfg);
        uavplan::write_sweep_files(r.sweep, cfg.output.directory, hash, uavplan::kArtifactVersion);
        std::cout << "scalability sweep: " << r.sweep.rows.size() << " points, kink at "
                  << (r.kink_uav_count ? std::to_string(*r.kink_uav_count) : std::string("none"))
                  << " (capacity " << r.capacity_total << ")\n";
    } else if (which == "evf-compare") {
        const uavplan::EvfCompareResult r = uavplan::run_experiment_evf_compare(cfg);
        uavplan::write_sweep_files(r.sweep, cfg.output.directory, hash, uavplan::kArtifactVersion);
        std::cout << "evf-compare sweep: " << r.sweep.rows.size() << " points\n";
    } else if (which == "monte-carlo") {
        const uavplan::MonteCarloResult r = uavplan::run_experiment_monte_carlo(cfg);
        uavplan::write_monte_carlo_file(r, cfg.output.directory, hash, uavplan::kArtifactVersion);
        std::cout << "monte-carlo: analytic " << r.analytic_recourse << ", empirical "
                  << r.empirical_mean << ", std error " << r.std_error << ", trials " << r.trials
                  << "\n";
    } else {
        throw uavplan::Error(uavplan::Errc::validation, "unknown experiment: " + which);
    }
    return 0;
}

int run_validate_scenarios_cmd(const CommonFlags& flags) {
    const uavplan::RunConfig cfg = effective_config(flags);
    const std::string path =
        !flags.scenario_file.empty() ? flags.scenario_file : cfg.scenarios.file;
    if (path.empty()) {
        throw uavplan::Error(uavplan::Errc::validation, "a scenario file is required");
    }
    const uavplan::CodingParams coding = uavplan::coding_from(cfg);
    const uavplan::ScenarioSet raw = uavplan::read_scenario_file(path);
    const uavplan::ScenarioSet set = uavplan::validate(raw, coding.recovery_threshold);
    const std::vector<double> mean = uavplan::expected_shortfall(set);
    std::cout << "scenario file ok: " << set.scenarios.size() << " scenarios over "
              << set.uav_count << " UAVs (k = " << coding.recovery_threshold << ")\n";
    std::cout << "expected shortfall per UAV:";
    for (double m : mean) std::cout << ' ' << m;
    std::cout << "\n";
    return 0;
}

int run_show_config_cmd(const CommonFlags& flags) {
    const uavplan::RunConfig cfg = effective_config(flags);
    std::cout << uavplan::config_to_json(cfg).dump(2) << "\n";
    std::cout << "config_hash: " << uavplan::config_hash(cfg) << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"planner for coded matrix-multiplication offloading in UAV networks"};
    app.require_subcommand(1);

    CommonFlags flags;
    std::string mode = "sip";
    std::string experiment;

    CLI::App* solve = app.add_subcommand("solve", "compute an optimal allocation");
    add_common_flags(*solve, flags);
    solve->add_option("--mode", mode, "dip, sip, evf, or oracle")
        ->check(CLI::IsMember({"dip", "sip", "evf", "oracle"}));
    solve->add_option("--shortfall", flags.shortfall, "fixed per-UAV shortfall for dip mode");

    CLI::App* experiment_cmd = app.add_subcommand("experiment", "run a study and write sweep files");
    add_common_flags(*experiment_cmd, flags);
    experiment_cmd
        ->add_option("which", experiment, "cost-structure, scalability, evf-compare, or monte-carlo")
        ->required()
        ->check(CLI::IsMember({"cost-structure", "scalability", "evf-compare", "monte-carlo"}));

    CLI::App* validate_cmd = app.add_subcommand("validate-scenarios", "check a scenario file");
    add_common_flags(*validate_cmd, flags);

    CLI::App* show_cmd = app.add_subcommand("show-config", "print the effective configuration");
    add_common_flags(*show_cmd, flags);

    try {
        app.parse(argc, argv);
        if (solve->parsed()) return run_solve_cmd(flags, mode);
        if (experiment_cmd->parsed()) return run_experiment_cmd(flags, experiment);
        if (validate_cmd->parsed()) return run_validate_scenarios_cmd(flags);
        if (show_cmd->parsed()) return run_show_config_cmd(flags);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const uavplan::Error& e) {
        std::cerr << "error [" << uavplan::errc_name(e.code()) << "]: " << e.what() << "\n";
        return uavplan::exit_code_for(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
