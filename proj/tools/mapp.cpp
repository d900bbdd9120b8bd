// Command-line front end: plan one instance end to end, generate synthetic
// urban instances, run benchmark batches into CSV, re-validate trajectory
// dumps, and solve tiny instances exactly for cross-checking.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mapp/bench.hpp"
#include "mapp/map_io.hpp"
#include "mapp/progression.hpp"
#include "mapp/scenario_gen.hpp"
#include "mapp/slidable.hpp"
#include "mapp/validator.hpp"

using namespace mapp;

namespace {

// Reassigns progression priorities (rank 0 = highest). Planning is
// priority-independent, so plans computed beforehand stay valid.
void apply_priority_order(Instance& instance, const PlanAllResult& plans,
                          const std::string& order) {
    if (order == "scenario") return;
    std::vector<int> ids(instance.agents.size());
    std::iota(ids.begin(), ids.end(), 0);
    const auto length_of = [&](int id) {
        const auto& path = plans.per_agent[id].path;
        return path.has_value() ? static_cast<int>(path->cells.size()) : 0;
    };
    if (order == "longest-path") {
        std::stable_sort(ids.begin(), ids.end(),
                         [&](int a, int b) { return length_of(a) > length_of(b); });
    } else if (order == "shortest-path") {
        std::stable_sort(ids.begin(), ids.end(),
                         [&](int a, int b) { return length_of(a) < length_of(b); });
    }  // "id" keeps the identity permutation
    for (size_t rank = 0; rank < ids.size(); ++rank) {
        instance.agents[ids[rank]].priority = static_cast<int>(rank);
    }
}

struct PlanArgs {
    std::string map_path;
    std::string scen_path;
    std::string out_path;
    std::string priority_order = "scenario";
    int budget = 0;  // <= 0: sized from the longest plan
    int omega_radius = -1;
};

int cmd_plan(const PlanArgs& args) {
    Instance instance = load_instance(args.map_path, args.scen_path);

    BenchOptions options;
    options.step_budget = args.budget;
    options.search.omega_radius = args.omega_radius;
    if (args.priority_order != "scenario") {
        apply_priority_order(instance, plan_all(instance, options.search),
                             args.priority_order);
    }
    const InstanceReport report = run_instance(instance, options);

    if (!args.out_path.empty()) {
        write_file(args.out_path, save_trajectories(report.artifacts.run));
    }

    const RunMetrics& m = report.metrics;
    std::cout.setf(std::ios::fixed);
    std::cout.precision(6);
    std::cout << "status " << to_string(report.outcome) << '\n'
              << "agents " << instance.agents.size() << '\n'
              << "slidable " << report.artifacts.plans.slidable_count << '\n'
              << "timesteps " << report.artifacts.run.timesteps << '\n'
              << "time_s " << m.time_seconds << '\n'
              << "plan_time_s " << m.plan_seconds << '\n'
              << "progress_time_s " << m.progress_seconds << '\n'
              << "memory_nodes " << m.memory_nodes << '\n'
              << "path_length " << m.path_length_avg << '\n'
              << "conflicts " << m.conflicts << '\n'
              << "conflict_agents " << m.conflict_agents << '\n'
              << "success_pct " << m.success_pct << '\n';

    if (report.outcome == RunOutcome::invalid) {
        std::cerr << violation_report(report.artifacts.violations);
        return 2;
    }
    return 0;
}

struct GenArgs {
    GenConfig cfg;
    std::string type_name = "type1";
    std::string map_out;
    std::string scen_out;
};

int cmd_gen(GenArgs& args) {
    args.cfg.instance_type = instance_type_from(args.type_name);
    const Grid grid = gen_urban_map(args.cfg);
    const Instance instance = gen_instance(grid, args.cfg);
    write_file(args.map_out, save_map(instance.grid));
    write_file(args.scen_out, save_scenario(instance.agents, config_comments(args.cfg)));
    return 0;
}

struct BenchArgs {
    std::string config_path;
    std::string out_path;
    int jobs = 1;
};

int cmd_bench(const BenchArgs& args) {
    std::ifstream in(args.config_path);
    if (!in) {
        std::cerr << "error: cannot open " << args.config_path << '\n';
        return 1;
    }
    const auto items = parse_batch_config(in);
    const BatchReport report = run_batch(items, args.jobs);

    for (const BatchRow& row : report.rows) {
        if (row.outcome == RunOutcome::error) {
            std::cerr << row.label << ": " << row.note << '\n';
        }
    }
    const std::string csv = report_csv(report);
    if (args.out_path.empty()) {
        std::cout << csv;
    } else {
        write_file(args.out_path, csv);
    }
    return 0;
}

struct ValidateArgs {
    std::string map_path;
    std::string traj_path;
    std::string scen_path;  // optional: enables true endpoint checks
};

int cmd_validate(const ValidateArgs& args) {
    const Grid grid = load_map_file(args.map_path);
    std::istringstream traj(read_file(args.traj_path));
    const auto records = load_trajectories(traj);

    std::vector<Agent> agents;
    if (!args.scen_path.empty()) {
        agents = load_scenario_file(args.scen_path, grid);
    } else {
        // Without the scenario the endpoints come from the dump itself, so
        // only the motion rules are genuinely checked; any final-position
        // collision still surfaces as a duplicate-endpoint complaint.
        for (const TrajectoryRecord& rec : records) {
            if (rec.positions.empty()) continue;
            agents.push_back(Agent{rec.agent_id, rec.positions.front(),
                                   rec.positions.back(), rec.agent_id});
        }
    }

    const auto violations = validate(Instance{grid, agents}, records);
    std::cout << violation_report(violations);
    const bool hard = std::any_of(violations.begin(), violations.end(),
                                  [](const Violation& v) { return is_hard(v.kind); });
    return hard ? 2 : 0;
}

struct OracleArgs {
    std::string map_path;
    std::string scen_path;
};

int cmd_oracle(const OracleArgs& args) {
    const auto result = joint_oracle(load_instance(args.map_path, args.scen_path));
    std::cout << to_string(result.status);
    if (result.status == JointOracleResult::Status::solved) {
        std::cout << ' ' << result.makespan;
    }
    std::cout << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cooperative multi-agent grid path finding"};
    app.require_subcommand(1);

    PlanArgs plan_args;
    CLI::App* plan_cmd = app.add_subcommand("plan", "solve one instance and report metrics");
    plan_cmd->add_option("--map", plan_args.map_path, "map file")->required();
    plan_cmd->add_option("--scen", plan_args.scen_path, "scenario file")->required();
    plan_cmd->add_option("--out", plan_args.out_path, "trajectory dump destination");
    plan_cmd->add_option("--budget", plan_args.budget,
                         "progression step budget (default: auto from plan lengths)");
    plan_cmd
        ->add_option("--priority-order", plan_args.priority_order,
                     "scenario, id, longest-path, or shortest-path")
        ->check(CLI::IsMember({"scenario", "id", "longest-path", "shortest-path"}));
    plan_cmd->add_option("--omega-radius", plan_args.omega_radius,
                         "bypass search radius (negative: unbounded)");

    GenArgs gen_args;
    CLI::App* gen_cmd = app.add_subcommand("gen", "generate a synthetic urban instance");
    gen_cmd->add_option("--type", gen_args.type_name, "type1 or type2")
        ->check(CLI::IsMember({"type1", "type2"}));
    gen_cmd->add_option("--seed", gen_args.cfg.seed, "generation seed")->required();
    gen_cmd->add_option("--width", gen_args.cfg.width, "map width");
    gen_cmd->add_option("--height", gen_args.cfg.height, "map height");
    gen_cmd->add_option("--density-min", gen_args.cfg.density_min, "blocked fraction lower bound");
    gen_cmd->add_option("--density-max", gen_args.cfg.density_max, "blocked fraction upper bound");
    gen_cmd->add_option("--agents", gen_args.cfg.agent_count, "agent count");
    gen_cmd->add_option("--zone", gen_args.cfg.zone_size, "type-2 zone side");
    gen_cmd->add_option("--band", gen_args.cfg.border_band, "type-1 border band width");
    gen_cmd->add_option("--map-out", gen_args.map_out, "map file destination")->required();
    gen_cmd->add_option("--scen-out", gen_args.scen_out, "scenario file destination")->required();

    BenchArgs bench_args;
    CLI::App* bench_cmd = app.add_subcommand("bench", "run a batch config into a CSV report");
    bench_cmd->add_option("--config", bench_args.config_path, "batch config file")->required();
    bench_cmd->add_option("--out", bench_args.out_path, "report destination (default: stdout)");
    bench_cmd->add_option("--jobs", bench_args.jobs, "instances to run in parallel");

    ValidateArgs validate_args;
    CLI::App* validate_cmd =
        app.add_subcommand("validate", "re-check a trajectory dump against a map");
    validate_cmd->add_option("--map", validate_args.map_path, "map file")->required();
    validate_cmd->add_option("--traj", validate_args.traj_path, "trajectory dump")->required();
    validate_cmd->add_option("--scen", validate_args.scen_path,
                             "scenario file for endpoint checks");

    OracleArgs oracle_args;
    CLI::App* oracle_cmd =
        app.add_subcommand("oracle", "exhaustive joint search on a tiny instance");
    oracle_cmd->add_option("--map", oracle_args.map_path, "map file")->required();
    oracle_cmd->add_option("--scen", oracle_args.scen_path, "scenario file")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(plan_cmd)) return cmd_plan(plan_args);
        if (app.got_subcommand(gen_cmd)) return cmd_gen(gen_args);
        if (app.got_subcommand(bench_cmd)) return cmd_bench(bench_args);
        if (app.got_subcommand(validate_cmd)) return cmd_validate(validate_args);
        if (app.got_subcommand(oracle_cmd)) return cmd_oracle(oracle_args);
    } catch (const ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        for (const std::string& problem : e.problems) {
            std::cerr << "  " << problem << '\n';
        }
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
