#include <algorithm>
#include <filesystem>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "mapp/bench.hpp"
#include "mapp/map_io.hpp"

using namespace mapp;

namespace {

Grid grid_from_rows(const std::vector<std::string>& rows) {
    int h = static_cast<int>(rows.size());
    int w = static_cast<int>(rows[0].size());
    std::vector<uint8_t> blocked;
    for (const auto& row : rows) {
        for (char ch : row) blocked.push_back(ch == '@' ? 1 : 0);
    }
    return Grid(w, h, std::move(blocked));
}

// Cheap generator config for batch tests: small map, few agents, and a
// density band wide enough that every seed lays out on the first tries.
GenConfig tiny_gen(InstanceType type, uint64_t seed) {
    GenConfig cfg;
    cfg.width = 40;
    cfg.height = 40;
    cfg.density_min = 0.10;
    cfg.agent_count = 4;
    cfg.instance_type = type;
    cfg.seed = seed;
    return cfg;
}

double mean_arrival_of_solved(const RunResult& run) {
    int solved = 0;
    int64_t total = 0;
    for (size_t id = 0; id < run.outcomes.size(); ++id) {
        if (run.outcomes[id] == AgentOutcome::solved) {
            ++solved;
            total += run.goal_arrival[id];
        }
    }
    return solved == 0 ? 0.0 : static_cast<double>(total) / solved;
}

void check_non_time_columns_equal(const BatchRow& a, const BatchRow& b) {
    CHECK(a.label == b.label);
    CHECK(a.type == b.type);
    CHECK(a.outcome == b.outcome);
    CHECK(a.metrics.memory_nodes == b.metrics.memory_nodes);
    CHECK(a.metrics.path_length_avg == b.metrics.path_length_avg);
    CHECK(a.metrics.conflicts == b.metrics.conflicts);
    CHECK(a.metrics.conflict_agents == b.metrics.conflict_agents);
    CHECK(a.metrics.success_pct == b.metrics.success_pct);
}

}  // namespace

TEST_CASE("a lone agent on an open map yields clean baseline metrics") {
    const Instance instance{Grid::open(5, 5), {Agent{0, {2, 0}, {2, 4}, 0}}};
    const InstanceReport report = run_instance(instance);

    CHECK(report.outcome == RunOutcome::ok);
    CHECK(report.metrics.success_pct == 100.0);
    CHECK(report.metrics.conflicts == 0);
    CHECK(report.metrics.conflict_agents == 0);
    CHECK(report.metrics.path_length_avg == 4.0);
    CHECK(report.metrics.memory_nodes >= 1);
    CHECK(report.metrics.time_seconds ==
          report.metrics.plan_seconds + report.metrics.progress_seconds);
    CHECK(report.artifacts.plans.slidable_count == 1);
    CHECK(report.artifacts.violations.empty());
}

TEST_CASE("blank travel shows up in the conflict columns") {
    // Agent 1 must step to (1,1) first (the detour above is walled off), but
    // agent 0 claims that cell one step earlier, so agent 1 is still sitting
    // on (1,2) when agent 0 arrives and asks for a blank: one invocation by
    // one agent, and everyone still finishes.
    const Grid grid = grid_from_rows({"..@..",  //
                                      ".....",  //
                                      "....."});
    const Instance instance{grid, {Agent{0, {1, 0}, {1, 4}, 0},  //
                                   Agent{1, {1, 2}, {0, 0}, 1}}};
    const InstanceReport report = run_instance(instance);

    CHECK(report.outcome == RunOutcome::ok);
    CHECK(report.metrics.success_pct == 100.0);
    CHECK(report.metrics.conflicts == 1);
    CHECK(report.metrics.conflict_agents == 1);
    REQUIRE(report.artifacts.run.conflicts.size() == 1);
    CHECK(report.artifacts.run.conflicts.front().blocked_agent == 0);
    CHECK(report.artifacts.run.conflicts.front().blocking_agent == 1);
    CHECK(report.metrics.path_length_avg == mean_arrival_of_solved(report.artifacts.run));
    CHECK(report.artifacts.violations.empty());
}

TEST_CASE("a stranded agent drags success down without invalidating the run") {
    // (4,3) is sealed off, so agent 3 is not Slidable; the other three never
    // meet and solve in 4, 4, and 1 steps.
    const Grid grid = grid_from_rows({".....",  //
                                      ".....",  //
                                      ".....",  //
                                      "...@.",  //
                                      "..@.@"});
    const Instance instance{grid, {Agent{0, {0, 0}, {0, 4}, 0},  //
                                   Agent{1, {2, 0}, {2, 4}, 1},  //
                                   Agent{2, {4, 0}, {4, 1}, 2},  //
                                   Agent{3, {3, 4}, {4, 3}, 3}}};
    const InstanceReport report = run_instance(instance);

    CHECK(report.outcome == RunOutcome::ok);
    CHECK(report.metrics.success_pct == 75.0);
    CHECK(report.metrics.path_length_avg == 3.0);
    CHECK(report.metrics.conflicts == 0);
    CHECK(report.artifacts.plans.slidable_count == 3);
    CHECK(report.artifacts.run.outcomes[3] == AgentOutcome::non_slidable);
    CHECK(report.artifacts.violations.empty());
}

TEST_CASE("a starved step budget surfaces as budget_exhausted, not invalid") {
    const Instance instance{Grid::open(5, 5), {Agent{0, {2, 0}, {2, 4}, 0}}};
    BenchOptions options;
    options.step_budget = 1;
    const InstanceReport report = run_instance(instance, options);

    CHECK(report.outcome == RunOutcome::budget_exhausted);
    CHECK(report.metrics.success_pct == 0.0);
    CHECK(report.metrics.path_length_avg == 0.0);
    CHECK(report.artifacts.run.status == RunStatus::budget_exhausted);
}

TEST_CASE("the automatic budget scales with the longest plan") {
    const auto plans_of_lengths = [](const std::vector<int>& lengths) {
        PlanAllResult plans;
        for (int len : lengths) {
            PlanResult plan;
            if (len > 0) {
                SlidablePath path;
                path.cells.assign(static_cast<size_t>(len), Coord{0, 0});
                plan.path = std::move(path);
            } else {
                plan.failure = NotSlidableReason::disconnected;
            }
            plans.per_agent.push_back(std::move(plan));
        }
        return plans;
    };

    CHECK(auto_budget(plans_of_lengths({3, 12, 5})) == 120);
    CHECK(auto_budget(plans_of_lengths({})) == 64);         // degenerate floor
    CHECK(auto_budget(plans_of_lengths({0, 0})) == 64);     // nothing planned
    CHECK(auto_budget(plans_of_lengths({2, 0, 4})) == 64);  // short plans stay floored
}

TEST_CASE("batch config parsing round-trips every knob") {
    std::istringstream in(
        "# benchmark set\n"
        "run map=maps/a.map scen=maps/a.scen budget=500 label=pair-a\n"
        "\n"
        "gen type=type2 seed=7 width=64 height=33 agents=5 zone=9 band=2 "
        "density-min=0.1 density-max=0.3 budget=200 label=g7\n"
        "gen type=type1 seed=11\n");
    const auto items = parse_batch_config(in);

    REQUIRE(items.size() == 3);
    CHECK_FALSE(items[0].gen.has_value());
    CHECK(items[0].map_path == "maps/a.map");
    CHECK(items[0].scen_path == "maps/a.scen");
    CHECK(items[0].step_budget == 500);
    CHECK(items[0].label == "pair-a");

    REQUIRE(items[1].gen.has_value());
    CHECK(items[1].gen->instance_type == InstanceType::type2);
    CHECK(items[1].gen->seed == 7);
    CHECK(items[1].gen->width == 64);
    CHECK(items[1].gen->height == 33);
    CHECK(items[1].gen->agent_count == 5);
    CHECK(items[1].gen->zone_size == 9);
    CHECK(items[1].gen->border_band == 2);
    CHECK(items[1].gen->density_min == 0.1);
    CHECK(items[1].gen->density_max == 0.3);
    CHECK(items[1].step_budget == 200);
    CHECK(items[1].label == "g7");

    REQUIRE(items[2].gen.has_value());
    CHECK(items[2].label == "type1-11");  // default label
    CHECK(items[2].step_budget == 0);     // auto
}

TEST_CASE("malformed batch lines name the offending line") {
    const auto expect_error_on_line = [](const std::string& text, int line) {
        std::istringstream in(text);
        try {
            parse_batch_config(in);
            FAIL("expected ParseError");
        } catch (const ParseError& e) {
            CHECK(e.line == line);
        }
    };

    expect_error_on_line("fly map=a scen=b\n", 1);
    expect_error_on_line("# ok\nrun map=a.map\n", 2);               // missing scen
    expect_error_on_line("run scen=b.scen\n", 1);                   // missing map
    expect_error_on_line("gen type=type1\n", 1);                    // missing seed
    expect_error_on_line("gen seed=3\n", 1);                        // missing type
    expect_error_on_line("gen type=type3 seed=1\n", 1);             // unknown type
    expect_error_on_line("run map=a scen=b budget=soon\n", 1);      // non-numeric
    expect_error_on_line("run map=a scen=b extra\n", 1);            // not key=value
    expect_error_on_line("run map=a scen=b seed=4\n", 1);           // gen-only key
    expect_error_on_line("gen type=type1 seed=1 map=x\n", 1);       // run-only key
    expect_error_on_line("# one\n# two\ngen type=type1 seed=-1\n", 3);
}

TEST_CASE("an empty batch is refused") {
    CHECK_THROWS_AS(run_batch({}), std::invalid_argument);
}

TEST_CASE("failing items become error rows and the batch carries on") {
    std::vector<BatchItem> items;
    BatchItem impossible;  // a 4x4 zone cannot seat 40 spread-out agents
    impossible.label = "impossible";
    impossible.gen = tiny_gen(InstanceType::type2, 1);
    impossible.gen->agent_count = 40;
    impossible.gen->zone_size = 4;
    items.push_back(impossible);

    BatchItem missing;
    missing.label = "missing";
    missing.map_path = "no-such-dir/x.map";
    missing.scen_path = "no-such-dir/x.scen";
    items.push_back(missing);

    BatchItem good;
    good.label = "good";
    good.gen = tiny_gen(InstanceType::type1, 5);
    items.push_back(good);

    const BatchReport report = run_batch(items);
    REQUIRE(report.rows.size() == 3);
    CHECK(report.rows[0].outcome == RunOutcome::error);
    CHECK_FALSE(report.rows[0].note.empty());
    CHECK(report.rows[0].type == "type2");
    CHECK(report.rows[1].outcome == RunOutcome::error);
    CHECK_FALSE(report.rows[1].note.empty());
    CHECK(report.rows[1].type == "-");
    CHECK(report.rows[2].outcome == RunOutcome::ok);
    CHECK(report.rows[2].metrics.success_pct == 100.0);
}

TEST_CASE("file pairs load back into the same run as their generator config") {
    namespace fs = std::filesystem;
    const GenConfig cfg = tiny_gen(InstanceType::type1, 21);
    const Grid grid = gen_urban_map(cfg);
    const Instance instance = gen_instance(grid, cfg);

    const fs::path dir = fs::temp_directory_path();
    const std::string map_path = (dir / "mapp_bench_roundtrip.map").string();
    const std::string scen_path = (dir / "mapp_bench_roundtrip.scen").string();
    write_file(map_path, save_map(instance.grid));
    write_file(scen_path, save_scenario(instance.agents, config_comments(cfg)));

    BatchItem from_files;
    from_files.label = "from-files";
    from_files.map_path = map_path;
    from_files.scen_path = scen_path;

    BatchItem from_gen;
    from_gen.label = "from-gen";
    from_gen.gen = cfg;

    const BatchReport report = run_batch({from_files, from_gen});
    fs::remove(map_path);
    fs::remove(scen_path);

    REQUIRE(report.rows.size() == 2);
    CHECK(report.rows[0].type == "-");
    CHECK(report.rows[1].type == "type1");
    CHECK(report.rows[0].metrics.memory_nodes == report.rows[1].metrics.memory_nodes);
    CHECK(report.rows[0].metrics.path_length_avg == report.rows[1].metrics.path_length_avg);
    CHECK(report.rows[0].metrics.conflicts == report.rows[1].metrics.conflicts);
    CHECK(report.rows[0].metrics.success_pct == report.rows[1].metrics.success_pct);
    CHECK(report.rows[0].outcome == report.rows[1].outcome);
}

TEST_CASE("averages are the exact means of their rows") {
    std::vector<BatchItem> items;
    for (uint64_t seed : {31, 32}) {
        BatchItem item;
        item.label = "t1-" + std::to_string(seed);
        item.gen = tiny_gen(InstanceType::type1, seed);
        items.push_back(item);
    }
    BatchItem other;
    other.label = "t2";
    other.gen = tiny_gen(InstanceType::type2, 31);
    items.push_back(other);

    const BatchReport report = run_batch(items);
    REQUIRE(report.rows.size() == 3);
    REQUIRE(report.averages.size() == 2);

    const AverageRow& t1 = report.averages[0];
    CHECK(t1.type == "type1");
    CHECK(t1.count == 2);
    const RunMetrics& a = report.rows[0].metrics;
    const RunMetrics& b = report.rows[1].metrics;
    CHECK(t1.memory_nodes == (static_cast<double>(a.memory_nodes) +
                              static_cast<double>(b.memory_nodes)) /
                                 2);
    CHECK(t1.path_length_avg == (a.path_length_avg + b.path_length_avg) / 2);
    CHECK(t1.conflicts == (static_cast<double>(a.conflicts) + b.conflicts) / 2);
    CHECK(t1.conflict_agents ==
          (static_cast<double>(a.conflict_agents) + b.conflict_agents) / 2);
    CHECK(t1.success_pct == (a.success_pct + b.success_pct) / 2);

    const AverageRow& t2 = report.averages[1];
    CHECK(t2.type == "type2");
    CHECK(t2.count == 1);
    CHECK(t2.memory_nodes == static_cast<double>(report.rows[2].metrics.memory_nodes));
    CHECK(t2.success_pct == report.rows[2].metrics.success_pct);
}

TEST_CASE("instance rows are independent of the worker count") {
    std::vector<BatchItem> items;
    for (uint64_t seed : {41, 42, 43, 44}) {
        BatchItem item;
        item.label = "w-" + std::to_string(seed);
        item.gen = tiny_gen(seed % 2 == 0 ? InstanceType::type2 : InstanceType::type1, seed);
        items.push_back(item);
    }

    const BatchReport serial = run_batch(items, 1);
    const BatchReport parallel = run_batch(items, 3);
    REQUIRE(serial.rows.size() == parallel.rows.size());
    for (size_t i = 0; i < serial.rows.size(); ++i) {
        check_non_time_columns_equal(serial.rows[i], parallel.rows[i]);
    }
}

TEST_CASE("rerunning a batch reproduces every number but the clock") {
    std::vector<BatchItem> items;
    BatchItem one;
    one.label = "repeat";
    one.gen = tiny_gen(InstanceType::type2, 51);
    items.push_back(one);

    const BatchReport first = run_batch(items);
    const BatchReport second = run_batch(items);
    REQUIRE(first.rows.size() == second.rows.size());
    for (size_t i = 0; i < first.rows.size(); ++i) {
        check_non_time_columns_equal(first.rows[i], second.rows[i]);
    }
}

TEST_CASE("the report prints the pinned header and one line per row") {
    std::vector<BatchItem> items;
    BatchItem good;
    good.label = "csv-good";
    good.gen = tiny_gen(InstanceType::type1, 61);
    items.push_back(good);
    BatchItem broken;
    broken.label = "csv-broken";
    broken.map_path = "no-such.map";
    broken.scen_path = "no-such.scen";
    items.push_back(broken);

    const std::string csv = report_csv(run_batch(items));
    std::istringstream lines(csv);
    std::string line;
    REQUIRE(std::getline(lines, line));
    CHECK(line ==
          "instance,type,time_s,plan_time_s,progress_time_s,memory_nodes,"
          "path_length,conflicts,conflict_agents,success_pct,status");

    std::vector<std::string> rest;
    while (std::getline(lines, line)) rest.push_back(line);
    REQUIRE(rest.size() == 4);  // two instances, two type averages
    CHECK(rest[0].substr(0, 9) == "csv-good,");
    CHECK(rest[0].find(",ok") != std::string::npos);
    CHECK(rest[1].substr(0, 11) == "csv-broken,");
    CHECK(rest[1].find(",error") != std::string::npos);
    CHECK(rest[2].substr(0, 8) == "average,");
    CHECK(rest[3].substr(0, 8) == "average,");
}
