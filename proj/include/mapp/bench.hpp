#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mapp/grid.hpp"
#include "mapp/progression.hpp"
#include "mapp/scenario_gen.hpp"
#include "mapp/slidable.hpp"
#include "mapp/validator.hpp"

namespace mapp {

// The six tracked indicators of one instance run, plus the plan/progress
// decomposition of the time column. Timing covers planning and progression
// only; file loading and map generation are excluded.
struct RunMetrics {
    double time_seconds = 0.0;      // plan_seconds + progress_seconds
    double plan_seconds = 0.0;      // plan_all wall-clock
    double progress_seconds = 0.0;  // run wall-clock
    int64_t memory_nodes = 0;       // max over agents of nodes_stored_max
    double path_length_avg = 0.0;   // mean goal-arrival timestep over solved agents
    int conflicts = 0;              // total blank-travel invocations
    int conflict_agents = 0;        // distinct agents that invoked one
    double success_pct = 0.0;       // 100 x solved agents / total agents
};

// `invalid` marks a run whose trajectories failed re-validation; it wins
// over budget exhaustion. `error` marks an instance that never ran (bad
// file, impossible generation config); only batches produce it.
enum class RunOutcome { ok, budget_exhausted, invalid, error };

const char* to_string(RunOutcome outcome);

struct RunArtifacts {
    PlanAllResult plans;
    RunResult run;
    std::vector<Violation> violations;
};

struct BenchOptions {
    int step_budget = 0;  // <= 0: sized from the longest plan
    SearchOptions search;
};

struct InstanceReport {
    RunMetrics metrics;
    RunOutcome outcome = RunOutcome::ok;
    RunArtifacts artifacts;
};

// Ten times the longest planned path, with a floor for degenerate cases.
// Progression theory moves the highest-priority unsolved agent every step,
// so an honest run fits the budget with a wide margin.
int auto_budget(const PlanAllResult& plans);

// plan_all -> run -> validate, with the timing decomposition above.
InstanceReport run_instance(const Instance& instance, const BenchOptions& options = {});

// One batch entry: either a (map, scenario) file pair or a generator
// config. `label` becomes the instance column of the report.
struct BatchItem {
    std::string label;
    std::string map_path;          // file pair when non-empty
    std::string scen_path;
    std::optional<GenConfig> gen;  // generated instance when engaged
    int step_budget = 0;           // <= 0: auto
};

// Config text, one instance per line ('#' and blank lines are skipped):
//   run map=<path> scen=<path> [budget=<n>] [label=<name>]
//   gen type=<type1|type2> seed=<n> [width=] [height=] [agents=] [zone=]
//       [band=] [density-min=] [density-max=] [budget=] [label=]
// Unknown keys and malformed values raise ParseError with the line number.
std::vector<BatchItem> parse_batch_config(std::istream& in);

struct BatchRow {
    std::string label;
    std::string type;  // "type1" / "type2", or "-" for file pairs
    RunMetrics metrics;
    RunOutcome outcome = RunOutcome::ok;
    std::string note;  // failure detail for `error` rows, empty otherwise
};

// Exact arithmetic means of one type's rows; integer columns widen to
// double so the averages stay recomputable from the rows.
struct AverageRow {
    std::string type;
    int count = 0;
    double time_seconds = 0.0;
    double plan_seconds = 0.0;
    double progress_seconds = 0.0;
    double memory_nodes = 0.0;
    double path_length_avg = 0.0;
    double conflicts = 0.0;
    double conflict_agents = 0.0;
    double success_pct = 0.0;
};

// Per-instance rows in config order plus one average row per distinct
// type string (first-appearance order, all rows of the type included).
struct BatchReport {
    std::vector<BatchRow> rows;
    std::vector<AverageRow> averages;
};

// Runs every item, `jobs` instances at a time. Items that fail to load or
// generate become `error` rows; the batch continues. Throws
// std::invalid_argument on an empty item list.
BatchReport run_batch(const std::vector<BatchItem>& items, int jobs = 1,
                      const BenchOptions& options = {});

// Comma-separated report with the fixed header
// instance,type,time_s,plan_time_s,progress_time_s,memory_nodes,
// path_length,conflicts,conflict_agents,success_pct,status.
std::string report_csv(const BatchReport& report);

}  // namespace mapp
