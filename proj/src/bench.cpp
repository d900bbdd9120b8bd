#include "mapp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <istream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "mapp/map_io.hpp"

namespace mapp {

const char* to_string(RunOutcome outcome) {
    switch (outcome) {
        case RunOutcome::ok: return "ok";
        case RunOutcome::budget_exhausted: return "budget_exhausted";
        case RunOutcome::invalid: return "invalid";
        case RunOutcome::error: return "error";
    }
    throw std::logic_error("to_string: unknown RunOutcome");
}

int auto_budget(const PlanAllResult& plans) {
    int longest = 0;
    for (const PlanResult& plan : plans.per_agent) {
        if (plan.path.has_value()) {
            longest = std::max(longest, static_cast<int>(plan.path->cells.size()));
        }
    }
    return std::max(64, 10 * longest);
}

namespace {

double seconds_since(std::chrono::steady_clock::time_point from) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - from).count();
}

}  // namespace

InstanceReport run_instance(const Instance& instance, const BenchOptions& options) {
    InstanceReport report;
    RunArtifacts& artifacts = report.artifacts;
    RunMetrics& metrics = report.metrics;

    const auto plan_started = std::chrono::steady_clock::now();
    artifacts.plans = plan_all(instance, options.search);
    metrics.plan_seconds = seconds_since(plan_started);

    const int budget =
        options.step_budget > 0 ? options.step_budget : auto_budget(artifacts.plans);
    const auto run_started = std::chrono::steady_clock::now();
    artifacts.run = run(instance, artifacts.plans, budget);
    metrics.progress_seconds = seconds_since(run_started);
    metrics.time_seconds = metrics.plan_seconds + metrics.progress_seconds;

    artifacts.violations = validate(instance, to_records(artifacts.run));

    metrics.memory_nodes = artifacts.plans.aggregate.nodes_stored_max;
    metrics.conflicts = static_cast<int>(artifacts.run.conflicts.size());
    std::set<int> blocked;
    for (const ConflictEvent& event : artifacts.run.conflicts) {
        blocked.insert(event.blocked_agent);
    }
    metrics.conflict_agents = static_cast<int>(blocked.size());

    int solved = 0;
    int64_t arrival_total = 0;
    for (size_t id = 0; id < artifacts.run.outcomes.size(); ++id) {
        if (artifacts.run.outcomes[id] == AgentOutcome::solved) {
            ++solved;
            arrival_total += artifacts.run.goal_arrival[id];
        }
    }
    metrics.success_pct =
        instance.agents.empty()
            ? 0.0
            : 100.0 * solved / static_cast<double>(instance.agents.size());
    metrics.path_length_avg =
        solved == 0 ? 0.0 : static_cast<double>(arrival_total) / solved;

    const bool hard_violation =
        std::any_of(artifacts.violations.begin(), artifacts.violations.end(),
                    [](const Violation& v) { return is_hard(v.kind); });
    if (hard_violation) {
        report.outcome = RunOutcome::invalid;
    } else if (artifacts.run.status == RunStatus::budget_exhausted) {
        report.outcome = RunOutcome::budget_exhausted;
    } else {
        report.outcome = RunOutcome::ok;
    }
    return report;
}

namespace {

int parse_int(const std::string& key, const std::string& value, int line_no) {
    try {
        size_t used = 0;
        const long long parsed = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return static_cast<int>(parsed);
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "' needs an integer, got '" + value + "'", line_no);
    }
}

uint64_t parse_seed(const std::string& key, const std::string& value, int line_no) {
    try {
        size_t used = 0;
        // stoull wraps negative input around instead of rejecting it.
        if (value.find('-') != std::string::npos) throw std::invalid_argument(value);
        const unsigned long long parsed = std::stoull(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "' needs an unsigned integer, got '" + value + "'",
                         line_no);
    }
}

double parse_fraction(const std::string& key, const std::string& value, int line_no) {
    try {
        size_t used = 0;
        const double parsed = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return parsed;
    } catch (const std::exception&) {
        throw ParseError("key '" + key + "' needs a number, got '" + value + "'", line_no);
    }
}

}  // namespace

std::vector<BatchItem> parse_batch_config(std::istream& in) {
    std::vector<BatchItem> items;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream tokens(line);
        std::string head;
        if (!(tokens >> head) || head.front() == '#') continue;

        BatchItem item;
        if (head == "gen") {
            item.gen = GenConfig{};
        } else if (head != "run") {
            throw ParseError("batch line must start with 'run' or 'gen', got '" + head + "'",
                             line_no);
        }

        bool has_type = false;
        bool has_seed = false;
        std::string token;
        while (tokens >> token) {
            const size_t eq = token.find('=');
            if (eq == std::string::npos || eq == 0) {
                throw ParseError("expected key=value, got '" + token + "'", line_no);
            }
            const std::string key = token.substr(0, eq);
            const std::string value = token.substr(eq + 1);
            if (key == "label") {
                item.label = value;
            } else if (key == "budget") {
                item.step_budget = parse_int(key, value, line_no);
            } else if (!item.gen.has_value() && key == "map") {
                item.map_path = value;
            } else if (!item.gen.has_value() && key == "scen") {
                item.scen_path = value;
            } else if (item.gen.has_value() && key == "type") {
                try {
                    item.gen->instance_type = instance_type_from(value);
                } catch (const std::invalid_argument& bad) {
                    throw ParseError(bad.what(), line_no);
                }
                has_type = true;
            } else if (item.gen.has_value() && key == "seed") {
                item.gen->seed = parse_seed(key, value, line_no);
                has_seed = true;
            } else if (item.gen.has_value() && key == "width") {
                item.gen->width = parse_int(key, value, line_no);
            } else if (item.gen.has_value() && key == "height") {
                item.gen->height = parse_int(key, value, line_no);
            } else if (item.gen.has_value() && key == "agents") {
                item.gen->agent_count = parse_int(key, value, line_no);
            } else if (item.gen.has_value() && key == "zone") {
                item.gen->zone_size = parse_int(key, value, line_no);
            } else if (item.gen.has_value() && key == "band") {
                item.gen->border_band = parse_int(key, value, line_no);
            } else if (item.gen.has_value() && key == "density-min") {
                item.gen->density_min = parse_fraction(key, value, line_no);
            } else if (item.gen.has_value() && key == "density-max") {
                item.gen->density_max = parse_fraction(key, value, line_no);
            } else {
                throw ParseError("unknown key '" + key + "' on a '" + head + "' line", line_no);
            }
        }

        if (item.gen.has_value()) {
            if (!has_type) throw ParseError("gen line needs type=", line_no);
            if (!has_seed) throw ParseError("gen line needs seed=", line_no);
            if (item.label.empty()) {
                item.label = std::string(to_string(item.gen->instance_type)) + "-" +
                             std::to_string(item.gen->seed);
            }
        } else {
            if (item.map_path.empty()) throw ParseError("run line needs map=", line_no);
            if (item.scen_path.empty()) throw ParseError("run line needs scen=", line_no);
            if (item.label.empty()) item.label = item.scen_path;
        }
        items.push_back(std::move(item));
    }
    return items;
}

BatchReport run_batch(const std::vector<BatchItem>& items, int jobs,
                      const BenchOptions& options) {
    if (items.empty()) {
        throw std::invalid_argument("batch config lists no instances");
    }

    BatchReport report;
    report.rows.resize(items.size());

    const auto run_item = [&](size_t index) {
        const BatchItem& item = items[index];
        BatchRow& row = report.rows[index];
        row.label = item.label;
        row.type = item.gen.has_value() ? to_string(item.gen->instance_type) : "-";
        try {
            BenchOptions local = options;
            if (item.step_budget > 0) local.step_budget = item.step_budget;
            const Instance instance =
                item.gen.has_value() ? gen_instance(gen_urban_map(*item.gen), *item.gen)
                                     : load_instance(item.map_path, item.scen_path);
            const InstanceReport result = run_instance(instance, local);
            row.metrics = result.metrics;
            row.outcome = result.outcome;
        } catch (const std::exception& failed) {
            row.outcome = RunOutcome::error;
            row.note = failed.what();
        }
    };

    const int workers =
        std::clamp(jobs, 1, static_cast<int>(items.size()));
    if (workers == 1) {
        for (size_t index = 0; index < items.size(); ++index) run_item(index);
    } else {
        std::atomic<size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(workers));
        for (int w = 0; w < workers; ++w) {
            pool.emplace_back([&] {
                for (size_t index = next++; index < report.rows.size(); index = next++) {
                    run_item(index);
                }
            });
        }
        for (std::thread& worker : pool) worker.join();
    }

    std::vector<std::string> type_order;
    for (const BatchRow& row : report.rows) {
        if (std::find(type_order.begin(), type_order.end(), row.type) == type_order.end()) {
            type_order.push_back(row.type);
        }
    }
    for (const std::string& type : type_order) {
        AverageRow avg;
        avg.type = type;
        for (const BatchRow& row : report.rows) {
            if (row.type != type) continue;
            ++avg.count;
            avg.time_seconds += row.metrics.time_seconds;
            avg.plan_seconds += row.metrics.plan_seconds;
            avg.progress_seconds += row.metrics.progress_seconds;
            avg.memory_nodes += static_cast<double>(row.metrics.memory_nodes);
            avg.path_length_avg += row.metrics.path_length_avg;
            avg.conflicts += row.metrics.conflicts;
            avg.conflict_agents += row.metrics.conflict_agents;
            avg.success_pct += row.metrics.success_pct;
        }
        avg.time_seconds /= avg.count;
        avg.plan_seconds /= avg.count;
        avg.progress_seconds /= avg.count;
        avg.memory_nodes /= avg.count;
        avg.path_length_avg /= avg.count;
        avg.conflicts /= avg.count;
        avg.conflict_agents /= avg.count;
        avg.success_pct /= avg.count;
        report.averages.push_back(std::move(avg));
    }
    return report;
}

std::string report_csv(const BatchReport& report) {
    std::ostringstream out;
    out << "instance,type,time_s,plan_time_s,progress_time_s,memory_nodes,"
           "path_length,conflicts,conflict_agents,success_pct,status\n";
    out.setf(std::ios::fixed);
    out.precision(6);
    for (const BatchRow& row : report.rows) {
        out << row.label << ',' << row.type << ',' << row.metrics.time_seconds << ','
            << row.metrics.plan_seconds << ',' << row.metrics.progress_seconds << ','
            << row.metrics.memory_nodes << ',' << row.metrics.path_length_avg << ','
            << row.metrics.conflicts << ',' << row.metrics.conflict_agents << ','
            << row.metrics.success_pct << ',' << to_string(row.outcome) << '\n';
    }
    for (const AverageRow& avg : report.averages) {
        out << "average," << avg.type << ',' << avg.time_seconds << ',' << avg.plan_seconds
            << ',' << avg.progress_seconds << ',' << avg.memory_nodes << ','
            << avg.path_length_avg << ',' << avg.conflicts << ',' << avg.conflict_agents << ','
            << avg.success_pct << ",-\n";
    }
    return out.str();
}

}  // namespace mapp
