#pragma once

#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mapp/grid.hpp"
#include "mapp/slidable.hpp"

namespace mapp {

// One blank-travel invocation: `blocked_agent` (higher priority) ran into
// `blocking_agent` (lower priority) sitting on `cell` and asked for a blank,
// whether or not one could be brought in.
struct ConflictEvent {
    int timestep = 0;
    int blocked_agent = 0;
    int blocking_agent = 0;
    Coord cell;

    friend bool operator==(const ConflictEvent&, const ConflictEvent&) = default;
};

struct Trajectory {
    int agent_id = 0;
    std::vector<Coord> positions;  // one per timestep, positions[0] = start

    friend bool operator==(const Trajectory&, const Trajectory&) = default;
};

enum class RunStatus { all_solved, budget_exhausted };
enum class AgentOutcome { solved, non_slidable, unsolved };

const char* to_string(RunStatus status);
const char* to_string(AgentOutcome outcome);

// Per-agent execution state. Agents without a plan hold their start cell
// for the whole run. `return_route` is the engine's recovery mechanism: a
// displaced agent (or one whose next path cell is permanently occupied)
// walks a computed route back onto its own path, pushing lower-priority
// agents aside by the same rules as regular path following.
struct AgentRuntime {
    int agent_id = 0;
    int priority = 0;
    const SlidablePath* path = nullptr;  // null for agents without a plan
    int progress = 0;                    // index into path->cells currently held
    Coord current;
    std::optional<Coord> prev;     // cell occupied before the last move
    bool moved_along_path = false; // last move advanced the path (arms prev)
    bool off_path = false;
    std::set<int> visited_this_step;
    bool solved = false;

    // step-scoped bookkeeping
    bool moved_this_step = false;
    bool displaced_this_step = false;

    // off-path recovery
    std::vector<Coord> return_route;
    size_t route_pos = 0;
    int rejoin_index = -1;
    bool route_is_bypass = false;  // bypass around a permanent blocker
    int route_beyond = -1;         // exclusive path-index floor the route was computed with
};

// {current} plus the vacated cell while the agent is moving along its path.
std::vector<Coord> private_zone(const AgentRuntime& rt);

struct RunResult {
    std::vector<Trajectory> trajectories;  // agent id order, equal lengths
    std::vector<AgentOutcome> outcomes;    // agent id order
    std::vector<ConflictEvent> conflicts;
    RunStatus status = RunStatus::all_solved;
    int timesteps = 0;
    std::vector<int> goal_arrival;  // first timestep solved at goal; -1 if never
};

// Executes one timestep at a time: agents act in priority order; an agent
// whose next cell is held by a higher-priority agent waits, a free cell is
// taken, and a lower-priority occupant is displaced by bringing the
// nearest blank to the cell (cascading shifts that avoid every
// higher-priority private zone). Solved agents and agents without plans
// never move again and act as obstacles to blank travel.
class ProgressionEngine {
public:
    // Keeps references; instance and plans must outlive the engine.
    ProgressionEngine(const Instance& instance, const PlanAllResult& plans);

    void step();
    bool done() const { return active_count_ == 0; }
    int timestep() const { return timestep_; }

    const AgentRuntime& runtime(int agent_id) const { return runtimes_[agent_id]; }
    const std::vector<ConflictEvent>& conflicts() const { return conflicts_; }

    RunResult result(RunStatus status) const;

private:
    struct BlankRoute {
        std::vector<Coord> cells;  // target first, blank last
    };

    void act_on_path(AgentRuntime& rt);
    void act_off_path(AgentRuntime& rt);
    void do_move(AgentRuntime& rt, Coord next, bool along_path);
    void arrive_on_route(AgentRuntime& rt, Coord next);
    void solve(AgentRuntime& rt, int arrival);
    bool displace_with_blank(AgentRuntime& rt, Coord target);
    std::optional<BlankRoute> find_blank_route(const AgentRuntime& rt, Coord target) const;
    bool compute_return_route(AgentRuntime& rt, int beyond_index, bool bypass,
                              std::optional<Coord> banned = std::nullopt);
    bool displacement_ever_possible(const AgentRuntime& rt, Coord target) const;
    bool cell_is_permanent(int occupant_id) const;
    bool in_higher_zone(const AgentRuntime& rt, Coord cell) const;
    int own_path_index(const AgentRuntime& rt, Coord cell) const;

    const Instance& instance_;
    const PlanAllResult& plans_;
    std::vector<AgentRuntime> runtimes_;
    std::vector<int> occupant_;       // per grid cell, agent id or -1
    std::vector<int> priority_order_; // agent ids, highest priority first
    std::vector<Trajectory> trajectories_;
    std::vector<ConflictEvent> conflicts_;
    std::vector<int> goal_arrival_;
    int timestep_ = 0;
    int active_count_ = 0;
};

// Runs progression steps until every planned agent is solved or the budget
// is exhausted. step_budget must be positive.
RunResult run(const Instance& instance, const PlanAllResult& plans, int step_budget);

// Trajectory dump: per agent a header line `agent <id> <status>` followed
// by one `row col` line per timestep.
std::string save_trajectories(const RunResult& result);

struct TrajectoryRecord {
    int agent_id = 0;
    AgentOutcome outcome = AgentOutcome::unsolved;
    std::vector<Coord> positions;

    friend bool operator==(const TrajectoryRecord&, const TrajectoryRecord&) = default;
};

std::vector<TrajectoryRecord> load_trajectories(std::istream& in);

}  // namespace mapp
