#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "mapp/grid.hpp"

namespace mapp {

// Individual path with, for every interior waypoint l_i, a cached bypass
// omegas[i-1] running from l_{i-1} to l_{i+1} around l_i.
struct SlidablePath {
    int agent_id = 0;
    std::vector<Coord> cells;
    std::vector<std::vector<Coord>> omegas;

    friend bool operator==(const SlidablePath&, const SlidablePath&) = default;
};

struct SearchStats {
    int64_t nodes_stored_max = 0;  // peak open + closed node count
    int64_t expansions = 0;
};

// Why no admissible path exists: every first step is another agent's start
// (initial_blank); start or every route is fenced off by other agents'
// goals (goal_isolation); no route has bypasses everywhere
// (alternative_connectivity); goal plain unreachable (disconnected).
enum class NotSlidableReason {
    initial_blank,
    goal_isolation,
    alternative_connectivity,
    disconnected,
};

const char* to_string(NotSlidableReason reason);

struct SearchOptions {
    int omega_radius = -1;  // <0 = unbounded bypass search
};

struct PlanResult {
    int agent_id = 0;
    std::optional<SlidablePath> path;
    std::optional<NotSlidableReason> failure;  // engaged exactly when path is not
    SearchStats stats;

    bool slidable() const { return path.has_value(); }
};

// A* from agent.start to agent.goal with the three admission rules: a
// successor expanded from the start node must not sit on another agent's
// start; no generated cell may sit on another agent's goal; any other
// successor x'' of node x' with tree parent x needs a bypass from x to x''
// around x'. Ties on f prefer larger g, then smaller coordinate.
PlanResult find_slidable_path(const Grid& grid, const Agent& agent,
                              const std::set<Coord>& other_goals,
                              const std::set<Coord>& other_starts,
                              const SearchOptions& options = {});

struct PlanAllResult {
    std::vector<PlanResult> per_agent;  // agent id order
    SearchStats aggregate;              // max nodes_stored_max, summed expansions
    int slidable_count = 0;
};

// Independent per-agent searches, each forbidding every other agent's goal
// and honouring every other agent's start; one failure never aborts the
// rest.
PlanAllResult plan_all(const Instance& instance, const SearchOptions& options = {});

}  // namespace mapp
