#include "mapp/slidable.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <stdexcept>

#include "mapp/omega.hpp"

namespace mapp {

namespace {

struct HeapEntry {
    int32_t f;
    int32_t g;
    Coord cell;
};

// Min-heap on f; ties prefer larger g, then the smaller coordinate.
struct HeapAfter {
    bool operator()(const HeapEntry& a, const HeapEntry& b) const {
        if (a.f != b.f) return a.f > b.f;
        if (a.g != b.g) return a.g < b.g;
        return a.cell > b.cell;
    }
};

// Plain BFS reachability used only to classify failures. `avoid_goals`
// engages the goal fence; `blank_first_step` additionally bans first moves
// onto other agents' starts.
bool reachable(const Grid& grid, Coord from, Coord to, const std::set<Coord>& other_goals,
               const std::set<Coord>& other_starts, bool avoid_goals, bool blank_first_step) {
    if (avoid_goals && (other_goals.contains(from) || other_goals.contains(to))) {
        return false;
    }
    if (from == to) {
        return true;
    }
    std::vector<uint8_t> seen(grid.cell_count(), 0);
    seen[grid.index(from)] = 1;
    std::queue<Coord> queue;
    for_each_neighbor(grid, from, [&](Coord n, int) {
        if (avoid_goals && other_goals.contains(n)) return;
        if (blank_first_step && other_starts.contains(n)) return;
        seen[grid.index(n)] = 1;
        queue.push(n);
    });
    while (!queue.empty()) {
        Coord cur = queue.front();
        queue.pop();
        if (cur == to) {
            return true;
        }
        for_each_neighbor(grid, cur, [&](Coord n, int) {
            if (seen[grid.index(n)]) return;
            if (avoid_goals && other_goals.contains(n)) return;
            seen[grid.index(n)] = 1;
            queue.push(n);
        });
    }
    return seen[grid.index(to)] != 0;
}

NotSlidableReason classify_failure(const Grid& grid, const Agent& agent,
                                   const std::set<Coord>& other_goals,
                                   const std::set<Coord>& other_starts) {
    if (other_goals.contains(agent.start)) {
        return NotSlidableReason::goal_isolation;
    }
    if (!reachable(grid, agent.start, agent.goal, other_goals, other_starts, false, false)) {
        return NotSlidableReason::disconnected;
    }
    if (!reachable(grid, agent.start, agent.goal, other_goals, other_starts, true, false)) {
        return NotSlidableReason::goal_isolation;
    }
    if (!reachable(grid, agent.start, agent.goal, other_goals, other_starts, true, true)) {
        return NotSlidableReason::initial_blank;
    }
    return NotSlidableReason::alternative_connectivity;
}

}  // namespace

const char* to_string(NotSlidableReason reason) {
    switch (reason) {
        case NotSlidableReason::initial_blank: return "initial_blank";
        case NotSlidableReason::goal_isolation: return "goal_isolation";
        case NotSlidableReason::alternative_connectivity: return "alternative_connectivity";
        case NotSlidableReason::disconnected: return "disconnected";
    }
    return "unknown";
}

PlanResult find_slidable_path(const Grid& grid, const Agent& agent,
                              const std::set<Coord>& other_goals,
                              const std::set<Coord>& other_starts,
                              const SearchOptions& options) {
    if (!grid.traversable(agent.start) || !grid.traversable(agent.goal)) {
        throw std::invalid_argument("find_slidable_path: start/goal must be traversable");
    }
    if (other_goals.contains(agent.goal)) {
        throw std::invalid_argument("find_slidable_path: goal collides with another goal");
    }

    PlanResult result;
    result.agent_id = agent.id;
    result.stats.nodes_stored_max = 1;

    if (other_goals.contains(agent.start)) {
        result.failure = NotSlidableReason::goal_isolation;
        return result;
    }

    constexpr int32_t kUnset = std::numeric_limits<int32_t>::max();
    std::vector<int32_t> g_best(grid.cell_count(), kUnset);
    std::vector<int32_t> parent(grid.cell_count(), -1);
    std::vector<uint8_t> closed(grid.cell_count(), 0);
    std::priority_queue<HeapEntry, std::vector<HeapEntry>, HeapAfter> open;

    OmegaOracle oracle(grid, other_goals, options.omega_radius);

    g_best[grid.index(agent.start)] = 0;
    open.push({manhattan(agent.start, agent.goal), 0, agent.start});
    int64_t live_open = 1;
    int64_t closed_count = 0;
    bool found = false;

    while (!open.empty()) {
        HeapEntry top = open.top();
        open.pop();
        int top_index = grid.index(top.cell);
        if (closed[top_index] || top.g != g_best[top_index]) {
            continue;  // superseded entry
        }
        closed[top_index] = 1;
        --live_open;
        ++closed_count;
        ++result.stats.expansions;
        if (top.cell == agent.goal) {
            found = true;
            result.stats.nodes_stored_max =
                std::max(result.stats.nodes_stored_max, live_open + closed_count);
            break;
        }
        bool expanding_start = parent[top_index] < 0;
        Coord via = expanding_start ? Coord{} : grid.coord(parent[top_index]);

        for_each_neighbor(grid, top.cell, [&](Coord n, int) {
            int n_index = grid.index(n);
            if (closed[n_index] || other_goals.contains(n)) {
                return;
            }
            if (expanding_start) {
                if (other_starts.contains(n)) {
                    return;  // the first step must land on a blank cell
                }
            } else if (!oracle.has_omega(via, top.cell, n)) {
                return;
            }
            int32_t ng = top.g + 1;
            if (ng >= g_best[n_index]) {
                return;
            }
            if (g_best[n_index] == kUnset) {
                ++live_open;
            }
            g_best[n_index] = ng;
            parent[n_index] = top_index;
            open.push({ng + manhattan(n, agent.goal), ng, n});
        });
        result.stats.nodes_stored_max =
            std::max(result.stats.nodes_stored_max, live_open + closed_count);
    }

    if (!found) {
        result.failure = classify_failure(grid, agent, other_goals, other_starts);
        return result;
    }

    SlidablePath path;
    path.agent_id = agent.id;
    for (int at = grid.index(agent.goal);; at = parent[at]) {
        path.cells.push_back(grid.coord(at));
        if (at == grid.index(agent.start)) {
            break;
        }
    }
    std::reverse(path.cells.begin(), path.cells.end());
    for (size_t i = 1; i + 1 < path.cells.size(); ++i) {
        auto omega = omega_search(grid, path.cells[i - 1], path.cells[i], path.cells[i + 1],
                                  other_goals, options.omega_radius);
        if (!omega.has_value()) {
            // Admission already proved existence; disagreement is a defect.
            throw std::logic_error("find_slidable_path: bypass vanished at reconstruction");
        }
        path.omegas.push_back(std::move(*omega));
    }
    result.path = std::move(path);
    return result;
}

PlanAllResult plan_all(const Instance& instance, const SearchOptions& options) {
    auto problems = instance_problems(instance.grid, instance.agents);
    if (!problems.empty()) {
        throw std::invalid_argument("plan_all: invalid instance: " + problems.front());
    }

    std::vector<const Agent*> by_priority;
    by_priority.reserve(instance.agents.size());
    for (const Agent& agent : instance.agents) {
        by_priority.push_back(&agent);
    }
    std::sort(by_priority.begin(), by_priority.end(),
              [](const Agent* a, const Agent* b) { return a->priority < b->priority; });

    PlanAllResult out;
    out.per_agent.resize(instance.agents.size());
    for (const Agent* agent : by_priority) {
        std::set<Coord> other_goals;
        std::set<Coord> other_starts;
        for (const Agent& other : instance.agents) {
            if (other.id == agent->id) continue;
            other_goals.insert(other.goal);
            other_starts.insert(other.start);
        }
        PlanResult res =
            find_slidable_path(instance.grid, *agent, other_goals, other_starts, options);
        out.aggregate.nodes_stored_max =
            std::max(out.aggregate.nodes_stored_max, res.stats.nodes_stored_max);
        out.aggregate.expansions += res.stats.expansions;
        if (res.slidable()) {
            ++out.slidable_count;
        }
        out.per_agent[agent->id] = std::move(res);
    }
    return out;
}

}  // namespace mapp
