#include "mapp/progression.hpp"

#include <algorithm>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <unordered_set>

#include "mapp/map_io.hpp"

namespace mapp {

namespace {

// Reconstructs the BFS path from `from` to `to` given first-discovery
// parents keyed by grid index.
std::vector<Coord> walk_parents(const Grid& grid,
                                const std::unordered_map<int, int>& parent,
                                Coord from, Coord to) {
    std::vector<Coord> path{to};
    int at = grid.index(to);
    const int start = grid.index(from);
    while (at != start) {
        at = parent.at(at);
        path.push_back(grid.coord(at));
    }
    std::reverse(path.begin(), path.end());
    return path;
}

}  // namespace

const char* to_string(RunStatus status) {
    switch (status) {
        case RunStatus::all_solved: return "all_solved";
        case RunStatus::budget_exhausted: return "budget_exhausted";
    }
    throw std::logic_error("to_string: unknown RunStatus");
}

const char* to_string(AgentOutcome outcome) {
    switch (outcome) {
        case AgentOutcome::solved: return "solved";
        case AgentOutcome::non_slidable: return "non_slidable";
        case AgentOutcome::unsolved: return "unsolved";
    }
    throw std::logic_error("to_string: unknown AgentOutcome");
}

std::vector<Coord> private_zone(const AgentRuntime& rt) {
    std::vector<Coord> zone{rt.current};
    if (rt.moved_along_path && rt.prev.has_value()) {
        zone.push_back(*rt.prev);
    }
    return zone;
}

ProgressionEngine::ProgressionEngine(const Instance& instance, const PlanAllResult& plans)
    : instance_(instance), plans_(plans) {
    const auto problems = instance_problems(instance.grid, instance.agents);
    if (!problems.empty()) {
        throw std::invalid_argument("progression: invalid instance: " + problems.front());
    }
    const int n = static_cast<int>(instance.agents.size());
    if (plans.per_agent.size() != instance.agents.size()) {
        throw std::invalid_argument("progression: plan count does not match agent count");
    }

    runtimes_.resize(n);
    trajectories_.resize(n);
    goal_arrival_.assign(n, -1);
    occupant_.assign(instance.grid.cell_count(), -1);

    for (const Agent& agent : instance.agents) {
        const PlanResult& plan = plans.per_agent[agent.id];
        if (plan.agent_id != agent.id) {
            throw std::invalid_argument("progression: plan order does not match agent ids");
        }
        AgentRuntime& rt = runtimes_[agent.id];
        rt.agent_id = agent.id;
        rt.priority = agent.priority;
        rt.current = agent.start;
        if (plan.path.has_value()) {
            const std::vector<Coord>& cells = plan.path->cells;
            if (cells.empty() || cells.front() != agent.start || cells.back() != agent.goal) {
                throw std::invalid_argument("progression: path endpoints do not match agent " +
                                            std::to_string(agent.id));
            }
            for (size_t i = 0; i < cells.size(); ++i) {
                if (!instance.grid.in_bounds(cells[i]) || !instance.grid.traversable(cells[i])) {
                    throw std::invalid_argument("progression: path of agent " +
                                                std::to_string(agent.id) +
                                                " leaves traversable cells");
                }
                if (i > 0 && manhattan(cells[i - 1], cells[i]) != 1) {
                    throw std::invalid_argument("progression: path of agent " +
                                                std::to_string(agent.id) + " is not unit-step");
                }
            }
            rt.path = &*plan.path;
            ++active_count_;
        }
        occupant_[instance.grid.index(agent.start)] = agent.id;
        trajectories_[agent.id] = Trajectory{agent.id, {agent.start}};
    }

    priority_order_.resize(n);
    for (int id = 0; id < n; ++id) priority_order_[id] = id;
    std::sort(priority_order_.begin(), priority_order_.end(), [&](int a, int b) {
        return instance.agents[a].priority < instance.agents[b].priority;
    });

    // Agents that start on their goal are done before the first step.
    for (AgentRuntime& rt : runtimes_) {
        if (rt.path != nullptr && rt.path->cells.size() == 1) {
            solve(rt, 0);
        }
    }
}

int ProgressionEngine::own_path_index(const AgentRuntime& rt, Coord cell) const {
    if (rt.path == nullptr) return -1;
    const std::vector<Coord>& cells = rt.path->cells;
    const auto it = std::find(cells.begin(), cells.end(), cell);
    if (it == cells.end()) return -1;
    return static_cast<int>(it - cells.begin());
}

bool ProgressionEngine::cell_is_permanent(int occupant_id) const {
    const AgentRuntime& rt = runtimes_[occupant_id];
    return rt.solved || rt.path == nullptr;
}

bool ProgressionEngine::in_higher_zone(const AgentRuntime& rt, Coord cell) const {
    for (const AgentRuntime& other : runtimes_) {
        if (other.priority >= rt.priority) continue;
        for (Coord zone_cell : private_zone(other)) {
            if (zone_cell == cell) return true;
        }
    }
    return false;
}

void ProgressionEngine::solve(AgentRuntime& rt, int arrival) {
    rt.solved = true;
    rt.off_path = false;
    rt.moved_along_path = false;
    rt.return_route.clear();
    rt.route_pos = 0;
    rt.rejoin_index = -1;
    rt.route_is_bypass = false;
    rt.route_beyond = -1;
    goal_arrival_[rt.agent_id] = arrival;
    --active_count_;
}

void ProgressionEngine::do_move(AgentRuntime& rt, Coord next, bool along_path) {
    const Grid& grid = instance_.grid;
    if (occupant_[grid.index(next)] != -1) {
        throw std::logic_error("progression: move into occupied cell");
    }
    occupant_[grid.index(rt.current)] = -1;
    occupant_[grid.index(next)] = rt.agent_id;
    rt.prev = rt.current;
    rt.current = next;
    rt.moved_along_path = along_path;
    rt.moved_this_step = true;
    if (along_path) {
        ++rt.progress;
        rt.visited_this_step.insert(rt.progress);
        if (rt.progress == static_cast<int>(rt.path->cells.size()) - 1) {
            solve(rt, timestep_ + 1);
        }
    }
}

std::optional<ProgressionEngine::BlankRoute> ProgressionEngine::find_blank_route(
    const AgentRuntime& rt, Coord target) const {
    const Grid& grid = instance_.grid;

    // Cells no blank-travel route of rt may touch: every higher-priority
    // private zone and rt's own cell.
    std::unordered_set<int> banned;
    banned.insert(grid.index(rt.current));
    for (const AgentRuntime& other : runtimes_) {
        if (other.priority >= rt.priority) continue;
        for (Coord cell : private_zone(other)) {
            banned.insert(grid.index(cell));
        }
    }

    const auto admissible = [&](Coord cell) {
        if (banned.count(grid.index(cell)) > 0) return false;
        const int occ = occupant_[grid.index(cell)];
        if (occ >= 0) {
            // Pinned agents and agents displaced earlier this step stay put.
            if (cell_is_permanent(occ)) return false;
            if (runtimes_[occ].displaced_this_step) return false;
        }
        return true;
    };

    if (!admissible(target)) return std::nullopt;

    // Cells rt will walk over after `target`. A blank parked on one of them
    // is handed straight back to rt's next displacement, shoving the same
    // victim ahead of rt turn after turn; prefer blanks off the itinerary
    // and fall back to the unrestricted search only if none is reachable.
    std::unordered_set<int> itinerary;
    const auto add_tail = [&](const std::vector<Coord>& cells, int from) {
        for (size_t i = static_cast<size_t>(std::max(from, 0)); i < cells.size(); ++i) {
            itinerary.insert(grid.index(cells[i]));
        }
    };
    if (rt.off_path) {
        add_tail(rt.return_route, static_cast<int>(rt.route_pos) + 1);
        if (rt.rejoin_index >= 0) add_tail(rt.path->cells, rt.rejoin_index);
    } else {
        add_tail(rt.path->cells, rt.progress + 2);
    }
    itinerary.erase(grid.index(target));

    const auto search = [&](bool avoid_itinerary) -> std::optional<BlankRoute> {
        std::queue<int> frontier;
        std::unordered_map<int, int> parent;
        std::unordered_set<int> seen{grid.index(target)};
        frontier.push(grid.index(target));
        while (!frontier.empty()) {
            const int at = frontier.front();
            frontier.pop();
            if (occupant_[at] == -1) {
                // An avoided blank cannot serve as a shift corridor either,
                // so it does not get expanded.
                if (avoid_itinerary && itinerary.count(at) > 0) continue;
                return BlankRoute{walk_parents(grid, parent, target, grid.coord(at))};
            }
            for_each_neighbor(grid, grid.coord(at), [&](Coord next, int) {
                const int idx = grid.index(next);
                if (seen.count(idx) > 0 || !admissible(next)) return;
                seen.insert(idx);
                parent.emplace(idx, at);
                frontier.push(idx);
            });
        }
        return std::nullopt;
    };

    if (auto route = search(true); route.has_value()) return route;
    if (!itinerary.empty()) return search(false);
    return std::nullopt;
}

bool ProgressionEngine::displace_with_blank(AgentRuntime& rt, Coord target) {
    const Grid& grid = instance_.grid;
    // Counted per invocation, not per success: the conflict tally records
    // how often a higher-priority agent ran into a lower-priority one,
    // whether or not a blank could actually be brought in.
    conflicts_.push_back(
        ConflictEvent{timestep_, rt.agent_id, occupant_[grid.index(target)], target});
    const auto route = find_blank_route(rt, target);
    if (!route.has_value()) return false;
    const std::vector<Coord>& cells = route->cells;
    if (cells.size() < 2) {
        throw std::logic_error("progression: blank route without a blank");
    }

    // Shift every agent on the route one cell outward, starting at the
    // blank end so each move lands on a cell just vacated.
    for (size_t i = cells.size() - 1; i-- > 0;) {
        const int moved = occupant_[grid.index(cells[i])];
        if (moved < 0) {
            throw std::logic_error("progression: blank route interior not occupied");
        }
        AgentRuntime& victim = runtimes_[moved];
        occupant_[grid.index(cells[i])] = -1;
        occupant_[grid.index(cells[i + 1])] = moved;
        victim.prev = victim.current;
        victim.current = cells[i + 1];
        victim.moved_along_path = false;
        victim.moved_this_step = true;
        victim.displaced_this_step = true;
        victim.return_route.clear();
        victim.route_pos = 0;
        victim.rejoin_index = -1;
        victim.route_is_bypass = false;
        victim.route_beyond = -1;
        const int at = own_path_index(victim, cells[i + 1]);
        if (at >= 0) {
            victim.off_path = false;
            victim.progress = at;
            victim.visited_this_step.insert(at);
            if (at == static_cast<int>(victim.path->cells.size()) - 1) {
                solve(victim, timestep_ + 1);
            }
        } else {
            victim.off_path = true;
        }
    }

    return true;
}

bool ProgressionEngine::compute_return_route(AgentRuntime& rt, int beyond_index, bool bypass,
                                             std::optional<Coord> banned) {
    const Grid& grid = instance_.grid;

    std::unordered_set<int> goal_cells;
    for (const Agent& agent : instance_.agents) {
        if (agent.id != rt.agent_id) goal_cells.insert(grid.index(agent.goal));
    }

    std::unordered_set<int> targets;
    const std::vector<Coord>& cells = rt.path->cells;
    for (size_t i = bypass ? beyond_index + 1 : 0; i < cells.size(); ++i) {
        if (bypass && i + 1 < cells.size()) {
            // Rejoining directly in front of a pinned agent is useless at
            // best and a trap at worst (the rejoin cell may be a pocket
            // nobody can be pushed out of); aim past it instead.
            const int ahead = occupant_[grid.index(cells[i + 1])];
            if (ahead >= 0 && cell_is_permanent(ahead)) continue;
        }
        targets.insert(grid.index(cells[i]));
    }
    if (targets.empty()) return false;

    // First pass keeps clear of every other goal so the route cannot be
    // invalidated by agents finishing on it; if no such route exists, the
    // retry tolerates goal cells and relies on rerouting later.
    for (const bool avoid_goals : {true, false}) {
        const auto admissible = [&](Coord cell) {
            if (banned.has_value() && cell == *banned) return false;
            const int occ = occupant_[grid.index(cell)];
            if (occ >= 0 && cell_is_permanent(occ)) return false;
            if (avoid_goals && goal_cells.count(grid.index(cell)) > 0) return false;
            return true;
        };
        std::queue<int> frontier;
        std::unordered_map<int, int> parent;
        std::unordered_set<int> seen{grid.index(rt.current)};
        frontier.push(grid.index(rt.current));
        int found = -1;
        while (!frontier.empty() && found < 0) {
            const int at = frontier.front();
            frontier.pop();
            if (targets.count(at) > 0 && at != grid.index(rt.current)) {
                found = at;
                break;
            }
            for_each_neighbor(grid, grid.coord(at), [&](Coord next, int) {
                const int idx = grid.index(next);
                if (seen.count(idx) > 0 || !admissible(next)) return;
                seen.insert(idx);
                parent.emplace(idx, at);
                frontier.push(idx);
            });
        }
        if (found < 0) continue;
        std::vector<Coord> path = walk_parents(grid, parent, rt.current, grid.coord(found));
        rt.return_route.assign(path.begin() + 1, path.end());
        rt.route_pos = 0;
        rt.rejoin_index = own_path_index(rt, grid.coord(found));
        rt.route_is_bypass = bypass;
        rt.route_beyond = bypass ? beyond_index : -1;
        return true;
    }
    return false;
}

bool ProgressionEngine::displacement_ever_possible(const AgentRuntime& rt, Coord target) const {
    // Decides whether waiting on the occupant of `target` can ever pay
    // off while rt holds its position: a blank must be reachable from
    // `target` through cells that are neither pinned nor rt's own.
    // Private zones and same-step displacement marks are transient, so
    // they are deliberately ignored here.
    const Grid& grid = instance_.grid;
    std::queue<int> frontier;
    std::unordered_set<int> seen{grid.index(target)};
    frontier.push(grid.index(target));
    while (!frontier.empty()) {
        const int at = frontier.front();
        frontier.pop();
        bool blank_found = false;
        for_each_neighbor(grid, grid.coord(at), [&](Coord next, int) {
            const int idx = grid.index(next);
            if (seen.count(idx) > 0 || next == rt.current) return;
            const int occ = occupant_[idx];
            if (occ >= 0 && cell_is_permanent(occ)) return;
            seen.insert(idx);
            if (occ == -1) {
                blank_found = true;
            } else {
                frontier.push(idx);
            }
        });
        if (blank_found) return true;
    }
    return false;
}

void ProgressionEngine::arrive_on_route(AgentRuntime& rt, Coord next) {
    ++rt.route_pos;
    const bool exhausted = rt.route_pos >= rt.return_route.size();
    const int at = own_path_index(rt, next);
    int rejoin_at = -1;
    if (exhausted) {
        if (at != rt.rejoin_index) {
            throw std::logic_error("progression: return route ends off the path");
        }
        rejoin_at = rt.rejoin_index;
    } else if (at >= 0 && (!rt.route_is_bypass || at > rt.progress + 1)) {
        // Walking back may touch the path early; rejoin at the first
        // opportunity (a bypass only rejoins beyond the blocked cell).
        rejoin_at = at;
    }
    if (rejoin_at < 0) return;
    rt.off_path = false;
    rt.progress = rejoin_at;
    rt.visited_this_step.insert(rejoin_at);
    rt.return_route.clear();
    rt.route_pos = 0;
    rt.rejoin_index = -1;
    rt.route_is_bypass = false;
    rt.route_beyond = -1;
    if (rejoin_at == static_cast<int>(rt.path->cells.size()) - 1) {
        solve(rt, timestep_ + 1);
    }
}

void ProgressionEngine::act_off_path(AgentRuntime& rt) {
    // One recompute attempt per turn: a stale or structurally blocked
    // route is dropped and replaced (keeping its targeting kind), then
    // the fresh route is acted on immediately.
    for (int attempt = 0; attempt < 2; ++attempt) {
        if (rt.route_pos >= rt.return_route.size()) {
            rt.return_route.clear();
            rt.route_pos = 0;
            if (!compute_return_route(rt, rt.route_beyond, rt.route_is_bypass)) {
                rt.moved_along_path = false;
                return;
            }
        }
        const Coord next = rt.return_route[rt.route_pos];
        const int occ = occupant_[instance_.grid.index(next)];
        if (occ >= 0 && cell_is_permanent(occ)) {
            rt.return_route.clear();
            rt.route_pos = 0;
            rt.rejoin_index = -1;
            continue;
        }
        if (in_higher_zone(rt, next)) {
            rt.moved_along_path = false;
            return;
        }
        if (occ == -1) {
            do_move(rt, next, false);
            arrive_on_route(rt, next);
            return;
        }
        if (runtimes_[occ].priority < rt.priority) {
            rt.moved_along_path = false;  // wait for the higher-priority agent
            return;
        }
        if (displace_with_blank(rt, next)) {
            do_move(rt, next, false);
            arrive_on_route(rt, next);
            return;
        }
        if (!displacement_ever_possible(rt, next)) {
            // The occupant is sealed in by pinned agents as long as rt
            // stands here; waiting would deadlock. Route around it.
            rt.return_route.clear();
            rt.route_pos = 0;
            rt.rejoin_index = -1;
            if (compute_return_route(rt, rt.route_beyond, rt.route_is_bypass, next)) {
                continue;
            }
        }
        rt.moved_along_path = false;  // no blank reachable this step
        return;
    }
    rt.moved_along_path = false;
}

void ProgressionEngine::act_on_path(AgentRuntime& rt) {
    const Coord next = rt.path->cells[rt.progress + 1];
    const int occ = occupant_[instance_.grid.index(next)];
    if (occ == -1) {
        do_move(rt, next, true);
        return;
    }
    if (cell_is_permanent(occ)) {
        // The occupant will never move again; leave the path and rejoin
        // it beyond the blocked cell.
        if (compute_return_route(rt, rt.progress + 1, true)) {
            rt.off_path = true;
            act_off_path(rt);
        } else {
            rt.moved_along_path = false;
        }
        return;
    }
    if (runtimes_[occ].priority < rt.priority) {
        rt.moved_along_path = false;  // wait for the higher-priority agent
        return;
    }
    if (displace_with_blank(rt, next)) {
        do_move(rt, next, true);
        return;
    }
    if (!displacement_ever_possible(rt, next) &&
        compute_return_route(rt, rt.progress + 1, true, next)) {
        // The occupant can never be pushed clear while rt stands here;
        // divert around its cell as if it were pinned.
        rt.off_path = true;
        act_off_path(rt);
        return;
    }
    rt.moved_along_path = false;  // no blank reachable this step
}

void ProgressionEngine::step() {
    for (AgentRuntime& rt : runtimes_) {
        rt.moved_this_step = false;
        rt.displaced_this_step = false;
        rt.visited_this_step.clear();
        if (rt.path != nullptr && !rt.solved && !rt.off_path) {
            rt.visited_this_step.insert(rt.progress);
        }
    }
    for (const int id : priority_order_) {
        AgentRuntime& rt = runtimes_[id];
        if (rt.path == nullptr || rt.solved) continue;
        if (rt.moved_this_step) continue;  // displaced earlier this step
        if (rt.off_path) {
            act_off_path(rt);
        } else {
            act_on_path(rt);
        }
    }
    ++timestep_;
    for (const AgentRuntime& rt : runtimes_) {
        trajectories_[rt.agent_id].positions.push_back(rt.current);
    }
}

RunResult ProgressionEngine::result(RunStatus status) const {
    RunResult out;
    out.trajectories = trajectories_;
    out.conflicts = conflicts_;
    out.status = status;
    out.timesteps = timestep_;
    out.goal_arrival = goal_arrival_;
    out.outcomes.reserve(runtimes_.size());
    for (const AgentRuntime& rt : runtimes_) {
        if (rt.path == nullptr) {
            out.outcomes.push_back(AgentOutcome::non_slidable);
        } else if (rt.solved) {
            out.outcomes.push_back(AgentOutcome::solved);
        } else {
            out.outcomes.push_back(AgentOutcome::unsolved);
        }
    }
    return out;
}

RunResult run(const Instance& instance, const PlanAllResult& plans, int step_budget) {
    if (step_budget <= 0) {
        throw std::invalid_argument("run: step budget must be positive");
    }
    ProgressionEngine engine(instance, plans);
    while (!engine.done() && engine.timestep() < step_budget) {
        engine.step();
    }
    return engine.result(engine.done() ? RunStatus::all_solved
                                       : RunStatus::budget_exhausted);
}

std::string save_trajectories(const RunResult& result) {
    std::ostringstream out;
    for (size_t id = 0; id < result.trajectories.size(); ++id) {
        const Trajectory& traj = result.trajectories[id];
        out << "agent " << traj.agent_id << ' ' << to_string(result.outcomes[id]) << '\n';
        for (Coord position : traj.positions) {
            out << position.row << ' ' << position.col << '\n';
        }
    }
    return out.str();
}

namespace {

std::optional<AgentOutcome> outcome_from(const std::string& word) {
    if (word == "solved") return AgentOutcome::solved;
    if (word == "non_slidable") return AgentOutcome::non_slidable;
    if (word == "unsolved") return AgentOutcome::unsolved;
    return std::nullopt;
}

}  // namespace

std::vector<TrajectoryRecord> load_trajectories(std::istream& in) {
    std::vector<TrajectoryRecord> records;
    std::unordered_set<int> seen_ids;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::istringstream fields(line);
        std::string head;
        fields >> head;
        if (head == "agent") {
            int id = 0;
            std::string status, extra;
            if (!(fields >> id >> status) || (fields >> extra)) {
                throw ParseError("malformed agent header", line_no);
            }
            const auto outcome = outcome_from(status);
            if (!outcome.has_value()) {
                throw ParseError("unknown agent status '" + status + "'", line_no);
            }
            if (!seen_ids.insert(id).second) {
                throw ParseError("duplicate agent id " + std::to_string(id), line_no);
            }
            records.push_back(TrajectoryRecord{id, *outcome, {}});
            continue;
        }
        if (records.empty()) {
            throw ParseError("position line before any agent header", line_no);
        }
        std::istringstream coords(line);
        Coord position{};
        std::string extra;
        if (!(coords >> position.row >> position.col) || (coords >> extra)) {
            throw ParseError("malformed position line", line_no);
        }
        records.back().positions.push_back(position);
    }
    for (const TrajectoryRecord& record : records) {
        if (record.positions.empty()) {
            throw ParseError("agent " + std::to_string(record.agent_id) + " has no positions");
        }
    }
    return records;
}

}  // namespace mapp
