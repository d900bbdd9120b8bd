#include "mapp/validator.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace mapp {

const char* to_string(ViolationKind kind) {
    switch (kind) {
        case ViolationKind::vertex_conflict: return "vertex_conflict";
        case ViolationKind::discontinuous_move: return "discontinuous_move";
        case ViolationKind::blocked_cell: return "blocked_cell";
        case ViolationKind::wrong_endpoint: return "wrong_endpoint";
        case ViolationKind::swap: return "swap";
    }
    throw std::logic_error("to_string: unknown ViolationKind");
}

bool is_hard(ViolationKind kind) { return kind != ViolationKind::swap; }

std::vector<TrajectoryRecord> to_records(const RunResult& result) {
    std::vector<TrajectoryRecord> records;
    records.reserve(result.trajectories.size());
    for (size_t id = 0; id < result.trajectories.size(); ++id) {
        records.push_back(TrajectoryRecord{result.trajectories[id].agent_id,
                                           result.outcomes[id],
                                           result.trajectories[id].positions});
    }
    return records;
}

std::vector<Violation> validate(const Instance& instance,
                                const std::vector<TrajectoryRecord>& records,
                                const ValidateOptions& options) {
    const Grid& grid = instance.grid;
    const size_t n = instance.agents.size();
    if (records.size() != n) {
        throw std::invalid_argument("validate: expected " + std::to_string(n) +
                                    " trajectories, got " + std::to_string(records.size()));
    }

    // Index records by agent id; every instance agent needs exactly one.
    std::vector<const TrajectoryRecord*> by_id(n, nullptr);
    for (const TrajectoryRecord& record : records) {
        if (record.agent_id < 0 || record.agent_id >= static_cast<int>(n) ||
            by_id[record.agent_id] != nullptr) {
            throw std::invalid_argument("validate: trajectory ids do not match the instance");
        }
        if (record.positions.empty()) {
            throw std::invalid_argument("validate: agent " + std::to_string(record.agent_id) +
                                        " has an empty trajectory");
        }
        by_id[record.agent_id] = &record;
    }

    size_t steps = 0;
    for (const auto* record : by_id) steps = std::max(steps, record->positions.size());
    std::vector<std::vector<Coord>> positions(n);
    for (size_t id = 0; id < n; ++id) {
        positions[id] = by_id[id]->positions;
        if (positions[id].size() != steps) {
            if (!options.pad_with_final) {
                throw std::invalid_argument("validate: trajectory lengths differ (agent " +
                                            std::to_string(id) + "); request padding to compare");
            }
            positions[id].resize(steps, positions[id].back());
        }
    }

    std::vector<Violation> violations;

    for (size_t id = 0; id < n; ++id) {
        const Agent& agent = instance.agents[id];
        const std::vector<Coord>& pos = positions[id];
        if (pos.front() != agent.start) {
            violations.push_back(
                {ViolationKind::wrong_endpoint, 0, {agent.id}, {pos.front()}});
        }
        if (by_id[id]->outcome == AgentOutcome::solved && pos.back() != agent.goal) {
            violations.push_back({ViolationKind::wrong_endpoint,
                                  static_cast<int>(steps) - 1,
                                  {agent.id},
                                  {pos.back()}});
        }
        for (size_t t = 0; t < steps; ++t) {
            if (!grid.traversable(pos[t])) {
                violations.push_back(
                    {ViolationKind::blocked_cell, static_cast<int>(t), {agent.id}, {pos[t]}});
            }
            if (t > 0 && manhattan(pos[t - 1], pos[t]) > 1) {
                violations.push_back({ViolationKind::discontinuous_move,
                                      static_cast<int>(t),
                                      {agent.id},
                                      {pos[t - 1], pos[t]}});
            }
        }
    }

    for (size_t t = 0; t < steps; ++t) {
        std::map<Coord, std::vector<int>> cell_agents;
        for (size_t id = 0; id < n; ++id) cell_agents[positions[id][t]].push_back(static_cast<int>(id));
        for (const auto& [cell, agents] : cell_agents) {
            if (agents.size() > 1) {
                violations.push_back(
                    {ViolationKind::vertex_conflict, static_cast<int>(t), agents, {cell}});
            }
        }
    }

    for (size_t t = 0; t + 1 < steps; ++t) {
        for (size_t a = 0; a < n; ++a) {
            for (size_t b = a + 1; b < n; ++b) {
                if (positions[a][t] != positions[a][t + 1] &&
                    positions[a][t + 1] == positions[b][t] &&
                    positions[b][t + 1] == positions[a][t]) {
                    violations.push_back({ViolationKind::swap,
                                          static_cast<int>(t) + 1,
                                          {static_cast<int>(a), static_cast<int>(b)},
                                          {positions[a][t], positions[b][t]}});
                }
            }
        }
    }

    std::stable_sort(violations.begin(), violations.end(),
                     [](const Violation& x, const Violation& y) {
                         return std::tie(x.timestep, x.kind, x.agents) <
                                std::tie(y.timestep, y.kind, y.agents);
                     });
    return violations;
}

std::string violation_report(const std::vector<Violation>& violations) {
    std::ostringstream out;
    for (const Violation& violation : violations) {
        out << to_string(violation.kind) << ' ' << violation.timestep << ' ';
        for (size_t i = 0; i < violation.agents.size(); ++i) {
            if (i > 0) out << ',';
            out << violation.agents[i];
        }
        for (const Coord& cell : violation.cells) {
            out << ' ' << cell.row << ':' << cell.col;
        }
        out << '\n';
    }
    return out.str();
}

namespace {

// Plain queue BFS used for the independent bypass re-derivation; shares
// no code with the planner's search.
bool bypass_exists(const Grid& grid, Coord from, Coord to, Coord excluded,
                   const std::set<Coord>& forbidden) {
    const auto allowed = [&](Coord c) {
        return grid.traversable(c) && c != excluded && forbidden.count(c) == 0;
    };
    if (!allowed(from) || !allowed(to)) return false;
    if (from == to) return true;
    std::vector<uint8_t> seen(grid.cell_count(), 0);
    seen[grid.index(from)] = 1;
    std::queue<Coord> frontier;
    frontier.push(from);
    while (!frontier.empty()) {
        const Coord at = frontier.front();
        frontier.pop();
        for (int d = 0; d < 4; ++d) {
            const Coord next = step(at, d);
            if (!allowed(next) || seen[grid.index(next)] != 0) continue;
            if (next == to) return true;
            seen[grid.index(next)] = 1;
            frontier.push(next);
        }
    }
    return false;
}

std::string coord_text(Coord c) {
    return "(" + std::to_string(c.row) + "," + std::to_string(c.col) + ")";
}

}  // namespace

std::vector<SlidableReport> verify_slidable(const Instance& instance,
                                            const PlanAllResult& plans) {
    const Grid& grid = instance.grid;
    if (plans.per_agent.size() != instance.agents.size()) {
        throw std::invalid_argument("verify_slidable: plan count does not match agent count");
    }

    std::vector<SlidableReport> reports;
    for (const Agent& agent : instance.agents) {
        const PlanResult& plan = plans.per_agent[agent.id];
        if (plan.agent_id != agent.id) {
            throw std::invalid_argument("verify_slidable: plan order does not match agent ids");
        }
        SlidableReport report;
        report.agent_id = agent.id;
        report.has_path = plan.path.has_value();
        if (!report.has_path) {
            reports.push_back(std::move(report));
            continue;
        }

        std::set<Coord> other_goals;
        std::set<Coord> other_starts;
        for (const Agent& other : instance.agents) {
            if (other.id == agent.id) continue;
            other_goals.insert(other.goal);
            other_starts.insert(other.start);
        }

        const std::vector<Coord>& cells = plan.path->cells;
        auto flag = [&](const std::string& problem) { report.problems.push_back(problem); };

        if (cells.empty()) {
            flag("path is empty");
        } else {
            if (cells.front() != agent.start) flag("path does not begin at the start");
            if (cells.back() != agent.goal) flag("path does not end at the goal");
        }
        for (size_t i = 0; i < cells.size(); ++i) {
            if (!grid.traversable(cells[i])) {
                flag("path cell " + coord_text(cells[i]) + " is not traversable");
            }
            if (other_goals.count(cells[i]) > 0) {
                flag("path crosses another agent's goal at " + coord_text(cells[i]));
            }
            if (i > 0 && manhattan(cells[i - 1], cells[i]) != 1) {
                flag("path jumps from " + coord_text(cells[i - 1]) + " to " +
                     coord_text(cells[i]));
            }
        }
        if (cells.size() >= 2 && other_starts.count(cells[1]) > 0) {
            flag("first step " + coord_text(cells[1]) + " is another agent's start, not blank");
        }

        const size_t interior = cells.size() >= 2 ? cells.size() - 2 : 0;
        if (plan.path->omegas.size() != interior) {
            flag("expected " + std::to_string(interior) + " bypasses, found " +
                 std::to_string(plan.path->omegas.size()));
        } else {
            for (size_t i = 1; i + 1 < cells.size(); ++i) {
                const std::vector<Coord>& omega = plan.path->omegas[i - 1];
                const std::string where = " in bypass around " + coord_text(cells[i]);
                if (omega.size() < 2 || omega.front() != cells[i - 1] ||
                    omega.back() != cells[i + 1]) {
                    flag("bypass endpoints do not frame" + where);
                }
                for (size_t j = 0; j < omega.size(); ++j) {
                    if (!grid.traversable(omega[j]) || omega[j] == cells[i]) {
                        flag("inadmissible cell " + coord_text(omega[j]) + where);
                    }
                    if (other_goals.count(omega[j]) > 0) {
                        flag("another agent's goal at " + coord_text(omega[j]) + where);
                    }
                    if (j > 0 && manhattan(omega[j - 1], omega[j]) != 1) {
                        flag("gap before " + coord_text(omega[j]) + where);
                    }
                }
                if (!bypass_exists(grid, cells[i - 1], cells[i + 1], cells[i], other_goals)) {
                    flag("no independent bypass around " + coord_text(cells[i]));
                }
            }
        }
        reports.push_back(std::move(report));
    }
    return reports;
}

const char* to_string(JointOracleResult::Status status) {
    switch (status) {
        case JointOracleResult::Status::solved: return "solved";
        case JointOracleResult::Status::unsat: return "unsat";
        case JointOracleResult::Status::refused: return "refused";
    }
    throw std::logic_error("to_string: unknown oracle status");
}

JointOracleResult joint_oracle(const Instance& instance) {
    constexpr int kMaxAgents = 3;
    constexpr int kMaxSide = 6;

    JointOracleResult result;
    const Grid& grid = instance.grid;
    const int n = static_cast<int>(instance.agents.size());
    if (n < 1 || n > kMaxAgents || grid.width() > kMaxSide || grid.height() > kMaxSide) {
        result.status = JointOracleResult::Status::refused;
        return result;
    }
    const auto problems = instance_problems(grid, instance.agents);
    if (!problems.empty()) {
        throw std::invalid_argument("joint_oracle: invalid instance: " + problems.front());
    }

    const int base = grid.cell_count();
    const auto encode = [&](const std::vector<int>& cells) {
        int64_t code = 0;
        for (int i = n - 1; i >= 0; --i) code = code * base + cells[i];
        return code;
    };
    const auto decode = [&](int64_t code) {
        std::vector<int> cells(n);
        for (int i = 0; i < n; ++i) {
            cells[i] = static_cast<int>(code % base);
            code /= base;
        }
        return cells;
    };

    int64_t space = 1;
    for (int i = 0; i < n; ++i) space *= base;

    std::vector<int> start_cells(n), goal_cells(n);
    for (int i = 0; i < n; ++i) {
        start_cells[i] = grid.index(instance.agents[i].start);
        goal_cells[i] = grid.index(instance.agents[i].goal);
    }
    const int64_t start_code = encode(start_cells);
    const int64_t goal_code = encode(goal_cells);

    std::vector<int64_t> parent(space, -1);
    parent[start_code] = start_code;
    std::queue<int64_t> frontier;
    frontier.push(start_code);
    bool found = start_code == goal_code;

    while (!frontier.empty() && !found) {
        const int64_t code = frontier.front();
        frontier.pop();
        const std::vector<int> cells = decode(code);

        // Enumerate joint moves agent by agent: stay first, then the
        // cardinal directions, rejecting vertex conflicts and swaps
        // against already-placed agents.
        std::vector<int> next(n);
        const auto place = [&](const auto& self, int agent) -> void {
            if (found) return;
            if (agent == n) {
                const int64_t next_code = encode(next);
                if (parent[next_code] >= 0) return;
                parent[next_code] = code;
                if (next_code == goal_code) {
                    found = true;
                    return;
                }
                frontier.push(next_code);
                return;
            }
            for (int move = 0; move < 5; ++move) {
                Coord cell = grid.coord(cells[agent]);
                if (move > 0) cell = step(cell, move - 1);
                if (!grid.traversable(cell)) continue;
                const int cell_index = grid.index(cell);
                bool clash = false;
                for (int before = 0; before < agent && !clash; ++before) {
                    if (next[before] == cell_index) clash = true;
                    if (next[before] == cells[agent] && cell_index == cells[before]) {
                        clash = true;  // adjacent exchange
                    }
                }
                if (clash) continue;
                next[agent] = cell_index;
                self(self, agent + 1);
            }
        };
        place(place, 0);
    }

    if (!found) {
        result.status = JointOracleResult::Status::unsat;
        return result;
    }

    std::vector<int64_t> codes{goal_code};
    while (codes.back() != start_code) codes.push_back(parent[codes.back()]);
    std::reverse(codes.begin(), codes.end());

    result.status = JointOracleResult::Status::solved;
    result.makespan = static_cast<int>(codes.size()) - 1;
    result.trajectories.resize(n);
    for (int i = 0; i < n; ++i) {
        result.trajectories[i].agent_id = instance.agents[i].id;
        for (const int64_t code : codes) {
            result.trajectories[i].positions.push_back(grid.coord(decode(code)[i]));
        }
    }
    return result;
}

}  // namespace mapp
