#pragma once

#include <string>
#include <vector>

#include "mapp/grid.hpp"
#include "mapp/progression.hpp"
#include "mapp/slidable.hpp"

namespace mapp {

// swap is advisory: simultaneous exchange of adjacent cells is allowed by
// the solution-validity definition (vertex occupancy only) but the engine
// must never produce one.
enum class ViolationKind {
    vertex_conflict,
    discontinuous_move,
    blocked_cell,
    wrong_endpoint,
    swap,
};

const char* to_string(ViolationKind kind);
bool is_hard(ViolationKind kind);

// timestep conventions: vertex_conflict and blocked_cell carry the index
// of the offending position; discontinuous_move and swap carry the index
// of the later position of the move; wrong_endpoint carries 0 for a start
// mismatch and the final index for a goal mismatch.
struct Violation {
    ViolationKind kind = ViolationKind::vertex_conflict;
    int timestep = 0;
    std::vector<int> agents;
    std::vector<Coord> cells;

    friend bool operator==(const Violation&, const Violation&) = default;
};

struct ValidateOptions {
    bool pad_with_final = false;  // tolerate unequal lengths by padding
};

// Checks trajectories against the instance from scratch: one cell per
// agent per timestep, wait-or-cardinal moves, traversable cells,
// endpoints match starts (and goals for agents reported solved). Throws
// std::invalid_argument on malformed input (id mismatch, empty record,
// unequal lengths without padding).
std::vector<Violation> validate(const Instance& instance,
                                const std::vector<TrajectoryRecord>& records,
                                const ValidateOptions& options = {});

std::vector<TrajectoryRecord> to_records(const RunResult& result);

// One line per violation: `kind timestep agent,agent row:col row:col`.
std::string violation_report(const std::vector<Violation>& violations);

// Re-derived verdict for one planned agent; empty problems = the plan
// passes every Slidable condition.
struct SlidableReport {
    int agent_id = 0;
    bool has_path = false;
    std::vector<std::string> problems;

    bool passed() const { return has_path && problems.empty(); }
};

// Re-checks every Slidable condition of every planned path without
// consulting any search state: path shape, the initial-blank rule, goal
// isolation of path and bypass cells, and an independently searched
// bypass around every interior cell.
std::vector<SlidableReport> verify_slidable(const Instance& instance,
                                            const PlanAllResult& plans);

// Exhaustive joint-configuration BFS for tiny instances. Vertex conflicts
// and swaps are both excluded, so unsat claims are conservative.
struct JointOracleResult {
    enum class Status { solved, unsat, refused };
    Status status = Status::refused;
    int makespan = -1;
    std::vector<Trajectory> trajectories;  // agent id order when solved
};

const char* to_string(JointOracleResult::Status status);

// Refuses instances beyond 3 agents or 6x6 cells rather than guessing.
JointOracleResult joint_oracle(const Instance& instance);

}  // namespace mapp
