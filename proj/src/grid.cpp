#include "mapp/grid.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <set>
#include <stdexcept>

namespace mapp {

std::ostream& operator<<(std::ostream& os, Coord c) {
    return os << "(" << c.row << "," << c.col << ")";
}

Grid::Grid(int width, int height, std::vector<uint8_t> blocked)
    : width_(width), height_(height), blocked_(std::move(blocked)) {
    if (width_ <= 0 || height_ <= 0)
        throw std::invalid_argument("grid dimensions must be positive");
    if (blocked_.size() != static_cast<size_t>(width_) * static_cast<size_t>(height_))
        throw std::invalid_argument("occupancy table size does not match dimensions");
}

Grid Grid::open(int width, int height) {
    return Grid(width, height,
                std::vector<uint8_t>(static_cast<size_t>(width) * static_cast<size_t>(height), 0));
}

int64_t Grid::blocked_count() const {
    return std::count_if(blocked_.begin(), blocked_.end(), [](uint8_t b) { return b != 0; });
}

std::vector<Coord> neighbors(const Grid& grid, Coord c) {
    if (!grid.in_bounds(c)) throw std::invalid_argument("neighbors: coordinate out of bounds");
    if (grid.blocked(c)) throw std::invalid_argument("neighbors: coordinate is blocked");
    std::vector<Coord> out;
    out.reserve(4);
    for_each_neighbor(grid, c, [&](Coord n, int) { out.push_back(n); });
    return out;
}

std::vector<std::string> instance_problems(const Grid& grid, const std::vector<Agent>& agents) {
    std::vector<std::string> problems;
    auto complain = [&](int id, const std::string& what) {
        problems.push_back("agent " + std::to_string(id) + ": " + what);
    };

    std::set<Coord> starts, goals;
    std::vector<int> priorities;
    for (size_t i = 0; i < agents.size(); ++i) {
        const Agent& a = agents[i];
        if (a.id != static_cast<int>(i))
            complain(a.id, "id out of order, expected " + std::to_string(i));
        if (!grid.traversable(a.start)) complain(a.id, "start cell is blocked or out of bounds");
        if (!grid.traversable(a.goal)) complain(a.id, "goal cell is blocked or out of bounds");
        if (!starts.insert(a.start).second) complain(a.id, "duplicate start cell");
        if (!goals.insert(a.goal).second) complain(a.id, "duplicate goal cell");
        priorities.push_back(a.priority);
    }
    std::sort(priorities.begin(), priorities.end());
    for (size_t i = 0; i < priorities.size(); ++i) {
        if (priorities[i] != static_cast<int>(i)) {
            problems.push_back("priorities are not a permutation of 0.." +
                               std::to_string(agents.size() - 1));
            break;
        }
    }
    return problems;
}

}  // namespace mapp
