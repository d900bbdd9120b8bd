#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mapp/geometry.hpp"

namespace mapp {

// Occupancy model of the workspace: every cell is either traversable or
// blocked. Immutable after construction; safe to share across threads.
class Grid {
public:
    Grid(int width, int height, std::vector<uint8_t> blocked);

    // All-traversable grid.
    static Grid open(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    int cell_count() const { return width_ * height_; }

    bool in_bounds(Coord c) const {
        return c.row >= 0 && c.row < height_ && c.col >= 0 && c.col < width_;
    }
    bool blocked(Coord c) const { return blocked_[index(c)] != 0; }
    bool traversable(Coord c) const { return in_bounds(c) && !blocked(c); }

    int index(Coord c) const { return c.row * width_ + c.col; }
    Coord coord(int index) const {
        return {static_cast<int32_t>(index / width_), static_cast<int32_t>(index % width_)};
    }

    int64_t blocked_count() const;

    friend bool operator==(const Grid&, const Grid&) = default;

private:
    int width_;
    int height_;
    std::vector<uint8_t> blocked_;  // row-major, 1 = untraversable
};

// Traversable cardinal neighbors of c in the fixed order up, down, left,
// right. Throws std::invalid_argument if c is out of bounds or blocked.
std::vector<Coord> neighbors(const Grid& grid, Coord c);

// Allocation-free neighbor walk for hot paths; fn(cell, dir).
template <typename Fn>
inline void for_each_neighbor(const Grid& grid, Coord c, Fn&& fn) {
    for (int d = 0; d < 4; ++d) {
        Coord n = step(c, d);
        if (grid.traversable(n)) fn(n, d);
    }
}

struct Agent {
    int id = 0;
    Coord start;
    Coord goal;
    int priority = 0;  // smaller value = higher priority

    friend bool operator==(const Agent&, const Agent&) = default;
};

struct Instance {
    Grid grid;
    std::vector<Agent> agents;
};

// Agent/Instance invariant check: ids 0..n-1 in list order, priorities a
// permutation of 0..n-1, start/goal traversable, starts pairwise distinct,
// goals pairwise distinct. Returns human-readable problems (empty = valid).
std::vector<std::string> instance_problems(const Grid& grid, const std::vector<Agent>& agents);

}  // namespace mapp
