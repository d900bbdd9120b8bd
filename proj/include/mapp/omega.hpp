#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <unordered_map>
#include <vector>

#include "mapp/bitgrid.hpp"
#include "mapp/grid.hpp"

namespace mapp {

// Shortest bypass from `from` to `to` that enters neither `excluded` nor
// any forbidden cell. Breadth-first with the fixed neighbor order, parent
// by first discovery, so the result is deterministic. Empty optional when
// no bypass exists. When radius_cap >= 0, cells farther than that
// Manhattan distance from `excluded` are not entered.
//
// Throws std::invalid_argument if from/to are not traversable or excluded
// coincides with either endpoint.
std::optional<std::vector<Coord>> omega_search(const Grid& grid, Coord from, Coord excluded,
                                               Coord to, const std::set<Coord>& forbidden,
                                               int radius_cap = -1);

// Existence-only bypass queries for the path search hot loop, equivalent to
// omega_search(...).has_value() for endpoints adjacent to the excluded
// cell. Three tiers, each exact:
//   1. O(1) local patterns (the corner diagonal, the parallel strip) that
//      witness a bypass outright;
//   2. a small windowed flood around the excluded cell, conclusive when it
//      either reaches `to` or dies without touching the window edge;
//   3. a full-grid flood, memoized per (from, excluded, to) triple.
// When a radius cap is configured all tiers are replaced by the capped
// omega_search itself, so capped existence stays exact too.
class OmegaOracle {
public:
    OmegaOracle(const Grid& grid, const std::set<Coord>& forbidden, int radius_cap = -1);

    // from and to must be traversable cells cardinally adjacent to
    // excluded, from != excluded != to.
    bool has_omega(Coord from, Coord excluded, Coord to);

private:
    bool admissible(Coord c) const {
        return grid_.traversable(c) && !forbidden_mask_.test(c);
    }
    bool pattern_witness(Coord from, Coord excluded, Coord to) const;
    // 1 = bypass found, 0 = conclusively none, -1 = window too small.
    int window_verdict(Coord from, Coord excluded, Coord to);
    bool full_flood(Coord from, Coord excluded, Coord to);

    const Grid& grid_;
    std::set<Coord> forbidden_;
    BitRows forbidden_mask_;
    int radius_cap_;
    FloodFill window_fill_;
    FloodFill grid_fill_;
    BitRows window_allow_;
    std::optional<BitRows> grid_allow_;  // built lazily for tier 3
    std::unordered_map<uint64_t, bool> memo_;
    bool memo_usable_ = false;

    static constexpr int kWindowRadius = 4;
};

}  // namespace mapp
