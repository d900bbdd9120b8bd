#include "mapp/omega.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace mapp {

std::optional<std::vector<Coord>> omega_search(const Grid& grid, Coord from, Coord excluded,
                                               Coord to, const std::set<Coord>& forbidden,
                                               int radius_cap) {
    if (!grid.traversable(from) || !grid.traversable(to)) {
        throw std::invalid_argument("omega_search: endpoints must be traversable");
    }
    if (excluded == from || excluded == to) {
        throw std::invalid_argument("omega_search: excluded cell coincides with an endpoint");
    }
    auto admissible = [&](Coord c) {
        return c != excluded && !forbidden.contains(c) &&
               (radius_cap < 0 || manhattan(c, excluded) <= radius_cap);
    };
    if (!admissible(from) || !admissible(to)) {
        return std::nullopt;
    }
    if (from == to) {
        return std::vector<Coord>{from};
    }

    // Queue BFS; parents by first discovery keep the result deterministic.
    std::unordered_map<int, int> parent;  // grid index -> predecessor index
    parent.emplace(grid.index(from), grid.index(from));
    std::queue<Coord> queue;
    queue.push(from);
    while (!queue.empty()) {
        Coord cur = queue.front();
        queue.pop();
        for_each_neighbor(grid, cur, [&](Coord n, int) {
            if (!admissible(n) || parent.contains(grid.index(n))) {
                return;
            }
            parent.emplace(grid.index(n), grid.index(cur));
            queue.push(n);
        });
        if (parent.contains(grid.index(to))) {
            std::vector<Coord> path;
            for (int at = grid.index(to);; at = parent.at(at)) {
                path.push_back(grid.coord(at));
                if (at == grid.index(from)) {
                    break;
                }
            }
            std::reverse(path.begin(), path.end());
            return path;
        }
    }
    return std::nullopt;
}

OmegaOracle::OmegaOracle(const Grid& grid, const std::set<Coord>& forbidden, int radius_cap)
    : grid_(grid),
      forbidden_(forbidden),
      forbidden_mask_(grid.width(), grid.height()),
      radius_cap_(radius_cap),
      window_fill_(2 * kWindowRadius + 1, 2 * kWindowRadius + 1),
      grid_fill_(grid.width(), grid.height()),
      window_allow_(2 * kWindowRadius + 1, 2 * kWindowRadius + 1) {
    for (Coord c : forbidden_) {
        if (grid_.in_bounds(c)) {
            forbidden_mask_.set(c);
        }
    }
    // The packed memo key gives each coordinate 21 bits.
    memo_usable_ = grid.cell_count() < (1 << 21);
}

bool OmegaOracle::has_omega(Coord from, Coord excluded, Coord to) {
    if (radius_cap_ >= 0) {
        return omega_search(grid_, from, excluded, to, forbidden_, radius_cap_).has_value();
    }
    if (!admissible(from) || !admissible(to)) {
        return false;
    }
    if (from == to) {
        return true;
    }
    if (pattern_witness(from, excluded, to)) {
        return true;
    }

    Coord lo = std::min(from, to);
    Coord hi = std::max(from, to);
    uint64_t key = static_cast<uint64_t>(grid_.index(lo)) |
                   static_cast<uint64_t>(grid_.index(excluded)) << 21 |
                   static_cast<uint64_t>(grid_.index(hi)) << 42;
    if (memo_usable_) {
        if (auto it = memo_.find(key); it != memo_.end()) {
            return it->second;
        }
    }

    int verdict = window_verdict(from, excluded, to);
    bool result = verdict >= 0 ? verdict == 1 : full_flood(from, excluded, to);
    if (memo_usable_) {
        memo_.emplace(key, result);
    }
    return result;
}

bool OmegaOracle::pattern_witness(Coord from, Coord excluded, Coord to) const {
    Coord da{from.row - excluded.row, from.col - excluded.col};
    Coord dc{to.row - excluded.row, to.col - excluded.col};
    if (da.row * dc.row + da.col * dc.col == 0) {
        // Perpendicular arms: the shared diagonal is a 2-step bypass.
        Coord diag{excluded.row + da.row + dc.row, excluded.col + da.col + dc.col};
        return admissible(diag);
    }
    // Opposite arms: a parallel 3-cell strip on either side is a 4-step
    // bypass.
    Coord perp{da.col != 0 ? 1 : 0, da.row != 0 ? 1 : 0};
    for (int sign : {-1, 1}) {
        Coord off{perp.row * sign, perp.col * sign};
        Coord s1{from.row + off.row, from.col + off.col};
        Coord s2{excluded.row + off.row, excluded.col + off.col};
        Coord s3{to.row + off.row, to.col + off.col};
        if (admissible(s1) && admissible(s2) && admissible(s3)) {
            return true;
        }
    }
    return false;
}

int OmegaOracle::window_verdict(Coord from, Coord excluded, Coord to) {
    constexpr int kSide = 2 * kWindowRadius + 1;
    Coord origin{excluded.row - kWindowRadius, excluded.col - kWindowRadius};
    auto to_window = [&](Coord c) { return Coord{c.row - origin.row, c.col - origin.col}; };
    auto to_grid = [&](Coord c) { return Coord{c.row + origin.row, c.col + origin.col}; };

    window_allow_.reset();
    for (int r = 0; r < kSide; ++r) {
        for (int c = 0; c < kSide; ++c) {
            Coord cell = to_grid({r, c});
            if (cell != excluded && grid_.in_bounds(cell) && admissible(cell)) {
                window_allow_.set({r, c});
            }
        }
    }

    Coord wto = to_window(to);
    if (window_fill_.run(window_allow_, to_window(from), &wto)) {
        return 1;
    }

    // The flood ran to exhaustion without reaching `to`. That is conclusive
    // unless some visited edge cell could step out of the window.
    const BitRows& visited = window_fill_.visited();
    auto escapes = [&](Coord wcell) {
        if (!visited.test(wcell)) {
            return false;
        }
        Coord cell = to_grid(wcell);
        for (int d = 0; d < 4; ++d) {
            Coord n = step(cell, d);
            Coord wn = to_window(n);
            bool outside = wn.row < 0 || wn.row >= kSide || wn.col < 0 || wn.col >= kSide;
            if (outside && grid_.in_bounds(n) && admissible(n)) {
                return true;
            }
        }
        return false;
    };
    for (int c = 0; c < kSide; ++c) {
        if (escapes({0, c}) || escapes({kSide - 1, c})) {
            return -1;
        }
    }
    for (int r = 1; r < kSide - 1; ++r) {
        if (escapes({r, 0}) || escapes({r, kSide - 1})) {
            return -1;
        }
    }
    return 0;
}

bool OmegaOracle::full_flood(Coord from, Coord excluded, Coord to) {
    if (!grid_allow_.has_value()) {
        grid_allow_ = traversable_mask(grid_);
        forbidden_mask_.for_each_set([&](Coord c) { grid_allow_->clear(c); });
    }
    bool was_admissible = grid_allow_->test(excluded);
    grid_allow_->clear(excluded);
    bool reached = grid_fill_.run(*grid_allow_, from, &to);
    if (was_admissible) {
        grid_allow_->set(excluded);
    }
    return reached;
}

}  // namespace mapp
