#pragma once

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <iosfwd>

namespace mapp {

// Grid coordinate, (row, col) with row 0 at the top. Ordering is
// lexicographic (row, then col); every deterministic tie-break in the
// planner relies on it.
struct Coord {
    int32_t row = 0;
    int32_t col = 0;

    friend auto operator<=>(const Coord&, const Coord&) = default;
};

inline int manhattan(Coord a, Coord b) {
    return std::abs(a.row - b.row) + std::abs(a.col - b.col);
}

std::ostream& operator<<(std::ostream& os, Coord c);

// Cardinal step offsets in the fixed expansion order: up, down, left, right.
inline constexpr Coord kCardinalSteps[4] = {{-1, 0}, {1, 0}, {0, -1}, {0, 1}};

inline Coord step(Coord c, int dir) {
    return {c.row + kCardinalSteps[dir].row, c.col + kCardinalSteps[dir].col};
}

// Direction index of the unit step a -> b; requires manhattan(a, b) == 1.
inline int dir_between(Coord a, Coord b) {
    if (b.row == a.row - 1) return 0;
    if (b.row == a.row + 1) return 1;
    if (b.col == a.col - 1) return 2;
    return 3;
}

}  // namespace mapp
