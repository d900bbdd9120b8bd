#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <vector>

#include "doctest.h"
#include "mapp/bitgrid.hpp"
#include "mapp/kernels.hpp"

using namespace mapp;

namespace {

Grid random_grid(std::mt19937_64& rng, int w, int h, int block_permille) {
    std::vector<uint8_t> blocked(static_cast<size_t>(w) * h);
    for (auto& cell : blocked) {
        cell = (rng() % 1000) < static_cast<uint64_t>(block_permille) ? 1 : 0;
    }
    return Grid(w, h, std::move(blocked));
}

// Plain queue BFS, the reference for everything the kernels accelerate.
std::set<Coord> bfs_reachable(const Grid& grid, Coord from) {
    std::set<Coord> seen{from};
    std::queue<Coord> queue;
    queue.push(from);
    while (!queue.empty()) {
        Coord cur = queue.front();
        queue.pop();
        for_each_neighbor(grid, cur, [&](Coord n, int) {
            if (seen.insert(n).second) {
                queue.push(n);
            }
        });
    }
    return seen;
}

bool guards_zero(const BitRows& bits) {
    const uint64_t* front = bits.row(0) - 1;
    if (*front != 0) {
        return false;
    }
    for (int r = 0; r < bits.height(); ++r) {
        const uint64_t* row = bits.row(r);
        for (int w = bits.words_per_row(); w < bits.stride(); ++w) {
            if (row[w] != 0) {
                return false;
            }
        }
    }
    return true;
}

}  // namespace

TEST_CASE("BitRows bit addressing across word boundaries") {
    for (int width : {1, 63, 64, 65, 130}) {
        BitRows bits(width, 3);
        CHECK(bits.count() == 0);
        CHECK_FALSE(bits.any());
        Coord last{2, width - 1};
        bits.set(last);
        bits.set({0, 0});
        CHECK(bits.test(last));
        CHECK(bits.test({0, 0}));
        CHECK_FALSE(bits.test({1, 0}));
        CHECK(bits.count() == 2);
        CHECK(bits.any());
        bits.clear(last);
        CHECK_FALSE(bits.test(last));
        CHECK(bits.count() == 1);
        CHECK(guards_zero(bits));
    }
}

TEST_CASE("BitRows for_each_set is row-major") {
    BitRows bits(70, 2);
    bits.set({1, 3});
    bits.set({0, 69});
    bits.set({0, 2});
    std::vector<Coord> seen;
    bits.for_each_set([&](Coord c) { seen.push_back(c); });
    CHECK(seen == std::vector<Coord>{{0, 2}, {0, 69}, {1, 3}});
}

TEST_CASE("traversable_mask mirrors the grid") {
    std::mt19937_64 rng(5);
    Grid g = random_grid(rng, 70, 9, 300);
    BitRows mask = traversable_mask(g);
    int set_bits = 0;
    for (int r = 0; r < g.height(); ++r) {
        for (int c = 0; c < g.width(); ++c) {
            CHECK(mask.test({r, c}) == g.traversable({r, c}));
            set_bits += g.traversable({r, c}) ? 1 : 0;
        }
    }
    CHECK(mask.count() == set_bits);
}

TEST_CASE("flood kernels agree bit-for-bit across backends") {
    auto backends = kernels::available_backends();
    REQUIRE_FALSE(backends.empty());
    CHECK(std::string(backends[0]->name) == "scalar");
    INFO("active backend: ", kernels::active_backend().name);

    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int w = 1 + static_cast<int>(rng() % 200);
        int h = 1 + static_cast<int>(rng() % 12);
        BitRows allow(w, h), frontier(w, h), visited(w, h);
        for (int r = 0; r < h; ++r) {
            for (int c = 0; c < w; ++c) {
                if (rng() % 4 != 0) allow.set({r, c});
                if (rng() % 8 == 0) frontier.set({r, c});
                if (rng() % 6 == 0) visited.set({r, c});
            }
        }
        int r0 = static_cast<int>(rng() % h);
        int r1 = r0 + 1 + static_cast<int>(rng() % (h - r0));

        BitRows ref_visited = visited, ref_out(w, h);
        uint64_t ref_any = kernels::flood_step_scalar(
            frontier.row(0), allow.row(0), ref_visited.row(0), ref_out.row(0),
            allow.words_per_row(), allow.stride(), r0, r1, h);

        for (const auto* backend : backends) {
            BitRows got_visited = visited, got_out(w, h);
            uint64_t got_any =
                backend->flood_step(frontier.row(0), allow.row(0), got_visited.row(0),
                                    got_out.row(0), allow.words_per_row(), allow.stride(), r0,
                                    r1, h);
            CAPTURE(backend->name);
            CAPTURE(trial);
            CHECK(got_any == ref_any);
            CHECK(got_visited == ref_visited);
            CHECK(got_out == ref_out);
            CHECK(guards_zero(got_visited));
            CHECK(guards_zero(got_out));
        }
    }
}

TEST_CASE("FloodFill matches queue BFS on random grids") {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 60; ++trial) {
        int w = 2 + static_cast<int>(rng() % 90);
        int h = 2 + static_cast<int>(rng() % 20);
        Grid g = random_grid(rng, w, h, 350);
        BitRows allow = traversable_mask(g);

        Coord from{-1, -1};
        for (int r = 0; r < h && from.row < 0; ++r) {
            for (int c = 0; c < w && from.row < 0; ++c) {
                if (g.traversable({r, c})) from = {r, c};
            }
        }
        if (from.row < 0) continue;

        auto expected = bfs_reachable(g, from);
        FloodFill fill(w, h);
        fill.run(allow, from);
        CHECK(fill.visited().count() == static_cast<int>(expected.size()));
        for (Coord c : expected) {
            CHECK(fill.visited().test(c));
        }

        // Reuse the same workspace: target query must agree with the oracle.
        Coord probe{static_cast<int32_t>(rng() % h), static_cast<int32_t>(rng() % w)};
        if (g.traversable(probe)) {
            CHECK(fill.run(allow, from, &probe) == (expected.count(probe) > 0));
        }
    }
}

TEST_CASE("FloodFill rejects shape mismatch and blocked starts") {
    Grid g = Grid::open(4, 4);
    BitRows allow = traversable_mask(g);
    FloodFill wrong(5, 4);
    CHECK_THROWS_AS(wrong.run(allow, {0, 0}), std::invalid_argument);

    BitRows closed(4, 4);
    FloodFill fill(4, 4);
    CHECK_THROWS_AS(fill.run(closed, {0, 0}), std::invalid_argument);
}

TEST_CASE("connected_components labels match BFS equivalence classes") {
    std::mt19937_64 rng(77);
    for (int trial = 0; trial < 30; ++trial) {
        Grid g = random_grid(rng, 40, 15, 400);
        Components comps = connected_components(g);

        int traversable = 0;
        std::vector<Coord> first_cell(comps.sizes.size(), Coord{-1, -1});
        for (int r = 0; r < g.height(); ++r) {
            for (int c = 0; c < g.width(); ++c) {
                Coord cell{r, c};
                int label = comps.label[g.index(cell)];
                if (!g.traversable(cell)) {
                    CHECK(label == -1);
                    continue;
                }
                ++traversable;
                REQUIRE(label >= 0);
                REQUIRE(label < static_cast<int>(comps.sizes.size()));
                if (first_cell[label].row < 0) first_cell[label] = cell;
            }
        }
        // One oracle BFS per component: its reach set must be exactly the
        // cells carrying that label.
        for (size_t label = 0; label < comps.sizes.size(); ++label) {
            auto reach = bfs_reachable(g, first_cell[label]);
            CHECK(static_cast<int>(reach.size()) == comps.sizes[label]);
            for (Coord other : reach) {
                CHECK(comps.label[g.index(other)] == static_cast<int>(label));
            }
        }
        int labeled = 0;
        for (int size : comps.sizes) labeled += size;
        CHECK(labeled == traversable);
        if (!comps.sizes.empty()) {
            int biggest = comps.largest();
            for (int size : comps.sizes) CHECK(comps.sizes[biggest] >= size);
        }
    }
}
