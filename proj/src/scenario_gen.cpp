#include "mapp/scenario_gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "mapp/bitgrid.hpp"

namespace mapp {

const char* to_string(InstanceType type) {
    switch (type) {
        case InstanceType::type1: return "type1";
        case InstanceType::type2: return "type2";
    }
    throw std::logic_error("to_string: unknown InstanceType");
}

InstanceType instance_type_from(const std::string& name) {
    if (name == "type1") return InstanceType::type1;
    if (name == "type2") return InstanceType::type2;
    throw std::invalid_argument("unknown instance type '" + name +
                                "'; expected type1 or type2");
}

std::vector<std::string> config_problems(const GenConfig& cfg) {
    std::vector<std::string> problems;
    if (cfg.width < 2 || cfg.height < 2) {
        problems.push_back("map must be at least 2x2");
    }
    if (!(cfg.density_min > 0.0 && cfg.density_min <= cfg.density_max &&
          cfg.density_max < 1.0)) {
        problems.push_back("density range must satisfy 0 < min <= max < 1");
    }
    if (!(cfg.building_min_frac > 0.0 &&
          cfg.building_min_frac <= cfg.building_max_frac &&
          cfg.building_max_frac < 1.0)) {
        problems.push_back("building side range must satisfy 0 < min <= max < 1");
    }
    if (cfg.agent_count < 1) problems.push_back("agent count must be positive");
    if (cfg.instance_type == InstanceType::type1) {
        if (cfg.border_band < 1 || 2 * cfg.border_band > cfg.width) {
            problems.push_back("border band must be positive and fit the map twice");
        }
    } else {
        if (cfg.zone_size < 1 || 2 * cfg.zone_size > std::min(cfg.width, cfg.height)) {
            problems.push_back("zone size must be positive and at most half the map side");
        }
    }
    return problems;
}

namespace {

void require_usable(const GenConfig& cfg) {
    const auto problems = config_problems(cfg);
    if (!problems.empty()) {
        std::string joined;
        for (const auto& p : problems) joined += (joined.empty() ? "" : "; ") + p;
        throw std::invalid_argument("generation config rejected: " + joined);
    }
}

// Unbiased draw from [0, n) using rejection on the engine's full 64-bit
// output; keeps results independent of the standard library's
// uniform_int_distribution, which varies between implementations.
uint64_t bounded(std::mt19937_64& rng, uint64_t n) {
    const uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    uint64_t draw;
    do {
        draw = rng();
    } while (draw >= limit);
    return draw % n;
}

int bounded_int(std::mt19937_64& rng, int lo, int hi) {  // inclusive range
    return lo + static_cast<int>(bounded(rng, static_cast<uint64_t>(hi - lo + 1)));
}

constexpr int kLayoutRetries = 64;       // whole-map regeneration budget
constexpr int kPlacementRejects = 4000;  // consecutive failed placements per layout
constexpr uint64_t kInstanceStream = 0x9e3779b97f4a7c15ULL;  // decorrelates map/instance draws

}  // namespace

Grid gen_urban_map(const GenConfig& cfg) {
    require_usable(cfg);
    const int total = cfg.width * cfg.height;
    const int side = std::min(cfg.width, cfg.height);
    const int min_side = std::max(1, static_cast<int>(std::lround(cfg.building_min_frac * side)));
    const int max_side = std::max(min_side, static_cast<int>(std::lround(cfg.building_max_frac * side)));
    const int min_cells = static_cast<int>(std::ceil(cfg.density_min * total));
    const int max_cells = static_cast<int>(std::floor(cfg.density_max * total));
    if (min_cells > max_cells) {
        throw GenError("density band [" + std::to_string(cfg.density_min) + ", " +
                       std::to_string(cfg.density_max) + "] admits no whole cell count on " +
                       std::to_string(cfg.width) + "x" + std::to_string(cfg.height));
    }

    // Buildings keep a 2-cell clearance from each other and from the map
    // border, so every street is at least two cells wide. That mirrors
    // the street grids the original evaluation ran on and keeps every
    // route locally bypassable instead of funneling agents through
    // one-cell alleys. `reserved` paints each building plus its
    // clearance margin; candidates may not touch it.
    constexpr int kGap = 2;

    std::mt19937_64 rng(cfg.seed);
    for (int layout = 0; layout < kLayoutRetries; ++layout) {
        const int target_cells = bounded_int(rng, min_cells, max_cells);
        std::vector<uint8_t> blocked(total, 0);
        std::vector<uint8_t> reserved(total, 0);
        int blocked_cells = 0;
        int rejects = 0;
        while (blocked_cells < target_cells && rejects < kPlacementRejects) {
            const int max_bh = std::min(max_side, cfg.height - 2 * kGap);
            const int max_bw = std::min(max_side, cfg.width - 2 * kGap);
            if (max_bh < min_side || max_bw < min_side) break;
            const int bh = bounded_int(rng, min_side, max_bh);
            const int bw = bounded_int(rng, min_side, max_bw);
            const int row = bounded_int(rng, kGap, cfg.height - kGap - bh);
            const int col = bounded_int(rng, kGap, cfg.width - kGap - bw);
            if (blocked_cells + bh * bw > max_cells) {
                ++rejects;
                continue;
            }
            bool crowded = false;
            for (int r = row; r < row + bh && !crowded; ++r) {
                for (int c = col; c < col + bw; ++c) {
                    if (reserved[r * cfg.width + c] != 0) {
                        crowded = true;
                        break;
                    }
                }
            }
            if (crowded) {
                ++rejects;
                continue;
            }
            for (int r = row; r < row + bh; ++r) {
                std::fill_n(blocked.begin() + r * cfg.width + col, bw, uint8_t{1});
            }
            for (int r = std::max(0, row - kGap); r < std::min(cfg.height, row + bh + kGap); ++r) {
                const int lo = std::max(0, col - kGap);
                const int hi = std::min(cfg.width, col + bw + kGap);
                std::fill_n(reserved.begin() + r * cfg.width + lo, hi - lo, uint8_t{1});
            }
            blocked_cells += bh * bw;
            rejects = 0;
        }
        if (blocked_cells < min_cells) continue;  // placement saturated below the band

        Grid grid(cfg.width, cfg.height, std::move(blocked));
        const Components comps = connected_components(grid);
        const int traversable = total - grid.blocked_count();
        const int main_label = comps.largest();
        // Largest component must hold at least 95% of traversable cells.
        if (main_label >= 0 && comps.sizes[main_label] * 20 >= traversable * 19) {
            return grid;
        }
    }
    throw GenError("no layout met density and connectivity after " +
                   std::to_string(kLayoutRetries) + " attempts (seed " +
                   std::to_string(cfg.seed) + ", " + std::to_string(cfg.width) + "x" +
                   std::to_string(cfg.height) + ")");
}

namespace {

struct Region {
    std::string name;
    int row_lo, row_hi;  // half-open row range
    int col_lo, col_hi;  // half-open column range
};

std::vector<Coord> main_component_cells(const Grid& grid, const Components& comps,
                                        const Region& region) {
    std::vector<Coord> cells;
    for (int r = region.row_lo; r < region.row_hi; ++r) {
        for (int c = region.col_lo; c < region.col_hi; ++c) {
            const Coord cell{r, c};
            if (grid.traversable(cell) && comps.label[grid.index(cell)] == comps.largest()) {
                cells.push_back(cell);
            }
        }
    }
    return cells;
}

// Fisher-Yates shuffle, then a greedy scan that only accepts cells at
// Chebyshev distance >= 2 from every cell already taken. Keeping
// same-role cells off each other's doorsteps means no first step can
// land on another agent's start and no pair of goals can close a
// two-cell street cross-section between them.
std::vector<Coord> sample_spread(std::vector<Coord> pool, int count, std::mt19937_64& rng,
                                 const std::string& pool_name) {
    for (int i = 0; i < static_cast<int>(pool.size()) - 1; ++i) {
        const int j = bounded_int(rng, i, static_cast<int>(pool.size()) - 1);
        std::swap(pool[i], pool[j]);
    }
    std::vector<Coord> taken;
    for (const Coord& cell : pool) {
        const bool clear = std::none_of(taken.begin(), taken.end(), [&](Coord t) {
            return std::abs(t.row - cell.row) <= 1 && std::abs(t.col - cell.col) <= 1;
        });
        if (!clear) continue;
        taken.push_back(cell);
        if (static_cast<int>(taken.size()) == count) return taken;
    }
    throw GenError(pool_name + " fits only " + std::to_string(taken.size()) +
                   " spread-out cells, need " + std::to_string(count));
}

}  // namespace

Instance gen_instance(const Grid& grid, const GenConfig& cfg) {
    require_usable(cfg);
    if (grid.width() != cfg.width || grid.height() != cfg.height) {
        throw std::invalid_argument("gen_instance: grid is " + std::to_string(grid.width()) +
                                    "x" + std::to_string(grid.height()) + " but config says " +
                                    std::to_string(cfg.width) + "x" + std::to_string(cfg.height));
    }

    Region start_region, goal_region;
    if (cfg.instance_type == InstanceType::type1) {
        start_region = {"left border band", 0, cfg.height, 0, cfg.border_band};
        goal_region = {"right border band", 0, cfg.height, cfg.width - cfg.border_band,
                       cfg.width};
    } else {
        const int row_lo = (cfg.height - cfg.zone_size) / 2;
        start_region = {"left zone", row_lo, row_lo + cfg.zone_size, 0, cfg.zone_size};
        goal_region = {"right zone", row_lo, row_lo + cfg.zone_size,
                       cfg.width - cfg.zone_size, cfg.width};
    }

    const Components comps = connected_components(grid);
    std::vector<Coord> start_pool = main_component_cells(grid, comps, start_region);
    std::vector<Coord> goal_pool = main_component_cells(grid, comps, goal_region);
    for (const auto& [pool, region] :
         {std::pair{&start_pool, &start_region}, std::pair{&goal_pool, &goal_region}}) {
        if (static_cast<int>(pool->size()) < cfg.agent_count) {
            throw GenError(region->name + " has " + std::to_string(pool->size()) +
                           " usable cells, need " + std::to_string(cfg.agent_count));
        }
    }

    std::mt19937_64 rng(cfg.seed ^ kInstanceStream);
    const auto starts =
        sample_spread(std::move(start_pool), cfg.agent_count, rng, start_region.name);
    const auto goals = sample_spread(std::move(goal_pool), cfg.agent_count, rng, goal_region.name);

    Instance instance{grid, {}};
    for (int id = 0; id < cfg.agent_count; ++id) {
        instance.agents.push_back(Agent{id, starts[id], goals[id], id});
    }
    return instance;
}

std::vector<std::string> config_comments(const GenConfig& cfg) {
    std::ostringstream density, buildings;
    density << "density " << cfg.density_min << ".." << cfg.density_max;
    buildings << "building-frac " << cfg.building_min_frac << ".." << cfg.building_max_frac;
    std::vector<std::string> lines{
        "generator urban-blocks",
        "size " + std::to_string(cfg.width) + "x" + std::to_string(cfg.height),
        density.str(),
        buildings.str(),
        "agents " + std::to_string(cfg.agent_count),
        std::string("type ") + to_string(cfg.instance_type),
        cfg.instance_type == InstanceType::type1
            ? "band " + std::to_string(cfg.border_band)
            : "zone " + std::to_string(cfg.zone_size),
        "seed " + std::to_string(cfg.seed),
    };
    return lines;
}

}  // namespace mapp
