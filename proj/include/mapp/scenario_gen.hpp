#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapp/grid.hpp"

namespace mapp {

// Which experimental layout an instance follows: type1 scatters starts and
// goals along thin bands at the left and right map borders; type2 packs
// them into two square zones flush to those borders and vertically
// centered, which funnels all traffic through the same corridors.
enum class InstanceType { type1, type2 };

const char* to_string(InstanceType type);

// Parses "type1"/"type2"; throws std::invalid_argument on anything else.
InstanceType instance_type_from(const std::string& name);

// Knobs for synthetic urban map and instance generation. All randomness
// is drawn from a Mersenne Twister (std::mt19937_64) through explicit
// bounded reductions, so a fixed seed reproduces bit-identical output on
// every platform regardless of the standard library's distribution code.
struct GenConfig {
    int width = 101;
    int height = 101;
    double density_min = 0.20;  // blocked-cell fraction bounds, inclusive
    double density_max = 0.25;
    double building_min_frac = 0.02;  // building side, fraction of min map side
    double building_max_frac = 0.08;
    int agent_count = 20;
    int border_band = 3;  // type-1 sampling band width, in columns
    int zone_size = 13;   // type-2 zone side
    uint64_t seed = 1;
    InstanceType instance_type = InstanceType::type1;
};

// Human-readable reasons the config cannot be generated from; empty means
// the config is usable.
std::vector<std::string> config_problems(const GenConfig& cfg);

// Generation gave up within its retry budget (map density or connectivity
// unreachable, or too few candidate cells for the requested agents).
struct GenError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Scatters non-overlapping rectangular "buildings" until the blocked
// fraction lands inside [density_min, density_max], retrying whole
// layouts until the largest traversable component holds at least 95% of
// the traversable cells. Deterministic per seed.
Grid gen_urban_map(const GenConfig& cfg);

// Samples agent_count distinct starts and distinct goals from the type's
// candidate regions, restricted to the grid's largest traversable
// component. Priorities equal agent ids. Deterministic per seed.
Instance gen_instance(const Grid& grid, const GenConfig& cfg);

// Parameter echo for scenario-file headers (save_scenario prepends '#').
std::vector<std::string> config_comments(const GenConfig& cfg);

}  // namespace mapp
