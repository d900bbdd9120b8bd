#pragma once

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "mapp/grid.hpp"

namespace mapp {

// Parse failure with 1-based line/column of the offending input; zero
// means the position is not meaningful for the failure.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what, int line = 0, int col = 0);
    int line;
    int col;
};

// Instance invariant failure; problems name the offending agent ids.
struct ValidationError : std::runtime_error {
    explicit ValidationError(std::vector<std::string> problems);
    std::vector<std::string> problems;
};

// Map file: "type octile" / "height H" / "width W" / "map", then H rows of
// W characters. '.' and 'G' are traversable, '@' and 'T' blocked.
Grid load_map(std::istream& in);
Grid load_map_file(const std::string& path);
std::string save_map(const Grid& grid);

// Scenario file: one agent per line,
//   id start_row start_col goal_row goal_col priority
// '#' comment lines and blank lines are ignored. Agents are validated
// against the Instance invariants on load.
std::vector<Agent> load_scenario(std::istream& in, const Grid& grid);
std::vector<Agent> load_scenario_file(const std::string& path, const Grid& grid);
std::string save_scenario(const std::vector<Agent>& agents,
                          const std::vector<std::string>& header_comments = {});

Instance load_instance(const std::string& map_path, const std::string& scen_path);

void write_file(const std::string& path, const std::string& contents);
std::string read_file(const std::string& path);

}  // namespace mapp
