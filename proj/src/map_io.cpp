#include "mapp/map_io.hpp"

#include <fstream>
#include <istream>
#include <sstream>

namespace mapp {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
    std::string out;
    for (size_t i = 0; i < parts.size(); ++i) {
        if (i) out += sep;
        out += parts[i];
    }
    return out;
}

// Reads the next line, stripping a trailing '\r'. Returns false at EOF.
bool next_line(std::istream& in, std::string& line, int& lineno) {
    if (!std::getline(in, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
}

int parse_header_int(const std::string& line, const std::string& key, int lineno) {
    std::istringstream ss(line);
    std::string word;
    long value = -1;
    if (!(ss >> word) || word != key)
        throw ParseError("expected '" + key + " <n>'", lineno, 1);
    if (!(ss >> value) || value <= 0)
        throw ParseError(key + " must be a positive integer", lineno, static_cast<int>(key.size()) + 2);
    std::string rest;
    if (ss >> rest) throw ParseError("unexpected trailing token '" + rest + "'", lineno, 1);
    return static_cast<int>(value);
}

}  // namespace

namespace {

std::string parse_error_message(const std::string& what, int line, int col) {
    std::string where;
    if (line > 0) {
        where = " at line " + std::to_string(line);
        if (col > 0) where += ", column " + std::to_string(col);
    }
    return "parse error" + where + ": " + what;
}

}  // namespace

ParseError::ParseError(const std::string& what, int line_, int col_)
    : std::runtime_error(parse_error_message(what, line_, col_)), line(line_), col(col_) {}

ValidationError::ValidationError(std::vector<std::string> problems_)
    : std::runtime_error("invalid instance: " + join(problems_, "; ")), problems(std::move(problems_)) {}

Grid load_map(std::istream& in) {
    int lineno = 0;
    std::string line;

    if (!next_line(in, line, lineno) || line != "type octile")
        throw ParseError("expected 'type octile'", lineno ? lineno : 1, 1);
    if (!next_line(in, line, lineno)) throw ParseError("expected 'height <n>'", lineno + 1, 1);
    int height = parse_header_int(line, "height", lineno);
    if (!next_line(in, line, lineno)) throw ParseError("expected 'width <n>'", lineno + 1, 1);
    int width = parse_header_int(line, "width", lineno);
    if (!next_line(in, line, lineno) || line != "map")
        throw ParseError("expected 'map'", lineno ? lineno : 1, 1);

    std::vector<uint8_t> blocked(static_cast<size_t>(width) * height, 0);
    for (int r = 0; r < height; ++r) {
        if (!next_line(in, line, lineno))
            throw ParseError("map truncated: expected " + std::to_string(height) + " rows, got " +
                                 std::to_string(r),
                             lineno + 1, 1);
        if (static_cast<int>(line.size()) < width)
            throw ParseError("row shorter than declared width " + std::to_string(width), lineno,
                             static_cast<int>(line.size()) + 1);
        if (static_cast<int>(line.size()) > width)
            throw ParseError("row longer than declared width " + std::to_string(width), lineno,
                             width + 1);
        for (int c = 0; c < width; ++c) {
            char ch = line[c];
            if (ch == '@' || ch == 'T')
                blocked[static_cast<size_t>(r) * width + c] = 1;
            else if (ch != '.' && ch != 'G')
                throw ParseError(std::string("unknown map character '") + ch + "'", lineno, c + 1);
        }
    }
    while (next_line(in, line, lineno)) {
        if (!line.empty())
            throw ParseError("unexpected content after map body", lineno, 1);
    }
    return Grid(width, height, std::move(blocked));
}

std::string save_map(const Grid& grid) {
    std::string out;
    out += "type octile\n";
    out += "height " + std::to_string(grid.height()) + "\n";
    out += "width " + std::to_string(grid.width()) + "\n";
    out += "map\n";
    for (int r = 0; r < grid.height(); ++r) {
        for (int c = 0; c < grid.width(); ++c)
            out += grid.blocked({r, c}) ? '@' : '.';
        out += '\n';
    }
    return out;
}

std::vector<Agent> load_scenario(std::istream& in, const Grid& grid) {
    std::vector<Agent> agents;
    int lineno = 0;
    std::string line;
    while (next_line(in, line, lineno)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ss(line);
        Agent a;
        if (!(ss >> a.id >> a.start.row >> a.start.col >> a.goal.row >> a.goal.col >> a.priority))
            throw ParseError("expected 'id start_row start_col goal_row goal_col priority'", lineno, 1);
        std::string rest;
        if (ss >> rest) throw ParseError("unexpected trailing token '" + rest + "'", lineno, 1);
        agents.push_back(a);
    }
    auto problems = instance_problems(grid, agents);
    if (!problems.empty()) throw ValidationError(std::move(problems));
    return agents;
}

std::string save_scenario(const std::vector<Agent>& agents,
                          const std::vector<std::string>& header_comments) {
    std::string out;
    for (const auto& comment : header_comments) out += "# " + comment + "\n";
    for (const Agent& a : agents) {
        out += std::to_string(a.id) + " " + std::to_string(a.start.row) + " " +
               std::to_string(a.start.col) + " " + std::to_string(a.goal.row) + " " +
               std::to_string(a.goal.col) + " " + std::to_string(a.priority) + "\n";
    }
    return out;
}

Grid load_map_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open map file: " + path);
    return load_map(in);
}

std::vector<Agent> load_scenario_file(const std::string& path, const Grid& grid) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open scenario file: " + path);
    return load_scenario(in, grid);
}

Instance load_instance(const std::string& map_path, const std::string& scen_path) {
    Grid grid = load_map_file(map_path);
    std::vector<Agent> agents = load_scenario_file(scen_path, grid);
    return Instance{std::move(grid), std::move(agents)};
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write file: " + path);
    out << contents;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace mapp
