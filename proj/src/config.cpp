#include "romns/config.hpp"

#include <charconv>
#include <numbers>
#include <sstream>

#include "romns/container.hpp"
#include "romns/diagnostics.hpp"

namespace romns {

std::string to_string(Testcase t) {
  switch (t) {
    case Testcase::kVaryingAngle: return "varying-angle";
    case Testcase::kMovingMode: return "moving-mode";
    case Testcase::kCustom: return "custom";
  }
  return "?";
}

Testcase parse_testcase(const std::string& name) {
  if (name == "varying-angle") return Testcase::kVaryingAngle;
  if (name == "moving-mode") return Testcase::kMovingMode;
  if (name == "custom") return Testcase::kCustom;
  throw UsageError("unknown testcase '" + name + "' (expected varying-angle, moving-mode or custom)");
}

double SimConfig::end_time() const {
  if (t_end) return *t_end;
  return testcase == Testcase::kVaryingAngle ? 4.0 * std::numbers::pi : 20.0;
}

Index SimConfig::max_modes() const {
  Index m = 0;
  for (Index r : modes) m = std::max(m, r);
  return m;
}

void SimConfig::validate() const {
  if (nx < 2 || ny < 2) throw UsageError("config: nx and ny must be at least 2");
  if (!(x_max > x_min) || !(y_max > y_min)) throw UsageError("config: degenerate domain bounds");
  if (!(nu >= 0.0)) throw UsageError("config: nu must be non-negative");
  if (steps < 1) throw UsageError("config: steps must be positive");
  if (!(end_time() > 0.0)) throw UsageError("config: t_end must be positive");
  for (Index r : modes) {
    if (r < 1) throw UsageError("config: every entry of modes must be positive");
  }
  if (testcase == Testcase::kMovingMode && !(mode_t_end > mode_t_start)) {
    throw UsageError("config: mode_t_end must exceed mode_t_start");
  }
  if (testcase == Testcase::kCustom && bc_table.empty()) {
    throw UsageError("config: the custom testcase needs bc_table");
  }
}

namespace {

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw UsageError("config: " + key + " expects a number, got '" + v + "'");
  return out;
}

long long to_int(const std::string& key, const std::string& v) {
  long long out = 0;
  const auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) throw UsageError("config: " + key + " expects an integer, got '" + v + "'");
  return out;
}

std::vector<Index> to_list(const std::string& key, const std::string& v) {
  std::vector<Index> out;
  std::stringstream s(v);
  std::string item;
  while (std::getline(s, item, ',')) out.push_back(static_cast<Index>(to_int(key, trim(item))));
  if (out.empty()) throw UsageError("config: " + key + " must not be empty");
  return out;
}

}  // namespace

std::vector<Index> parse_modes(const std::string& v) { return to_list("modes", v); }

SimConfig parse_config(const std::string& text, SimConfig c) {
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw UsageError("config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (key == "testcase") c.testcase = parse_testcase(val);
    else if (key == "nx") c.nx = static_cast<int>(to_int(key, val));
    else if (key == "ny") c.ny = static_cast<int>(to_int(key, val));
    else if (key == "x_min") c.x_min = to_double(key, val);
    else if (key == "x_max") c.x_max = to_double(key, val);
    else if (key == "y_min") c.y_min = to_double(key, val);
    else if (key == "y_max") c.y_max = to_double(key, val);
    else if (key == "nu") c.nu = to_double(key, val);
    else if (key == "p_inf") c.p_inf = to_double(key, val);
    else if (key == "forcing") c.forcing.magnitude = to_double(key, val);
    else if (key == "forcing_x") c.forcing.x_center = to_double(key, val);
    else if (key == "forcing_y") c.forcing.y_center = to_double(key, val);
    else if (key == "forcing_half_height") c.forcing.half_height = to_double(key, val);
    else if (key == "t_end") c.t_end = to_double(key, val);
    else if (key == "steps") c.steps = static_cast<Index>(to_int(key, val));
    else if (key == "modes") c.modes = to_list(key, val);
    else if (key == "r_bc") c.r_bc = static_cast<Index>(to_int(key, val));
    else if (key == "mode_t_start") c.mode_t_start = to_double(key, val);
    else if (key == "mode_t_end") c.mode_t_end = to_double(key, val);
    else if (key == "bc_table") c.bc_table = val;
    else if (key == "seed") c.seed = static_cast<std::uint64_t>(to_int(key, val));
    else if (key == "output_dir") c.output_dir = val;
    else throw UsageError("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  return c;
}

SimConfig load_config(const std::string& path) {
  std::string text;
  try {
    text = read_file(path);
  } catch (const ArtifactError&) {
    throw UsageError("cannot read config file " + path);
  }
  return parse_config(text);
}

namespace {

std::string physics_text(const SimConfig& c) {
  std::ostringstream s;
  s << "testcase=" << to_string(c.testcase) << '\n'
    << "nx=" << c.nx << '\n'
    << "ny=" << c.ny << '\n'
    << "x_min=" << format_double(c.x_min) << '\n'
    << "x_max=" << format_double(c.x_max) << '\n'
    << "y_min=" << format_double(c.y_min) << '\n'
    << "y_max=" << format_double(c.y_max) << '\n'
    << "nu=" << format_double(c.nu) << '\n'
    << "p_inf=" << format_double(c.p_inf) << '\n'
    << "forcing=" << format_double(c.forcing.magnitude) << '\n'
    << "forcing_x=" << format_double(c.forcing.x_center) << '\n'
    << "forcing_y=" << format_double(c.forcing.y_center) << '\n'
    << "forcing_half_height=" << format_double(c.forcing.half_height) << '\n'
    << "t_end=" << format_double(c.end_time()) << '\n'
    << "steps=" << c.steps << '\n'
    << "mode_t_start=" << format_double(c.mode_t_start) << '\n'
    << "mode_t_end=" << format_double(c.mode_t_end) << '\n'
    << "bc_table=" << c.bc_table << '\n';
  return s.str();
}

}  // namespace

std::string to_text(const SimConfig& c) {
  std::ostringstream s;
  s << physics_text(c) << "modes=";
  for (std::size_t i = 0; i < c.modes.size(); ++i) s << (i ? "," : "") << c.modes[i];
  s << '\n' << "r_bc=" << c.r_bc << '\n' << "seed=" << c.seed << '\n' << "output_dir=" << c.output_dir << '\n';
  return s.str();
}

std::string physics_hash(const SimConfig& c) {
  std::string text = physics_text(c);
  if (c.testcase == Testcase::kCustom) {
    try {
      text += read_file(c.bc_table);
    } catch (const ArtifactError&) {
      throw UsageError("cannot read bc_table " + c.bc_table);
    }
  }
  return content_hash(text);
}

StaggeredGrid make_grid(const SimConfig& c) {
  return build_grid(c.nx, c.ny, {c.x_min, c.x_max}, {c.y_min, c.y_max},
                    BcSpec::inflow_outflow(c.nu, c.p_inf));
}

BoundaryModelPtr make_boundary(const SimConfig& c, const StaggeredGrid& grid) {
  switch (c.testcase) {
    case Testcase::kVaryingAngle: return make_varying_angle(grid);
    case Testcase::kMovingMode: return make_moving_mode(grid, c.mode_t_start, c.mode_t_end);
    case Testcase::kCustom: return load_custom_table(c.bc_table, grid.n_bc());
  }
  throw UsageError("unknown testcase");
}

}  // namespace romns
