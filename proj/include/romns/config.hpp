#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "romns/boundary.hpp"
#include "romns/grid.hpp"
#include "romns/operators.hpp"

namespace romns {

enum class Testcase { kVaryingAngle, kMovingMode, kCustom };

std::string to_string(Testcase t);
/// Throws UsageError for unknown names.
Testcase parse_testcase(const std::string& name);

/// Run configuration. Text form is one `key = value` per line; `#` starts a
/// comment. Keys:
///   testcase      varying-angle | moving-mode | custom
///   nx, ny        cell counts
///   x_min, x_max, y_min, y_max
///   nu, p_inf
///   forcing, forcing_x, forcing_y, forcing_half_height
///   t_end         default 4*pi (varying-angle) or 20 (otherwise)
///   steps
///   modes         comma-separated R sweep
///   r_bc          boundary rank; defaults to R
///   mode_t_start, mode_t_end   moving-mode traversal window
///   bc_table      CSV path for the custom testcase
///   seed
///   output_dir
struct SimConfig {
  Testcase testcase = Testcase::kVaryingAngle;
  int nx = 200;
  int ny = 80;
  double x_min = 0.0, x_max = 10.0, y_min = -2.0, y_max = 2.0;
  double nu = 1e-2;
  double p_inf = 0.0;
  ForcingSpec forcing;
  std::optional<double> t_end;
  Index steps = 800;
  std::vector<Index> modes{2, 5, 10, 20, 40, 80};
  Index r_bc = -1;
  double mode_t_start = 0.0;
  double mode_t_end = 20.0;
  std::string bc_table;
  std::uint64_t seed = 0;
  std::string output_dir = "run";

  double end_time() const;
  double dt() const { return end_time() / static_cast<double>(steps); }
  Index max_modes() const;
  Index bc_rank(Index r) const { return r_bc < 0 ? r : r_bc; }
  void validate() const;
};

SimConfig parse_config(const std::string& text, SimConfig base = {});
/// Parses a comma-separated mode list such as "2,5,10".
std::vector<Index> parse_modes(const std::string& text);
SimConfig load_config(const std::string& path);
std::string to_text(const SimConfig& c);

/// Hash of everything that influences the FOM and its reductions (grid,
/// physics, boundary model, time grid); the mode list and output location
/// are excluded.
std::string physics_hash(const SimConfig& c);

StaggeredGrid make_grid(const SimConfig& c);
BoundaryModelPtr make_boundary(const SimConfig& c, const StaggeredGrid& grid);

}  // namespace romns
