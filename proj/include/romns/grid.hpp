#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "romns/linalg.hpp"

namespace romns {

enum class Side { kLeft = 0, kRight = 1, kBottom = 2, kTop = 3 };

enum class SideKind {
  kDirichlet,  // velocity prescribed through the boundary trace y_bc
  kOutflow,    // (-p I + nu grad u) . n = -p_inf n
  kPeriodic,   // must be paired with the opposite side
};

enum class Component { kU = 0, kV = 1 };

std::string to_string(Side side);
std::string to_string(SideKind kind);

struct BcSpec {
  std::array<SideKind, 4> sides{SideKind::kDirichlet, SideKind::kOutflow, SideKind::kOutflow,
                                SideKind::kOutflow};
  double p_inf = 0.0;
  double nu = 1e-2;

  SideKind kind(Side s) const { return sides[static_cast<int>(s)]; }

  /// Left inflow, outflow on the three remaining sides.
  static BcSpec inflow_outflow(double nu, double p_inf = 0.0);
  /// Dirichlet on all four sides.
  static BcSpec closed_box(double nu);
  /// Periodic in both directions.
  static BcSpec fully_periodic(double nu);
};

/// Location of one boundary value carried by y_bc.
struct BcSlot {
  Component component;
  Side side;
  bool normal;  // normal component on this side (else tangential)
  double x;
  double y;
};

/// Resolution of a face to either a velocity unknown or a boundary slot.
struct FaceRef {
  enum class Kind : std::uint8_t { kUnknown, kSlot };
  Kind kind;
  Index index;
  bool is_unknown() const { return kind == Kind::kUnknown; }
};

/// Uniform staggered grid. Pressure lives at cell centres, u on vertical
/// faces x_i = x_min + i dx (i = 0..nx), v on horizontal faces
/// y_j = y_min + j dy (j = 0..ny). Faces on Dirichlet sides are not unknowns;
/// their values (and the tangential wall values of those sides) are slots of
/// y_bc. Velocity unknowns are ordered u first, then v; y_bc slots are ordered
/// u first, then v.
class StaggeredGrid {
 public:
  StaggeredGrid(int nx, int ny, double x_min, double x_max, double y_min, double y_max,
                BcSpec bc);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  double x_min() const { return x_min_; }
  double x_max() const { return x_max_; }
  double y_min() const { return y_min_; }
  double y_max() const { return y_max_; }
  double dx() const { return dx_; }
  double dy() const { return dy_; }
  const BcSpec& bc() const { return bc_; }

  Index n_u() const { return n_u_; }
  Index n_v() const { return n_v_; }
  Index n_vel() const { return n_u_ + n_v_; }
  Index n_p() const { return static_cast<Index>(nx_) * ny_; }
  Index n_bc() const { return static_cast<Index>(slots_.size()); }
  Index n_ext() const { return n_vel() + n_bc(); }

  Index cell(int i, int j) const { return static_cast<Index>(j) * nx_ + i; }

  /// u face (x_i, y_{j+1/2}); i may be -1 or nx+1 on periodic grids.
  FaceRef u_face(int i, int j) const;
  /// v face (x_{i+1/2}, y_j); j may be -1 or ny+1 on periodic grids.
  FaceRef v_face(int i, int j) const;

  /// Slot of the tangential wall value on a Dirichlet side; k indexes nodes
  /// along the side (0..ny for left/right, 0..nx for bottom/top). -1 if the
  /// side is not Dirichlet.
  Index tangential_slot(Side side, int k) const;

  const std::vector<BcSlot>& slots() const { return slots_; }

  struct UnknownInfo {
    Component component;
    int i;
    int j;
  };
  const UnknownInfo& unknown(Index k) const { return unknowns_[static_cast<std::size_t>(k)]; }

  double x_face(int i) const { return x_min_ + i * dx_; }
  double y_face(int j) const { return y_min_ + j * dy_; }
  double x_center(int i) const { return x_min_ + (i + 0.5) * dx_; }
  double y_center(int j) const { return y_min_ + (j + 0.5) * dy_; }

  /// Finite-volume extent of the control volume around velocity unknown k:
  /// [lo, hi] in x and y.
  std::array<double, 4> control_volume(Index k) const;

  bool periodic_x() const { return bc_.kind(Side::kLeft) == SideKind::kPeriodic; }
  bool periodic_y() const { return bc_.kind(Side::kBottom) == SideKind::kPeriodic; }

  /// Stable 64-bit hash of dimensions, bounds and boundary kinds.
  std::uint64_t hash() const;

 private:
  int nx_, ny_;
  double x_min_, x_max_, y_min_, y_max_, dx_, dy_;
  BcSpec bc_;
  Index n_u_ = 0;
  Index n_v_ = 0;
  std::vector<FaceRef> u_map_;  // (nx+1) x ny, index j*(nx+1)+i
  std::vector<FaceRef> v_map_;  // nx x (ny+1), index j*nx+i
  std::array<std::vector<Index>, 4> tangential_;
  std::vector<BcSlot> slots_;
  std::vector<UnknownInfo> unknowns_;
};

StaggeredGrid build_grid(int nx, int ny, std::array<double, 2> x_range,
                         std::array<double, 2> y_range, const BcSpec& bc);

/// FNV-1a over raw bytes; used for grid and artifact hashes.
std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 14695981039346656037ULL);

}  // namespace romns
