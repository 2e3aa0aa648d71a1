#include "romns/grid.hpp"

#include <cmath>

namespace romns {

std::string to_string(Side side) {
  switch (side) {
    case Side::kLeft: return "left";
    case Side::kRight: return "right";
    case Side::kBottom: return "bottom";
    case Side::kTop: return "top";
  }
  return "?";
}

std::string to_string(SideKind kind) {
  switch (kind) {
    case SideKind::kDirichlet: return "dirichlet";
    case SideKind::kOutflow: return "outflow";
    case SideKind::kPeriodic: return "periodic";
  }
  return "?";
}

BcSpec BcSpec::inflow_outflow(double nu, double p_inf) {
  BcSpec bc;
  bc.nu = nu;
  bc.p_inf = p_inf;
  return bc;
}

BcSpec BcSpec::closed_box(double nu) {
  BcSpec bc;
  bc.sides.fill(SideKind::kDirichlet);
  bc.nu = nu;
  return bc;
}

BcSpec BcSpec::fully_periodic(double nu) {
  BcSpec bc;
  bc.sides.fill(SideKind::kPeriodic);
  bc.nu = nu;
  return bc;
}

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  std::uint64_t h = seed;
  for (std::size_t i = 0; i < size; ++i) {
    h ^= bytes[i];
    h *= 1099511628211ULL;
  }
  return h;
}

namespace {

int wrap(int i, int n) { return ((i % n) + n) % n; }

}  // namespace

StaggeredGrid::StaggeredGrid(int nx, int ny, double x_min, double x_max, double y_min,
                             double y_max, BcSpec bc)
    : nx_(nx), ny_(ny), x_min_(x_min), x_max_(x_max), y_min_(y_min), y_max_(y_max), bc_(bc) {
  if (nx < 2 || ny < 2) throw InvalidArgument("build_grid: nx and ny must be at least 2");
  if (!(x_max > x_min) || !(y_max > y_min) || !std::isfinite(x_max - x_min) ||
      !std::isfinite(y_max - y_min)) {
    throw InvalidArgument("build_grid: invalid range, bounds are degenerate");
  }
  const bool px_l = bc.kind(Side::kLeft) == SideKind::kPeriodic;
  const bool px_r = bc.kind(Side::kRight) == SideKind::kPeriodic;
  const bool py_b = bc.kind(Side::kBottom) == SideKind::kPeriodic;
  const bool py_t = bc.kind(Side::kTop) == SideKind::kPeriodic;
  if (px_l != px_r || py_b != py_t) {
    throw InvalidArgument("build_grid: periodic sides must come in opposite pairs");
  }
  dx_ = (x_max - x_min) / nx;
  dy_ = (y_max - y_min) / ny;

  // Slots: u values first (left normal, right normal, bottom tangential, top
  // tangential), then v values (left tangential, right tangential, bottom
  // normal, top normal).
  auto dirichlet = [&](Side s) { return bc.kind(s) == SideKind::kDirichlet; };
  std::array<std::vector<Index>, 4> normal_slot;
  auto add_slot = [&](Component c, Side s, bool normal, double x, double y) {
    slots_.push_back({c, s, normal, x, y});
    return static_cast<Index>(slots_.size() - 1);
  };
  for (Side s : {Side::kLeft, Side::kRight}) {
    if (!dirichlet(s)) continue;
    const double x = s == Side::kLeft ? x_min : x_max;
    for (int j = 0; j < ny; ++j) normal_slot[static_cast<int>(s)].push_back(add_slot(Component::kU, s, true, x, y_center(j)));
  }
  for (Side s : {Side::kBottom, Side::kTop}) {
    if (!dirichlet(s)) continue;
    const double y = s == Side::kBottom ? y_min : y_max;
    for (int i = 0; i <= nx; ++i) tangential_[static_cast<int>(s)].push_back(add_slot(Component::kU, s, false, x_face(i), y));
  }
  for (Side s : {Side::kLeft, Side::kRight}) {
    if (!dirichlet(s)) continue;
    const double x = s == Side::kLeft ? x_min : x_max;
    for (int j = 0; j <= ny; ++j) tangential_[static_cast<int>(s)].push_back(add_slot(Component::kV, s, false, x, y_face(j)));
  }
  for (Side s : {Side::kBottom, Side::kTop}) {
    if (!dirichlet(s)) continue;
    const double y = s == Side::kBottom ? y_min : y_max;
    for (int i = 0; i < nx; ++i) normal_slot[static_cast<int>(s)].push_back(add_slot(Component::kV, s, true, x_center(i), y));
  }

  // u faces
  u_map_.assign(static_cast<std::size_t>(nx + 1) * ny, FaceRef{FaceRef::Kind::kSlot, -1});
  for (int j = 0; j < ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      FaceRef& f = u_map_[static_cast<std::size_t>(j) * (nx + 1) + i];
      if (i == 0 && dirichlet(Side::kLeft)) {
        f = {FaceRef::Kind::kSlot, normal_slot[0][static_cast<std::size_t>(j)]};
      } else if (i == nx && dirichlet(Side::kRight)) {
        f = {FaceRef::Kind::kSlot, normal_slot[1][static_cast<std::size_t>(j)]};
      } else if (i == nx && px_r) {
        continue;  // aliased to i = 0 below
      } else {
        f = {FaceRef::Kind::kUnknown, static_cast<Index>(unknowns_.size())};
        unknowns_.push_back({Component::kU, i, j});
      }
    }
    if (px_r) u_map_[static_cast<std::size_t>(j) * (nx + 1) + nx] = u_map_[static_cast<std::size_t>(j) * (nx + 1)];
  }
  n_u_ = static_cast<Index>(unknowns_.size());

  // v faces
  v_map_.assign(static_cast<std::size_t>(nx) * (ny + 1), FaceRef{FaceRef::Kind::kSlot, -1});
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i < nx; ++i) {
      FaceRef& f = v_map_[static_cast<std::size_t>(j) * nx + i];
      if (j == 0 && dirichlet(Side::kBottom)) {
        f = {FaceRef::Kind::kSlot, normal_slot[2][static_cast<std::size_t>(i)]};
      } else if (j == ny && dirichlet(Side::kTop)) {
        f = {FaceRef::Kind::kSlot, normal_slot[3][static_cast<std::size_t>(i)]};
      } else if (j == ny && py_t) {
        f = v_map_[static_cast<std::size_t>(i)];
      } else {
        f = {FaceRef::Kind::kUnknown, static_cast<Index>(unknowns_.size())};
        unknowns_.push_back({Component::kV, i, j});
      }
    }
  }
  n_v_ = static_cast<Index>(unknowns_.size()) - n_u_;
}

FaceRef StaggeredGrid::u_face(int i, int j) const {
  if (periodic_x()) i = wrap(i, nx_);
  if (periodic_y()) j = wrap(j, ny_);
  if (i < 0 || i > nx_ || j < 0 || j >= ny_) throw InvalidArgument("u_face: index out of range");
  return u_map_[static_cast<std::size_t>(j) * (nx_ + 1) + i];
}

FaceRef StaggeredGrid::v_face(int i, int j) const {
  if (periodic_x()) i = wrap(i, nx_);
  if (periodic_y()) j = wrap(j, ny_);
  if (i < 0 || i >= nx_ || j < 0 || j > ny_) throw InvalidArgument("v_face: index out of range");
  return v_map_[static_cast<std::size_t>(j) * nx_ + i];
}

Index StaggeredGrid::tangential_slot(Side side, int k) const {
  const auto& t = tangential_[static_cast<int>(side)];
  if (t.empty()) return -1;
  if (k < 0 || k >= static_cast<int>(t.size())) throw InvalidArgument("tangential_slot: index out of range");
  return t[static_cast<std::size_t>(k)];
}

std::array<double, 4> StaggeredGrid::control_volume(Index k) const {
  const UnknownInfo& u = unknown(k);
  if (u.component == Component::kU) {
    double lo = x_face(u.i) - 0.5 * dx_;
    double hi = x_face(u.i) + 0.5 * dx_;
    if (u.i == 0 && bc_.kind(Side::kLeft) == SideKind::kOutflow) lo = x_min_;
    if (u.i == nx_ && bc_.kind(Side::kRight) == SideKind::kOutflow) hi = x_max_;
    return {lo, hi, y_face(u.j), y_face(u.j + 1)};
  }
  double lo = y_face(u.j) - 0.5 * dy_;
  double hi = y_face(u.j) + 0.5 * dy_;
  if (u.j == 0 && bc_.kind(Side::kBottom) == SideKind::kOutflow) lo = y_min_;
  if (u.j == ny_ && bc_.kind(Side::kTop) == SideKind::kOutflow) hi = y_max_;
  return {x_face(u.i), x_face(u.i + 1), lo, hi};
}

std::uint64_t StaggeredGrid::hash() const {
  std::uint64_t h = fnv1a(&nx_, sizeof nx_);
  h = fnv1a(&ny_, sizeof ny_, h);
  for (double d : {x_min_, x_max_, y_min_, y_max_}) h = fnv1a(&d, sizeof d, h);
  for (SideKind k : bc_.sides) {
    const int v = static_cast<int>(k);
    h = fnv1a(&v, sizeof v, h);
  }
  return h;
}

StaggeredGrid build_grid(int nx, int ny, std::array<double, 2> x_range,
                         std::array<double, 2> y_range, const BcSpec& bc) {
  return StaggeredGrid(nx, ny, x_range[0], x_range[1], y_range[0], y_range[1], bc);
}

}  // namespace romns
