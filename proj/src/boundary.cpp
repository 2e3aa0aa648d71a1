#include "romns/boundary.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

namespace romns {

std::string to_string(BoundaryKind kind) {
  switch (kind) {
    case BoundaryKind::kVaryingAngle: return "varying-angle";
    case BoundaryKind::kMovingMode: return "moving-mode";
    case BoundaryKind::kCustomTable: return "custom";
    case BoundaryKind::kConstant: return "constant";
    case BoundaryKind::kFunction: return "function";
  }
  return "?";
}

void varying_angle_values(double y, double t, double& u, double& v) {
  const double alpha = std::numbers::pi / 6.0 * std::sin(y - 0.5 * t);
  u = std::cos(alpha);
  v = std::sin(alpha);
}

double moving_mode_value(double y, double t, double y_min, double y_max, double t_start,
                         double t_end) {
  if (t < t_start || t > t_end) return 0.0;
  const double s = y + (t - t_end) / (t_end - t_start) * (y_max - y_min);
  if (s <= y_min || s >= y_max) return 0.0;
  return 0.1 * (s - y_min) * (y_max - s);
}

Vector sample_inflow(const StaggeredGrid& grid, const std::function<double(double)>& u_b,
                     const std::function<double(double)>& v_b) {
  Vector y = Vector::Zero(grid.n_bc());
  const auto& slots = grid.slots();
  for (std::size_t k = 0; k < slots.size(); ++k) {
    if (slots[k].side != Side::kLeft) continue;
    y[static_cast<Index>(k)] = slots[k].component == Component::kU ? u_b(slots[k].y) : v_b(slots[k].y);
  }
  return y;
}

namespace {

class VaryingAngle final : public BoundaryModel {
 public:
  explicit VaryingAngle(const StaggeredGrid& g) : slots_(g.slots()) {}

  BoundaryKind kind() const override { return BoundaryKind::kVaryingAngle; }
  Index size() const override { return static_cast<Index>(slots_.size()); }

  Vector trace(double t) const override {
    Vector y = Vector::Zero(size());
    for (std::size_t k = 0; k < slots_.size(); ++k) {
      if (slots_[k].side != Side::kLeft) continue;
      double u, v;
      varying_angle_values(slots_[k].y, t, u, v);
      y[static_cast<Index>(k)] = slots_[k].component == Component::kU ? u : v;
    }
    return y;
  }

  Vector rate(double t, Limit) const override {
    Vector y = Vector::Zero(size());
    for (std::size_t k = 0; k < slots_.size(); ++k) {
      if (slots_[k].side != Side::kLeft) continue;
      const double arg = slots_[k].y - 0.5 * t;
      const double alpha = std::numbers::pi / 6.0 * std::sin(arg);
      const double dalpha = -std::numbers::pi / 12.0 * std::cos(arg);
      y[static_cast<Index>(k)] = slots_[k].component == Component::kU ? -std::sin(alpha) * dalpha
                                                                       : std::cos(alpha) * dalpha;
    }
    return y;
  }

 private:
  std::vector<BcSlot> slots_;
};

class MovingMode final : public BoundaryModel {
 public:
  MovingMode(const StaggeredGrid& g, double t_start, double t_end)
      : slots_(g.slots()), y_min_(g.y_min()), y_max_(g.y_max()), t_start_(t_start), t_end_(t_end) {
    if (!(t_start < t_end)) throw InvalidArgument("moving mode: t_start must be below t_end");
  }

  BoundaryKind kind() const override { return BoundaryKind::kMovingMode; }
  Index size() const override { return static_cast<Index>(slots_.size()); }

  Vector trace(double t) const override {
    Vector y = Vector::Zero(size());
    for (std::size_t k = 0; k < slots_.size(); ++k) {
      if (slots_[k].side != Side::kLeft || slots_[k].component != Component::kU) continue;
      y[static_cast<Index>(k)] = moving_mode_value(slots_[k].y, t, y_min_, y_max_, t_start_, t_end_);
    }
    return y;
  }

  Vector rate(double t, Limit limit) const override {
    Vector y = Vector::Zero(size());
    const double span = y_max_ - y_min_;
    const double speed = span / (t_end_ - t_start_);
    const double snap = 1e-12 * (span + std::abs(t_end_) + std::abs(t_start_));
    const bool right = limit == Limit::kRight;
    // Active time window, taking the requested side at its end points.
    if (right ? (t < t_start_ - snap || t >= t_end_ - snap)
              : (t <= t_start_ + snap || t > t_end_ + snap)) {
      return y;
    }
    for (std::size_t k = 0; k < slots_.size(); ++k) {
      if (slots_[k].side != Side::kLeft || slots_[k].component != Component::kU) continue;
      double s = slots_[k].y + (t - t_end_) / (t_end_ - t_start_) * span;
      if (std::abs(s - y_min_) <= snap) s = y_min_;
      if (std::abs(s - y_max_) <= snap) s = y_max_;
      // s increases with t: the right limit sees the support as [y_min, y_max).
      const bool inside = right ? (s >= y_min_ && s < y_max_) : (s > y_min_ && s <= y_max_);
      if (inside) y[static_cast<Index>(k)] = 0.1 * (y_min_ + y_max_ - 2.0 * s) * speed;
    }
    return y;
  }

 private:
  std::vector<BcSlot> slots_;
  double y_min_, y_max_, t_start_, t_end_;
};

class CustomTable final : public BoundaryModel {
 public:
  CustomTable(std::vector<double> times, DenseMatrix values)
      : times_(std::move(times)), values_(std::move(values)) {
    if (times_.empty()) throw InvalidArgument("custom table: no rows");
    if (static_cast<Index>(times_.size()) != values_.cols()) {
      throw DimensionError("custom table: time count does not match value columns");
    }
    for (std::size_t i = 1; i < times_.size(); ++i) {
      if (!(times_[i] > times_[i - 1])) throw InvalidArgument("custom table: times must increase strictly");
    }
    if (!values_.allFinite()) throw InvalidArgument("custom table: non-finite entry");
  }

  BoundaryKind kind() const override { return BoundaryKind::kCustomTable; }
  Index size() const override { return values_.rows(); }

  Vector trace(double t) const override {
    if (t <= times_.front()) return values_.col(0);
    if (t >= times_.back()) return values_.col(values_.cols() - 1);
    const Index i = segment(t, Limit::kRight);
    const double w = (t - times_[static_cast<std::size_t>(i)]) /
                     (times_[static_cast<std::size_t>(i) + 1] - times_[static_cast<std::size_t>(i)]);
    return (1.0 - w) * values_.col(i) + w * values_.col(i + 1);
  }

  Vector rate(double t, Limit limit) const override {
    const bool right = limit == Limit::kRight;
    if (times_.size() < 2 || (right ? t >= times_.back() : t > times_.back()) ||
        (right ? t < times_.front() : t <= times_.front())) {
      return Vector::Zero(size());
    }
    const Index i = segment(t, limit);
    const auto a = static_cast<std::size_t>(i);
    return (values_.col(i + 1) - values_.col(i)) / (times_[a + 1] - times_[a]);
  }

 private:
  // Segment [t_i, t_{i+1}] holding t; at a knot, the one on the requested side.
  Index segment(double t, Limit limit) const {
    auto it = limit == Limit::kRight ? std::upper_bound(times_.begin(), times_.end(), t)
                                     : std::lower_bound(times_.begin(), times_.end(), t);
    Index i = static_cast<Index>(it - times_.begin()) - 1;
    return std::clamp<Index>(i, 0, static_cast<Index>(times_.size()) - 2);
  }

  std::vector<double> times_;
  DenseMatrix values_;
};

class Constant final : public BoundaryModel {
 public:
  explicit Constant(Vector v) : value_(std::move(v)) {}
  BoundaryKind kind() const override { return BoundaryKind::kConstant; }
  Index size() const override { return value_.size(); }
  Vector trace(double) const override { return value_; }
  Vector rate(double, Limit) const override { return Vector::Zero(value_.size()); }

 private:
  Vector value_;
};

class Function final : public BoundaryModel {
 public:
  Function(Index n, std::function<Vector(double)> f, std::function<Vector(double, Limit)> df)
      : n_(n), f_(std::move(f)), df_(std::move(df)) {}
  BoundaryKind kind() const override { return BoundaryKind::kFunction; }
  Index size() const override { return n_; }
  Vector trace(double t) const override { return f_(t); }
  Vector rate(double t, Limit limit) const override { return df_(t, limit); }

 private:
  Index n_;
  std::function<Vector(double)> f_;
  std::function<Vector(double, Limit)> df_;
};

double parse_double(std::string_view field, std::size_t line) {
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.front()))) field.remove_prefix(1);
  while (!field.empty() && std::isspace(static_cast<unsigned char>(field.back()))) field.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc() || ptr != field.data() + field.size()) {
    throw InvalidArgument("custom table: cannot parse '" + std::string(field) + "' on line " +
                          std::to_string(line));
  }
  return v;
}

}  // namespace

BoundaryModelPtr make_varying_angle(const StaggeredGrid& grid) {
  return std::make_shared<VaryingAngle>(grid);
}

BoundaryModelPtr make_moving_mode(const StaggeredGrid& grid, double t_start, double t_end) {
  return std::make_shared<MovingMode>(grid, t_start, t_end);
}

BoundaryModelPtr make_custom_table(std::vector<double> times, DenseMatrix values) {
  return std::make_shared<CustomTable>(std::move(times), std::move(values));
}

BoundaryModelPtr load_custom_table(const std::string& path, Index n_bc) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("custom table: cannot open " + path);
  std::string line;
  std::size_t line_no = 0;
  std::vector<double> times;
  std::vector<double> flat;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    if (header) {
      header = false;
      continue;
    }
    std::vector<double> row;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      row.push_back(parse_double(rest.substr(0, comma), line_no));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (static_cast<Index>(row.size()) != n_bc + 1) {
      throw DimensionError("custom table: line " + std::to_string(line_no) + " has " +
                           std::to_string(row.size() - 1) + " trace entries, expected " +
                           std::to_string(n_bc));
    }
    times.push_back(row[0]);
    flat.insert(flat.end(), row.begin() + 1, row.end());
  }
  DenseMatrix values = Eigen::Map<DenseMatrix>(flat.data(), n_bc, static_cast<Index>(times.size()));
  return make_custom_table(std::move(times), std::move(values));
}

BoundaryModelPtr make_constant(Vector value) { return std::make_shared<Constant>(std::move(value)); }

BoundaryModelPtr make_function(Index n, std::function<Vector(double)> trace,
                               std::function<Vector(double, Limit)> rate) {
  return std::make_shared<Function>(n, std::move(trace), std::move(rate));
}

Vector varying_angle_trace(const StaggeredGrid& grid, double t) {
  return VaryingAngle(grid).trace(t);
}

Vector moving_mode_trace(const StaggeredGrid& grid, double t, double t_start, double t_end) {
  return MovingMode(grid, t_start, t_end).trace(t);
}

StageTable::StageTable(double t0, double dt, Index steps, DenseMatrix values, DenseMatrix rates)
    : t0_(t0), dt_(dt), steps_(steps), values_(std::move(values)), rates_(std::move(rates)) {
  if (values_.cols() != 4 * steps + 1 || rates_.cols() != values_.cols() ||
      rates_.rows() != values_.rows()) {
    throw DimensionError("StageTable: expected 4*steps+1 columns of equal height");
  }
}

Index StageTable::column(Index step, int stage) const {
  if (step < 0 || step >= steps_ || stage < 0 || stage > 3) {
    throw InvalidArgument("StageTable: step " + std::to_string(step) + " stage " +
                          std::to_string(stage) + " not tabulated");
  }
  return 4 * step + stage;
}

Vector StageTable::value_at(Index j) const {
  if (j < 0 || j > steps_) throw InvalidArgument("StageTable: time index out of range");
  return values_.col(4 * j);
}

Vector StageTable::rate_at(Index j) const {
  if (j < 0 || j > steps_) throw InvalidArgument("StageTable: time index out of range");
  return rates_.col(4 * j);
}

StageTable StageTable::tabulate(double t0, double dt, Index steps, Index dim,
                                const std::function<Vector(double)>& f,
                                const std::function<Vector(double, Limit)>& df) {
  DenseMatrix values(dim, 4 * steps + 1);
  DenseMatrix rates(dim, 4 * steps + 1);
  for (Index n = 0; n < steps; ++n) {
    for (int i = 0; i < 4; ++i) {
      const double t = t0 + (n + kRk4Nodes[i]) * dt;
      values.col(4 * n + i) = f(t);
      rates.col(4 * n + i) = df(t, i == 3 ? Limit::kLeft : Limit::kRight);
    }
  }
  const double t_final = t0 + steps * dt;
  values.col(4 * steps) = f(t_final);
  rates.col(4 * steps) = df(t_final, Limit::kLeft);
  return StageTable(t0, dt, steps, std::move(values), std::move(rates));
}

BcReduction reduce_bc(const BoundaryModel& model, double t0, double dt, Index steps, Index r_bc) {
  if (steps < 1) throw InvalidArgument("reduce_bc: steps must be positive");
  const Index n = model.size();
  DenseMatrix x(n, steps + 1);
  for (Index j = 0; j <= steps; ++j) x.col(j) = model.trace(t0 + j * dt);

  BcReduction red;
  SvdResult svd = thin_svd(x);
  red.singular_values = svd.s;
  red.numerical_rank = red.singular_values.size() > 0 && red.singular_values[0] > 0.0
                           ? numerical_rank(red.singular_values)
                           : 0;
  red.requested_rank = r_bc < 0 ? red.numerical_rank : r_bc;
  Index r = red.requested_rank;
  if (r > red.numerical_rank) {
    red.warning = "reduce_bc: requested R_bc = " + std::to_string(r) +
                  " exceeds the numerical rank " + std::to_string(red.numerical_rank) +
                  " of the boundary snapshots; truncated";
    r = red.numerical_rank;
  }
  red.phi = svd.u.leftCols(r);
  const DenseMatrix phi_t = red.phi.transpose();
  red.coefficients = StageTable::tabulate(
      t0, dt, steps, r, [&](double t) -> Vector { return phi_t * model.trace(t); },
      [&](double t, Limit l) -> Vector { return phi_t * model.rate(t, l); });
  return red;
}

StageTable exact_trace_table(const BoundaryModel& model, double t0, double dt, Index steps) {
  return StageTable::tabulate(
      t0, dt, steps, model.size(), [&](double t) { return model.trace(t); },
      [&](double t, Limit l) { return model.rate(t, l); });
}

}  // namespace romns
