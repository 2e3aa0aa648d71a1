#include "romns/operators.hpp"

#include <cmath>
#include <random>
#include <utility>
#include <vector>

namespace romns {

namespace {

// Sparse linear combination over the extended index space [V; y_bc].
using LinExpr = std::vector<std::pair<Index, double>>;

LinExpr operator+(LinExpr a, const LinExpr& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

LinExpr operator*(double s, LinExpr a) {
  for (auto& t : a) t.second *= s;
  return a;
}

LinExpr operator-(LinExpr a, const LinExpr& b) { return std::move(a) + (-1.0 * b); }

struct Face {
  LinExpr convecting;  // normal velocity through the face
  LinExpr convected;   // transported velocity component at the face
  LinExpr gradient;    // normal derivative of the transported component
  double length;
  std::vector<std::pair<Index, double>> owners;  // (volume, outward sign)
};

class Stencil {
 public:
  explicit Stencil(const StaggeredGrid& g) : g_(g) {}

  LinExpr ref(FaceRef f) const {
    return {{f.is_unknown() ? f.index : g_.n_vel() + f.index, 1.0}};
  }
  LinExpr slot(Index s) const { return {{g_.n_vel() + s, 1.0}}; }

  // u at (x_i, y_{j+1/2}); rows outside the domain are ghost values.
  LinExpr u_at(int i, int j) const {
    if (!g_.periodic_y()) {
      if (j < 0) return ghost_u(Side::kBottom, i, 0);
      if (j >= g_.ny()) return ghost_u(Side::kTop, i, g_.ny() - 1);
    }
    return ref(g_.u_face(i, j));
  }

  // v at (x_{i+1/2}, y_j); columns outside the domain are ghost values.
  LinExpr v_at(int i, int j) const {
    if (!g_.periodic_x()) {
      if (i < 0) return ghost_v(Side::kLeft, j, 0);
      if (i >= g_.nx()) return ghost_v(Side::kRight, j, g_.nx() - 1);
    }
    return ref(g_.v_face(i, j));
  }

  bool u_volume(int i, int j) const {
    if (!g_.periodic_x() && (i < 0 || i > g_.nx())) return false;
    if (!g_.periodic_y() && (j < 0 || j >= g_.ny())) return false;
    return g_.u_face(i, j).is_unknown();
  }

  bool v_volume(int i, int j) const {
    if (!g_.periodic_x() && (i < 0 || i >= g_.nx())) return false;
    if (!g_.periodic_y() && (j < 0 || j > g_.ny())) return false;
    return g_.v_face(i, j).is_unknown();
  }

  Index u_index(int i, int j) const { return g_.u_face(i, j).index; }
  Index v_index(int i, int j) const { return g_.v_face(i, j).index; }

 private:
  // Tangential ghost across a top/bottom side: linear extrapolation through
  // the wall value on Dirichlet sides, zero gradient on outflow sides.
  LinExpr ghost_u(Side side, int i, int j_inside) const {
    LinExpr inside = ref(g_.u_face(i, j_inside));
    if (g_.bc().kind(side) == SideKind::kOutflow) return inside;
    int k = g_.periodic_x() ? ((i % g_.nx()) + g_.nx()) % g_.nx() : i;
    return 2.0 * slot(g_.tangential_slot(side, k)) - inside;
  }

  LinExpr ghost_v(Side side, int j, int i_inside) const {
    LinExpr inside = ref(g_.v_face(i_inside, j));
    if (g_.bc().kind(side) == SideKind::kOutflow) return inside;
    int k = g_.periodic_y() ? ((j % g_.ny()) + g_.ny()) % g_.ny() : j;
    return 2.0 * slot(g_.tangential_slot(side, k)) - inside;
  }

  const StaggeredGrid& g_;
};

std::vector<Face> build_faces(const StaggeredGrid& g) {
  const Stencil st(g);
  const double dx = g.dx();
  const double dy = g.dy();
  const BcSpec& bc = g.bc();
  std::vector<Face> faces;
  faces.reserve(static_cast<std::size_t>(2 * g.n_vel() + 2 * (g.nx() + g.ny())));

  for (Index k = 0; k < g.n_vel(); ++k) {
    const auto& info = g.unknown(k);
    const int i = info.i;
    const int j = info.j;
    const auto cv = g.control_volume(k);
    if (info.component == Component::kU) {
      const double width = cv[1] - cv[0];
      const LinExpr u = st.u_at(i, j);
      // east
      if (i == g.nx() && bc.kind(Side::kRight) == SideKind::kOutflow) {
        faces.push_back({u, u, {}, dy, {{k, 1.0}}});
      } else {
        const LinExpr ue = st.u_at(i + 1, j);
        Face f{0.5 * (u + ue), 0.5 * (u + ue), (1.0 / dx) * (ue - u), dy, {{k, 1.0}}};
        if (st.u_volume(i + 1, j)) f.owners.push_back({st.u_index(i + 1, j), -1.0});
        faces.push_back(std::move(f));
      }
      // west, only where no neighbouring u volume owns it
      if (!st.u_volume(i - 1, j)) {
        if (i == 0) {
          faces.push_back({u, u, {}, dy, {{k, -1.0}}});
        } else {
          const LinExpr uw = st.u_at(i - 1, j);
          faces.push_back({0.5 * (uw + u), 0.5 * (uw + u), (1.0 / dx) * (u - uw), dy, {{k, -1.0}}});
        }
      }
      // north
      {
        const LinExpr un = st.u_at(i, j + 1);
        Face f{0.5 * (st.v_at(i - 1, j + 1) + st.v_at(i, j + 1)), 0.5 * (u + un),
               (1.0 / dy) * (un - u), width, {{k, 1.0}}};
        if (st.u_volume(i, j + 1)) f.owners.push_back({st.u_index(i, j + 1), -1.0});
        faces.push_back(std::move(f));
      }
      // south
      if (!st.u_volume(i, j - 1)) {
        const LinExpr us = st.u_at(i, j - 1);
        faces.push_back({0.5 * (st.v_at(i - 1, j) + st.v_at(i, j)), 0.5 * (us + u),
                         (1.0 / dy) * (u - us), width, {{k, -1.0}}});
      }
    } else {
      const double height = cv[3] - cv[2];
      const LinExpr v = st.v_at(i, j);
      // north
      if (j == g.ny() && bc.kind(Side::kTop) == SideKind::kOutflow) {
        faces.push_back({v, v, {}, dx, {{k, 1.0}}});
      } else {
        const LinExpr vn = st.v_at(i, j + 1);
        Face f{0.5 * (v + vn), 0.5 * (v + vn), (1.0 / dy) * (vn - v), dx, {{k, 1.0}}};
        if (st.v_volume(i, j + 1)) f.owners.push_back({st.v_index(i, j + 1), -1.0});
        faces.push_back(std::move(f));
      }
      // south
      if (!st.v_volume(i, j - 1)) {
        if (j == 0) {
          faces.push_back({v, v, {}, dx, {{k, -1.0}}});
        } else {
          const LinExpr vs = st.v_at(i, j - 1);
          faces.push_back({0.5 * (vs + v), 0.5 * (vs + v), (1.0 / dy) * (v - vs), dx, {{k, -1.0}}});
        }
      }
      // east
      {
        const LinExpr ve = st.v_at(i + 1, j);
        Face f{0.5 * (st.u_at(i + 1, j - 1) + st.u_at(i + 1, j)), 0.5 * (v + ve),
               (1.0 / dx) * (ve - v), height, {{k, 1.0}}};
        if (st.v_volume(i + 1, j)) f.owners.push_back({st.v_index(i + 1, j), -1.0});
        faces.push_back(std::move(f));
      }
      // west
      if (!st.v_volume(i - 1, j)) {
        const LinExpr vw = st.v_at(i - 1, j);
        faces.push_back({0.5 * (st.u_at(i, j - 1) + st.u_at(i, j)), 0.5 * (vw + v),
                         (1.0 / dx) * (v - vw), height, {{k, -1.0}}});
      }
    }
  }
  return faces;
}

SparseMatrix from_triplets(Index rows, Index cols, const std::vector<Triplet>& t) {
  SparseMatrix a(rows, cols);
  a.setFromTriplets(t.begin(), t.end());
  a.prune(0.0);
  a.makeCompressed();
  return a;
}

}  // namespace

Vector PoissonSolver::solve(const Vector& rhs) const {
  if (rhs.size() != n_) throw DimensionError("PoissonSolver::solve: rhs size mismatch");
  if (!regularized_) return lu_->solve(rhs);
  Vector ext = Vector::Zero(n_ + 1);
  ext.head(n_) = rhs;
  return lu_->solve(ext).head(n_);
}

DenseMatrix PoissonSolver::solve(const DenseMatrix& rhs) const {
  if (rhs.rows() != n_) throw DimensionError("PoissonSolver::solve: rhs rows mismatch");
  if (!regularized_) return lu_->solve(rhs);
  DenseMatrix ext = DenseMatrix::Zero(n_ + 1, rhs.cols());
  ext.topRows(n_) = rhs;
  return lu_->solve(ext).topRows(n_);
}

PoissonSolver regularize_poisson(const SparseMatrix& l) {
  const Index n = l.rows();
  if (l.cols() != n) throw DimensionError("regularize_poisson: matrix must be square");
  const double scale = max_abs(l);
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  Vector probe(n);
  for (Index i = 0; i < n; ++i) probe[i] = normal(rng);
  const Vector y = l * probe;  // lies in Im(L)

  auto meets_contract = [&](const PoissonSolver& s) {
    const Vector x = s.solve(y);
    return x.allFinite() && (l * x - y).norm() <= 1e-10 * y.norm();
  };

  const Vector null_test = l * Vector::Ones(n);
  const bool constant_null_space = null_test.lpNorm<Eigen::Infinity>() <= 1e-12 * scale;
  if (!constant_null_space) {
    try {
      PoissonSolver direct(std::make_shared<const SparseLu>(l), n, false);
      if (meets_contract(direct)) return direct;
    } catch (const SingularMatrixError&) {
    }
  }

  // Border with the mean-pressure constraint: [L 1; 1^T 0].
  std::vector<Triplet> t;
  t.reserve(static_cast<std::size_t>(l.nonZeros() + 2 * n));
  for (Index c = 0; c < l.outerSize(); ++c) {
    for (SparseMatrix::InnerIterator it(l, c); it; ++it) t.emplace_back(it.row(), it.col(), it.value());
  }
  for (Index i = 0; i < n; ++i) {
    t.emplace_back(i, n, scale);
    t.emplace_back(n, i, scale);
  }
  const SparseMatrix bordered = from_triplets(n + 1, n + 1, t);
  PoissonSolver reg(std::make_shared<const SparseLu>(bordered), n, true);
  if (!meets_contract(reg)) {
    throw SingularMatrixError(
        "regularize_poisson: neither the direct nor the mean-constrained factorization "
        "meets the residual contract",
        -1);
  }
  return reg;
}

Vector ConvectionForm::apply(const Vector& x1, const Vector& x2) const {
  if (x1.size() != convecting.cols() || x2.size() != convected.cols()) {
    throw DimensionError("ConvectionForm::apply: extended state size mismatch");
  }
  const Vector w = convecting * x1;
  const Vector phi = convected * x2;
  return scatter * w.cwiseProduct(phi);
}

SparseMatrix OperatorSet::gradient() const {
  SparseMatrix g = -SparseMatrix(m.transpose());
  g.makeCompressed();
  return g;
}

Vector OperatorSet::apply_gradient(const Vector& p) const {
  if (p.size() != m.rows()) throw DimensionError("apply_gradient: pressure size mismatch");
  return -(m.transpose() * p);
}

Vector OperatorSet::extend(const Vector& v, const Vector& y) const {
  if (v.size() != n_vel() || y.size() != n_bc()) {
    throw DimensionError("extend: expected velocity of size " + std::to_string(n_vel()) +
                         " and trace of size " + std::to_string(n_bc()));
  }
  Vector x(n_vel() + n_bc());
  x << v, y;
  return x;
}

OperatorSet assemble_operators(const StaggeredGrid& grid, const ForcingSpec& forcing) {
  const Index nv = grid.n_vel();
  const Index np = grid.n_p();
  const Index nbc = grid.n_bc();
  const Index next = grid.n_ext();
  const double dx = grid.dx();
  const double dy = grid.dy();
  const BcSpec& bc = grid.bc();

  OperatorSet ops{grid, {}, {}, {}, {}, nullptr, {}, {}, {}, {}, {}};

  // Omega_h, forcing and constant outflow traction.
  ops.omega.resize(nv);
  ops.forcing = Vector::Zero(nv);
  ops.boundary_const = Vector::Zero(nv);
  for (Index k = 0; k < nv; ++k) {
    const auto cv = grid.control_volume(k);
    ops.omega[k] = (cv[1] - cv[0]) * (cv[3] - cv[2]);
    const auto& info = grid.unknown(k);
    if (info.component == Component::kU) {
      const double x = grid.x_face(info.i);
      const double y = grid.y_center(info.j);
      if (forcing.magnitude != 0.0 && std::abs(x - forcing.x_center) <= 0.5 * dx * (1 + 1e-9) &&
          std::abs(y - forcing.y_center) <= forcing.half_height + 1e-12) {
        ops.forcing[k] = -forcing.magnitude * ops.omega[k];
      }
      if (info.i == grid.nx() && bc.kind(Side::kRight) == SideKind::kOutflow) ops.boundary_const[k] -= bc.p_inf * dy;
      if (info.i == 0 && bc.kind(Side::kLeft) == SideKind::kOutflow) ops.boundary_const[k] += bc.p_inf * dy;
    } else {
      if (info.j == grid.ny() && bc.kind(Side::kTop) == SideKind::kOutflow) ops.boundary_const[k] -= bc.p_inf * dx;
      if (info.j == 0 && bc.kind(Side::kBottom) == SideKind::kOutflow) ops.boundary_const[k] += bc.p_inf * dx;
    }
  }

  // Mass equation: each row sums midpoint-rule face fluxes of one cell.
  {
    std::vector<Triplet> tm;
    std::vector<Triplet> tf;
    auto add = [&](Index row, FaceRef f, double c) {
      if (f.is_unknown()) tm.emplace_back(row, f.index, c);
      else tf.emplace_back(row, f.index, -c);
    };
    for (int j = 0; j < grid.ny(); ++j) {
      for (int i = 0; i < grid.nx(); ++i) {
        const Index row = grid.cell(i, j);
        add(row, grid.u_face(i + 1, j), dy);
        add(row, grid.u_face(i, j), -dy);
        add(row, grid.v_face(i, j + 1), dx);
        add(row, grid.v_face(i, j), -dx);
      }
    }
    ops.m = from_triplets(np, nv, tm);
    ops.fm = from_triplets(np, nbc, tf);
  }
  {
    const Vector inv_omega = ops.omega.cwiseInverse();
    SparseMatrix l = -(ops.m * inv_omega.asDiagonal() * SparseMatrix(ops.m.transpose()));
    l.prune(0.0);
    l.makeCompressed();
    ops.l = std::move(l);
  }
  ops.poisson = std::make_shared<const PoissonSolver>(regularize_poisson(ops.l));

  // Convection and diffusion from the unique control-volume faces.
  const std::vector<Face> faces = build_faces(grid);
  const Index nf = static_cast<Index>(faces.size());
  std::vector<Triplet> ta, tb, ts, td;
  for (Index fi = 0; fi < nf; ++fi) {
    const Face& f = faces[static_cast<std::size_t>(fi)];
    for (const auto& [c, w] : f.convecting) ta.emplace_back(fi, c, w * f.length);
    for (const auto& [c, w] : f.convected) tb.emplace_back(fi, c, w);
    for (const auto& [vol, sign] : f.owners) {
      ts.emplace_back(vol, fi, -sign);
      for (const auto& [c, w] : f.gradient) td.emplace_back(vol, c, bc.nu * sign * f.length * w);
    }
  }
  ops.convection.convecting = from_triplets(nf, next, ta);
  ops.convection.convected = from_triplets(nf, next, tb);
  ops.convection.scatter = from_triplets(nv, nf, ts);
  const SparseMatrix d = from_triplets(nv, next, td);
  ops.diffusion = d.leftCols(nv);
  ops.diffusion_bc = d.rightCols(nbc);
  ops.diffusion.makeCompressed();
  ops.diffusion_bc.makeCompressed();
  return ops;
}

Vector eval_affine(const OperatorSet& ops, const Vector& v, const Vector& y) {
  if (v.size() != ops.n_vel() || y.size() != ops.n_bc()) {
    throw DimensionError("eval_fcd: dimension mismatch (velocity " + std::to_string(v.size()) +
                         "/" + std::to_string(ops.n_vel()) + ", trace " +
                         std::to_string(y.size()) + "/" + std::to_string(ops.n_bc()) + ")");
  }
  Vector out = ops.forcing + ops.boundary_const;
  out.noalias() += ops.diffusion * v;
  out.noalias() += ops.diffusion_bc * y;
  return out;
}

Vector eval_fcd(const OperatorSet& ops, const Vector& v, const Vector& y) {
  Vector out = eval_affine(ops, v, y);
  const Vector x = ops.extend(v, y);
  out += ops.convection.apply(x, x);
  return out;
}

}  // namespace romns
