#include "romns/rom_offline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <thread>
#include <vector>

namespace romns {

Vector QuadraticModel::eval(const Vector& a, const Vector& c) const {
  const Index na = dim_a();
  const Index nc = dim_c();
  if (a.size() != na || c.size() != nc) throw DimensionError("QuadraticModel::eval: coefficient size mismatch");
  Vector out = constant;
  out.noalias() += a_a * a;
  out.noalias() += a_c * c;
  Vector kron(na * std::max(na, nc));
  for (Index i = 0; i < na; ++i) kron.segment(i * na, na) = a[i] * a;
  out.noalias() += q_aa * kron.head(na * na);
  for (Index i = 0; i < na; ++i) kron.segment(i * nc, nc) = a[i] * c;
  out.noalias() += q_ac * kron.head(na * nc);
  Vector kc(nc * nc);
  for (Index i = 0; i < nc; ++i) kc.segment(i * nc, nc) = c[i] * c;
  out.noalias() += q_cc * kc;
  return out;
}

std::size_t QuadraticModel::tensor_entries() const {
  return static_cast<std::size_t>(q_aa.size() + q_ac.size() + q_cc.size());
}

unsigned offline_threads() {
  if (const char* env = std::getenv("ROMNS_THREADS")) {
    const long n = std::strtol(env, nullptr, 10);
    if (n >= 1) return static_cast<unsigned>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

// Runs body(i) for i in [0, n) on the offline thread pool. Each index
// writes a disjoint output block, so results do not depend on the split.
template <class F>
void parallel_for(Index n, F&& body) {
  const unsigned threads = static_cast<unsigned>(std::min<Index>(offline_threads(), std::max<Index>(n, 1)));
  if (threads <= 1) {
    for (Index i = 0; i < n; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      for (Index i = t; i < n; i += threads) body(i);
    });
  }
  for (auto& th : pool) th.join();
}

DenseMatrix apply_ext(const SparseMatrix& vel_part, const SparseMatrix& bc_part, const TrialMap& e) {
  DenseMatrix out = DenseMatrix::Zero(vel_part.rows(), e.cols);
  if (e.vel.size() > 0) out.noalias() += vel_part * e.vel;
  if (e.bc.size() > 0) out.noalias() += bc_part * e.bc;
  return out;
}

void check_trial(const OperatorSet& ops, const TrialMap& e) {
  if ((e.vel.size() > 0 && (e.vel.rows() != ops.n_vel() || e.vel.cols() != e.cols)) ||
      (e.bc.size() > 0 && (e.bc.rows() != ops.n_bc() || e.bc.cols() != e.cols))) {
    throw DimensionError("project_fcd: trial map shape mismatch");
  }
}

// out[:, i*nb + j] = P^T (x[:, i] .* y[:, j]) for every i.
void contract(const DenseMatrix& p, const DenseMatrix& x, const DenseMatrix& y, DenseMatrix& out) {
  const Index nb = y.cols();
  parallel_for(x.cols(), [&](Index i) {
    const DenseMatrix w = x.col(i).asDiagonal() * y;
    out.middleCols(i * nb, nb).noalias() = p.transpose() * w;
  });
}

}  // namespace

QuadraticModel project_fcd(const OperatorSet& ops, const DenseMatrix& test, const TrialMap& ea,
                           const TrialMap& ec) {
  if (test.rows() != ops.n_vel()) throw DimensionError("project_fcd: test basis size mismatch");
  check_trial(ops, ea);
  check_trial(ops, ec);
  const Index nv = ops.n_vel();
  const Index nbc = ops.n_bc();
  const ConvectionForm& conv = ops.convection;
  const SparseMatrix a_vel = conv.convecting.leftCols(nv);
  const SparseMatrix a_bc = conv.convecting.rightCols(nbc);
  const SparseMatrix b_vel = conv.convected.leftCols(nv);
  const SparseMatrix b_bc = conv.convected.rightCols(nbc);

  QuadraticModel q;
  q.constant = test.transpose() * (ops.forcing + ops.boundary_const);
  q.a_a = test.transpose() * apply_ext(ops.diffusion, ops.diffusion_bc, ea);
  q.a_c = test.transpose() * apply_ext(ops.diffusion, ops.diffusion_bc, ec);

  const DenseMatrix p = SparseMatrix(conv.scatter.transpose()) * test;  // faces x R
  const DenseMatrix wa = apply_ext(a_vel, a_bc, ea);
  const DenseMatrix pa = apply_ext(b_vel, b_bc, ea);
  const DenseMatrix wc = apply_ext(a_vel, a_bc, ec);
  const DenseMatrix pc = apply_ext(b_vel, b_bc, ec);

  const Index r = test.cols();
  const Index na = ea.cols;
  const Index nc = ec.cols;
  DenseMatrix q_aa(r, na * na), q_ac(r, na * nc), q_cc(r, nc * nc);
  contract(p, wa, pa, q_aa);
  contract(p, wa, pc, q_ac);
  DenseMatrix swapped(r, nc * na);
  contract(p, wc, pa, swapped);  // index j*na + i for c_j a_i
  for (Index i = 0; i < na; ++i) {
    for (Index j = 0; j < nc; ++j) q_ac.col(i * nc + j) += swapped.col(j * na + i);
  }
  contract(p, wc, pc, q_cc);
  q.q_aa = q_aa;
  q.q_ac = q_ac;
  q.q_cc = q_cc;
  return q;
}

double orthogonality_defect(const Vector& omega, const DenseMatrix& phi_hom, const DenseMatrix& f_inhom) {
  if (phi_hom.cols() == 0 || f_inhom.cols() == 0) return 0.0;
  const DenseMatrix cross = phi_hom.transpose() * omega.asDiagonal() * f_inhom;
  double scale = 0.0;
  for (Index j = 0; j < f_inhom.cols(); ++j) {
    scale = std::max(scale, std::sqrt(f_inhom.col(j).dot(omega.cwiseProduct(f_inhom.col(j)))));
  }
  return scale > 0.0 ? cross.cwiseAbs().maxCoeff() / scale : 0.0;
}

RomOperators build_rom_operators(const OperatorSet& ops, const DenseMatrix& phi_hom,
                                 const LiftingOperator& lifting) {
  if (phi_hom.rows() != ops.n_vel() || lifting.f_inhom.rows() != ops.n_vel() ||
      lifting.phi_bc.rows() != ops.n_bc() || lifting.f_inhom.cols() != lifting.phi_bc.cols()) {
    throw DimensionError("build_rom_operators: basis shapes do not match the operators");
  }
  RomOperators rom;
  rom.phi_hom = phi_hom;
  rom.f_inhom = lifting.f_inhom;
  rom.phi_bc = lifting.phi_bc;
  rom.orthogonality = orthogonality_defect(ops.omega, phi_hom, lifting.f_inhom);
  if (rom.orthogonality > kOrthogonalityTolerance) {
    std::ostringstream msg;
    msg << "build_rom_operators: homogeneous modes are not Omega-orthogonal to the lifting "
        << "(relative defect " << rom.orthogonality << ")";
    throw Error(msg.str());
  }
  TrialMap ea{phi_hom, DenseMatrix(), phi_hom.cols()};
  TrialMap ec{lifting.f_inhom, lifting.phi_bc, lifting.phi_bc.cols()};
  rom.model = project_fcd(ops, phi_hom, ea, ec);
  return rom;
}

std::string TheoremChecks::describe() const {
  std::ostringstream s;
  s << "orthonormality=" << orthonormality << " span_defect=" << span_defect
    << " mass_solvability=" << mass_solvability << " rank_m_phi=" << rank_m_phi
    << " rank_reduced_divergence=" << rank_reduced_divergence
    << " homogeneous_gradient=" << homogeneous_gradient << " satisfied=" << (satisfied ? 1 : 0);
  return s.str();
}

VpRomOperators build_vp_rom(const OperatorSet& ops, const DenseMatrix& phi_hom,
                            const LiftingOperator& lifting) {
  if (phi_hom.rows() != ops.n_vel() || lifting.f_inhom.rows() != ops.n_vel()) {
    throw DimensionError("build_vp_rom: basis shapes do not match the operators");
  }
  VpRomOperators vp;
  vp.r_hom = phi_hom.cols();
  vp.phi_inhom = qr_orthonormalize(lifting.f_inhom, ops.omega);
  vp.phi.resize(ops.n_vel(), vp.r_hom + vp.phi_inhom.cols());
  vp.phi << phi_hom, vp.phi_inhom;
  vp.psi = ops.m * vp.phi_inhom;
  const DenseMatrix m_phi = ops.m * vp.phi;
  vp.d_r = vp.psi.transpose() * m_phi;
  vp.g_r = -vp.d_r.transpose();
  vp.l_r = vp.d_r * vp.g_r;
  vp.mass_bc = vp.psi.transpose() * (ops.fm * lifting.phi_bc);

  TheoremChecks& ch = vp.checks;
  ch.orthonormality =
      (vp.phi.transpose() * ops.omega.asDiagonal() * vp.phi - DenseMatrix::Identity(vp.r_v(), vp.r_v()))
          .cwiseAbs()
          .maxCoeff();
  if (lifting.f_inhom.cols() > 0) {
    const DenseMatrix coeff = vp.phi.transpose() * ops.omega.asDiagonal() * lifting.f_inhom;
    const double fn = lifting.f_inhom.norm();
    ch.span_defect = fn > 0.0 ? (lifting.f_inhom - vp.phi * coeff).norm() / fn : 0.0;
    const DenseMatrix target = ops.fm * lifting.phi_bc;
    const DenseMatrix sol = m_phi.colPivHouseholderQr().solve(target);
    const double tn = target.norm();
    ch.mass_solvability = tn > 0.0 ? (m_phi * sol - target).norm() / tn : 0.0;
  }
  ch.rank_m_phi = m_phi.cols() > 0 ? numerical_rank(singular_values(m_phi)) : 0;
  ch.rank_reduced_divergence = vp.d_r.size() > 0 ? numerical_rank(singular_values(vp.d_r)) : 0;
  if (vp.r_p() > 0 && vp.r_hom > 0) {
    const DenseMatrix g_psi = -(SparseMatrix(ops.m.transpose()) * vp.psi);
    const double gmax = g_psi.cwiseAbs().maxCoeff();
    ch.homogeneous_gradient =
        gmax > 0.0 ? (phi_hom.transpose() * g_psi).cwiseAbs().maxCoeff() / gmax : 0.0;
  }
  ch.satisfied = ch.orthonormality <= 1e-10 && ch.span_defect <= 1e-8 && ch.mass_solvability <= 1e-8 &&
                 ch.rank_m_phi == vp.r_p() && ch.rank_reduced_divergence == vp.r_p() &&
                 ch.homogeneous_gradient <= 1e-10;

  if (vp.r_p() > 0) {
    vp.l_r_lu = DenseLu(vp.l_r);
    vp.l_r_condition = 1.0 / vp.l_r_lu.reciprocal_condition();
    if (!(vp.l_r_condition <= kMaxReducedPoissonCondition)) {
      std::ostringstream msg;
      msg << "build_vp_rom: reduced Poisson matrix is ill-conditioned (condition estimate "
          << vp.l_r_condition << ")";
      throw SingularMatrixError(msg.str(), -1);
    }
  }

  TrialMap ea{vp.phi, DenseMatrix(), vp.phi.cols()};
  TrialMap ec{DenseMatrix(), lifting.phi_bc, lifting.phi_bc.cols()};
  vp.model = project_fcd(ops, vp.phi, ea, ec);
  return vp;
}

}  // namespace romns
