// Acceptance harness: runs both channel test cases at full resolution through
// the stage pipeline, then checks each criterion against the artifacts and a
// few dedicated in-process experiments. One PASS/FAIL line per criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <limits>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "fields.hpp"
#include "romns/config.hpp"
#include "romns/container.hpp"
#include "romns/diagnostics.hpp"
#include "romns/error.hpp"
#include "romns/fom.hpp"
#include "romns/lifting.hpp"
#include "romns/pipeline.hpp"
#include "romns/pod.hpp"
#include "romns/rom_offline.hpp"
#include "romns/rom_online.hpp"

using namespace romns;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) pass = false;
    if (detail.tellp() > 0) detail << "; ";
    detail << (ok ? "" : "FAILED ") << what;
  }
};

// One full-resolution pipeline run plus lazily loaded artifacts.
class FullRun {
 public:
  FullRun(Testcase tc, const fs::path& dir, bool reuse) : dir_(dir) {
    cfg_.testcase = tc;
    cfg_.output_dir = dir.string();
    const bool have = reuse && fs::exists(dir / "report.txt") &&
                      value_in(read_file((dir / "report.txt").string()), "config_hash") == physics_hash(cfg_);
    if (!have) {
      fs::remove_all(dir);
      fs::create_directories(dir);
      std::cout << "# running " << to_string(tc) << " pipeline in " << dir.string() << std::endl;
      const auto t = Clock::now();
      std::ostringstream log;
      run_all(cfg_, dir.string(), log);
      std::cout << "# " << to_string(tc) << " pipeline finished in " << sci(since(t)) << " s" << std::endl;
    }
    for (const auto& [k, v] : parse_report(read_file((dir / "report.txt").string()))) report_[k] = v;
    ledger_ = std::make_unique<RunLedger>((dir / "ledger.txt").string());
  }

  const SimConfig& cfg() const { return cfg_; }
  const std::string& name() const { static std::string s; s = to_string(cfg_.testcase); return s; }

  double num(const std::string& key) const {
    const auto it = report_.find(key);
    if (it == report_.end()) throw ArtifactError("report key missing: " + key);
    return std::stod(it->second);
  }
  double num(Index r, const std::string& key) const { return num("R" + std::to_string(r) + "." + key); }

  Container load(const std::string& name) const { return read_container((dir_ / name).string()); }
  const RunLedger& ledger() const { return *ledger_; }

  const OperatorSet& ops() {
    if (!ops_) {
      grid_ = make_grid(cfg_);
      ops_ = assemble_operators(*grid_, cfg_.forcing);
      bc_ = make_boundary(cfg_, *grid_);
    }
    return *ops_;
  }
  const BoundaryModel& bc() {
    ops();
    return *bc_;
  }

  const Container& pod() { return cached("pod.bin", pod_); }
  const Container& lifting() { return cached("lifting.bin", lifting_); }
  const Container& bc_red() { return cached("bc.bin", bc_red_); }

  Index r_bc(Index r) { return std::min<Index>(cfg_.bc_rank(r), bc_red().block("phi_bc").cols()); }

  RomOperators rom(Index r) {
    const Index rb = r_bc(r);
    const Container c = load("rom_R" + std::to_string(r) + ".bin");
    RomOperators out;
    out.phi_hom = pod().block("phi_hom").leftCols(r);
    out.f_inhom = lifting().block("f_inhom").leftCols(rb);
    out.phi_bc = bc_red().block("phi_bc").leftCols(rb);
    out.model.constant = c.vector("constant");
    out.model.a_a = c.block("a_a");
    out.model.a_c = c.block("a_c");
    out.model.q_aa = c.block("q_aa");
    out.model.q_ac = c.block("q_ac");
    out.model.q_cc = c.block("q_cc");
    return out;
  }

  StageTable table(Index rb) {
    const Container& b = bc_red();
    return StageTable(std::stod(b.get("t0")), std::stod(b.get("dt")), cfg_.steps, b.block("a_bc").topRows(rb),
                      b.block("da_bc").topRows(rb));
  }

  Vector initial_coefficients(const RomOperators& rom) {
    if (!v0_) v0_ = Vector(load("fom.bin").block("velocity").col(0));
    return rom_initial_condition(rom, ops().omega, *v0_);
  }

 private:
  static std::string value_in(const std::string& text, const std::string& key) {
    for (const auto& [k, v] : parse_report(text)) {
      if (k == key) return v;
    }
    return {};
  }

  const Container& cached(const std::string& name, std::optional<Container>& slot) {
    if (!slot) slot = load(name);
    return *slot;
  }

  fs::path dir_;
  SimConfig cfg_;
  std::map<std::string, std::string> report_;
  std::unique_ptr<RunLedger> ledger_;
  std::optional<StaggeredGrid> grid_;
  std::optional<OperatorSet> ops_;
  BoundaryModelPtr bc_;
  std::optional<Container> pod_, lifting_, bc_red_;
  std::optional<Vector> v0_;
};

// Median wall clock of several online integrations.
double online_seconds(const RomOperators& rom, const StageTable& table, const Vector& a0, double t_end,
                      Index steps, int repeats = 5) {
  std::vector<double> t;
  for (int i = 0; i < repeats; ++i) t.push_back(rom_integrate(rom, table, a0, t_end, steps).seconds);
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

StaggeredGrid small_channel(int nx, int ny) {
  return build_grid(nx, ny, {0.0, 10.0}, {-2.0, 2.0}, BcSpec::inflow_outflow(1e-2));
}

struct Harness {
  fs::path work;
  bool reuse = false;
  std::unique_ptr<FullRun> va, mm;

  FullRun& varying() {
    if (!va) va = std::make_unique<FullRun>(Testcase::kVaryingAngle, work / "varying-angle", reuse);
    return *va;
  }
  FullRun& moving() {
    if (!mm) mm = std::make_unique<FullRun>(Testcase::kMovingMode, work / "moving-mode", reuse);
    return *mm;
  }
  std::vector<FullRun*> both() { return {&varying(), &moving()}; }
};

// 1. G = -M^T on every route that produces the gradient.
void operator_duality(Harness&, Outcome& out) {
  const auto t = Clock::now();
  SimConfig cfg;
  const StaggeredGrid grid = make_grid(cfg);
  const OperatorSet ops = assemble_operators(grid, cfg.forcing);
  const SparseMatrix g = ops.gradient();
  const SparseMatrix mt = ops.m.transpose();
  const SparseMatrix sum = g + mt;
  const double assembled = sum.nonZeros() == 0 ? 0.0 : sum.coeffs().cwiseAbs().maxCoeff();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Vector p(ops.n_p());
  for (Index i = 0; i < p.size(); ++i) p[i] = u(rng);
  const double applied = (ops.apply_gradient(p) + mt * p).cwiseAbs().maxCoeff();
  const double seconds = since(t);
  out.require(assembled == 0.0, "max|G + M^T| = " + sci(assembled));
  out.require(applied == 0.0, "max|G p + M^T p| = " + sci(applied));
  out.require(seconds < 1.0, "runtime " + sci(seconds) + " s < 1 s");
}

// 2. M Phi_hom vanishes column by column, and POD stays under a minute.
void divergence_free_basis(Harness& h, Outcome& out) {
  for (FullRun* run : h.both()) {
    const OperatorSet& ops = run->ops();
    const DenseMatrix& phi = run->pod().block("phi_hom");
    const double m_max = ops.m.coeffs().cwiseAbs().maxCoeff();
    double worst = 0.0;
    for (Index k = 0; k < phi.cols(); ++k) {
      const Vector col = phi.col(k);
      const double ratio = (ops.m * col).cwiseAbs().maxCoeff() / (m_max * col.cwiseAbs().maxCoeff());
      worst = std::max(worst, ratio);
    }
    const double pod_s = run->ledger().latest_seconds("pod", "pod").value_or(1e30);
    out.require(worst <= 1e-10, run->name() + " max|M phi_k| / (max|M| max|phi_k|) = " + sci(worst) + " over " +
                                    std::to_string(phi.cols()) + " modes");
    out.require(pod_s < 60.0, run->name() + " POD " + sci(pod_s) + " s");
  }
}

// 3. Phi_hom is Omega-orthogonal to F_inhom, and the online cross term is negligible.
void orthogonality_certificate(Harness& h, Outcome& out) {
  for (FullRun* run : h.both()) {
    const Vector& omega = run->ops().omega;
    double ortho = 0.0;
    double cross = 0.0;
    for (Index r : run->cfg().modes) {
      const Index rb = run->r_bc(r);
      ortho = std::max(ortho, orthogonality_defect(omega, run->pod().block("phi_hom").leftCols(r),
                                                   run->lifting().block("f_inhom").leftCols(rb)));
      const Container traj = run->load("traj_R" + std::to_string(r) + ".bin");
      const std::vector<double> c = traj.series("cross_energy");
      const std::vector<double> k = traj.series("kinetic_energy");
      for (std::size_t j = 0; j < c.size(); ++j) cross = std::max(cross, std::abs(c[j]) / k[j]);
    }
    out.require(ortho <= kOrthogonalityTolerance, run->name() + " orthogonality " + sci(ortho));
    out.require(cross <= 1e-9, run->name() + " max |cross| / K_r " + sci(cross));
  }
}

// 4. Stored tensors against direct projection of the full-order right-hand side.
void tensor_exactness(Harness& h, Outcome& out) {
  for (FullRun* run : h.both()) {
    const OperatorSet& ops = run->ops();
    for (Index r : {Index(20), Index(80)}) {
      const RomOperators rom = run->rom(r);
      std::mt19937_64 rng(1000 + static_cast<unsigned>(r));
      std::normal_distribution<double> n01;
      double worst = 0.0;
      for (int k = 0; k < 50; ++k) {
        Vector a(rom.r_hom()), c(rom.r_bc());
        for (Index i = 0; i < a.size(); ++i) a[i] = n01(rng);
        for (Index i = 0; i < c.size(); ++i) c[i] = n01(rng);
        const Vector direct = rom.phi_hom.transpose() * eval_fcd(ops, rom.reconstruct(a, c), rom.phi_bc * c);
        worst = std::max(worst, (rom.rhs(a, c) - direct).norm() / direct.norm());
      }
      out.require(worst <= 1e-11, run->name() + " R=" + std::to_string(r) + " worst relative mismatch " + sci(worst));
    }
  }
}

// 5. Singular-value counts of the snapshot matrices.
void singular_value_counts(Harness& h, Outcome& out) {
  const double va = h.varying().num("sv.hom.count_above_eps");
  const double mm = h.moving().num("sv.hom.count_above_eps");
  const double bc = h.moving().num("sv.bc.count_above_1e-4");
  out.require(std::abs(va - 164.0) <= 10.0, "varying-angle hom count " + sci(va) + " (164 +- 10)");
  out.require(std::abs(mm - 684.0) <= 10.0, "moving-mode hom count " + sci(mm) + " (684 +- 10)");
  out.require(bc == 80.0, "moving-mode X_bc count above 1e-4 " + sci(bc) + " (80)");
}

// 6. Mass violation against the exact trace.
void mass_violation_levels(Harness& h, Outcome& out) {
  double va = 0.0;
  for (Index r : h.varying().cfg().modes) {
    if (r >= 20) va = std::max(va, h.varying().num(r, "mass_violation.max"));
  }
  const double mm40 = h.moving().num(40, "mass_violation.max");
  const double mm80 = h.moving().num(80, "mass_violation.max");
  out.require(va <= 1e-10, "varying-angle R>=20 max " + sci(va));
  out.require(mm40 > 1e-4, "moving-mode R=40 max " + sci(mm40) + " > 1e-4");
  out.require(mm80 <= 1e-9, "moving-mode R=80 max " + sci(mm80));
}

// 7. Time-max velocity error decreases over the mode sweep.
void convergence_in_modes(Harness& h, Outcome& out) {
  for (FullRun* run : h.both()) {
    std::vector<double> e;
    std::ostringstream s;
    for (Index r : run->cfg().modes) {
      e.push_back(run->num(r, "velocity_error.max"));
      s << (e.size() > 1 ? " " : "") << sci(e.back());
    }
    int strict = 0;
    bool monotone = true;
    for (std::size_t i = 1; i < e.size(); ++i) {
      monotone = monotone && e[i] <= e[i - 1];
      strict += e[i] < e[i - 1] ? 1 : 0;
    }
    out.require(monotone && strict >= 4, run->name() + " [" + s.str() + "], " + std::to_string(strict) + " strict");
  }
}

// 8. Energy error tracks the velocity error; the reduced energy balance converges.
void energy_consistency(Harness& h, Outcome& out) {
  for (FullRun* run : h.both()) {
    double worst = 0.0;
    double lowest = std::numeric_limits<double>::infinity();
    for (Index r : run->cfg().modes) {
      const double ratio = run->num(r, "kinetic_energy_error.max") / run->num(r, "velocity_error.max");
      worst = std::max(worst, ratio);
      lowest = std::min(lowest, ratio);
    }
    out.require(worst <= 10.0, run->name() + " max K-error / V-error " + sci(worst) + " (min " + sci(lowest) + ")");
  }

  const StaggeredGrid grid = small_channel(50, 20);
  const OperatorSet ops = assemble_operators(grid, ForcingSpec{});
  const BoundaryModelPtr bc = make_varying_angle(grid);
  const double t_end = 4.0 * std::numbers::pi;
  const SnapshotSet fom = fom_integrate(ops, *bc, t_end, 800);
  const PodBasis basis = pod_divergence_free(ops, homogenize_snapshots(fom, ops, *bc).velocity, 10);
  auto residual = [&](Index steps) {
    const BcReduction red = reduce_bc(*bc, 0.0, t_end / static_cast<double>(steps), steps, 10);
    const RomOperators rom = build_rom_operators(ops, basis.phi, build_lifting(ops, red));
    const Vector a0 = rom_initial_condition(rom, ops.omega, fom.velocity.col(0));
    const RomTrajectory traj = rom_integrate(rom, red.coefficients, a0, t_end, steps);
    const EnergySeries e = energy_series(rom, ops.omega, traj);
    const VelocityAt v = rom_velocity(rom, traj);
    std::vector<Vector> y, p;
    for (Index j = 0; j <= steps; ++j) {
      y.push_back(red.phi * traj.a_bc.col(j));
      p.push_back(recover_pressure(ops, red, v(j), j));
    }
    return energy_balance_residual(e.times, e.kinetic, energy_rate(ops, v, y, p));
  };
  const double coarse = residual(400);
  const double fine = residual(800);
  out.require(coarse >= 8.0 * fine, "50x20 energy-balance residual " + sci(coarse) + " -> " + sci(fine) +
                                        " (x" + sci(coarse / fine) + ")");
}

// 9. Velocity-only and velocity-pressure reduced models coincide.
void rom_equivalence(Harness& h, Outcome& out) {
  for (FullRun* run : h.both()) {
    double worst = 0.0;
    Index at = 0;
    for (Index r : run->cfg().modes) {
      const double e = run->num(r, "equivalence_error.max");
      if (e >= worst) {
        worst = e;
        at = r;
      }
    }
    out.require(worst <= 1e-9, run->name() + " max " + sci(worst) + " at R=" + std::to_string(at));
  }
}

// 10. Online cost: grid independence, speedup over the FOM, growth with R.
void performance_scaling(Harness& h, Outcome& out) {
  FullRun& va = h.varying();
  const Index r = 20;

  const RomOperators fine = va.rom(r);
  const StageTable fine_table = va.table(fine.r_bc());
  const double t_fine = online_seconds(fine, fine_table, va.initial_coefficients(fine), va.cfg().end_time(),
                                       va.cfg().steps);

  SimConfig coarse_cfg;
  coarse_cfg.nx = 100;
  coarse_cfg.ny = 40;
  const StaggeredGrid grid = make_grid(coarse_cfg);
  const OperatorSet ops = assemble_operators(grid, coarse_cfg.forcing);
  const BoundaryModelPtr bc = make_boundary(coarse_cfg, grid);
  FomOptions opt;
  opt.store_pressure = false;
  const SnapshotSet fom = fom_integrate(ops, *bc, coarse_cfg.end_time(), coarse_cfg.steps, opt);
  const PodBasis basis = pod_divergence_free(ops, homogenize_snapshots(fom, ops, *bc).velocity, r);
  const BcReduction red = reduce_bc(*bc, 0.0, coarse_cfg.dt(), coarse_cfg.steps, fine.r_bc());
  const RomOperators coarse = build_rom_operators(ops, basis.phi, build_lifting(ops, red));
  const double t_coarse = online_seconds(coarse, red.coefficients, rom_initial_condition(coarse, ops.omega, fom.velocity.col(0)),
                                         coarse_cfg.end_time(), coarse_cfg.steps);
  const double grid_ratio = t_fine / t_coarse;
  out.require(coarse.r_hom() == fine.r_hom() && coarse.r_bc() == fine.r_bc() && grid_ratio <= 1.3 &&
                  grid_ratio >= 1.0 / 1.3,
              "R=" + std::to_string(r) + " online 200x80 / 100x40 = " + sci(t_fine) + " / " + sci(t_coarse) + " s = " +
                  sci(grid_ratio));

  for (FullRun* run : h.both()) {
    const double t_fom = run->ledger().latest_seconds("fom", "integrate").value_or(0.0);
    std::map<Index, double> online;
    for (Index m : run->cfg().modes) {
      const RomOperators rom = run->rom(m);
      online[m] = online_seconds(rom, run->table(rom.r_bc()), run->initial_coefficients(rom), run->cfg().end_time(),
                                 run->cfg().steps);
    }
    double min_speedup = std::numeric_limits<double>::infinity();
    for (const auto& [m, t] : online) {
      if (m <= 40) min_speedup = std::min(min_speedup, t_fom / t);
    }
    out.require(min_speedup >= 50.0, run->name() + " min speedup (R<=40) " + sci(min_speedup) + " (FOM " +
                                         sci(t_fom) + " s)");
    double growth = 0.0;
    std::ostringstream s;
    for (const auto& [m, t] : online) {
      const auto twice = online.find(2 * m);
      if (twice == online.end()) continue;
      growth = std::max(growth, twice->second / t);
      s << " " << m << "->" << 2 * m << ":" << sci(twice->second / t);
    }
    out.require(growth <= 8.0, run->name() + " online growth per doubling" + s.str());
  }
}

// 11. FOM time-integration properties.
void fom_sanity(Harness&, Outcome& out) {
  {
    const StaggeredGrid g = small_channel(50, 20);
    const OperatorSet ops = assemble_operators(g, ForcingSpec{});
    const BoundaryModelPtr bc = make_varying_angle(g);
    FomOptions opt;
    opt.store_pressure = false;
    const Vector v1 = fom_integrate(ops, *bc, 2.0, 20, opt).velocity.rightCols(1);
    const Vector v2 = fom_integrate(ops, *bc, 2.0, 40, opt).velocity.rightCols(1);
    const Vector v4 = fom_integrate(ops, *bc, 2.0, 80, opt).velocity.rightCols(1);
    const double ratio = (v1 - v2).norm() / (v2 - v4).norm();
    out.require(ratio >= 10.0 && ratio <= 22.0, "RK4 error ratio " + sci(ratio));
  }
  {
    const StaggeredGrid g = build_grid(16, 16, {0.0, 1.0}, {0.0, 1.0}, BcSpec::closed_box(0.0));
    const OperatorSet ops = assemble_operators(g, ForcingSpec::none());
    FomOptions opt;
    opt.v0 = fields::box_vortex(g);
    opt.store_pressure = false;
    const SnapshotSet s = fom_integrate(ops, *make_constant(Vector::Zero(ops.n_bc())), 0.8, 800, opt);
    const std::vector<double> k = kinetic_energy(s, ops.omega);
    double drift = 0.0;
    for (double kj : k) drift = std::max(drift, std::abs(kj - k[0]) / k[0]);
    const double change = (s.velocity.rightCols(1) - s.velocity.leftCols(1)).norm() / s.velocity.col(0).norm();
    out.require(drift <= 1e-6 && change >= 0.1,
                "inviscid drift " + sci(drift) + " over 800 steps (flow change " + sci(change) + ")");
  }
  {
    const StaggeredGrid g = small_channel(20, 8);
    const OperatorSet ops = assemble_operators(g, ForcingSpec::none());
    const SnapshotSet s = fom_integrate(ops, *make_constant(Vector::Zero(ops.n_bc())), 1.0, 50);
    const double vmax = s.velocity.cwiseAbs().maxCoeff();
    const double pmax = s.pressure.cwiseAbs().maxCoeff();
    out.require(vmax == 0.0 && pmax == 0.0, "rest state max|V| = " + sci(vmax) + ", max|p| = " + sci(pmax));
  }
}

// 12. Pressure recovered from a full-rank reduced state with the exact trace.
void pressure_recovery(Harness& h, Outcome& out) {
  FullRun& run = h.varying();
  const OperatorSet& ops = run.ops();
  const BoundaryModel& bc = run.bc();
  const Container fom = run.load("fom.bin");
  const DenseMatrix& v = fom.block("velocity");
  const DenseMatrix& p = fom.block("pressure");
  const std::vector<double> times = fom.series("times");
  const PodBasis basis = pod_divergence_free(ops, run.load("hom.bin").block("velocity"), -1);
  const DenseMatrix lifted = exact_lifting(ops, [&] {
    DenseMatrix y(ops.n_bc(), static_cast<Index>(times.size()));
    for (std::size_t j = 0; j < times.size(); ++j) y.col(static_cast<Index>(j)) = bc.trace(times[j]);
    return y;
  }());
  const DenseMatrix a = basis.phi.transpose() * ops.omega.asDiagonal() * (v - lifted);
  const DenseMatrix v_r = basis.phi * a + lifted;
  double worst = 0.0;
  const Index last = v.cols() - 1;
  for (Index j = 0; j <= last; ++j) {
    const double t = times[static_cast<std::size_t>(j)];
    const Vector p_r = recover_pressure(ops, v_r.col(j), bc.trace(t), bc.rate(t, j == last ? Limit::kLeft : Limit::kRight));
    worst = std::max(worst, (p_r - p.col(j)).norm() / p.col(j).norm());
  }
  out.require(worst <= 1e-8, "R=" + std::to_string(basis.rank()) + " max relative pressure error " + sci(worst));
}

struct Criterion {
  int id;
  const char* name;
  void (*run)(Harness&, Outcome&);
};

const Criterion kCriteria[] = {
    {1, "operator duality", operator_duality},
    {2, "divergence-free basis", divergence_free_basis},
    {3, "orthogonality certificate", orthogonality_certificate},
    {4, "offline tensor exactness", tensor_exactness},
    {5, "singular-value counts", singular_value_counts},
    {6, "mass violation", mass_violation_levels},
    {7, "convergence in R", convergence_in_modes},
    {8, "energy consistency", energy_consistency},
    {9, "ROM equivalence", rom_equivalence},
    {10, "performance scaling", performance_scaling},
    {11, "FOM sanity", fom_sanity},
    {12, "pressure recovery", pressure_recovery},
};

}  // namespace

int main(int argc, char** argv) {
  Harness h;
  h.work = fs::current_path() / "acceptance_runs";
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    if (arg == "--work-dir" && i + 1 < argc) {
      h.work = argv[++i];
    } else if (arg == "--reuse") {
      h.reuse = true;
    } else if (arg == "--only" && i + 1 < argc) {
      for (Index id : parse_modes(argv[++i])) only.insert(static_cast<int>(id));
    } else {
      std::cerr << "usage: romns_acceptance [--work-dir DIR] [--reuse] [--only 1,2,...]\n";
      return 2;
    }
  }
  fs::create_directories(h.work);

  int failed = 0;
  for (const Criterion& c : kCriteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome out;
    const auto t = Clock::now();
    try {
      c.run(h, out);
    } catch (const std::exception& e) {
      out.require(false, std::string("error: ") + e.what());
    }
    failed += out.pass ? 0 : 1;
    std::cout << (out.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << out.detail.str()
              << " [" << sci(since(t)) << " s]" << std::endl;
  }
  std::cout << (failed == 0 ? "all criteria passed" : std::to_string(failed) + " criteria failed") << std::endl;
  return failed == 0 ? 0 : 1;
}
