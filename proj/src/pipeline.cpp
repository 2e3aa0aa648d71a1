#include "romns/pipeline.hpp"

#include <chrono>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include "romns/container.hpp"
#include "romns/diagnostics.hpp"
#include "romns/fom.hpp"
#include "romns/lifting.hpp"
#include "romns/pod.hpp"
#include "romns/rom_offline.hpp"
#include "romns/rom_online.hpp"

namespace romns {

namespace fs = std::filesystem;

RunLedger::RunLedger(std::string path) : path_(std::move(path)) {
  if (!fs::exists(path_)) return;
  std::istringstream in(read_file(path_));
  std::string line;
  LedgerEntry cur;
  bool open = false;
  auto split = [](const std::string& v) {
    const auto colon = v.rfind(':');
    if (colon == std::string::npos) throw ArtifactError("ledger: malformed artifact record '" + v + "'");
    return std::make_pair(v.substr(0, colon), v.substr(colon + 1));
  };
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string key = line.substr(0, eq);
    const std::string val = eq == std::string::npos ? "" : line.substr(eq + 1);
    if (key == "stage") {
      cur = LedgerEntry{};
      cur.stage = val;
      open = true;
    } else if (!open) {
      throw ArtifactError("ledger: record outside a stage block in " + path_);
    } else if (key == "config_hash") {
      cur.config_hash = val;
    } else if (key == "input") {
      cur.inputs.push_back(split(val));
    } else if (key == "output") {
      cur.outputs.push_back(split(val));
    } else if (key.rfind("seconds.", 0) == 0) {
      cur.seconds.emplace_back(key.substr(8), std::stod(val));
    } else if (key == "end") {
      entries_.push_back(cur);
      open = false;
    }
  }
}

std::string RunLedger::format(const LedgerEntry& e) {
  std::ostringstream s;
  s << "stage=" << e.stage << '\n' << "config_hash=" << e.config_hash << '\n';
  for (const auto& [n, h] : e.inputs) s << "input=" << n << ':' << h << '\n';
  for (const auto& [n, h] : e.outputs) s << "output=" << n << ':' << h << '\n';
  for (const auto& [l, v] : e.seconds) s << "seconds." << l << '=' << format_double(v) << '\n';
  s << "end\n";
  return s.str();
}

void RunLedger::append(const LedgerEntry& e) {
  std::string text = fs::exists(path_) ? read_file(path_) : std::string();
  text += format(e);
  atomic_write(path_, text);
  entries_.push_back(e);
}

std::optional<std::string> RunLedger::latest_hash(const std::string& artifact) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    for (const auto& [n, h] : it->outputs) {
      if (n == artifact) return h;
    }
  }
  return std::nullopt;
}

std::optional<double> RunLedger::latest_seconds(const std::string& stage, const std::string& label) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it) {
    if (it->stage != stage) continue;
    for (const auto& [l, v] : it->seconds) {
      if (l == label) return v;
    }
  }
  return std::nullopt;
}

const std::vector<std::string>& stage_names() {
  static const std::vector<std::string> names{"fom", "homogenize", "pod", "offline", "online", "vp-online", "compare"};
  return names;
}

std::vector<std::pair<std::string, std::string>> parse_report(const std::string& text) {
  std::vector<std::pair<std::string, std::string>> out;
  std::istringstream in(text);
  std::string line;
  auto trim = [](const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    return b == std::string::npos ? std::string() : s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
  };
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (line.empty() || line[0] == '#' || eq == std::string::npos) continue;
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

std::string tag(Index r) { return "R" + std::to_string(r); }

class Stage {
 public:
  Stage(const SimConfig& cfg, std::string name, std::string dir, std::ostream& log)
      : cfg_(cfg), dir_(std::move(dir)), log_(log), ledger_((fs::path(dir_) / "ledger.txt").string()) {
    cfg_.validate();
    entry_.stage = std::move(name);
    entry_.config_hash = physics_hash(cfg_);
    fs::create_directories(dir_);
  }

  const SimConfig& cfg() const { return cfg_; }
  std::ostream& log() { return log_; }
  const RunLedger& ledger() const { return ledger_; }

  const OperatorSet& ops() {
    if (!ops_) {
      grid_.emplace(make_grid(cfg_));
      ops_.emplace(assemble_operators(*grid_, cfg_.forcing));
      bc_ = make_boundary(cfg_, *grid_);
    }
    return *ops_;
  }

  const BoundaryModel& bc() {
    ops();
    return *bc_;
  }

  bool exists(const std::string& name) const { return fs::exists(path(name)); }

  Container load(const std::string& name) {
    const std::string bytes = read_file(path(name));
    const std::string h = content_hash(bytes);
    const auto recorded = ledger_.latest_hash(name);
    if (!recorded) throw ArtifactError(name + " has no ledger record; rerun the stage that produces it");
    if (*recorded != h) {
      throw ArtifactError(name + " is corrupt or was modified: hash " + h + " differs from ledger " + *recorded);
    }
    Container c = deserialize(bytes, path(name));
    const auto it = c.meta.find("config_hash");
    if (it == c.meta.end() || it->second != entry_.config_hash) {
      throw ArtifactError("config/artifact hash mismatch for " + name +
                          ": artifact was produced with a different configuration");
    }
    entry_.inputs.emplace_back(name, h);
    return c;
  }

  Container header() {
    const OperatorSet& o = ops();
    Container c;
    c.n_v = static_cast<std::uint64_t>(o.n_vel());
    c.n_p = static_cast<std::uint64_t>(o.n_p());
    c.steps = static_cast<std::uint64_t>(cfg_.steps);
    c.grid_hash = o.grid.hash();
    c.meta["config_hash"] = entry_.config_hash;
    c.meta["testcase"] = to_string(cfg_.testcase);
    return c;
  }

  void save(const std::string& name, const Container& c) { save_text(name, serialize(c)); }

  void save_text(const std::string& name, const std::string& bytes) {
    atomic_write(path(name), bytes);
    entry_.outputs.emplace_back(name, content_hash(bytes));
    log_ << "  wrote " << path(name) << '\n';
  }

  void time(const std::string& label, double seconds) { entry_.seconds.emplace_back(label, seconds); }

  void finish(double total) {
    time("total", total);
    atomic_write(path("config.txt"), to_text(cfg_));
    ledger_.append(entry_);
  }

 private:
  std::string path(const std::string& name) const { return (fs::path(dir_) / name).string(); }

  SimConfig cfg_;
  std::string dir_;
  std::ostream& log_;
  RunLedger ledger_;
  LedgerEntry entry_;
  std::optional<StaggeredGrid> grid_;
  std::optional<OperatorSet> ops_;
  BoundaryModelPtr bc_;
};

SnapshotSet snapshots_from(const Container& c) {
  SnapshotSet s;
  s.times = c.series("times");
  s.velocity = c.block("velocity");
  if (c.has("pressure")) s.pressure = c.block("pressure");
  s.grid_hash = c.grid_hash;
  return s;
}

std::string sv_csv(const Vector& s) {
  std::string out = "index,sigma,relative\n";
  for (Index i = 0; i < s.size(); ++i) {
    out += std::to_string(i + 1) + ',' + format_double(s[i]) + ',' + format_double(s[0] > 0 ? s[i] / s[0] : 0.0) + '\n';
  }
  return out;
}

constexpr double kEps = std::numeric_limits<double>::epsilon();

Index count_above(const Vector& s, double rel) {
  if (s.size() == 0 || !(s[0] > 0.0)) return 0;
  Index n = 0;
  for (Index i = 0; i < s.size(); ++i) n += s[i] > rel * s[0] ? 1 : 0;
  return n;
}

struct Reduced {
  DenseMatrix phi_hom;
  DenseMatrix f_inhom;
  DenseMatrix phi_bc;
  DenseMatrix values;
  DenseMatrix rates;
  Vector sv_hom;
  Vector sv_bc;
  double t0 = 0.0;
  double dt = 0.0;

  Index r_hom(Index r) const { return std::min<Index>(r, phi_hom.cols()); }
  Index r_bc(const SimConfig& cfg, Index r) const { return std::min<Index>(cfg.bc_rank(r), phi_bc.cols()); }

  LiftingOperator lifting(Index rb) const { return {f_inhom.leftCols(rb), phi_bc.leftCols(rb)}; }
  StageTable table(Index rb, Index steps) const {
    return StageTable(t0, dt, steps, values.topRows(rb), rates.topRows(rb));
  }
  BcReduction reduction(Index rb, Index steps) const {
    BcReduction red;
    red.phi = phi_bc.leftCols(rb);
    red.singular_values = sv_bc;
    red.requested_rank = rb;
    red.numerical_rank = phi_bc.cols();
    red.coefficients = table(rb, steps);
    return red;
  }
};

Reduced load_reduced(Stage& st) {
  const Container pod = st.load("pod.bin");
  const Container lift = st.load("lifting.bin");
  const Container bcc = st.load("bc.bin");
  Reduced r;
  r.phi_hom = pod.block("phi_hom");
  r.sv_hom = pod.vector("singular_values");
  r.f_inhom = lift.block("f_inhom");
  r.phi_bc = bcc.block("phi_bc");
  r.sv_bc = bcc.vector("singular_values");
  r.values = bcc.block("a_bc");
  r.rates = bcc.block("da_bc");
  r.t0 = std::stod(bcc.get("t0"));
  r.dt = std::stod(bcc.get("dt"));
  return r;
}

RomOperators rom_from(const Container& c, const Reduced& red, Index rh, Index rb) {
  RomOperators rom;
  rom.phi_hom = red.phi_hom.leftCols(rh);
  rom.f_inhom = red.f_inhom.leftCols(rb);
  rom.phi_bc = red.phi_bc.leftCols(rb);
  rom.model.constant = c.vector("constant");
  rom.model.a_a = c.block("a_a");
  rom.model.a_c = c.block("a_c");
  rom.model.q_aa = c.block("q_aa");
  rom.model.q_ac = c.block("q_ac");
  rom.model.q_cc = c.block("q_cc");
  rom.orthogonality = std::stod(c.get("orthogonality"));
  return rom;
}

void stage_fom(Stage& st) {
  const OperatorSet& ops = st.ops();
  st.log() << "  grid " << st.cfg().nx << "x" << st.cfg().ny << ", N_V=" << ops.n_vel() << ", N_p=" << ops.n_p()
           << ", N_bc=" << ops.n_bc() << ", poisson " << (ops.poisson->regularized() ? "regularized" : "direct") << '\n';
  const auto t = Clock::now();
  const SnapshotSet snaps = fom_integrate(ops, st.bc(), st.cfg().end_time(), st.cfg().steps);
  st.time("integrate", since(t));
  if (snaps.max_divergence_defect > 1.0) {
    st.log() << "  warning: divergence defect reached " << snaps.max_divergence_defect << " x tol_div\n";
  }
  Container c = st.header();
  c.meta["bc_kind"] = snaps.bc_kind;
  c.meta["dt"] = format_double(snaps.dt);
  c.meta["nu"] = format_double(snaps.nu);
  c.meta["max_divergence_defect"] = format_double(snaps.max_divergence_defect);
  c.add_series("times", snaps.times);
  c.add("velocity", snaps.velocity);
  c.add("pressure", snaps.pressure);
  st.save("fom.bin", c);
  const std::vector<double> k = kinetic_energy(snaps, ops.omega);
  std::string csv = "t,kinetic_energy\n";
  for (std::size_t j = 0; j < k.size(); ++j) csv += format_double(snaps.times[j]) + ',' + format_double(k[j]) + '\n';
  st.save_text("fom_energy.csv", csv);
}

void stage_homogenize(Stage& st) {
  const SnapshotSet snaps = snapshots_from(st.load("fom.bin"));
  const SnapshotSet hom = homogenize_snapshots(snaps, st.ops(), st.bc());
  Container c = st.header();
  c.meta["max_divergence_defect"] = format_double(hom.max_divergence_defect);
  c.add_series("times", hom.times);
  c.add("velocity", hom.velocity);
  st.save("hom.bin", c);
}

void stage_pod(Stage& st) {
  const OperatorSet& ops = st.ops();
  const SnapshotSet hom = snapshots_from(st.load("hom.bin"));
  const Index r_max = st.cfg().max_modes();
  auto t = Clock::now();
  const PodBasis basis = pod_divergence_free(ops, hom.velocity, r_max);
  st.time("pod", since(t));
  if (!basis.warning.empty()) st.log() << "  warning: " << basis.warning << '\n';

  Index rb_max = 0;
  for (Index r : st.cfg().modes) rb_max = std::max(rb_max, st.cfg().bc_rank(r));
  t = Clock::now();
  const BcReduction red = reduce_bc(st.bc(), 0.0, st.cfg().dt(), st.cfg().steps, rb_max);
  if (!red.warning.empty()) st.log() << "  warning: " << red.warning << '\n';
  const LiftingOperator lifting = build_lifting(ops, red);
  st.time("lifting", since(t));

  Container pc = st.header();
  pc.meta["numerical_rank"] = std::to_string(basis.numerical_rank);
  pc.meta["weight_hash"] = hex64(weight_hash(ops.omega));
  pc.add("phi_hom", basis.phi);
  pc.add_vector("singular_values", basis.singular_values);
  st.save("pod.bin", pc);

  Container bc = st.header();
  bc.meta["numerical_rank"] = std::to_string(red.numerical_rank);
  bc.meta["t0"] = format_double(0.0);
  bc.meta["dt"] = format_double(st.cfg().dt());
  bc.add("phi_bc", red.phi);
  bc.add_vector("singular_values", red.singular_values);
  bc.add("a_bc", red.coefficients.values());
  bc.add("da_bc", red.coefficients.rates());
  st.save("bc.bin", bc);

  Container lc = st.header();
  lc.add("f_inhom", lifting.f_inhom);
  st.save("lifting.bin", lc);

  st.save_text("singular_values_hom.csv", sv_csv(basis.singular_values));
  st.save_text("singular_values_bc.csv", sv_csv(red.singular_values));
  st.log() << "  homogeneous rank " << basis.numerical_rank << ", boundary rank " << red.numerical_rank << '\n';
}

void stage_offline(Stage& st) {
  const OperatorSet& ops = st.ops();
  const Reduced red = load_reduced(st);
  for (Index r : st.cfg().modes) {
    const Index rh = red.r_hom(r);
    const Index rb = red.r_bc(st.cfg(), r);
    const auto t = Clock::now();
    const RomOperators rom = build_rom_operators(ops, red.phi_hom.leftCols(rh), red.lifting(rb));
    st.time(tag(r), since(t));
    Container c = st.header();
    c.meta["r_hom"] = std::to_string(rh);
    c.meta["r_bc"] = std::to_string(rb);
    c.meta["orthogonality"] = format_double(rom.orthogonality);
    c.add_vector("constant", rom.model.constant);
    c.add("a_a", rom.model.a_a);
    c.add("a_c", rom.model.a_c);
    c.add("q_aa", DenseMatrix(rom.model.q_aa));
    c.add("q_ac", DenseMatrix(rom.model.q_ac));
    c.add("q_cc", DenseMatrix(rom.model.q_cc));
    st.save("rom_" + tag(r) + ".bin", c);
    st.log() << "  " << tag(r) << ": R_hom=" << rh << " R_bc=" << rb << '\n';
  }
}

void stage_online(Stage& st) {
  const OperatorSet& ops = st.ops();
  const Reduced red = load_reduced(st);
  const Container fom = st.load("fom.bin");
  const Vector v0 = fom.block("velocity").col(0);
  const Index steps = st.cfg().steps;
  for (Index r : st.cfg().modes) {
    const Index rh = red.r_hom(r);
    const Index rb = red.r_bc(st.cfg(), r);
    const RomOperators rom = rom_from(st.load("rom_" + tag(r) + ".bin"), red, rh, rb);
    const StageTable table = red.table(rb, steps);
    const Vector a0 = rom_initial_condition(rom, ops.omega, v0);
    const RomTrajectory traj = rom_integrate(rom, table, a0, st.cfg().end_time(), steps);
    st.time(tag(r), traj.seconds);
    const EnergySeries energy = energy_series(rom, ops.omega, traj);
    const MetricSeries mass = mass_violation(ops, rom_velocity(rom, traj), traj.times, st.bc());

    Container c = st.header();
    c.meta["r_hom"] = std::to_string(rh);
    c.meta["r_bc"] = std::to_string(rb);
    c.add_series("times", traj.times);
    c.add("a", traj.a);
    c.add("a_bc", traj.a_bc);
    c.add_series("kinetic_energy", energy.kinetic);
    c.add_series("cross_energy", energy.cross);
    c.add_series("mass_defect", mass.values);
    st.save("traj_" + tag(r) + ".bin", c);

    std::string csv = "t";
    for (Index i = 0; i < rh; ++i) csv += ",a_hom_" + std::to_string(i + 1);
    csv += ",K_r,mass_defect\n";
    for (Index j = 0; j <= steps; ++j) {
      csv += format_double(traj.times[static_cast<std::size_t>(j)]);
      for (Index i = 0; i < rh; ++i) csv += ',' + format_double(traj.a(i, j));
      csv += ',' + format_double(energy.kinetic[static_cast<std::size_t>(j)]) + ',' +
             format_double(mass.values[static_cast<std::size_t>(j)]) + '\n';
    }
    st.save_text("traj_" + tag(r) + ".csv", csv);
    st.log() << "  " << tag(r) << ": " << traj.seconds << " s online, max mass defect " << mass.max() << '\n';
  }
}

void stage_vp_online(Stage& st) {
  const OperatorSet& ops = st.ops();
  const Reduced red = load_reduced(st);
  const Container fom = st.load("fom.bin");
  const Vector v0 = fom.block("velocity").col(0);
  const Index steps = st.cfg().steps;
  for (Index r : st.cfg().modes) {
    const Index rh = red.r_hom(r);
    const Index rb = red.r_bc(st.cfg(), r);
    auto t = Clock::now();
    const VpRomOperators vp = build_vp_rom(ops, red.phi_hom.leftCols(rh), red.lifting(rb));
    st.time("offline." + tag(r), since(t));
    if (!vp.checks.satisfied) st.log() << "  warning: equivalence conditions not met for " << tag(r) << ": " << vp.checks.describe() << '\n';
    const StageTable table = red.table(rb, steps);
    const Vector a0 = vp_initial_condition(vp, ops.omega, v0, table.value_at(0));
    const VpTrajectory traj = vp_rom_integrate(vp, table, a0, st.cfg().end_time(), steps);
    st.time(tag(r), traj.seconds);

    Container c = st.header();
    c.meta["r_hom"] = std::to_string(rh);
    c.meta["r_bc"] = std::to_string(rb);
    c.meta["r_p"] = std::to_string(vp.r_p());
    c.meta["l_r_condition"] = format_double(vp.l_r_condition);
    c.meta["theorem_checks"] = vp.checks.describe();
    c.add_series("times", traj.times);
    c.add("a", traj.a);
    c.add("b", traj.b);
    c.add("a_bc", traj.a_bc);
    c.add("phi_inhom", vp.phi_inhom);
    st.save("vp_traj_" + tag(r) + ".bin", c);

    std::string csv = "t";
    for (Index i = 0; i < vp.r_v(); ++i) csv += ",a_" + std::to_string(i + 1);
    csv += ",projected_mass_defect\n";
    for (Index j = 0; j <= steps; ++j) {
      const double defect = vp.r_p() > 0 ? (vp.d_r * traj.a.col(j) - vp.mass_bc * traj.a_bc.col(j)).norm() : 0.0;
      csv += format_double(traj.times[static_cast<std::size_t>(j)]);
      for (Index i = 0; i < vp.r_v(); ++i) csv += ',' + format_double(traj.a(i, j));
      csv += ',' + format_double(defect) + '\n';
    }
    st.save_text("vp_traj_" + tag(r) + ".csv", csv);
    st.log() << "  " << tag(r) << ": R_V=" << vp.r_v() << " R_p=" << vp.r_p() << ", " << traj.seconds << " s online\n";
  }
}

void stage_compare(Stage& st) {
  const OperatorSet& ops = st.ops();
  const Reduced red = load_reduced(st);
  const SnapshotSet fom = snapshots_from(st.load("fom.bin"));
  const std::vector<double> k_fom = kinetic_energy(fom, ops.omega);
  const Index steps = st.cfg().steps;

  std::ostringstream rep;
  rep << "# romns summary report\n"
      << "# timings: wall clock; t_online covers the RK4 loop only, offline covers tensor assembly\n"
      << "testcase=" << to_string(st.cfg().testcase) << '\n'
      << "grid=" << st.cfg().nx << 'x' << st.cfg().ny << '\n'
      << "steps=" << steps << '\n'
      << "t_end=" << format_double(st.cfg().end_time()) << '\n'
      << "config_hash=" << physics_hash(st.cfg()) << '\n'
      << "sv.hom.count_above_eps=" << count_above(red.sv_hom, kEps) << '\n'
      << "sv.hom.count_above_1e-10=" << count_above(red.sv_hom, kRankTolerance) << '\n'
      << "sv.bc.count_above_eps=" << count_above(red.sv_bc, kEps) << '\n'
      << "sv.bc.count_above_1e-10=" << count_above(red.sv_bc, kRankTolerance) << '\n'
      << "sv.bc.count_above_1e-4=" << count_above(red.sv_bc, 1e-4) << '\n';

  const double t_fom = st.ledger().latest_seconds("fom", "integrate").value_or(0.0);
  rep << "fom.seconds=" << format_double(t_fom) << '\n';
  std::vector<TimingRow> timing;

  for (Index r : st.cfg().modes) {
    const Index rh = red.r_hom(r);
    const Index rb = red.r_bc(st.cfg(), r);
    const Container tc = st.load("traj_" + tag(r) + ".bin");
    RomOperators rom;
    rom.phi_hom = red.phi_hom.leftCols(rh);
    rom.f_inhom = red.f_inhom.leftCols(rb);
    rom.phi_bc = red.phi_bc.leftCols(rb);
    RomTrajectory traj;
    traj.times = tc.series("times");
    traj.a = tc.block("a");
    traj.a_bc = tc.block("a_bc");
    const VelocityAt vo = rom_velocity(rom, traj);

    std::vector<MetricSeries> series;
    series.push_back(velocity_error(fom, vo, ops.omega));
    MetricSeries mass;
    mass.name = "mass_violation";
    mass.times = traj.times;
    mass.values = tc.series("mass_defect");
    series.push_back(mass);
    series.push_back(kinetic_energy_error(fom.times, k_fom, tc.series("kinetic_energy")));
    const std::vector<double> cross = tc.series("cross_energy");
    const std::vector<double> k_rom = tc.series("kinetic_energy");
    double cross_rel = 0.0;
    for (std::size_t j = 0; j < cross.size(); ++j) {
      if (k_rom[j] > 0.0) cross_rel = std::max(cross_rel, std::abs(cross[j]) / k_rom[j]);
    }

    const std::string p = tag(r) + '.';
    if (st.exists("vp_traj_" + tag(r) + ".bin")) {
      const Container vc = st.load("vp_traj_" + tag(r) + ".bin");
      DenseMatrix phi(ops.n_vel(), rh + vc.block("phi_inhom").cols());
      phi << rom.phi_hom, vc.block("phi_inhom");
      const DenseMatrix a_vp = vc.block("a");
      const VelocityAt vpv = [&](Index j) -> Vector { return phi * a_vp.col(j); };
      MetricSeries eq = equivalence_error(vo, vpv, traj.times, ops.omega);
      rep << p << "equivalence_error.max=" << format_double(eq.max()) << '\n'
          << p << "equivalence_error.mean=" << format_double(eq.mean()) << '\n';
      series.push_back(std::move(eq));
    }
    st.save_text("metrics_" + tag(r) + ".csv", metrics_csv(series));
    for (const auto& s : series) st.save_text(s.name + "_" + tag(r) + ".csv", metric_csv(s));

    rep << p << "r_hom=" << rh << '\n' << p << "r_bc=" << rb << '\n';
    for (const auto& s : series) {
      if (s.name == "equivalence_error") continue;
      rep << p << s.name << ".max=" << format_double(s.max()) << '\n'
          << p << s.name << ".mean=" << format_double(s.mean()) << '\n';
    }
    rep << p << "cross_energy.max_relative=" << format_double(cross_rel) << '\n';

    TimingRow row;
    row.r = r;
    row.t_fom = t_fom;
    row.t_offline = st.ledger().latest_seconds("offline", tag(r)).value_or(0.0);
    row.t_online = st.ledger().latest_seconds("online", tag(r)).value_or(0.0);
    timing.push_back(row);
    rep << p << "offline.seconds=" << format_double(row.t_offline) << '\n'
        << p << "online.seconds=" << format_double(row.t_online) << '\n'
        << p << "speedup=" << format_double(row.speedup()) << '\n';
  }
  st.save_text("timing.csv", timing_report(timing));
  st.save_text("report.txt", rep.str());
}

}  // namespace

void run_stage(const SimConfig& config, const std::string& stage, const std::string& stage_dir,
               std::ostream& log) {
  Stage st(config, stage, stage_dir, log);
  log << "[" << stage << "] " << to_string(config.testcase) << " in " << stage_dir << '\n';
  const auto t = Clock::now();
  if (stage == "fom") stage_fom(st);
  else if (stage == "homogenize") stage_homogenize(st);
  else if (stage == "pod") stage_pod(st);
  else if (stage == "offline") stage_offline(st);
  else if (stage == "online") stage_online(st);
  else if (stage == "vp-online") stage_vp_online(st);
  else if (stage == "compare") stage_compare(st);
  else throw UsageError("unknown stage '" + stage + "'");
  const double total = since(t);
  st.finish(total);
  log << "[" << stage << "] done in " << total << " s\n";
}

void run_all(const SimConfig& config, const std::string& stage_dir, std::ostream& log) {
  for (const auto& s : stage_names()) {
    try {
      run_stage(config, s, stage_dir, log);
    } catch (const UsageError&) {
      throw;
    } catch (const NumericalFailure& e) {
      throw NumericalFailure("stage " + s + ": " + e.what(), e.step());
    } catch (const ArtifactError& e) {
      throw ArtifactError("stage " + s + ": " + e.what());
    } catch (const Error& e) {
      throw Error("stage " + s + ": " + e.what());
    }
  }
}

}  // namespace romns
