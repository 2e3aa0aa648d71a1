#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <sstream>

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

namespace py = pybind11;
using namespace romns;

namespace {

// Grid, operators and boundary model built once from a configuration.
struct Case {
  explicit Case(SimConfig c) : cfg(std::move(c)), grid(make_grid(cfg)), ops(assemble_operators(grid, cfg.forcing)) {
    cfg.validate();
    bc = make_boundary(cfg, grid);
  }

  SimConfig cfg;
  StaggeredGrid grid;
  OperatorSet ops;
  BoundaryModelPtr bc;
};

py::dict snapshots_dict(const SnapshotSet& s) {
  py::dict d;
  d["times"] = s.times;
  d["velocity"] = s.velocity;
  d["pressure"] = s.pressure;
  d["max_divergence_defect"] = s.max_divergence_defect;
  return d;
}

py::dict container_dict(const Container& c) {
  py::dict d;
  d["n_v"] = c.n_v;
  d["n_p"] = c.n_p;
  d["steps"] = c.steps;
  d["grid_hash"] = c.grid_hash;
  d["meta"] = c.meta;
  py::dict blocks;
  for (const auto& [name, m] : c.blocks) blocks[py::str(name)] = m;
  d["blocks"] = blocks;
  return d;
}

}  // namespace

PYBIND11_MODULE(_romns, m) {
  m.doc() = "POD-Galerkin reduced models for 2D incompressible flow on a staggered grid";

  const auto& base = py::register_exception<Error>(m, "RomnsError", PyExc_RuntimeError);
  py::register_exception<UsageError>(m, "UsageError", base.ptr());
  py::register_exception<ArtifactError>(m, "ArtifactError", base.ptr());

  py::class_<SimConfig>(m, "SimConfig")
      .def(py::init<>())
      .def_static("parse", [](const std::string& text) { return parse_config(text); })
      .def_static("load", &load_config)
      .def("to_text", [](const SimConfig& c) { return to_text(c); })
      .def("physics_hash", [](const SimConfig& c) { return physics_hash(c); })
      .def("validate", &SimConfig::validate)
      .def_property("testcase", [](const SimConfig& c) { return to_string(c.testcase); },
                    [](SimConfig& c, const std::string& s) { c.testcase = parse_testcase(s); })
      .def_readwrite("nx", &SimConfig::nx)
      .def_readwrite("ny", &SimConfig::ny)
      .def_readwrite("nu", &SimConfig::nu)
      .def_readwrite("steps", &SimConfig::steps)
      .def_readwrite("modes", &SimConfig::modes)
      .def_readwrite("r_bc", &SimConfig::r_bc)
      .def_readwrite("bc_table", &SimConfig::bc_table)
      .def_readwrite("output_dir", &SimConfig::output_dir)
      .def_property("t_end", &SimConfig::end_time, [](SimConfig& c, double t) { c.t_end = t; })
      .def_property_readonly("dt", &SimConfig::dt);

  py::class_<Case>(m, "Case")
      .def(py::init<SimConfig>())
      .def_readonly("config", &Case::cfg)
      .def_property_readonly("n_vel", [](const Case& c) { return c.ops.n_vel(); })
      .def_property_readonly("n_p", [](const Case& c) { return c.ops.n_p(); })
      .def_property_readonly("n_bc", [](const Case& c) { return c.ops.n_bc(); })
      .def_property_readonly("omega", [](const Case& c) { return c.ops.omega; })
      .def_property_readonly("divergence", [](const Case& c) { return c.ops.m; })
      .def_property_readonly("divergence_bc", [](const Case& c) { return c.ops.fm; })
      .def_property_readonly("gradient", [](const Case& c) { return c.ops.gradient(); })
      .def("trace", [](const Case& c, double t) { return c.bc->trace(t); })
      .def("convection_diffusion",
           [](const Case& c, const Vector& v, const Vector& y) { return eval_fcd(c.ops, v, y); })
      .def("lifting", [](const Case& c, const Vector& y) { return exact_lifting(c.ops, y); })
      .def("fom",
           [](const Case& c, bool store_pressure) {
             FomOptions opt;
             opt.store_pressure = store_pressure;
             SnapshotSet s;
             {
               py::gil_scoped_release release;
               s = fom_integrate(c.ops, *c.bc, c.cfg.end_time(), c.cfg.steps, opt);
             }
             return snapshots_dict(s);
           },
           py::arg("store_pressure") = true)
      .def("pod",
           [](const Case& c, const DenseMatrix& x, Index r) {
             const PodBasis b = pod_divergence_free(c.ops, x, r);
             return py::make_tuple(b.phi, b.singular_values);
           },
           py::arg("snapshots"), py::arg("r") = -1)
      .def("homogenize",
           [](const Case& c, const DenseMatrix& v) {
             SnapshotSet s;
             s.velocity = v;
             for (Index j = 0; j < v.cols(); ++j) s.times.push_back(static_cast<double>(j) * c.cfg.dt());
             return homogenize_snapshots(s, c.ops, *c.bc).velocity;
           })
      .def("rom",
           [](const Case& c, const DenseMatrix& phi_hom, Index r_bc, const Vector& v0) {
             const double dt = c.cfg.dt();
             const BcReduction red = reduce_bc(*c.bc, 0.0, dt, c.cfg.steps, r_bc);
             const LiftingOperator lifting = build_lifting(c.ops, red);
             const RomOperators rom = build_rom_operators(c.ops, phi_hom, lifting);
             const Vector a0 = rom_initial_condition(rom, c.ops.omega, v0);
             const RomTrajectory traj = rom_integrate(rom, red.coefficients, a0, c.cfg.end_time(), c.cfg.steps);
             const EnergySeries e = energy_series(rom, c.ops.omega, traj);
             const MetricSeries mass = mass_violation(c.ops, rom_velocity(rom, traj), traj.times, *c.bc);
             DenseMatrix vel(c.ops.n_vel(), traj.a.cols());
             for (Index j = 0; j < traj.a.cols(); ++j) vel.col(j) = rom.reconstruct(traj.a.col(j), traj.a_bc.col(j));
             py::dict d;
             d["times"] = traj.times;
             d["a"] = traj.a;
             d["a_bc"] = traj.a_bc;
             d["velocity"] = vel;
             d["kinetic_energy"] = e.kinetic;
             d["mass_defect"] = mass.values;
             d["seconds"] = traj.seconds;
             return d;
           },
           py::arg("phi_hom"), py::arg("r_bc"), py::arg("v0"))
      .def("velocity_error",
           [](const Case& c, const DenseMatrix& fom, const DenseMatrix& rom) {
             SnapshotSet s;
             s.velocity = fom;
             for (Index j = 0; j < fom.cols(); ++j) s.times.push_back(static_cast<double>(j) * c.cfg.dt());
             const VelocityAt at = [&rom](Index j) -> Vector { return rom.col(j); };
             return velocity_error(s, at, c.ops.omega).values;
           });

  m.def("run_stage",
        [](const SimConfig& cfg, const std::string& stage, const std::string& dir) {
          std::ostringstream log;
          run_stage(cfg, stage, dir, log);
          return log.str();
        },
        py::arg("config"), py::arg("stage"), py::arg("stage_dir"));
  m.def("run_all",
        [](const SimConfig& cfg, const std::string& dir) {
          std::ostringstream log;
          run_all(cfg, dir, log);
          return log.str();
        },
        py::arg("config"), py::arg("stage_dir"));
  m.def("stage_names", &stage_names);
  m.def("read_container", [](const std::string& path) { return container_dict(read_container(path)); });
  m.def("parse_report", &parse_report);
}
