#include <optional>
#include <string>
#include <vector>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kghdg/cases.hpp"
#include "kghdg/convergence.hpp"
#include "kghdg/error.hpp"
#include "kghdg/mesh.hpp"

namespace py = pybind11;
using namespace kghdg;

namespace {

py::object opt(const std::optional<double>& v) { return v ? py::cast(*v) : py::none(); }

py::dict row_dict(const EOCRow& r) {
  py::dict d;
  d["k"] = r.k;
  d["m"] = r.m;
  d["err_u"] = r.err_u;
  d["eoc_u"] = opt(r.eoc_u);
  d["err_q"] = r.err_q;
  d["eoc_q"] = opt(r.eoc_q);
  d["err_ustar"] = r.err_ustar;
  d["eoc_ustar"] = opt(r.eoc_ustar);
  return d;
}

py::dict single(int example, int k, int m, const std::string& scheme, double tau, std::optional<double> dt,
                std::optional<double> final_time, double newton_tol) {
  RunSpec spec;
  spec.example = example;
  spec.k = k;
  spec.m = m;
  spec.scheme = parse_scheme(scheme);
  spec.tau = tau;
  spec.dt = dt;
  spec.final_time = final_time;
  spec.newton_tol = newton_tol;
  SingleResult r;
  {
    py::gil_scoped_release release;
    r = run_single(spec);
  }
  py::dict d;
  d["dt"] = r.dt;
  d["steps"] = r.steps;
  d["has_exact"] = r.has_exact;
  d["err_u"] = r.errors.u;
  d["err_q"] = r.errors.q;
  d["err_ustar"] = r.errors.ustar;
  d["newton_iterations"] = r.newton_iterations;
  d["factorizations"] = r.run.factorizations;
  d["step_seconds"] = r.run.step_seconds;
  d["energy"] = r.run.energy;
  return d;
}

py::list convergence(int example, std::vector<int> degrees, int m_first, int m_last, const std::string& scheme,
                     double tau, std::optional<double> dt, std::optional<double> final_time, double newton_tol,
                     std::size_t threads) {
  ConvergenceSpec spec;
  spec.example = example;
  spec.degrees = std::move(degrees);
  spec.m_first = m_first;
  spec.m_last = m_last;
  spec.scheme = parse_scheme(scheme);
  spec.tau = tau;
  spec.dt = dt;
  spec.final_time = final_time;
  spec.newton_tol = newton_tol;
  spec.threads = threads;
  EOCTable t;
  {
    py::gil_scoped_release release;
    t = run_convergence(spec);
  }
  py::list out;
  for (const auto& r : t.rows) out.append(row_dict(r));
  return out;
}

py::list energy(int example, int k, int m_first, int m_last, double tau, double dt, double final_time,
                double newton_tol, std::size_t threads) {
  EnergySpec spec;
  spec.example = example;
  spec.k = k;
  spec.m_first = m_first;
  spec.m_last = m_last;
  spec.tau = tau;
  spec.dt = dt;
  spec.final_time = final_time;
  spec.newton_tol = newton_tol;
  spec.threads = threads;
  EnergyTable t;
  {
    py::gil_scoped_release release;
    t = run_energy(spec);
  }
  py::list out;
  for (const auto& r : t.rows) {
    py::dict d;
    d["m"] = r.m;
    d["n"] = r.n;
    d["drift"] = r.drift;
    d["energy"] = r.energy;
    out.append(d);
  }
  return out;
}

py::dict mesh(int m) {
  const Mesh msh = build_structured(m);
  py::dict d;
  d["level"] = msh.refinement_level();
  d["vertices"] = msh.num_vertices();
  d["elements"] = msh.num_elements();
  d["faces"] = msh.num_faces();
  d["boundary_faces"] = msh.num_boundary_faces();
  d["h_max"] = msh.h_max();
  return d;
}

py::dict case_summary(int id) {
  const ManufacturedCase c = builtin_case(id);
  py::dict d;
  d["id"] = c.id;
  d["name"] = c.name;
  d["final_time"] = c.final_time;
  d["has_exact"] = c.has_exact();
  d["pde_residual"] = c.has_exact() ? max_pde_residual(c) : 0.0;
  return d;
}

} // namespace

PYBIND11_MODULE(_kghdg, mod) {
  mod.doc() = "HDG solver for the nonlinear Klein-Gordon equation";

  auto base = py::register_exception<Error>(mod, "SolverError", PyExc_RuntimeError);
  py::register_exception<ConfigError>(mod, "ConfigError", base.ptr());

  mod.def("run_single", &single, py::arg("example") = 1, py::arg("k") = 1, py::arg("m") = 2,
          py::arg("scheme") = "conservative", py::arg("tau") = 1.0, py::arg("dt") = py::none(),
          py::arg("final_time") = py::none(), py::arg("newton_tol") = 1e-12,
          "Run one builtin example; returns errors, step count, Newton work and the energy series.");
  mod.def("run_convergence", &convergence, py::arg("example") = 1, py::arg("degrees") = std::vector<int>{1},
          py::arg("m_first") = 1, py::arg("m_last") = 4, py::arg("scheme") = "conservative", py::arg("tau") = 1.0,
          py::arg("dt") = py::none(), py::arg("final_time") = py::none(), py::arg("newton_tol") = 1e-12,
          py::arg("threads") = 0, "Refinement study; one dict per (k, m) with errors and EOCs.");
  mod.def("run_energy", &energy, py::arg("example") = 4, py::arg("k") = 1, py::arg("m_first") = 1,
          py::arg("m_last") = 4, py::arg("tau") = 1.0, py::arg("dt") = 0.1, py::arg("final_time") = 1.0,
          py::arg("newton_tol") = 1e-12, py::arg("threads") = 0, "Discrete energy drift rows (m, n, drift, energy).");
  mod.def("default_dt", [](const std::string& scheme, int k, int m) { return default_dt(parse_scheme(scheme), k, m); },
          py::arg("scheme"), py::arg("k"), py::arg("m"));
  mod.def("mesh_info", &mesh, py::arg("m"), "Counts and mesh size of the level-m structured mesh.");
  mod.def("case_info", &case_summary, py::arg("example"));
}
