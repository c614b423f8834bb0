#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "nvmagnon/errors.hpp"
#include "nvmagnon/measures.hpp"
#include "nvmagnon/scenario.hpp"

namespace py = pybind11;
using namespace nvmagnon;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two NV qubits in a displaced thermal magnon bath";
  m.attr("__version__") = version_string;

  static py::exception<ValidationError> validation(m, "ValidationError", PyExc_ValueError);
  static py::exception<PhysicsError> physics(m, "PhysicsError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      py::set_error(validation, (e.field() + ": " + e.what()).c_str());
    } catch (const PhysicsError& e) {
      py::set_error(physics, e.what());
    }
  });

  py::enum_<Frame>(m, "Frame").value("rotating", Frame::rotating).value("lab", Frame::lab);

  py::class_<MasterEqParams>(m, "MasterEqParams")
      .def(py::init<>())
      .def_readwrite("kappa", &MasterEqParams::kappa)
      .def_readwrite("nbar0", &MasterEqParams::nbar0)
      .def_readwrite("epsilon", &MasterEqParams::epsilon)
      .def_readwrite("eta0", &MasterEqParams::eta0)
      .def_readwrite("omega", &MasterEqParams::omega)
      .def_readwrite("kappa_nv", &MasterEqParams::kappa_nv)
      .def_readwrite("kappa_deph", &MasterEqParams::kappa_deph)
      .def_readwrite("frame", &MasterEqParams::frame);

  m.def(
      "liouvillian", [](const MasterEqParams& p) { return Matrix16c(build_liouvillian(p).matrix); },
      "16x16 generator acting on the column-stacked density matrix.");

  m.def(
      "named_state", [](const std::string& name) { return Matrix4c(TwoQubitState::named(name).matrix()); },
      "Density matrix of a named state (plus-minus, dfs1, dfs2, bell-plus, mixed, ground).");

  m.def(
      "concurrence", [](const Matrix4c& rho) { return concurrence(rho); }, py::arg("rho"));
  m.def(
      "l1_coherence", [](const Matrix4c& rho) { return l1_coherence(rho); }, py::arg("rho"));
  m.def(
      "dfs_fidelities", [](const Matrix4c& rho) { return dfs_fidelities(rho); }, py::arg("rho"));

  m.def(
      "evolve",
      [](const MasterEqParams& p, const Matrix4c& rho0, const std::vector<double>& times) {
        const auto traj = evolve(TwoQubitState(rho0), build_liouvillian(p), times);
        std::vector<Matrix4c> out;
        out.reserve(traj.states.size());
        for (const auto& s : traj.states) out.push_back(s.matrix());
        return out;
      },
      py::arg("params"), py::arg("rho0"), py::arg("times"), "Density matrices at the requested times.");

  m.def(
      "steady_state",
      [](const MasterEqParams& p, std::optional<Matrix4c> rho0) {
        std::optional<TwoQubitState> s;
        if (rho0) s = TwoQubitState(*rho0);
        const auto ss = steady_state(build_liouvillian(p), s);
        return py::make_tuple(Matrix4c(ss.state.matrix()), ss.kernel_dimension);
      },
      py::arg("params"), py::arg("rho0") = py::none(), "(rho, kernel dimension) of the fixed point.");

  m.def(
      "solve_resonance",
      [](const std::string& config_json) {
        const auto cfg = parse_config(json::parse(config_json));
        return solve_resonance(cfg.nv, cfg.material, cfg.geometry, cfg.nv.positions[0]).bias;
      },
      py::arg("config_json") = "{}", "Bias field (T) that puts qubit 1 on the band bottom.");

  m.def("preset_names", &preset_names);
  m.def(
      "preset", [](const std::string& name) {
        const auto p = find_preset(name);
        if (!p) throw ValidationError("preset", "unknown preset '" + name + "'");
        return p->dump();
      },
      py::arg("name"), "Preset configuration as a JSON string.");

  m.def(
      "run_scenario",
      [](const std::string& config_json, const std::string& scenario, const std::string& out_dir, unsigned workers,
         bool markov) {
        json doc;
        try {
          doc = json::parse(config_json);
        } catch (const json::parse_error& e) {
          throw ValidationError("config", std::string("malformed JSON: ") + e.what());
        }
        RunOptions opts;
        opts.out_dir = out_dir;
        opts.workers = workers;
        opts.markov = markov;
        py::gil_scoped_release release;
        return run_scenario(doc, scenario, opts).dump();
      },
      py::arg("config_json"), py::arg("scenario") = "", py::arg("out_dir") = "", py::arg("workers") = 0,
      py::arg("markov") = true, "Runs a scenario and returns the manifest as a JSON string.");
}
