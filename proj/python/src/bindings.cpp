#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qotto/algebra.hpp"
#include "qotto/config.hpp"
#include "qotto/cycle.hpp"
#include "qotto/errors.hpp"
#include "qotto/noise.hpp"
#include "qotto/optimize.hpp"
#include "qotto/runner.hpp"

namespace py = pybind11;
using namespace qotto;

PYBIND11_MODULE(_core, m) {
  m.doc() = "Two-spin quantum Otto engine";
  m.attr("__version__") = QOTTO_VERSION;

  py::register_exception<Error>(m, "QottoError", PyExc_RuntimeError);
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);

  m.def("operators", [] {
    const auto& b = operators();
    return std::vector<Matrix4c>(b.B.begin(), b.B.end());
  }, "The five algebra operators B1..B5 as 4x4 complex matrices.");
  m.def("hamiltonian", [](double omega, double j) { return hamiltonian(omega, j).matrix(); },
        py::arg("omega"), py::arg("J"));
  m.def("gibbs_b", &gibbs_b, py::arg("omega"), py::arg("J"), py::arg("T"));
  m.def("density_matrix", &density_matrix, py::arg("b"));
  m.def("energy_entropy", &energy_entropy, py::arg("b"), py::arg("omega"), py::arg("J"));
  m.def("von_neumann_entropy", py::overload_cast<const BVector&>(&von_neumann_entropy), py::arg("b"));

  py::class_<EngineParams>(m, "EngineParams")
      .def(py::init<>())
      .def_readwrite("J", &EngineParams::coupling)
      .def_readwrite("omega_a", &EngineParams::omega_a)
      .def_readwrite("omega_b", &EngineParams::omega_b)
      .def_readwrite("T_h", &EngineParams::t_hot)
      .def_readwrite("T_c", &EngineParams::t_cold)
      .def_readwrite("Gamma_h", &EngineParams::gamma_hot)
      .def_readwrite("Gamma_c", &EngineParams::gamma_cold)
      .def_readwrite("gamma_h", &EngineParams::dephasing_hot)
      .def_readwrite("gamma_c", &EngineParams::dephasing_cold)
      .def_readwrite("Lambda_ab", &EngineParams::lambda_ab)
      .def_readwrite("Lambda_ba", &EngineParams::lambda_ba)
      .def("validate", &EngineParams::validate);

  py::class_<Schedule>(m, "Schedule")
      .def(py::init<>())
      .def(py::init([](double h, double ba, double c, double ab) { return Schedule{h, ba, c, ab}; }),
           py::arg("tau_h"), py::arg("tau_ba"), py::arg("tau_c"), py::arg("tau_ab"))
      .def_readwrite("tau_h", &Schedule::tau_h)
      .def_readwrite("tau_ba", &Schedule::tau_ba)
      .def_readwrite("tau_c", &Schedule::tau_c)
      .def_readwrite("tau_ab", &Schedule::tau_ab)
      .def("total", &Schedule::total);

  py::class_<CycleSummary>(m, "CycleSummary")
      .def_readonly("W_net", &CycleSummary::w_net)
      .def_readonly("W_friction", &CycleSummary::w_friction)
      .def_readonly("W_field", &CycleSummary::w_field)
      .def_readonly("Q_h", &CycleSummary::q_h)
      .def_readonly("Q_c", &CycleSummary::q_c)
      .def_readonly("power", &CycleSummary::power)
      .def_readonly("entropy_production", &CycleSummary::entropy_production)
      .def_readonly("tau", &CycleSummary::tau);

  m.def("summarize_cycle",
        [](const EngineParams& p, const Schedule& s, int segments) {
          return summarize_cycle(p, s, {segments, OmegaLadder::midpoint});
        },
        py::arg("params"), py::arg("schedule"), py::arg("segments") = 512);
  m.def("cycle_power", [](const EngineParams& p, const Schedule& s) { return cycle_power(p, s); },
        py::arg("params"), py::arg("schedule"));

  m.def("run_cycle",
        [](const EngineParams& p, const Schedule& s, int resolution) {
          const CycleRecord rec = run_cycle(p, s, resolution);
          const auto n = static_cast<Eigen::Index>(rec.samples.size());
          Eigen::MatrixXd cols(n, 10);
          std::vector<std::string> branch;
          for (Eigen::Index i = 0; i < n; ++i) {
            const ThermoSample& x = rec.samples[i];
            cols.row(i) << x.t, x.omega, x.energy, x.energy_entropy, x.von_neumann_entropy, x.power_field,
                x.power_friction, x.heat_flow, x.b[0], x.b[1];
            branch.push_back(branch_name(rec.branch_of[i]));
          }
          py::dict out;
          const char* names[] = {"t", "omega", "E", "S_E", "S_vn", "P_field", "P_friction", "Qdot", "b1", "b2"};
          for (int k = 0; k < 10; ++k) out[names[k]] = Eigen::VectorXd(cols.col(k));
          out["branch"] = branch;
          out["summary"] = rec.summary;
          return out;
        },
        py::arg("params"), py::arg("schedule"), py::arg("resolution") = kDefaultResolution);

  m.def("monte_carlo_power",
        [](const EngineParams& p, const Schedule& s, double sigma_ab, double sigma_ba, int segments, int n_cycles,
           std::uint64_t seed, const std::string& kind) {
          NoiseConfig noise;
          noise.sigma_ab = sigma_ab;
          noise.sigma_ba = sigma_ba;
          noise.segments = segments;
          noise.n_cycles = n_cycles;
          noise.seed = seed;
          noise.kind = kind == "frequency" ? NoiseKind::frequency : NoiseKind::segment_time;
          const MonteCarloResult r = monte_carlo_cycle(p, s, noise);
          return py::make_tuple(r.power.mean, r.power.standard_error, r.reference.power);
        },
        py::arg("params"), py::arg("schedule"), py::arg("sigma_ab"), py::arg("sigma_ba"), py::arg("segments") = 200,
        py::arg("n_cycles") = 2000, py::arg("seed") = 20070327, py::arg("kind") = "segment_time",
        "Returns (mean power, standard error, deterministic reference power).");
  m.def("sigma_for_lambda", &sigma_for_lambda, py::arg("Lambda"), py::arg("tau"), py::arg("segments"));

  m.def("optimize_allocations",
        [](const EngineParams& p, double tau_total, int random_starts) {
          OptimizeOptions o;
          o.random_starts = random_starts;
          const OptimizeResult r = optimize_allocations(p, tau_total, o);
          return py::make_tuple(r.schedule, r.power);
        },
        py::arg("params"), py::arg("tau_total"), py::arg("random_starts") = 4);

  m.def("manifest",
        [](const std::string& text) { return manifest_json(parse_config(text)).dump(); },
        py::arg("config_text"), "Parse a config and return its manifest as a JSON string.");
  m.def("run", [](const std::string& path, const std::string& out) {
    RunConfig c = load_config(path);
    c.output_dir = out;
    return run(c).files;
  }, py::arg("config_path"), py::arg("output_dir"));
}
