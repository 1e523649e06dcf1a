#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "wqed/bic.hpp"
#include "wqed/config.hpp"
#include "wqed/dynamics.hpp"
#include "wqed/error.hpp"
#include "wqed/experiments.hpp"
#include "wqed/field.hpp"
#include "wqed/mode_oracle.hpp"

namespace py = pybind11;
using namespace wqed;

namespace {

template <typename T>
py::array_t<T> to_array(const std::vector<T>& v) {
  return py::array_t<T>(static_cast<py::ssize_t>(v.size()), v.data());
}

py::array_t<cplx> component(const Trajectory& tr, std::size_t c) {
  py::array_t<cplx> out(static_cast<py::ssize_t>(tr.size()));
  auto w = out.mutable_unchecked<1>();
  for (std::size_t i = 0; i < tr.size(); ++i) w(static_cast<py::ssize_t>(i)) = tr.value(i)[c];
  return out;
}

template <typename T>
py::array_t<T> grid_array(const std::vector<T>& v, std::size_t nt, std::size_t nx) {
  py::array_t<T> out({static_cast<py::ssize_t>(nt), static_cast<py::ssize_t>(nx)});
  std::copy(v.begin(), v.end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Driven Lambda emitter in front of a mirror: delay equations, bound states, fields";

  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  py::enum_<Frame>(m, "Frame")
      .value("bare", Frame::bare)
      .value("rotated", Frame::rotated)
      .value("dressed", Frame::dressed);

  py::class_<SystemParams>(m, "SystemParams")
      .def(py::init([](double gamma, double omega_rabi, double omega_e, double delta,
                       double distance, double velocity) {
             SystemParams p{gamma, omega_rabi, omega_e, delta, distance, velocity};
             p.validate();
             return p;
           }),
           py::arg("gamma") = 1.0, py::arg("omega_rabi") = 0.0, py::arg("omega_e") = 100.0,
           py::arg("delta") = 0.0, py::arg("distance") = 0.0, py::arg("velocity") = 1.0)
      .def_readwrite("gamma", &SystemParams::gamma)
      .def_readwrite("omega_rabi", &SystemParams::omega_rabi)
      .def_readwrite("omega_e", &SystemParams::omega_e)
      .def_readwrite("delta", &SystemParams::delta)
      .def_readwrite("distance", &SystemParams::distance)
      .def_readwrite("velocity", &SystemParams::velocity)
      .def_property_readonly("omega_s", &SystemParams::omega_s)
      .def_property_readonly("tau", &SystemParams::tau)
      .def_property_readonly("coherence_length", &SystemParams::coherence_length)
      .def("validate", &SystemParams::validate)
      .def("__repr__", [](const SystemParams& p) {
        return "SystemParams(gamma=" + format_double(p.gamma) +
               ", omega_rabi=" + format_double(p.omega_rabi) +
               ", omega_e=" + format_double(p.omega_e) + ", delta=" + format_double(p.delta) +
               ", distance=" + format_double(p.distance) +
               ", velocity=" + format_double(p.velocity) + ")";
      });

  py::class_<DressedBasis>(m, "DressedBasis")
      .def_readonly("omega_plus", &DressedBasis::omega_plus)
      .def_readonly("omega_minus", &DressedBasis::omega_minus)
      .def_readonly("omega_bar", &DressedBasis::omega_bar)
      .def_readonly("delta_big", &DressedBasis::delta_big)
      .def_readonly("sin_theta", &DressedBasis::sin_theta)
      .def_readonly("cos_theta", &DressedBasis::cos_theta);
  m.def("dressed_basis", &dressed_basis, py::arg("params"));

  py::class_<AmplitudePair>(m, "AmplitudePair")
      .def(py::init([](cplx upper, cplx lower, Frame frame) {
             return AmplitudePair{upper, lower, frame};
           }),
           py::arg("upper") = cplx{1.0, 0.0}, py::arg("lower") = cplx{0.0, 0.0},
           py::arg("frame") = Frame::bare)
      .def_readwrite("upper", &AmplitudePair::upper)
      .def_readwrite("lower", &AmplitudePair::lower)
      .def_readwrite("frame", &AmplitudePair::frame)
      .def("population", &AmplitudePair::population);
  m.def("frame_transform", &frame_transform, py::arg("amplitudes"), py::arg("t"),
        py::arg("params"), py::arg("target"));

  py::class_<EmissionRun>(m, "EmissionRun")
      .def_readonly("params", &EmissionRun::params)
      .def_readonly("frame", &EmissionRun::frame)
      .def_property_readonly("t", [](const EmissionRun& r) { return to_array(r.times()); })
      .def_property_readonly("pe", [](const EmissionRun& r) { return to_array(r.pe); })
      .def_property_readonly("ps", [](const EmissionRun& r) { return to_array(r.ps); })
      .def_property_readonly("upper", [](const EmissionRun& r) { return component(r.trajectory, 0); })
      .def_property_readonly("lower", [](const EmissionRun& r) { return component(r.trajectory, 1); })
      .def_property_readonly("step", [](const EmissionRun& r) { return r.trajectory.step(); })
      .def("amplitudes_at", &EmissionRun::amplitudes_at, py::arg("t"),
           py::arg("target") = Frame::bare)
      .def("excited_bare", &EmissionRun::excited_bare, py::arg("t"));

  m.def("simulate_emission",
        [](const SystemParams& p, const AmplitudePair& init, double t_end,
           std::optional<double> h, Frame frame) {
          py::gil_scoped_release release;
          return simulate_emission(p, init, t_end, h, frame);
        },
        py::arg("params"), py::arg("initial") = AmplitudePair{}, py::arg("t_end") = 10.0,
        py::arg("step") = py::none(), py::arg("frame") = Frame::rotated);
  m.def("default_step", &default_step, py::arg("params"));

  py::enum_<AnalyticVariant>(m, "AnalyticVariant")
      .value("infinite_waveguide", AnalyticVariant::infinite_waveguide)
      .value("zero_delay_rabi", AnalyticVariant::zero_delay_rabi);
  m.def("analytic_reference", &analytic_reference, py::arg("params"), py::arg("initial"),
        py::arg("t"), py::arg("variant"));

  py::class_<BicSolution>(m, "BicSolution")
      .def_readonly("omega_plus", &BicSolution::omega_plus)
      .def_readonly("omega_minus", &BicSolution::omega_minus)
      .def_readonly("phase_plus", &BicSolution::phase_plus)
      .def_readonly("phase_minus", &BicSolution::phase_minus)
      .def_readonly("has_plus", &BicSolution::has_plus)
      .def_readonly("has_minus", &BicSolution::has_minus)
      .def_readonly("n_plus", &BicSolution::n_plus)
      .def_readonly("n_minus", &BicSolution::n_minus)
      .def_readonly("residue_plus", &BicSolution::residue_plus)
      .def_readonly("residue_minus", &BicSolution::residue_minus);
  m.attr("DESIGN_PHASE_TOLERANCE") = kDesignPhaseTolerance;
  m.attr("DETECTION_PHASE_TOLERANCE") = kDetectionPhaseTolerance;
  m.def("characteristic_function", &characteristic_function, py::arg("params"), py::arg("s"));
  m.def("bic_frequencies", &bic_frequencies, py::arg("params"),
        py::arg("tol_phase") = kDesignPhaseTolerance, py::arg("initial") = AmplitudePair{});
  m.def("design_bic_geometry", &design_bic_geometry, py::arg("gamma"), py::arg("omega_rabi"),
        py::arg("delta"), py::arg("m"), py::arg("k"), py::arg("velocity") = 1.0);
  m.def("longtime_amplitude",
        py::overload_cast<const BicSolution&, double>(&longtime_amplitude),
        py::arg("solution"), py::arg("t"));

  m.def("field_profile", &field_profile, py::arg("run"), py::arg("x"), py::arg("t"));
  m.def("intensity_map",
        [](const EmissionRun& run, double x_max, std::size_t nx, std::size_t nt) {
          FieldGrid g;
          {
            py::gil_scoped_release release;
            g = intensity_map(run, x_max, nx, nt);
          }
          return py::make_tuple(to_array(g.x), to_array(g.t),
                                grid_array(g.intensity, g.nt(), g.nx()),
                                grid_array(g.psi, g.nt(), g.nx()));
        },
        py::arg("run"), py::arg("x_max"), py::arg("nx"), py::arg("nt"),
        "Returns (x, t, intensity[t, x], psi[t, x]).");
  m.def("bic_field_profile",
        [](const BicSolution& sol, const SystemParams& p, double x, double t) {
          const BicField f = bic_field_profile(sol, p, x, t);
          return py::make_tuple(f.plus, f.minus, f.total);
        },
        py::arg("solution"), py::arg("params"), py::arg("x"), py::arg("t"));
  m.def("photon_norm", &photon_norm, py::arg("run"), py::arg("t"), py::arg("x_max"),
        py::arg("nx"));
  m.def("default_spatial_step", &default_spatial_step, py::arg("params"));

  py::class_<ModeGrid>(m, "ModeGrid")
      .def_property_readonly("k", [](const ModeGrid& g) { return to_array(g.k); })
      .def_property_readonly("coupling", [](const ModeGrid& g) { return to_array(g.coupling); })
      .def_readonly("dk", &ModeGrid::dk)
      .def("__len__", &ModeGrid::size)
      .def("recurrence_time", &ModeGrid::recurrence_time);
  m.def("build_mode_grid", &build_mode_grid, py::arg("params"), py::arg("bandwidth"),
        py::arg("n_modes"), py::arg("t_end"));
  py::class_<ModeRun>(m, "ModeRun")
      .def_property_readonly("t", [](const ModeRun& r) { return to_array(r.times); })
      .def_property_readonly("c_e", [](const ModeRun& r) { return to_array(r.c_e); })
      .def_property_readonly("c_s", [](const ModeRun& r) { return to_array(r.c_s); })
      .def_property_readonly("norm", [](const ModeRun& r) { return to_array(r.norm); })
      .def_readonly("max_norm_drift", &ModeRun::max_norm_drift);
  m.def("integrate_modes",
        [](const SystemParams& p, const ModeGrid& g, const AmplitudePair& init, double t_end,
           double h) {
          py::gil_scoped_release release;
          return integrate_modes(p, g, init, t_end, h);
        },
        py::arg("params"), py::arg("grid"), py::arg("initial") = AmplitudePair{},
        py::arg("t_end") = 10.0, py::arg("step") = 1e-3);

  m.def("presets", [] {
    std::vector<std::string> names;
    for (const auto& [name, raw] : presets()) names.push_back(name);
    return names;
  });
  m.def("run_experiment",
        [](const std::map<std::string, std::string>& config, const std::filesystem::path& out) {
          RawConfig raw(config.begin(), config.end());
          raw["out"] = out.string();
          const ExperimentResult res = run_experiment(load_config(std::nullopt, raw));
          std::map<std::string, std::string> summary(res.summary.begin(), res.summary.end());
          return py::make_tuple(res.files, summary);
        },
        py::arg("config"), py::arg("out"),
        "Runs a named experiment from key=value settings; returns (files, summary).");
}
