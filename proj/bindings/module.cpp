// Python bindings for the stirapcd core library.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "stirapcd/errors.hpp"
#include "stirapcd/level_system.hpp"
#include "stirapcd/propagator.hpp"
#include "stirapcd/pulse.hpp"
#include "stirapcd/rwa3.hpp"
#include "stirapcd/scenarios.hpp"
#include "stirapcd/units.hpp"

#include <string>
#include <vector>

namespace py = pybind11;
using namespace stirapcd;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "STIRAP and counter-diabatic-field dynamics in multilevel molecular "
      "systems";

  // ---------------------------------------------------------------- errors
  const auto base_error =
      py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DataError>(m, "DataError", base_error.ptr());
  py::register_exception<IntegrationError>(m, "IntegrationError",
                                           base_error.ptr());

  // ----------------------------------------------------------------- units
  py::module_ units = m.def_submodule("units", "Unit conversions (a.u. core)");
  units.attr("hbar") = units::hbar;
  units.attr("cm1_to_hartree") = units::cm1_to_hartree;
  units.attr("cm1_per_hartree") = units::cm1_per_hartree;
  units.attr("ps_to_atu") = units::ps_to_atu;
  units.attr("ps_per_atu") = units::ps_per_atu;
  units.attr("intensity_factor") = units::intensity_factor;
  units.def("omega_au", &units::omega_au, py::arg("wavenumber_cm1"),
            "Angular frequency (rad/atu) of a wavenumber in cm^-1");
  units.def("intensity_w_cm2", &units::intensity_w_cm2,
            py::arg("amplitude_au"),
            "Cycle-averaged intensity (W/cm^2) of a peak field amplitude");

  // ---------------------------------------------------------- level system
  py::class_<SpectroState>(m, "SpectroState")
      .def(py::init<>())
      .def_readwrite("label", &SpectroState::label)
      .def_readwrite("energy_cm1", &SpectroState::energy_cm1)
      .def_readwrite("mode_tag", &SpectroState::mode_tag)
      .def("__repr__", [](const SpectroState& s) {
        return "SpectroState('" + s.label + "', " +
               std::to_string(s.energy_cm1) + " cm^-1)";
      });

  py::class_<LevelSystem>(m, "LevelSystem")
      .def_static("load", &LevelSystem::load, py::arg("levels_csv"),
                  py::arg("tdm_csv"),
                  "Load a manifold from levels/couplings CSV files")
      .def_static("parse", &LevelSystem::parse, py::arg("levels_csv"),
                  py::arg("tdm_csv"), "Parse a manifold from CSV text")
      .def("__len__", &LevelSystem::size)
      .def_property_readonly("size", &LevelSystem::size)
      .def_property_readonly("states", &LevelSystem::states)
      .def("state", &LevelSystem::state, py::arg("index"))
      .def("has_label", &LevelSystem::has_label, py::arg("label"))
      .def("index_of", &LevelSystem::index_of, py::arg("label"))
      .def("energy_cm1", &LevelSystem::energy_cm1, py::arg("label"))
      .def_property_readonly(
          "tdm", [](const LevelSystem& s) -> Eigen::MatrixXd { return s.tdm(); },
          "Transition-dipole matrix (a.u.), symmetric, zero diagonal")
      .def("mu", &LevelSystem::mu, py::arg("a"), py::arg("b"))
      .def("transition_energy_cm1", &LevelSystem::transition_energy_cm1,
           py::arg("a"), py::arg("b"), "Signed Bohr frequency E(b) - E(a)")
      .def("coupling_warnings", &LevelSystem::coupling_warnings,
           py::arg("threshold") = 0.5);

  m.def("builtin_dataset", &builtin_dataset,
        py::return_value_policy::reference, py::arg("name"),
        "Bundled dataset ('sccl2' or 'hcn')");
  m.def(
      "builtin_levels_csv",
      [](std::string_view name) { return std::string(builtin_levels_csv(name)); },
      py::arg("name"));
  m.def(
      "builtin_tdm_csv",
      [](std::string_view name) { return std::string(builtin_tdm_csv(name)); },
      py::arg("name"));

  // ---------------------------------------------------------------- pulses
  py::enum_<Waveform>(m, "Waveform")
      .value("cosine", Waveform::cosine)
      .value("sine", Waveform::sine);

  py::enum_<DriveMode>(m, "DriveMode")
      .value("stirap_plus_cdf", DriveMode::stirap_plus_cdf)
      .value("cdf_only", DriveMode::cdf_only);

  py::enum_<Picture>(m, "Picture")
      .value("interaction", Picture::interaction)
      .value("schrodinger", Picture::schrodinger);

  py::class_<GaussianPulse>(m, "GaussianPulse")
      .def(py::init<>())
      .def_readwrite("amplitude_au", &GaussianPulse::amplitude_au)
      .def_readwrite("center_ps", &GaussianPulse::center_ps)
      .def_readwrite("fwhm_ps", &GaussianPulse::fwhm_ps)
      .def_readwrite("carrier_cm1", &GaussianPulse::carrier_cm1)
      .def_readwrite("phase_rad", &GaussianPulse::phase_rad)
      .def_readwrite("waveform", &GaussianPulse::waveform)
      .def_property_readonly("delta_tau_ps", &GaussianPulse::delta_tau_ps)
      .def_property_readonly("delta_tau_au", &GaussianPulse::delta_tau_au)
      .def_property_readonly("center_au", &GaussianPulse::center_au)
      .def_property_readonly("carrier_au", &GaussianPulse::carrier_au)
      .def("envelope_au", &GaussianPulse::envelope_au, py::arg("t_au"))
      .def("field_au", &GaussianPulse::field_au, py::arg("t_au"));

  py::class_<RabiProfile>(m, "RabiProfile")
      .def(py::init<>())
      .def(py::init([](const GaussianPulse& pulse, double mu_au) {
             return RabiProfile{pulse, mu_au};
           }),
           py::arg("pulse"), py::arg("mu_au"))
      .def_readwrite("pulse", &RabiProfile::pulse)
      .def_readwrite("mu_au", &RabiProfile::mu_au)
      .def("__call__", &RabiProfile::operator(), py::arg("t_au"))
      .def("peak", &RabiProfile::peak);

  m.def("mixing_angle",
        py::overload_cast<const RabiProfile&, const RabiProfile&, double>(
            &mixing_angle),
        py::arg("pump"), py::arg("stokes"), py::arg("t_au"));
  m.def("mixing_angle_rate",
        py::overload_cast<const RabiProfile&, const RabiProfile&, double>(
            &mixing_angle_rate),
        py::arg("pump"), py::arg("stokes"), py::arg("t_au"));

  py::class_<StirapDrive>(m, "StirapDrive")
      .def(py::init<>())
      .def_readwrite("pump", &StirapDrive::pump)
      .def_readwrite("stokes", &StirapDrive::stokes)
      .def_readwrite("mu_pump", &StirapDrive::mu_pump)
      .def_readwrite("mu_stokes", &StirapDrive::mu_stokes)
      .def_readwrite("mu_bridge", &StirapDrive::mu_bridge)
      .def_readwrite("cdf_carrier_cm1", &StirapDrive::cdf_carrier_cm1)
      .def_readwrite("cdf_phase_rad", &StirapDrive::cdf_phase_rad)
      .def_readwrite("cdf_sign", &StirapDrive::cdf_sign)
      .def_readwrite("lambda_", &StirapDrive::lambda)
      .def_readwrite("eta", &StirapDrive::eta)
      .def_readwrite("mode", &StirapDrive::mode)
      .def("pump_rabi", &StirapDrive::pump_rabi)
      .def("stokes_rabi", &StirapDrive::stokes_rabi)
      .def("mixing_angle", &StirapDrive::mixing_angle, py::arg("t_au"))
      .def("mixing_angle_rate", &StirapDrive::mixing_angle_rate,
           py::arg("t_au"))
      .def("cdf_envelope_au", &StirapDrive::cdf_envelope_au, py::arg("t_au"))
      .def("cdf_field_au", &StirapDrive::cdf_field_au, py::arg("t_au"))
      .def("total_field_au", &StirapDrive::total_field_au, py::arg("t_au"))
      .def("pulse_area_theta", &StirapDrive::pulse_area_theta,
           py::arg("t0_au"), py::arg("t1_au"))
      .def("window_start_ps", &StirapDrive::window_start_ps,
           py::arg("pad") = 4.0)
      .def("window_end_ps", &StirapDrive::window_end_ps, py::arg("pad") = 4.0);

  m.def("make_drive", &make_drive, py::arg("system"), py::arg("initial"),
        py::arg("intermediate"), py::arg("target"),
        py::arg("pump_amplitude_au"), py::arg("stokes_amplitude_au"),
        py::arg("fwhm_ps"), py::arg("lambda_") = 0.0, py::arg("eta") = 1.0,
        py::arg("stokes_center_ps") = 0.0,
        "Resonant counter-intuitive drive for a three-state ladder");

  // ------------------------------------------------------------ propagator
  py::class_<PropagationConfig>(m, "PropagationConfig")
      .def(py::init<>())
      .def_readwrite("dt_au", &PropagationConfig::dt_au)
      .def_readwrite("auto_window", &PropagationConfig::auto_window)
      .def_readwrite("window_start_ps", &PropagationConfig::window_start_ps)
      .def_readwrite("window_end_ps", &PropagationConfig::window_end_ps)
      .def_readwrite("picture", &PropagationConfig::picture)
      .def_readwrite("subset", &PropagationConfig::subset)
      .def_readwrite("initial_state", &PropagationConfig::initial_state)
      .def_readwrite("sample_stride_ps", &PropagationConfig::sample_stride_ps)
      .def_readwrite("sample_stride_steps",
                     &PropagationConfig::sample_stride_steps)
      .def_readwrite("norm_tolerance", &PropagationConfig::norm_tolerance);

  py::class_<PropagationResult>(m, "PropagationResult")
      .def_readonly("labels", &PropagationResult::labels)
      .def_readonly("times_ps", &PropagationResult::times_ps)
      .def_readonly("populations", &PropagationResult::populations)
      .def_readonly("final_amplitudes", &PropagationResult::final_amplitudes)
      .def_readonly("norm_drift", &PropagationResult::norm_drift)
      .def_readonly("dt_au", &PropagationResult::dt_au)
      .def_readonly("steps", &PropagationResult::steps)
      .def_readonly("window_start_ps", &PropagationResult::window_start_ps)
      .def_readonly("window_end_ps", &PropagationResult::window_end_ps)
      .def("column", &PropagationResult::column, py::arg("label"))
      .def("final_population", &PropagationResult::final_population,
           py::arg("label"));

  m.def(
      "hamiltonian_interaction",
      [](const LevelSystem& sys, const std::vector<StirapDrive>& drives,
         double t_au) { return hamiltonian_interaction(sys, drives, t_au); },
      py::arg("system"), py::arg("drives"), py::arg("t_au"),
      "Interaction-picture Hamiltonian matrix (a.u.) at time t");

  m.def(
      "propagate",
      [](const LevelSystem& sys, const StirapDrive& drive,
         const PropagationConfig& cfg) { return propagate(sys, drive, cfg); },
      py::arg("system"), py::arg("drive"), py::arg("config"),
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "propagate",
      [](const LevelSystem& sys, const std::vector<StirapDrive>& drives,
         const PropagationConfig& cfg) { return propagate(sys, drives, cfg); },
      py::arg("system"), py::arg("drives"), py::arg("config"),
      py::call_guard<py::gil_scoped_release>());

  m.def(
      "default_dt_au",
      [](const LevelSystem& sys, const std::vector<StirapDrive>& drives,
         const PropagationConfig& cfg) {
        return default_dt_au(sys, drives, cfg);
      },
      py::arg("system"), py::arg("drives"),
      py::arg("config") = PropagationConfig{});

  py::class_<ConvergenceReport>(m, "ConvergenceReport")
      .def_readonly("dt_au", &ConvergenceReport::dt_au)
      .def_readonly("max_population_delta",
                    &ConvergenceReport::max_population_delta)
      .def_readonly("norm_drift", &ConvergenceReport::norm_drift)
      .def_readonly("norm_drift_halved", &ConvergenceReport::norm_drift_halved);

  m.def(
      "convergence_check",
      [](const LevelSystem& sys, const std::vector<StirapDrive>& drives,
         const PropagationConfig& cfg) {
        return convergence_check(sys, drives, cfg);
      },
      py::arg("system"), py::arg("drives"),
      py::arg("config") = PropagationConfig{},
      py::call_guard<py::gil_scoped_release>());

  // ------------------------------------------------------------------ rwa3
  py::class_<Rwa3System>(m, "Rwa3System")
      .def(py::init<>())
      .def_readwrite("pump", &Rwa3System::pump)
      .def_readwrite("stokes", &Rwa3System::stokes)
      .def_readwrite("include_cd", &Rwa3System::include_cd)
      .def("mixing_angle", &Rwa3System::mixing_angle, py::arg("t_au"))
      .def("mixing_angle_rate", &Rwa3System::mixing_angle_rate,
           py::arg("t_au"))
      .def("hamiltonian", &Rwa3System::hamiltonian, py::arg("t_au"))
      .def("dark_state", &Rwa3System::dark_state, py::arg("t_au"));

  m.def("rwa3_from_drive", &rwa3_from_drive, py::arg("drive"),
        py::arg("include_cd"));
  m.def("adiabaticity_metric",
        py::overload_cast<const Rwa3System&, double>(&adiabaticity_metric),
        py::arg("system"), py::arg("delta_t_au"));
  m.def("adiabaticity_metric",
        py::overload_cast<const StirapDrive&>(&adiabaticity_metric),
        py::arg("drive"));

  py::class_<Rwa3Result>(m, "Rwa3Result")
      .def_readonly("trajectory", &Rwa3Result::trajectory)
      .def_readonly("min_dark_overlap", &Rwa3Result::min_dark_overlap)
      .def_readonly("max_intermediate_population",
                    &Rwa3Result::max_intermediate_population);

  m.def("propagate_rwa3", &propagate_rwa3, py::arg("system"),
        py::arg("window_start_ps"), py::arg("window_end_ps"),
        py::arg("dt_au") = 0.0, py::arg("sample_stride_ps") = 0.25,
        py::call_guard<py::gil_scoped_release>());

  // ------------------------------------------------------------- scenarios
  py::class_<StageSpec>(m, "StageSpec")
      .def(py::init<>())
      .def_readwrite("initial", &StageSpec::initial)
      .def_readwrite("intermediate", &StageSpec::intermediate)
      .def_readwrite("target", &StageSpec::target)
      .def_readwrite("pump_amplitude_au", &StageSpec::pump_amplitude_au)
      .def_readwrite("stokes_amplitude_au", &StageSpec::stokes_amplitude_au)
      .def_readwrite("fwhm_ps", &StageSpec::fwhm_ps)
      .def_readwrite("stokes_center_ps", &StageSpec::stokes_center_ps)
      .def_readwrite("pump_center_ps", &StageSpec::pump_center_ps)
      .def_readwrite("lambda_", &StageSpec::lambda)
      .def_readwrite("eta", &StageSpec::eta);

  py::class_<Scenario>(m, "Scenario")
      .def(py::init<>())
      .def_readwrite("name", &Scenario::name)
      .def_readwrite("dataset", &Scenario::dataset)
      .def_property(
          "system",
          py::cpp_function([](const Scenario& sc) { return sc.system; },
                           py::return_value_policy::reference),
          // keep_alive pins the python-side LevelSystem to the scenario.
          py::cpp_function(
              [](Scenario& sc, const LevelSystem& sys) { sc.system = &sys; },
              py::keep_alive<1, 2>()))
      .def_readwrite("stages", &Scenario::stages)
      .def_readwrite("subset", &Scenario::subset)
      .def_readwrite("mode", &Scenario::mode)
      .def_readwrite("pump_phase_rad", &Scenario::pump_phase_rad)
      .def_readwrite("stokes_phase_rad", &Scenario::stokes_phase_rad)
      .def_readwrite("cdf_phase_rad", &Scenario::cdf_phase_rad)
      .def("stage", &Scenario::stage)
      .def("initial_label", &Scenario::initial_label)
      .def("target_label", &Scenario::target_label);

  m.def("drives_for", &drives_for, py::arg("scenario"));
  m.def("drive_for", &drive_for, py::arg("scenario"));
  m.def("run", &run, py::arg("scenario"),
        py::arg("config") = PropagationConfig{},
        py::call_guard<py::gil_scoped_release>());
  m.def("fidelity", &fidelity, py::arg("result"), py::arg("target"));
  m.def(
      "leakage",
      [](const PropagationResult& r, const std::vector<std::string>& labels) {
        return leakage(r, labels);
      },
      py::arg("result"), py::arg("labels"));

  py::class_<ScanPoint>(m, "ScanPoint")
      .def_readonly("value", &ScanPoint::value)
      .def_readonly("fidelity", &ScanPoint::fidelity)
      .def_readonly("leakage", &ScanPoint::leakage)
      .def_readonly("norm_drift", &ScanPoint::norm_drift);

  py::class_<ScanResult>(m, "ScanResult")
      .def_readonly("parameter", &ScanResult::parameter)
      .def_readonly("points", &ScanResult::points)
      .def("argmax_fidelity", &ScanResult::argmax_fidelity);

  m.def(
      "scan_lambda",
      [](const Scenario& sc, const std::vector<double>& grid, int threads,
         const PropagationConfig& base) {
        return scan_lambda(sc, grid, threads, base);
      },
      py::arg("scenario"), py::arg("grid"), py::arg("threads") = 1,
      py::arg("config") = PropagationConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "scan_fwhm",
      [](const Scenario& sc, const std::vector<double>& grid, int threads,
         const PropagationConfig& base) {
        return scan_fwhm(sc, grid, threads, base);
      },
      py::arg("scenario"), py::arg("grid"), py::arg("threads") = 1,
      py::arg("config") = PropagationConfig{},
      py::call_guard<py::gil_scoped_release>());
  m.def(
      "scan_eta",
      [](const Scenario& sc, const std::vector<double>& grid, int threads,
         const PropagationConfig& base) {
        return scan_eta(sc, grid, threads, base);
      },
      py::arg("scenario"), py::arg("grid"), py::arg("threads") = 1,
      py::arg("config") = PropagationConfig{},
      py::call_guard<py::gil_scoped_release>());

  m.def("default_lambda_grid", &default_lambda_grid);
  m.def("default_fwhm_grid", &default_fwhm_grid, py::arg("dataset"));
  m.def("default_eta_grid", &default_eta_grid);
  m.def("bundled_scenario", &bundled_scenario, py::arg("name"));
  m.def("bundled_scenario_names", &bundled_scenario_names);
}
