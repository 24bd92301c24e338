#pragma once

#include "stirapcd/level_system.hpp"
#include "stirapcd/propagator.hpp"
#include "stirapcd/pulse.hpp"

#include <limits>
#include <span>
#include <string>
#include <vector>

namespace stirapcd {

// One STIRAP stage: a state ladder plus its pulse pair.  Pulse centers are
// explicit here (sequential schedules need absolute timing); when
// pump_center_ps is NaN it is derived as stokes_center_ps + delta_tau/eta.
struct StageSpec {
  std::string initial, intermediate, target;
  double pump_amplitude_au = 0.0;
  double stokes_amplitude_au = 0.0;
  double fwhm_ps = 0.0;
  double stokes_center_ps = 0.0;
  double pump_center_ps = std::numeric_limits<double>::quiet_NaN();
  double lambda = 0.0;
  double eta = 1.0;
};

// A complete experiment: a dataset, one stage (or several, played in
// sequence under a single propagation), and optional basis restriction.
struct Scenario {
  std::string name;
  std::string dataset;          // "sccl2", "hcn", or "custom"
  const LevelSystem* system = nullptr;
  std::vector<StageSpec> stages;       // >= 1
  std::vector<std::string> subset;     // empty: full manifold
  DriveMode mode = DriveMode::stirap_plus_cdf;
  double pump_phase_rad = 0.0;
  double stokes_phase_rad = 0.0;
  double cdf_phase_rad = 0.0;

  const StageSpec& stage() const;      // sole stage; DataError if several
  std::string initial_label() const;   // stages.front().initial
  std::string target_label() const;    // stages.back().target
};

// Materialize the drives of a scenario (carriers resolved against the
// level system, phases applied).
std::vector<StirapDrive> drives_for(const Scenario& sc);
StirapDrive drive_for(const Scenario& sc);  // single-stage convenience

// Propagate a scenario.  Fields of `base` that the scenario does not
// speak for (dt, picture, window overrides, sampling, tolerance) are
// honored; subset and initial state come from the scenario unless `base`
// sets them explicitly.
PropagationResult run(const Scenario& sc, const PropagationConfig& base = {});

// Final population of `target`; the fidelity of a transfer.
double fidelity(const PropagationResult& r, std::string_view target);

// 1 - sum of final populations over `labels`: population that leaked out
// of the stated subset (0 when the run was itself restricted to it).
double leakage(const PropagationResult& r,
               std::span<const std::string> labels);

struct ScanPoint {
  double value = 0.0;
  double fidelity = 0.0;
  double leakage = 0.0;
  double norm_drift = 0.0;
};

struct ScanResult {
  std::string parameter;  // "lambda" | "fwhm_ps" | "eta"
  std::vector<ScanPoint> points;

  int argmax_fidelity() const;
};

// Parameter scans over a single-stage scenario.  Points are independent
// propagations, distributed over `threads` workers; results are ordered by
// grid index and identical for any thread count.  A failure at any grid
// point aborts the scan with the offending value in the message.
//
//  * lambda: CDF admixture sweep at fixed geometry; `mode` selects
//    STIRAP+CDF or CDF-only drives.
//  * fwhm: pulse-duration sweep at constant pulse area -- amplitudes are
//    rescaled by fwhm_ref/fwhm, and the pump delay follows delta_tau/eta.
//  * eta: delay-ratio sweep at fixed FWHM and amplitudes.
ScanResult scan_lambda(const Scenario& sc, std::span<const double> grid,
                       int threads = 1, const PropagationConfig& base = {});
ScanResult scan_fwhm(const Scenario& sc, std::span<const double> grid,
                     int threads = 1, const PropagationConfig& base = {});
ScanResult scan_eta(const Scenario& sc, std::span<const double> grid,
                    int threads = 1, const PropagationConfig& base = {});

std::vector<double> default_lambda_grid();            // 0 .. 2, step 0.05
std::vector<double> default_fwhm_grid(std::string_view dataset);
std::vector<double> default_eta_grid();               // {0.5,1,2,3,4,5}

// Bundled experiments: "sccl2_1to6", "sccl2_1to3", "hcn_stage2",
// "hcn_sequential".  DataError for any other name.
Scenario bundled_scenario(std::string_view name);
std::vector<std::string> bundled_scenario_names();

}  // namespace stirapcd
