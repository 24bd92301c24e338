#pragma once

#include "stirapcd/level_system.hpp"
#include "stirapcd/pulse.hpp"

#include <Eigen/Dense>

#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace stirapcd {

enum class Picture { interaction, schrodinger };

struct PropagationConfig {
  // Step size in atomic time units; <= 0 selects the default rule
  // dt = T_min / 64, with T_min the period of the fastest relevant
  // frequency (largest coupled Bohr frequency plus largest active carrier;
  // the Schrodinger picture also counts the static level spread).
  double dt_au = 0.0;

  // Integration window; if auto_window (default), it is derived from the
  // drives as [earliest center - 4 delta_tau, latest center + 4 delta_tau].
  bool auto_window = true;
  double window_start_ps = 0.0;
  double window_end_ps = 0.0;

  Picture picture = Picture::interaction;

  // Labels to keep; empty means the full manifold.  Couplings to dropped
  // states are removed with the states (decoupled-subset propagation).
  std::vector<std::string> subset;

  // Label of the state holding all population at window start.
  std::string initial_state;

  // Population sampling cadence; samples land every
  // max(1, round(sample_stride_ps / dt)) steps.  A positive
  // sample_stride_steps overrides the ps-based stride.
  double sample_stride_ps = 0.25;
  int sample_stride_steps = 0;

  // Abort (IntegrationError) when max |1 - ||psi||^2| exceeds this.
  double norm_tolerance = 1e-6;
};

struct PropagationResult {
  std::vector<std::string> labels;   // propagated basis, system order
  std::vector<double> times_ps;      // sample instants
  Eigen::MatrixXd populations;       // (samples x labels) |amplitude|^2
  Eigen::VectorXcd final_amplitudes; // interaction-picture amplitudes
  double norm_drift = 0.0;           // max |1 - ||psi||^2| seen
  double dt_au = 0.0;                // step actually used
  long long steps = 0;
  double window_start_ps = 0.0;
  double window_end_ps = 0.0;

  int column(std::string_view label) const;       // DataError if absent
  double final_population(std::string_view label) const;
};

// Interaction-picture Hamiltonian matrix (a.u.) of the manifold under a
// total field E at time t:  H_ij = -mu_ij E(t) exp(i w_ij t), zero on the
// diagonal.  Exposed mainly for inspection and tests; the propagator
// evaluates its action without forming the matrix.
Eigen::MatrixXcd hamiltonian_interaction(
    const LevelSystem& sys, const std::function<double(double)>& field_au,
    double t_au);
Eigen::MatrixXcd hamiltonian_interaction(const LevelSystem& sys,
                                         std::span<const StirapDrive> drives,
                                         double t_au);

// Propagate |initial> under one or several (summed) drives with classic
// fixed-step RK4.  The state is never renormalized; norm loss is recorded
// and bounded by cfg.norm_tolerance.
PropagationResult propagate(const LevelSystem& sys, const StirapDrive& drive,
                            const PropagationConfig& cfg);
PropagationResult propagate(const LevelSystem& sys,
                            std::span<const StirapDrive> drives,
                            const PropagationConfig& cfg);

// The dt the default rule would pick for this problem.
double default_dt_au(const LevelSystem& sys,
                     std::span<const StirapDrive> drives,
                     const PropagationConfig& cfg);

// Re-run at half step and report the largest population discrepancy at
// matching sample instants plus both norm drifts.
struct ConvergenceReport {
  double dt_au = 0.0;
  double max_population_delta = 0.0;
  double norm_drift = 0.0;
  double norm_drift_halved = 0.0;
};
ConvergenceReport convergence_check(const LevelSystem& sys,
                                    std::span<const StirapDrive> drives,
                                    const PropagationConfig& cfg);

}  // namespace stirapcd
