#pragma once

#include "stirapcd/propagator.hpp"
#include "stirapcd/pulse.hpp"

#include <Eigen/Dense>

namespace stirapcd {

// Three-level ladder in the rotating-wave approximation, on resonance:
//
//        H/hbar = - [ 0        Omega_p   0       ]
//                   [ Omega_p  0         Omega_S ]
//                   [ 0        Omega_S   0       ]
//
// optionally augmented with the exact counter-diabatic term
//
//        H_cd/hbar = dTheta/dt [ 0  0  i ]
//                              [ 0  0  0 ]
//                              [-i  0  0 ]
//
// which cancels non-adiabatic coupling out of the dark state exactly.
// This model is the analytic reference for the full-field propagator.
struct Rwa3System {
  RabiProfile pump;
  RabiProfile stokes;
  bool include_cd = false;

  double mixing_angle(double t_au) const;
  double mixing_angle_rate(double t_au) const;

  Eigen::Matrix3cd hamiltonian(double t_au) const;

  // Instantaneous dark state (cos Theta, 0, -sin Theta).
  Eigen::Vector3d dark_state(double t_au) const;
};

// The RWA view of a drive: same Rabi profiles, carriers dropped.
Rwa3System rwa3_from_drive(const StirapDrive& drive, bool include_cd);

// Adiabaticity figure of merit Delta T * sqrt(Omega_S^2 + Omega_p^2) with
// peak Rabi frequencies; > 10 marks the comfortably adiabatic regime.
double adiabaticity_metric(const Rwa3System& sys, double delta_t_au);
double adiabaticity_metric(const StirapDrive& drive);

struct Rwa3Result {
  PropagationResult trajectory;          // labels {"initial",
                                         //  "intermediate", "target"}
  double min_dark_overlap = 1.0;         // min |<dark|psi>|^2 over samples
  double max_intermediate_population = 0.0;
};

// Propagate (1,0,0) from window start to end with fixed-step RK4.
// dt_au <= 0 picks (window span) / 2^17, far inside the stability region
// for any drive of interest here.
Rwa3Result propagate_rwa3(const Rwa3System& sys, double window_start_ps,
                          double window_end_ps, double dt_au = 0.0,
                          double sample_stride_ps = 0.25);

}  // namespace stirapcd
