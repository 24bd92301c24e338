#pragma once

#include "stirapcd/level_system.hpp"
#include "stirapcd/units.hpp"

#include <string>
#include <string_view>

namespace stirapcd {

enum class Waveform { cosine, sine };

// A Gaussian-envelope laser pulse
//   E(t) = amplitude * exp(-((t - center)/delta_tau)^2) * w(carrier*t + phase)
// with w = cos or sin and delta_tau = FWHM / (2 sqrt(ln 2)), the 1/e
// half-width of the *intensity* profile.  Geometry is given in ps and the
// carrier in cm^-1; field values come back in atomic units of field.
struct GaussianPulse {
  double amplitude_au = 0.0;
  double center_ps = 0.0;
  double fwhm_ps = 1.0;
  double carrier_cm1 = 0.0;
  double phase_rad = 0.0;
  Waveform waveform = Waveform::cosine;

  double delta_tau_ps() const;
  double delta_tau_au() const { return delta_tau_ps() * units::ps_to_atu; }
  double center_au() const { return center_ps * units::ps_to_atu; }
  double carrier_au() const { return units::omega_au(carrier_cm1); }

  double envelope_au(double t_au) const;
  double field_au(double t_au) const;
};

// Rabi profile Omega(t) = mu * envelope(t) / (2 hbar) of a pulse driving a
// transition with dipole moment mu (a.u.); Omega in rad/atu.
struct RabiProfile {
  GaussianPulse pulse;
  double mu_au = 0.0;

  double operator()(double t_au) const {
    return 0.5 * mu_au * pulse.envelope_au(t_au) / units::hbar;
  }
  double peak() const {
    return 0.5 * mu_au * pulse.amplitude_au / units::hbar;
  }
};

// Mixing angle Theta = atan2(Omega_p, Omega_S) of a pump/Stokes pair and
// its time derivative (Eq.-(7)-style closed form), evaluated in a factored
// form that survives envelope underflow arbitrarily far from the pulses.
// Both throw DataError when the two peak Rabi frequencies are zero; with
// exactly one of them zero the angle is pinned (0 or pi/2) and the rate
// vanishes.
double mixing_angle(const RabiProfile& pump, const RabiProfile& stokes,
                    double t_au);
double mixing_angle_rate(const RabiProfile& pump, const RabiProfile& stokes,
                         double t_au);

enum class DriveMode {
  stirap_plus_cdf,  // pump + Stokes + lambda * CDF
  cdf_only          // lambda * CDF alone (pump/Stokes amplitudes dropped,
                    // but their envelopes still define the mixing angle)
};

// A complete STIRAP(+CDF) drive for one initial -> intermediate -> target
// ladder.  The counter-diabatic field is derived from the pump/Stokes
// envelopes: its envelope is 2 hbar dTheta/dt / mu_bridge with
// Theta = atan2(Omega_p, Omega_S), its carrier resonant with the
// initial -> target gap, and it rides a sine so that its RWA coupling is
// i hbar dTheta/dt between initial and target.
struct StirapDrive {
  GaussianPulse pump;    // cosine carrier, resonant initial -> intermediate
  GaussianPulse stokes;  // cosine carrier, resonant intermediate -> target
  double mu_pump = 0.0;    // dipole moment of the pump transition
  double mu_stokes = 0.0;  // dipole moment of the Stokes transition
  double mu_bridge = 0.0;  // dipole moment of the initial -> target bridge
  double cdf_carrier_cm1 = 0.0;
  double cdf_phase_rad = 0.0;
  double cdf_sign = 1.0;   // sign of the target-minus-initial energy gap
  double lambda = 0.0;     // CDF admixture
  double eta = 1.0;        // pulse-delay ratio delta_tau / Delta T
  DriveMode mode = DriveMode::stirap_plus_cdf;

  RabiProfile pump_rabi() const { return {pump, mu_pump}; }
  RabiProfile stokes_rabi() const { return {stokes, mu_stokes}; }

  // Mixing angle Theta(t) = atan2(Omega_p, Omega_S) and its time
  // derivative, evaluated in closed form.  The derivative is computed in a
  // factored form that stays finite and accurate far outside the pulses,
  // where both Rabi frequencies underflow.
  double mixing_angle(double t_au) const;
  double mixing_angle_rate(double t_au) const;  // rad/atu

  // Signed CDF envelope 2 hbar dTheta/dt / mu_bridge (a.u. of field).
  double cdf_envelope_au(double t_au) const;
  double cdf_field_au(double t_au) const;  // envelope * sin(w t + phase)

  // Total driving field at time t, honoring `mode` and `lambda`.
  double total_field_au(double t_au) const;

  // Integral of |dTheta/dt| over [t0, t1]; pi/2 for a complete
  // counter-intuitive sweep.
  double pulse_area_theta(double t0_au, double t1_au) const;

  // Window that contains the drive: [min center - pad*dtau_max,
  // max center + pad*dtau_max] over pump and Stokes.
  double window_start_ps(double pad = 4.0) const;
  double window_end_ps(double pad = 4.0) const;
};

// Build a resonant drive for the ladder initial -> intermediate -> target
// of `sys`: carriers are set to the level spacings, the Stokes pulse is
// centered at stokes_center_ps, the pump trails it by
// Delta T = delta_tau / eta, and the CDF bridges initial -> target.
// Requires nonzero pump and Stokes dipole moments; a nonzero bridge moment
// is required as soon as lambda != 0 (a zero bridge cannot carry a CDF).
StirapDrive make_drive(const LevelSystem& sys, std::string_view initial,
                       std::string_view intermediate, std::string_view target,
                       double pump_amplitude_au, double stokes_amplitude_au,
                       double fwhm_ps, double lambda = 0.0, double eta = 1.0,
                       double stokes_center_ps = 0.0);

}  // namespace stirapcd
