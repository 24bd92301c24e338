#include "stirapcd/pulse.hpp"

#include "stirapcd/errors.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace stirapcd {

namespace {

constexpr double kTwoSqrtLn2 = 1.6651092223153954;  // 2 sqrt(ln 2)

struct EnvelopeGeometry {
  double amp;     // peak Rabi-like amplitude (any common scale)
  double center;  // au
  double dtau;    // au
};

// Both the mixing angle and its rate depend only on the ratio of the two
// Gaussian envelopes, so the common exponential scale can be divided out.
// With a = ((t-Tp)/dtau_p)^2 and b = ((t-Ts)/dtau_s)^2,
//
//   Theta      = atan2(Ap e^{-(a-m)}, As e^{-(b-m)}),        m = min(a,b)
//   dTheta/dt  = g Ap As e^{-|a-b|} /
//                (Ap^2 e^{-2(a-m)} + As^2 e^{-2(b-m)})
//   g          = 2 [ (t-Ts)/dtau_s^2 - (t-Tp)/dtau_p^2 ]
//
// One of the shifted exponents is always zero, so the denominator never
// drops below min(Ap, As)^2 and the expressions stay exact arbitrarily far
// from the pulse centers, where the raw envelopes underflow.
double mixing_angle_core(const EnvelopeGeometry& p, const EnvelopeGeometry& s,
                         double t) {
  const double up = (t - p.center) / p.dtau;
  const double us = (t - s.center) / s.dtau;
  const double a = up * up;
  const double b = us * us;
  const double m = std::min(a, b);
  return std::atan2(p.amp * std::exp(-(a - m)), s.amp * std::exp(-(b - m)));
}

double mixing_rate_core(const EnvelopeGeometry& p, const EnvelopeGeometry& s,
                        double t) {
  const double up = (t - p.center) / p.dtau;
  const double us = (t - s.center) / s.dtau;
  const double a = up * up;
  const double b = us * us;
  const double m = std::min(a, b);
  const double g = 2.0 * (us / s.dtau - up / p.dtau);
  const double num = p.amp * s.amp * std::exp(-std::abs(a - b));
  const double ea = p.amp * std::exp(-(a - m));
  const double eb = s.amp * std::exp(-(b - m));
  return g * num / (ea * ea + eb * eb);
}

EnvelopeGeometry geometry(const GaussianPulse& pulse, double amp) {
  return {amp, pulse.center_au(), pulse.delta_tau_au()};
}

void require_some_profile(double pump_peak, double stokes_peak) {
  if (pump_peak == 0.0 && stokes_peak == 0.0) {
    throw DataError(
        "mixing angle undefined: pump and Stokes Rabi profiles are both "
        "identically zero");
  }
}

}  // namespace

double GaussianPulse::delta_tau_ps() const {
  if (!(fwhm_ps > 0.0))
    throw DataError("pulse FWHM must be positive");
  return fwhm_ps / kTwoSqrtLn2;
}

double GaussianPulse::envelope_au(double t_au) const {
  const double u = (t_au - center_au()) / delta_tau_au();
  return amplitude_au * std::exp(-u * u);
}

double GaussianPulse::field_au(double t_au) const {
  const double arg = carrier_au() * t_au + phase_rad;
  const double osc =
      waveform == Waveform::cosine ? std::cos(arg) : std::sin(arg);
  return envelope_au(t_au) * osc;
}

double mixing_angle(const RabiProfile& pump, const RabiProfile& stokes,
                    double t_au) {
  const double ap = pump.peak();
  const double as = stokes.peak();
  require_some_profile(ap, as);
  if (ap == 0.0) return 0.0;
  if (as == 0.0) return std::atan2(1.0, 0.0);  // pi/2
  return mixing_angle_core(geometry(pump.pulse, ap), geometry(stokes.pulse, as),
                           t_au);
}

double mixing_angle_rate(const RabiProfile& pump, const RabiProfile& stokes,
                         double t_au) {
  const double ap = pump.peak();
  const double as = stokes.peak();
  require_some_profile(ap, as);
  if (ap == 0.0 || as == 0.0) return 0.0;  // angle pinned, numerator vanishes
  return mixing_rate_core(geometry(pump.pulse, ap), geometry(stokes.pulse, as),
                          t_au);
}

double StirapDrive::mixing_angle(double t_au) const {
  return stirapcd::mixing_angle(pump_rabi(), stokes_rabi(), t_au);
}

double StirapDrive::mixing_angle_rate(double t_au) const {
  return stirapcd::mixing_angle_rate(pump_rabi(), stokes_rabi(), t_au);
}

double StirapDrive::cdf_envelope_au(double t_au) const {
  if (mu_bridge == 0.0) {
    throw DataError(
        "counter-diabatic field undefined: the initial and target states "
        "are not dipole-coupled (mu_bridge = 0)");
  }
  return cdf_sign * 2.0 * units::hbar * mixing_angle_rate(t_au) / mu_bridge;
}

double StirapDrive::cdf_field_au(double t_au) const {
  const double arg = units::omega_au(cdf_carrier_cm1) * t_au + cdf_phase_rad;
  return cdf_envelope_au(t_au) * std::sin(arg);
}

double StirapDrive::total_field_au(double t_au) const {
  double field = 0.0;
  if (mode == DriveMode::stirap_plus_cdf) {
    field += pump.field_au(t_au) + stokes.field_au(t_au);
  }
  if (lambda != 0.0) field += lambda * cdf_field_au(t_au);
  return field;
}

double StirapDrive::pulse_area_theta(double t0_au, double t1_au) const {
  // dTheta/dt carries the sign of g(t) = 2 [ (t-Ts)/dtau_s^2 -
  // (t-Tp)/dtau_p^2 ], which is linear in t, so Theta has at most one
  // turning point and the |dTheta/dt| integral telescopes into exact angle
  // differences. Quadrature would have to resolve a sech-like spike that
  // can be orders of magnitude narrower than the window; this form is exact
  // for any window.
  if (t0_au == t1_au) return 0.0;
  if (t0_au > t1_au) return -pulse_area_theta(t1_au, t0_au);
  const double ap = pump_rabi().peak();
  const double as = stokes_rabi().peak();
  require_some_profile(ap, as);
  if (ap == 0.0 || as == 0.0) return 0.0;  // angle pinned, rate vanishes
  const double theta0 = mixing_angle(t0_au);
  const double theta1 = mixing_angle(t1_au);
  const double inv_p = 1.0 / (pump.delta_tau_au() * pump.delta_tau_au());
  const double inv_s = 1.0 / (stokes.delta_tau_au() * stokes.delta_tau_au());
  if (inv_p != inv_s) {
    const double t_star = (stokes.center_au() * inv_s -
                           pump.center_au() * inv_p) /
                          (inv_s - inv_p);
    if (t_star > t0_au && t_star < t1_au) {
      const double theta_star = mixing_angle(t_star);
      return std::abs(theta_star - theta0) + std::abs(theta1 - theta_star);
    }
  }
  return std::abs(theta1 - theta0);
}

double StirapDrive::window_start_ps(double pad) const {
  return std::min(pump.center_ps - pad * pump.delta_tau_ps(),
                  stokes.center_ps - pad * stokes.delta_tau_ps());
}

double StirapDrive::window_end_ps(double pad) const {
  return std::max(pump.center_ps + pad * pump.delta_tau_ps(),
                  stokes.center_ps + pad * stokes.delta_tau_ps());
}

StirapDrive make_drive(const LevelSystem& sys, std::string_view initial,
                       std::string_view intermediate, std::string_view target,
                       double pump_amplitude_au, double stokes_amplitude_au,
                       double fwhm_ps, double lambda, double eta,
                       double stokes_center_ps) {
  if (initial == intermediate || intermediate == target || initial == target) {
    throw DataError("initial, intermediate and target states must differ");
  }
  if (!(fwhm_ps > 0.0)) throw DataError("FWHM must be positive");
  if (!(eta > 0.0)) throw DataError("eta must be positive");
  if (lambda < 0.0) throw DataError("lambda must be non-negative");
  if (pump_amplitude_au < 0.0 || stokes_amplitude_au < 0.0) {
    throw DataError("pump and Stokes amplitudes must be non-negative");
  }
  if (lambda != 0.0 && pump_amplitude_au == 0.0 && stokes_amplitude_au == 0.0) {
    throw DataError("the counter-diabatic term is undefined when both pulse "
                    "amplitudes vanish");
  }

  StirapDrive d;
  d.mu_pump = sys.mu(initial, intermediate);
  d.mu_stokes = sys.mu(intermediate, target);
  d.mu_bridge = sys.mu(initial, target);
  if (d.mu_pump == 0.0 || d.mu_stokes == 0.0) {
    std::ostringstream msg;
    msg << "ladder " << initial << " -> " << intermediate << " -> " << target
        << " is not dipole-connected";
    throw DataError(msg.str());
  }
  if (lambda != 0.0 && d.mu_bridge == 0.0) {
    std::ostringstream msg;
    msg << "lambda = " << lambda << " needs a dipole-coupled bridge, but mu("
        << initial << ", " << target << ") = 0";
    throw DataError(msg.str());
  }

  const double gap_pump = sys.transition_energy_cm1(initial, intermediate);
  const double gap_stokes = sys.transition_energy_cm1(intermediate, target);
  const double gap_bridge = sys.transition_energy_cm1(initial, target);
  if (gap_bridge == 0.0) {
    throw DataError("degenerate initial and target states; the "
                    "counter-diabatic carrier frequency would vanish");
  }

  d.stokes.amplitude_au = stokes_amplitude_au;
  d.stokes.center_ps = stokes_center_ps;
  d.stokes.fwhm_ps = fwhm_ps;
  d.stokes.carrier_cm1 = std::abs(gap_stokes);
  d.stokes.waveform = Waveform::cosine;

  d.pump = d.stokes;
  d.pump.amplitude_au = pump_amplitude_au;
  d.pump.center_ps = stokes_center_ps + d.stokes.delta_tau_ps() / eta;
  d.pump.carrier_cm1 = std::abs(gap_pump);

  d.cdf_carrier_cm1 = std::abs(gap_bridge);
  d.cdf_sign = gap_bridge > 0.0 ? 1.0 : -1.0;
  d.lambda = lambda;
  d.eta = eta;
  return d;
}

}  // namespace stirapcd
