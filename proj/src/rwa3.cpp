#include "stirapcd/rwa3.hpp"

#include "stirapcd/errors.hpp"
#include "stirapcd/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace stirapcd {

namespace {
using cd = std::complex<double>;
}

double Rwa3System::mixing_angle(double t_au) const {
  return stirapcd::mixing_angle(pump, stokes, t_au);
}

double Rwa3System::mixing_angle_rate(double t_au) const {
  return stirapcd::mixing_angle_rate(pump, stokes, t_au);
}

Eigen::Matrix3cd Rwa3System::hamiltonian(double t_au) const {
  const double op = pump(t_au);
  const double os = stokes(t_au);
  Eigen::Matrix3cd h = Eigen::Matrix3cd::Zero();
  h(0, 1) = h(1, 0) = -units::hbar * op;
  h(1, 2) = h(2, 1) = -units::hbar * os;
  if (include_cd) {
    const double rate = mixing_angle_rate(t_au);
    h(0, 2) = cd(0.0, units::hbar * rate);
    h(2, 0) = std::conj(h(0, 2));
  }
  return h;
}

Eigen::Vector3d Rwa3System::dark_state(double t_au) const {
  const double theta = mixing_angle(t_au);
  return {std::cos(theta), 0.0, -std::sin(theta)};
}

Rwa3System rwa3_from_drive(const StirapDrive& drive, bool include_cd) {
  Rwa3System s;
  s.pump = drive.pump_rabi();
  s.stokes = drive.stokes_rabi();
  s.include_cd = include_cd;
  return s;
}

double adiabaticity_metric(const Rwa3System& sys, double delta_t_au) {
  return delta_t_au * std::hypot(sys.pump.peak(), sys.stokes.peak());
}

double adiabaticity_metric(const StirapDrive& drive) {
  const double delta_t_au =
      (drive.pump.center_ps - drive.stokes.center_ps) * units::ps_to_atu;
  return adiabaticity_metric(rwa3_from_drive(drive, false), delta_t_au);
}

Rwa3Result propagate_rwa3(const Rwa3System& sys, double window_start_ps,
                          double window_end_ps, double dt_au,
                          double sample_stride_ps) {
  if (!(window_end_ps > window_start_ps))
    throw DataError("window_end_ps must exceed window_start_ps");

  const double t0 = window_start_ps * units::ps_to_atu;
  const double span = (window_end_ps - window_start_ps) * units::ps_to_atu;
  const double dt = dt_au > 0.0 ? dt_au : span / 131072.0;
  const long long steps =
      std::max<long long>(1, static_cast<long long>(
                                 std::ceil(span / dt * (1.0 - 1e-12))));
  const long long stride =
      sample_stride_ps > 0.0
          ? std::max<long long>(
                1, std::llround(sample_stride_ps * units::ps_to_atu / dt))
          : 1;

  Eigen::Vector3cd y{1.0, 0.0, 0.0};
  Eigen::Vector3cd k1, k2, k3, k4, yt;

  const auto deriv = [&sys](double t, const Eigen::Vector3cd& yin,
                            Eigen::Vector3cd& out) {
    out = cd(0.0, -1.0) * (sys.hamiltonian(t) * yin) / units::hbar;
  };

  Rwa3Result res;
  PropagationResult& tr = res.trajectory;
  tr.labels = {"initial", "intermediate", "target"};
  tr.dt_au = dt;
  tr.steps = steps;
  tr.window_start_ps = window_start_ps;
  tr.window_end_ps = window_start_ps + steps * dt * units::ps_per_atu;
  tr.populations.resize(steps / stride + 2, 3);
  long long rows = 0;

  const auto record = [&](long long k) {
    tr.times_ps.push_back((t0 + k * dt) * units::ps_per_atu);
    tr.populations.row(rows++) = y.array().abs2();
  };

  double drift = 0.0;
  const auto observe = [&](double t) {
    const Eigen::Vector3d dark = sys.dark_state(t);
    const cd overlap = dark.cast<cd>().dot(y);
    res.min_dark_overlap = std::min(res.min_dark_overlap, std::norm(overlap));
    res.max_intermediate_population =
        std::max(res.max_intermediate_population, std::norm(y[1]));
    drift = std::max(drift, std::abs(1.0 - y.squaredNorm()));
  };

  record(0);
  observe(t0);

  for (long long k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    deriv(t, y, k1);
    yt = y + (0.5 * dt) * k1;
    deriv(t + 0.5 * dt, yt, k2);
    yt = y + (0.5 * dt) * k2;
    deriv(t + 0.5 * dt, yt, k3);
    yt = y + dt * k3;
    deriv(t + dt, yt, k4);
    y += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);

    observe(t + dt);
    if (drift > 1e-6) {
      throw IntegrationError(
          "three-level reference integration diverged; use a smaller dt");
    }
    if ((k + 1) % stride == 0 || k + 1 == steps) record(k + 1);
  }

  tr.populations.conservativeResize(rows, 3);
  tr.final_amplitudes = y;
  tr.norm_drift = drift;
  return res;
}

}  // namespace stirapcd
