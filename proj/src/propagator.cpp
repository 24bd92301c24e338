#include "stirapcd/propagator.hpp"

#include "stirapcd/errors.hpp"
#include "stirapcd/units.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <utility>

namespace stirapcd {

namespace {

using cd = std::complex<double>;

// Basis of the propagation: the full manifold or a label subset, always in
// system order, with the matching slice of energies and couplings.
struct Basis {
  std::vector<std::string> labels;
  Eigen::VectorXd energy_cm1;
  Eigen::MatrixXd mu;

  int size() const { return static_cast<int>(labels.size()); }
};

Basis make_basis(const LevelSystem& sys, const std::vector<std::string>& subset) {
  std::vector<int> keep;
  if (subset.empty()) {
    keep.resize(sys.size());
    std::iota(keep.begin(), keep.end(), 0);
  } else {
    std::vector<char> mark(sys.size(), 0);
    for (const auto& label : subset) {
      const int i = sys.index_of(label);
      if (mark[i])
        throw DataError("subset lists state '" + label + "' twice");
      mark[i] = 1;
    }
    for (int i = 0; i < sys.size(); ++i)
      if (mark[i]) keep.push_back(i);
  }

  Basis b;
  const int n = static_cast<int>(keep.size());
  b.labels.reserve(n);
  b.energy_cm1.resize(n);
  b.mu.resize(n, n);
  for (int i = 0; i < n; ++i) {
    b.labels.push_back(sys.state(keep[i]).label);
    b.energy_cm1[i] = sys.state(keep[i]).energy_cm1;
    for (int j = 0; j < n; ++j) b.mu(i, j) = sys.tdm()(keep[i], keep[j]);
  }
  return b;
}

struct Window {
  double start_ps = 0.0;
  double end_ps = 0.0;
};

Window resolve_window(std::span<const StirapDrive> drives,
                      const PropagationConfig& cfg) {
  if (!cfg.auto_window) {
    if (!(cfg.window_end_ps > cfg.window_start_ps)) {
      throw DataError("window_end_ps must exceed window_start_ps");
    }
    return {cfg.window_start_ps, cfg.window_end_ps};
  }
  if (drives.empty()) {
    throw DataError("cannot derive a window without drives; set the window "
                    "explicitly");
  }
  Window w{drives.front().window_start_ps(), drives.front().window_end_ps()};
  for (const auto& d : drives) {
    w.start_ps = std::min(w.start_ps, d.window_start_ps());
    w.end_ps = std::max(w.end_ps, d.window_end_ps());
  }
  return w;
}

long long step_count(double span_au, double dt_au) {
  // Shave a relative epsilon so a span that is k*dt up to rounding noise
  // yields exactly k steps (dt-halving then yields exactly 2k).
  const double x = (span_au / dt_au) * (1.0 - 1e-12);
  return std::max<long long>(1, static_cast<long long>(std::ceil(x)));
}

double resolved_dt(const LevelSystem& sys, std::span<const StirapDrive> drives,
                   const PropagationConfig& cfg) {
  if (cfg.dt_au > 0.0) return cfg.dt_au;
  const double dt = default_dt_au(sys, drives, cfg);
  if (!(dt > 0.0)) throw DataError("could not derive a positive step size");
  return dt;
}

long long resolved_stride(const PropagationConfig& cfg, double dt_au) {
  if (cfg.sample_stride_steps > 0) return cfg.sample_stride_steps;
  if (cfg.sample_stride_ps <= 0.0) return 1;
  return std::max<long long>(
      1, std::llround(cfg.sample_stride_ps * units::ps_to_atu / dt_au));
}

}  // namespace

int PropagationResult::column(std::string_view label) const {
  for (std::size_t i = 0; i < labels.size(); ++i)
    if (labels[i] == label) return static_cast<int>(i);
  throw DataError("state '" + std::string(label) +
                  "' was not part of the propagation");
}

double PropagationResult::final_population(std::string_view label) const {
  if (populations.rows() == 0) throw DataError("empty propagation result");
  return populations(populations.rows() - 1, column(label));
}

Eigen::MatrixXcd hamiltonian_interaction(
    const LevelSystem& sys, const std::function<double(double)>& field_au,
    double t_au) {
  const double field = field_au(t_au);
  const int n = sys.size();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const double mu = sys.tdm()(i, j);
      if (mu == 0.0) continue;
      const double w_ij = units::omega_au(sys.state(i).energy_cm1 -
                                          sys.state(j).energy_cm1);
      const cd phase = std::polar(1.0, w_ij * t_au);
      h(i, j) = -mu * field * phase;
      h(j, i) = std::conj(h(i, j));
    }
  }
  return h;
}

Eigen::MatrixXcd hamiltonian_interaction(const LevelSystem& sys,
                                         std::span<const StirapDrive> drives,
                                         double t_au) {
  return hamiltonian_interaction(
      sys,
      [&drives](double t) {
        double e = 0.0;
        for (const auto& d : drives) e += d.total_field_au(t);
        return e;
      },
      t_au);
}

double default_dt_au(const LevelSystem& sys,
                     std::span<const StirapDrive> drives,
                     const PropagationConfig& cfg) {
  const Basis b = make_basis(sys, cfg.subset);

  double pair_max_cm1 = 0.0;
  for (int i = 0; i < b.size(); ++i) {
    for (int j = i + 1; j < b.size(); ++j) {
      if (b.mu(i, j) != 0.0) {
        pair_max_cm1 =
            std::max(pair_max_cm1, std::abs(b.energy_cm1[i] - b.energy_cm1[j]));
      }
    }
  }

  double carrier_max_cm1 = 0.0;
  for (const auto& d : drives) {
    if (d.mode == DriveMode::stirap_plus_cdf) {
      if (d.pump.amplitude_au > 0.0)
        carrier_max_cm1 = std::max(carrier_max_cm1, d.pump.carrier_cm1);
      if (d.stokes.amplitude_au > 0.0)
        carrier_max_cm1 = std::max(carrier_max_cm1, d.stokes.carrier_cm1);
    }
    if (d.lambda != 0.0)
      carrier_max_cm1 = std::max(carrier_max_cm1, d.cdf_carrier_cm1);
  }

  double fastest_cm1 = pair_max_cm1 + carrier_max_cm1;
  if (cfg.picture == Picture::schrodinger && b.size() > 1) {
    fastest_cm1 += b.energy_cm1.maxCoeff() - b.energy_cm1.minCoeff();
  }

  const Window w = resolve_window(drives, cfg);
  const double span_au = (w.end_ps - w.start_ps) * units::ps_to_atu;

  if (fastest_cm1 <= 0.0) return span_au / 4096.0;

  double dt = (2.0 * std::numbers::pi / units::omega_au(fastest_cm1)) / 64.0;

  if (cfg.picture == Picture::schrodinger && b.size() > 1) {
    // RK4 loses |R(i theta)|^2 ~ theta^6/72 per step on a diagonal
    // eigenfrequency theta = w dt; cap the accumulated drift at 1e-9.
    const double mean = b.energy_cm1.mean();
    const double wd = units::omega_au(
        (b.energy_cm1.array() - mean).abs().maxCoeff());
    if (wd > 0.0) {
      dt = std::min(dt, std::pow(72.0 * 1e-9 / (span_au * std::pow(wd, 6)),
                                 0.2));
    }
  }
  return dt;
}

PropagationResult propagate(const LevelSystem& sys, const StirapDrive& drive,
                            const PropagationConfig& cfg) {
  return propagate(sys, std::span<const StirapDrive>(&drive, 1), cfg);
}

PropagationResult propagate(const LevelSystem& sys,
                            std::span<const StirapDrive> drives,
                            const PropagationConfig& cfg) {
  const Basis basis = make_basis(sys, cfg.subset);
  const int n = basis.size();

  if (cfg.initial_state.empty())
    throw DataError("initial_state is required");
  int init = -1;
  for (int i = 0; i < n; ++i)
    if (basis.labels[i] == cfg.initial_state) init = i;
  if (init < 0) {
    throw DataError("initial state '" + cfg.initial_state +
                    "' is not part of the propagated basis");
  }

  const Window window = resolve_window(drives, cfg);
  const double t0 = window.start_ps * units::ps_to_atu;
  const double span = (window.end_ps - window.start_ps) * units::ps_to_atu;
  const double dt = resolved_dt(sys, drives, cfg);
  const long long steps = step_count(span, dt);
  const long long stride = resolved_stride(cfg, dt);

  const auto field = [&drives](double t) {
    double e = 0.0;
    for (const auto& d : drives) e += d.total_field_au(t);
    return e;
  };

  const bool interaction = cfg.picture == Picture::interaction;

  Eigen::VectorXd omega(n);
  for (int i = 0; i < n; ++i)
    omega[i] = units::omega_au(basis.energy_cm1[i]);
  Eigen::VectorXd diag;
  if (!interaction) {
    diag = omega.array() - omega.mean();  // common shift: global phase only
  }

  // State and RK4 workspaces.
  Eigen::VectorXcd y = Eigen::VectorXcd::Zero(n);
  y[init] = 1.0;
  Eigen::VectorXcd k1(n), k2(n), k3(n), k4(n), yt(n), z(n);
  Eigen::Matrix<double, Eigen::Dynamic, 2> w_re(n, 2);

  // Interaction-picture rotors r_i = exp(-i w_i t), advanced by half-step
  // multipliers and refreshed against accumulated rounding periodically.
  Eigen::VectorXcd rot(n), rot_half(n), rot_next(n), half_mult(n);
  if (interaction) {
    for (int i = 0; i < n; ++i)
      half_mult[i] = std::polar(1.0, -omega[i] * dt * 0.5);
  }
  const auto refresh_rot = [&](double t) {
    for (int i = 0; i < n; ++i) rot[i] = std::polar(1.0, -omega[i] * t);
  };

  using Map2 =
      Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, 2, Eigen::RowMajor>>;

  // out = -i H(t) y with H applied matrix-free.  The complex matvec M*z is
  // one real (n x 2) product on the [re|im] view of z.
  const auto deriv = [&](const Eigen::VectorXcd& yin,
                         const Eigen::VectorXcd& rotors, double e_field,
                         Eigen::VectorXcd& out) {
    if (interaction) {
      z.array() = rotors.array() * yin.array();
      w_re.noalias() =
          basis.mu * Map2(reinterpret_cast<const double*>(z.data()), n, 2);
      for (int i = 0; i < n; ++i) {
        const cd w = std::conj(rotors[i]) * cd(w_re(i, 0), w_re(i, 1));
        out[i] = cd(-e_field * w.imag(), e_field * w.real());
      }
    } else {
      w_re.noalias() =
          basis.mu * Map2(reinterpret_cast<const double*>(yin.data()), n, 2);
      for (int i = 0; i < n; ++i) {
        const cd v = diag[i] * yin[i] - e_field * cd(w_re(i, 0), w_re(i, 1));
        out[i] = cd(v.imag(), -v.real());
      }
    }
  };

  PropagationResult res;
  res.labels = basis.labels;
  res.dt_au = dt;
  res.steps = steps;
  res.window_start_ps = window.start_ps;
  res.window_end_ps = window.start_ps + steps * dt * units::ps_per_atu;

  const long long sample_bound = steps / stride + 2;
  res.populations.resize(sample_bound, n);
  res.times_ps.reserve(sample_bound);

  long long rows = 0;
  const auto record = [&](long long k) {
    res.times_ps.push_back((t0 + k * dt) * units::ps_per_atu);
    res.populations.row(rows++) = y.array().abs2();
  };

  double drift = 0.0;
  double e_curr = field(t0);
  record(0);

  for (long long k = 0; k < steps; ++k) {
    const double t = t0 + k * dt;
    if (interaction) {
      if (k % 256 == 0) refresh_rot(t);
      rot_half.array() = rot.array() * half_mult.array();
      rot_next.array() = rot_half.array() * half_mult.array();
    }
    const double e_half = field(t + 0.5 * dt);
    const double e_next = field(t + dt);

    deriv(y, rot, e_curr, k1);
    yt = y + (0.5 * dt) * k1;
    deriv(yt, rot_half, e_half, k2);
    yt = y + (0.5 * dt) * k2;
    deriv(yt, rot_half, e_half, k3);
    yt = y + dt * k3;
    deriv(yt, rot_next, e_next, k4);
    y += (dt / 6.0) * (k1 + 2.0 * (k2 + k3) + k4);

    if (interaction) rot.swap(rot_next);
    e_curr = e_next;

    drift = std::max(drift, std::abs(1.0 - y.squaredNorm()));
    if (drift > cfg.norm_tolerance) {
      std::ostringstream msg;
      msg << "integration diverged: norm drift " << drift << " exceeds "
          << cfg.norm_tolerance << " at t = "
          << (t + dt) * units::ps_per_atu << " ps; use a smaller dt (current "
          << dt << " a.u.)";
      throw IntegrationError(msg.str());
    }

    if ((k + 1) % stride == 0 || k + 1 == steps) record(k + 1);
  }

  res.populations.conservativeResize(rows, n);
  res.final_amplitudes = y;
  res.norm_drift = drift;
  return res;
}

ConvergenceReport convergence_check(const LevelSystem& sys,
                                    std::span<const StirapDrive> drives,
                                    const PropagationConfig& cfg) {
  PropagationConfig base = cfg;
  const Window w = resolve_window(drives, cfg);
  const double dt = resolved_dt(sys, drives, cfg);
  const long long steps =
      step_count((w.end_ps - w.start_ps) * units::ps_to_atu, dt);
  const long long stride = resolved_stride(cfg, dt);

  // Pin the window to an exact step multiple so both runs share sample
  // instants one-to-one.
  base.auto_window = false;
  base.window_start_ps = w.start_ps;
  base.window_end_ps = w.start_ps + steps * dt * units::ps_per_atu;
  base.dt_au = dt;
  base.sample_stride_steps = static_cast<int>(std::min<long long>(
      stride, std::numeric_limits<int>::max()));

  PropagationConfig halved = base;
  halved.dt_au = 0.5 * dt;
  halved.sample_stride_steps = 2 * base.sample_stride_steps;

  const PropagationResult coarse = propagate(sys, drives, base);
  const PropagationResult fine = propagate(sys, drives, halved);

  if (coarse.populations.rows() != fine.populations.rows()) {
    throw IntegrationError("convergence check lost sample alignment");
  }

  ConvergenceReport rep;
  rep.dt_au = dt;
  rep.max_population_delta =
      (coarse.populations - fine.populations).cwiseAbs().maxCoeff();
  rep.norm_drift = coarse.norm_drift;
  rep.norm_drift_halved = fine.norm_drift;
  return rep;
}

}  // namespace stirapcd
