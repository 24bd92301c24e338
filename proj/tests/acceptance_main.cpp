// Acceptance gate: eight release criteria, one PASS/FAIL line each.
// Heavy propagations are shared across criteria through an in-process cache.
// Usage: stirapcd_acceptance [--criterion N]...
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "stirapcd/errors.hpp"
#include "stirapcd/level_system.hpp"
#include "stirapcd/propagator.hpp"
#include "stirapcd/pulse.hpp"
#include "stirapcd/rwa3.hpp"
#include "stirapcd/scenarios.hpp"
#include "stirapcd/units.hpp"

using namespace stirapcd;

namespace {

constexpr double kPi = 3.14159265358979323846;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int prec = 4) {
  std::ostringstream s;
  s << std::setprecision(prec) << v;
  return std::move(s).str();
}

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

// Shared propagation cache.  Keys name the physical setup; criteria that
// need the same trajectory get the same object.
class Shared {
 public:
  const PropagationResult& get(
      const std::string& key,
      const std::function<PropagationResult()>& make) {
    auto it = runs_.find(key);
    if (it == runs_.end()) {
      Timer t;
      it = runs_.emplace(key, make()).first;
      seconds_[key] = t.seconds();
    }
    return it->second;
  }
  double seconds(const std::string& key) const {
    auto it = seconds_.find(key);
    return it == seconds_.end() ? 0.0 : it->second;
  }
  const ConvergenceReport& convergence(
      const std::string& key, const std::function<ConvergenceReport()>& make) {
    auto it = conv_.find(key);
    if (it == conv_.end()) it = conv_.emplace(key, make()).first;
    return it->second;
  }

 private:
  std::map<std::string, PropagationResult> runs_;
  std::map<std::string, double> seconds_;
  std::map<std::string, ConvergenceReport> conv_;
};

Scenario variant(const char* name, double lambda,
                 DriveMode mode = DriveMode::stirap_plus_cdf,
                 std::vector<std::string> subset = {}) {
  Scenario sc = bundled_scenario(name);
  for (auto& st : sc.stages) st.lambda = lambda;
  sc.mode = mode;
  sc.subset = std::move(subset);
  return sc;
}

const PropagationResult& sccl2_run(Shared& sh, double lambda) {
  return sh.get("sccl2_l" + fmt(lambda),
                [lambda] { return run(variant("sccl2_1to6", lambda)); });
}

const PropagationResult& hcn_run(Shared& sh, double lambda) {
  return sh.get("hcn_l" + fmt(lambda),
                [lambda] { return run(variant("hcn_stage2", lambda)); });
}

// ---------------------------------------------------------------- criterion 1
// Headline SCCl2 1->6 fidelities on the full 22-state manifold.
Outcome criterion_headline_fidelities(Shared& sh) {
  const PropagationResult& r0 = sccl2_run(sh, 0.0);
  const PropagationResult& r1 = sccl2_run(sh, 1.0);
  const double f0 = fidelity(r0, "6");
  const double f1 = fidelity(r1, "6");
  const double t0 = sh.seconds("sccl2_l0");
  const double t1 = sh.seconds("sccl2_l1");

  std::ostringstream d;
  d << "lambda=0 fidelity " << fmt(f0) << " (expect 0.688+-0.05), lambda=1 "
    << fmt(f1) << " (expect 0.974+-0.03), trajectory times " << fmt(t0, 3)
    << "/" << fmt(t1, 3) << " s";

  const bool in_band = std::abs(f0 - 0.688) <= 0.05 && std::abs(f1 - 0.974) <= 0.03;
  const bool in_time = t0 < 300.0 && t1 < 300.0;
  if (in_band && in_time) return {true, std::move(d).str()};

  if (!in_time) {
    d << "; trajectory exceeded 300 s";
    return {false, std::move(d).str()};
  }

  // Fallback: with a converged integrator the qualitative claim must hold.
  const Scenario sc1 = variant("sccl2_1to6", 1.0);
  const auto drives = drives_for(sc1);
  PropagationConfig cfg;
  cfg.initial_state = sc1.initial_label();
  const ConvergenceReport conv = sh.convergence("sccl2_l1", [&] {
    return convergence_check(*sc1.system, drives, cfg);
  });
  const bool fallback =
      conv.max_population_delta < 1e-4 && (f1 - f0) > 0.2 && f1 > 0.9;
  d << "; out of the quoted bands, fallback (converged, gain>0.2, "
    << "lambda1>0.9) " << (fallback ? "holds" : "fails") << " [delta="
    << fmt(conv.max_population_delta, 3) << "]";
  return {fallback, std::move(d).str()};
}

// ---------------------------------------------------------------- criterion 2
// HCN stage 2: decoupled triad vs full manifold, with and without the CDF.
Outcome criterion_background_sensitivity(Shared& sh) {
  const PropagationResult& dec = sh.get("hcn_dec_l0", [] {
    return run(variant("hcn_stage2", 0.0, DriveMode::stirap_plus_cdf,
                       {"3", "4", "5"}));
  });
  const PropagationResult& full0 = hcn_run(sh, 0.0);
  const PropagationResult& full1 = hcn_run(sh, 1.0);

  const double fd = fidelity(dec, "5");
  const double fs = fidelity(full0, "5");
  const double fc = fidelity(full1, "5");

  std::ostringstream d;
  d << "decoupled " << fmt(fd) << " (expect 0.995+-0.005), full STIRAP "
    << fmt(fs) << " (expect 0.57+-0.07), full STIRAP+CDF " << fmt(fc)
    << " (expect 0.88+-0.05)";

  const bool in_band = std::abs(fd - 0.995) <= 0.005 &&
                       std::abs(fs - 0.57) <= 0.07 &&
                       std::abs(fc - 0.88) <= 0.05;
  if (in_band) return {true, std::move(d).str()};

  const bool fallback = (fd - fc) > 0.05 && (fc - fs) > 0.05;
  d << "; out of the quoted bands, ordering fallback (dec > cdf > stirap by "
    << ">0.05) " << (fallback ? "holds" : "fails");
  return {fallback, std::move(d).str()};
}

// ---------------------------------------------------------------- criterion 3
// The exact counter-diabatic reference transfers perfectly for every
// bundled stage: fidelity > 1-1e-6 with the intermediate never populated.
Outcome criterion_exact_cd_oracle(Shared&) {
  std::ostringstream d;
  bool pass = true;
  for (const auto& name : bundled_scenario_names()) {
    const Scenario sc = bundled_scenario(name);
    const auto drives = drives_for(sc);
    for (std::size_t k = 0; k < drives.size(); ++k) {
      Timer t;
      Rwa3System rwa = rwa3_from_drive(drives[k], true);
      Rwa3Result res = propagate_rwa3(rwa, drives[k].window_start_ps(8.0),
                                      drives[k].window_end_ps(8.0));
      const double f = res.trajectory.final_population("target");
      const double mid = res.max_intermediate_population;
      const double secs = t.seconds();
      const bool ok = f > 1.0 - 1e-6 && mid < 1e-6 && secs < 1.0;
      pass = pass && ok;
      d << name;
      if (drives.size() > 1) d << "[stage " << (k + 1) << "]";
      d << ": 1-F=" << fmt(1.0 - f, 2) << ", max P_mid=" << fmt(mid, 2)
        << ", " << fmt(secs, 2) << " s; ";
    }
  }
  return {pass, std::move(d).str()};
}

// ---------------------------------------------------------------- criterion 4
// Published peak intensities of the isomerization-stage pulses.
Outcome criterion_intensities(Shared&) {
  const Scenario sc = bundled_scenario("hcn_stage2");
  const double ip = units::intensity_w_cm2(sc.stage().pump_amplitude_au);
  const double is = units::intensity_w_cm2(sc.stage().stokes_amplitude_au);
  const double ep = std::abs(ip - 3.03e10) / 3.03e10;
  const double es = std::abs(is - 2.90e11) / 2.90e11;
  std::ostringstream d;
  d << "pump " << fmt(ip) << " W/cm^2 vs 3.03e10 (" << fmt(100 * ep, 2)
    << "%), Stokes " << fmt(is) << " W/cm^2 vs 2.90e11 (" << fmt(100 * es, 2)
    << "%)";
  return {ep <= 0.005 && es <= 0.005, std::move(d).str()};
}

// ---------------------------------------------------------------- criterion 5
// Mixing-angle analytics: sech closed form and the pi/2 sweep area.
Outcome criterion_mixing_angle_analytics(Shared&) {
  std::mt19937 rng(424242);
  std::uniform_real_distribution<double> amp(1e-7, 1e-3);
  std::uniform_real_distribution<double> width(20.0, 400.0);
  std::uniform_real_distribution<double> ratio(0.25, 6.0);

  double worst_rel = 0.0;
  double worst_area = 0.0;
  bool pass = true;
  for (int trial = 0; trial < 20; ++trial) {
    const double a = amp(rng);
    const double fwhm = width(rng);
    const double eta = ratio(rng);

    StirapDrive drv;
    drv.stokes.amplitude_au = a;
    drv.stokes.fwhm_ps = fwhm;
    drv.pump = drv.stokes;
    drv.pump.center_ps = drv.stokes.delta_tau_ps() / eta;
    drv.mu_pump = 0.2;
    drv.mu_stokes = 0.2;
    drv.eta = eta;

    const double dtau = drv.stokes.delta_tau_au();
    const double delta_t = dtau / eta;
    const double mid = 0.5 * (drv.pump.center_au() + drv.stokes.center_au());

    // Closed sech form over t_mid +- 10 dtau.
    for (int i = 0; i <= 2000; ++i) {
      const double t = mid + (i / 2000.0 - 0.5) * 20.0 * dtau;
      const double got = drv.mixing_angle_rate(t);
      const double want = (delta_t / (dtau * dtau)) /
                          std::cosh(2.0 * delta_t * (t - mid) / (dtau * dtau));
      const double rel = std::abs(got - want) / want;
      worst_rel = std::max(worst_rel, rel);
      pass = pass && rel < 1e-10;
    }

    // Full sweep area pi/2.
    const double pad = 8.0 * std::max(1.0, eta) * drv.stokes.delta_tau_ps();
    const double area = drv.pulse_area_theta(
        (drv.stokes.center_ps - pad) * units::ps_to_atu,
        (drv.pump.center_ps + pad) * units::ps_to_atu);
    worst_area = std::max(worst_area, std::abs(area - kPi / 2));
    pass = pass && std::abs(area - kPi / 2) <= 1e-6;
  }
  std::ostringstream d;
  d << "20 random pulse pairs: worst sech deviation " << fmt(worst_rel, 2)
    << " (<1e-10), worst |area - pi/2| " << fmt(worst_area, 2) << " (<=1e-6)";
  return {pass, std::move(d).str()};
}

// ---------------------------------------------------------------- criterion 6
// Complementarity: the blend beats either field alone; the SCCl2 lambda
// scan peaks strictly inside (0.7, 1.0).
Outcome criterion_complementarity(Shared& sh) {
  const double f0 = fidelity(sccl2_run(sh, 0.0), "6");
  const double f1 = fidelity(sccl2_run(sh, 1.0), "6");
  const PropagationResult& scd = sh.get("sccl2_cdf_only", [] {
    return run(variant("sccl2_1to6", 1.0, DriveMode::cdf_only));
  });
  const double fcd = fidelity(scd, "6");

  const double h0 = fidelity(hcn_run(sh, 0.0), "5");
  const double h1 = fidelity(hcn_run(sh, 1.0), "5");
  const PropagationResult& hcd = sh.get("hcn_cdf_only", [] {
    return run(variant("hcn_stage2", 1.0, DriveMode::cdf_only));
  });
  const double hcdf = fidelity(hcd, "5");

  const bool blend_wins = f1 > f0 && f1 > fcd && h1 > h0 && h1 > hcdf;

  // Focused lambda scan around the optimum.
  std::vector<double> grid;
  for (int i = 0; i <= 20; ++i) grid.push_back(0.4 + 0.05 * i);
  const ScanResult scan = scan_lambda(bundled_scenario("sccl2_1to6"), grid);
  const double peak = scan.points[scan.argmax_fidelity()].value;
  const bool peak_ok = peak > 0.7 && peak < 1.0;

  std::ostringstream d;
  d << "SCCl2 blend/stirap/cdf " << fmt(f1) << "/" << fmt(f0) << "/"
    << fmt(fcd) << ", HCN " << fmt(h1) << "/" << fmt(h0) << "/" << fmt(hcdf)
    << "; lambda peak at " << fmt(peak, 3) << " (expect in (0.7, 1.0))";
  return {blend_wins && peak_ok, std::move(d).str()};
}

// ---------------------------------------------------------------- criterion 7
// Pulse-duration trends at constant pulse area.
Outcome criterion_fwhm_trends(Shared&) {
  struct TrendCase {
    const char* scenario;
    const char* target;
    double threshold_ps;
  };
  const TrendCase cases[] = {{"sccl2_1to6", "6", 50.0},
                             {"hcn_stage2", "5", 125.0}};

  std::ostringstream d;
  bool pass = true;
  for (const TrendCase& s : cases) {
    const auto grid = default_fwhm_grid(bundled_scenario(s.scenario).dataset);
    const ScanResult with = scan_fwhm(variant(s.scenario, 1.0), grid);
    const ScanResult without = scan_fwhm(variant(s.scenario, 0.0), grid);

    bool cdf_wins = true;
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] > s.threshold_ps) {
        cdf_wins =
            cdf_wins && with.points[i].fidelity > without.points[i].fidelity;
      }
    }
    // Below the threshold the blended drive loses fidelity: every shorter
    // pulse does worse than the threshold point, and the loss deepens net
    // from the first sub-threshold grid point down to the grid minimum.
    // Pointwise monotonicity is deliberately not required — deep in the
    // collapsed regime the oversized counter-diabatic field makes the final
    // population an oscillatory function of pulse area, which puts small
    // wiggles on an otherwise fallen curve (dt-converged, not a step-size
    // artifact).
    std::size_t i_thr = grid.size();
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (grid[i] == s.threshold_ps) i_thr = i;
    }
    bool falls = i_thr != grid.size() && i_thr > 0;
    if (falls) {
      for (std::size_t i = 0; i < i_thr; ++i) {
        falls = falls && with.points[i].fidelity < with.points[i_thr].fidelity;
      }
      if (i_thr >= 2) {
        falls = falls &&
                with.points[0].fidelity < with.points[i_thr - 1].fidelity;
      }
    }
    pass = pass && cdf_wins && falls;
    d << s.scenario << ": CDF>STIRAP above " << fmt(s.threshold_ps, 4)
      << " ps " << (cdf_wins ? "holds" : "fails") << ", short-pulse collapse "
      << (falls ? "holds" : "fails");
    if (i_thr != grid.size() && i_thr > 0) {
      d << " (" << fmt(with.points[0].fidelity, 4) << " at " << fmt(grid[0], 4)
        << " ps vs " << fmt(with.points[i_thr].fidelity, 4) << " at threshold)";
    }
    d << "; ";
  }
  return {pass, std::move(d).str()};
}

// ---------------------------------------------------------------- criterion 8
// Numerical integrity: norm conservation, step-halving stability and
// thread-count invariance of scans.
Outcome criterion_numerics(Shared& sh) {
  std::ostringstream d;
  bool pass = true;

  // Norm drift at the reference step for all bundled scenarios.
  const struct {
    const char* key;
    const char* name;
  } runs[] = {{"sccl2_l1", "sccl2_1to6"},
              {"sccl2_1to3", "sccl2_1to3"},
              {"hcn_l1", "hcn_stage2"},
              {"hcn_seq", "hcn_sequential"}};
  double worst_drift = 0.0;
  for (const auto& rr : runs) {
    const PropagationResult& r = sh.get(rr.key, [&rr] {
      return run(bundled_scenario(rr.name));
    });
    worst_drift = std::max(worst_drift, r.norm_drift);
    pass = pass && r.norm_drift < 1e-8;
  }
  d << "worst norm drift " << fmt(worst_drift, 2) << " (<1e-8)";

  // Step halving moves no population by more than 1e-4.
  double worst_delta = 0.0;
  for (const auto& rr : runs) {
    const Scenario sc = bundled_scenario(rr.name);
    const auto drives = drives_for(sc);
    PropagationConfig cfg;
    cfg.initial_state = sc.initial_label();
    const ConvergenceReport c = sh.convergence(rr.key, [&] {
      return convergence_check(*sc.system, drives, cfg);
    });
    worst_delta = std::max(worst_delta, c.max_population_delta);
    pass = pass && c.max_population_delta < 1e-4;
  }
  d << ", worst halving delta " << fmt(worst_delta, 2) << " (<1e-4)";

  // Scans are identical for 1 and N workers (bit-for-bit).
  Scenario sc = bundled_scenario("hcn_stage2");
  sc.subset = {"3", "4", "5"};
  const double scale = sc.stages[0].fwhm_ps / 50.0;
  sc.stages[0].fwhm_ps = 50.0;
  sc.stages[0].pump_amplitude_au *= scale;
  sc.stages[0].stokes_amplitude_au *= scale;
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  const ScanResult one = scan_lambda(sc, grid, 1);
  const ScanResult four = scan_lambda(sc, grid, 4);
  bool identical = one.points.size() == four.points.size();
  for (std::size_t i = 0; identical && i < one.points.size(); ++i) {
    identical = one.points[i].fidelity == four.points[i].fidelity &&
                one.points[i].leakage == four.points[i].leakage &&
                one.points[i].norm_drift == four.points[i].norm_drift;
  }
  pass = pass && identical;
  d << ", 1-vs-4-thread scan " << (identical ? "identical" : "DIFFERS");

  return {pass, std::move(d).str()};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      wanted.insert(std::atoi(argv[i + 1]));
      ++i;
    }
  }

  const struct {
    int id;
    const char* name;
    Outcome (*fn)(Shared&);
  } criteria[] = {
      {1, "headline fidelities", criterion_headline_fidelities},
      {2, "background sensitivity", criterion_background_sensitivity},
      {3, "exact-CD oracle", criterion_exact_cd_oracle},
      {4, "pulse intensities", criterion_intensities},
      {5, "mixing-angle analytics", criterion_mixing_angle_analytics},
      {6, "field complementarity", criterion_complementarity},
      {7, "FWHM trends", criterion_fwhm_trends},
      {8, "numerical integrity", criterion_numerics},
  };

  Shared shared;
  bool all_pass = true;
  for (const auto& c : criteria) {
    if (!wanted.empty() && wanted.count(c.id) == 0) continue;
    Outcome out;
    Timer t;
    try {
      out = c.fn(shared);
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    all_pass = all_pass && out.pass;
    std::cout << (out.pass ? "[PASS]" : "[FAIL]") << " criterion " << c.id
              << " (" << c.name << "): " << out.detail << " [" << fmt(t.seconds(), 3)
              << " s]" << std::endl;
  }
  return all_pass ? EXIT_SUCCESS : EXIT_FAILURE;
}
