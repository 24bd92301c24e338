#include "stirapcd/scenarios.hpp"

#include "stirapcd/errors.hpp"
#include "stirapcd/units.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <sstream>
#include <thread>

namespace stirapcd {

namespace {

void require_single_stage(const Scenario& sc, std::string_view op) {
  if (sc.stages.size() != 1) {
    throw DataError(std::string(op) + " requires a single-stage scenario");
  }
}

std::string format_value(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return std::move(s).str();
}

}  // namespace

const StageSpec& Scenario::stage() const {
  if (stages.size() != 1)
    throw DataError("scenario '" + name + "' is not single-stage");
  return stages.front();
}

std::string Scenario::initial_label() const {
  if (stages.empty()) throw DataError("scenario has no stages");
  return stages.front().initial;
}

std::string Scenario::target_label() const {
  if (stages.empty()) throw DataError("scenario has no stages");
  return stages.back().target;
}

std::vector<StirapDrive> drives_for(const Scenario& sc) {
  if (sc.system == nullptr)
    throw DataError("scenario '" + sc.name + "' has no level system");
  if (sc.stages.empty())
    throw DataError("scenario '" + sc.name + "' has no stages");

  std::vector<StirapDrive> drives;
  drives.reserve(sc.stages.size());
  for (const auto& st : sc.stages) {
    StirapDrive d = make_drive(*sc.system, st.initial, st.intermediate,
                               st.target, st.pump_amplitude_au,
                               st.stokes_amplitude_au, st.fwhm_ps, st.lambda,
                               st.eta, st.stokes_center_ps);
    if (!std::isnan(st.pump_center_ps)) {
      if (!(st.pump_center_ps > st.stokes_center_ps)) {
        throw DataError("pump center must come after the Stokes center "
                        "(counter-intuitive ordering)");
      }
      d.pump.center_ps = st.pump_center_ps;
      d.eta = d.pump.delta_tau_ps() / (st.pump_center_ps - st.stokes_center_ps);
    }
    d.mode = sc.mode;
    d.pump.phase_rad = sc.pump_phase_rad;
    d.stokes.phase_rad = sc.stokes_phase_rad;
    d.cdf_phase_rad = sc.cdf_phase_rad;
    drives.push_back(std::move(d));
  }

  // Stages must be played in order: all four (or 2k) centers non-decreasing.
  double last = -std::numeric_limits<double>::infinity();
  for (const auto& d : drives) {
    if (d.stokes.center_ps < last || d.pump.center_ps < d.stokes.center_ps) {
      throw DataError("stage pulse centers are not ordered in time");
    }
    last = d.pump.center_ps;
  }
  return drives;
}

StirapDrive drive_for(const Scenario& sc) {
  require_single_stage(sc, "drive_for");
  return drives_for(sc).front();
}

PropagationResult run(const Scenario& sc, const PropagationConfig& base) {
  if (sc.system == nullptr)
    throw DataError("scenario '" + sc.name + "' has no level system");
  PropagationConfig cfg = base;
  if (cfg.subset.empty()) cfg.subset = sc.subset;
  if (cfg.initial_state.empty()) cfg.initial_state = sc.initial_label();
  const auto drives = drives_for(sc);
  return propagate(*sc.system, drives, cfg);
}

double fidelity(const PropagationResult& r, std::string_view target) {
  return r.final_population(target);
}

double leakage(const PropagationResult& r,
               std::span<const std::string> labels) {
  if (r.populations.rows() == 0) throw DataError("empty propagation result");
  double inside = 0.0;
  for (const auto& label : labels)
    inside += r.populations(r.populations.rows() - 1, r.column(label));
  return 1.0 - inside;
}

int ScanResult::argmax_fidelity() const {
  if (points.empty()) throw DataError("empty scan");
  int best = 0;
  for (int i = 1; i < static_cast<int>(points.size()); ++i)
    if (points[i].fidelity > points[best].fidelity) best = i;
  return best;
}

namespace {

// Labels against which scan leakage is reported: the scenario's explicit
// subset if any, else the union of its stage ladders, in system order.
std::vector<std::string> bookkeeping_labels(const Scenario& sc) {
  if (!sc.subset.empty()) return sc.subset;
  std::vector<std::string> labels;
  for (const auto& st : sc.stages) {
    for (const auto& label : {st.initial, st.intermediate, st.target}) {
      if (std::find(labels.begin(), labels.end(), label) == labels.end())
        labels.push_back(label);
    }
  }
  return labels;
}

ScanResult scan_impl(const Scenario& sc, std::span<const double> grid,
                     int threads, const PropagationConfig& base,
                     std::string parameter,
                     const std::function<Scenario(double)>& variant_for) {
  if (grid.empty()) throw DataError("scan grid is empty");

  const auto watch = bookkeeping_labels(sc);

  ScanResult result;
  result.parameter = std::move(parameter);
  result.points.resize(grid.size());
  std::vector<std::exception_ptr> failures(grid.size());

  const auto evaluate = [&](std::size_t i) {
    const Scenario variant = variant_for(grid[i]);
    const PropagationResult r = run(variant, base);
    ScanPoint p;
    p.value = grid[i];
    p.fidelity = fidelity(r, variant.target_label());
    p.leakage = leakage(r, watch);
    p.norm_drift = r.norm_drift;
    result.points[i] = p;
  };

  const int workers =
      std::clamp<int>(threads, 1, static_cast<int>(grid.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      try {
        evaluate(i);
      } catch (...) {
        failures[i] = std::current_exception();
        break;
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    const auto work = [&] {
      std::size_t i;
      while ((i = next.fetch_add(1)) < grid.size()) {
        try {
          evaluate(i);
        } catch (...) {
          failures[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!failures[i]) continue;
    const std::string at =
        result.parameter + " = " + format_value(grid[i]) + ": ";
    try {
      std::rethrow_exception(failures[i]);
    } catch (const IntegrationError& e) {
      throw IntegrationError(at + e.what());
    } catch (const std::exception& e) {
      throw DataError(at + e.what());
    }
  }
  return result;
}

}  // namespace

ScanResult scan_lambda(const Scenario& sc, std::span<const double> grid,
                       int threads, const PropagationConfig& base) {
  require_single_stage(sc, "scan_lambda");
  return scan_impl(sc, grid, threads, base, "lambda", [&sc](double value) {
    Scenario v = sc;
    v.stages.front().lambda = value;
    return v;
  });
}

ScanResult scan_fwhm(const Scenario& sc, std::span<const double> grid,
                     int threads, const PropagationConfig& base) {
  require_single_stage(sc, "scan_fwhm");
  if (!std::isnan(sc.stage().pump_center_ps)) {
    throw DataError("scan_fwhm needs the pump center derived from eta, not "
                    "pinned explicitly");
  }
  for (double f : grid)
    if (!(f > 0.0)) throw DataError("FWHM grid values must be positive");

  return scan_impl(sc, grid, threads, base, "fwhm_ps", [&sc](double value) {
    Scenario v = sc;
    StageSpec& st = v.stages.front();
    // Constant pulse area: amplitude scales inversely with duration; the
    // pump delay keeps tracking delta_tau / eta through the rebuild.
    const double rescale = st.fwhm_ps / value;
    st.pump_amplitude_au *= rescale;
    st.stokes_amplitude_au *= rescale;
    st.fwhm_ps = value;
    return v;
  });
}

ScanResult scan_eta(const Scenario& sc, std::span<const double> grid,
                    int threads, const PropagationConfig& base) {
  require_single_stage(sc, "scan_eta");
  if (!std::isnan(sc.stage().pump_center_ps)) {
    throw DataError("scan_eta needs the pump center derived from eta, not "
                    "pinned explicitly");
  }
  for (double e : grid)
    if (!(e > 0.0)) throw DataError("eta grid values must be positive");

  return scan_impl(sc, grid, threads, base, "eta", [&sc](double value) {
    Scenario v = sc;
    v.stages.front().eta = value;
    return v;
  });
}

std::vector<double> default_lambda_grid() {
  std::vector<double> grid;
  grid.reserve(41);
  for (int i = 0; i <= 40; ++i) grid.push_back(i * 0.05);
  return grid;
}

std::vector<double> default_fwhm_grid(std::string_view dataset) {
  if (dataset == "sccl2")
    return {25.0, 35.0, 50.0, 70.0, 100.0, 140.0, 215.0, 300.0, 430.0};
  if (dataset == "hcn")
    return {50.0, 71.0, 100.0, 125.0, 150.0, 212.5, 300.0, 425.0};
  throw DataError("no default FWHM grid for dataset '" + std::string(dataset) +
                  "'");
}

std::vector<double> default_eta_grid() { return {0.5, 1.0, 2.0, 3.0, 4.0, 5.0}; }

namespace {

StageSpec sccl2_1to6_stage() {
  StageSpec st;
  st.initial = "1";
  st.intermediate = "5a";
  st.target = "6";
  st.pump_amplitude_au = 3.11e-6;
  st.stokes_amplitude_au = 3.44e-6;
  st.fwhm_ps = 215.0;
  st.lambda = 1.0;
  return st;
}

}  // namespace

Scenario bundled_scenario(std::string_view name) {
  Scenario sc;
  sc.name = std::string(name);

  if (name == "sccl2_1to6") {
    sc.dataset = "sccl2";
    sc.system = &builtin_dataset("sccl2");
    sc.stages = {sccl2_1to6_stage()};
    return sc;
  }
  if (name == "sccl2_1to3") {
    sc.dataset = "sccl2";
    sc.system = &builtin_dataset("sccl2");
    // Same peak Rabi frequencies as the 1 -> 6 ladder, retargeted through
    // the 1 -> 2 -> 3 couplings.
    const StageSpec ref = sccl2_1to6_stage();
    const LevelSystem& sys = *sc.system;
    StageSpec st;
    st.initial = "1";
    st.intermediate = "2";
    st.target = "3";
    st.pump_amplitude_au =
        ref.pump_amplitude_au * sys.mu("1", "5a") / sys.mu("1", "2");
    st.stokes_amplitude_au =
        ref.stokes_amplitude_au * sys.mu("5a", "6") / sys.mu("2", "3");
    st.fwhm_ps = ref.fwhm_ps;
    st.lambda = 1.0;
    sc.stages = {st};
    return sc;
  }
  if (name == "hcn_stage2") {
    sc.dataset = "hcn";
    sc.system = &builtin_dataset("hcn");
    StageSpec st;
    st.initial = "3";
    st.intermediate = "4";
    st.target = "5";
    st.pump_amplitude_au = 0.0009295;
    st.stokes_amplitude_au = 0.002875;
    st.fwhm_ps = 212.5;
    st.lambda = 1.0;
    sc.stages = {st};
    return sc;
  }
  if (name == "hcn_sequential") {
    sc.dataset = "hcn";
    sc.system = &builtin_dataset("hcn");
    StageSpec s1;
    s1.initial = "1";
    s1.intermediate = "2";
    s1.target = "3";
    s1.pump_amplitude_au = 0.00728;
    s1.pump_center_ps = 194.0;
    s1.stokes_amplitude_au = 0.00692;
    s1.stokes_center_ps = 133.0;
    s1.fwhm_ps = 85.0;
    StageSpec s2;
    s2.initial = "3";
    s2.intermediate = "4";
    s2.target = "5";
    s2.pump_amplitude_au = 0.00220;
    s2.pump_center_ps = 484.0;
    s2.stokes_amplitude_au = 0.00575;
    s2.stokes_center_ps = 423.0;
    s2.fwhm_ps = 85.0;
    sc.stages = {s1, s2};
    return sc;
  }
  throw DataError("unknown bundled scenario '" + std::string(name) +
                  "'; available: sccl2_1to6, sccl2_1to3, hcn_stage2, "
                  "hcn_sequential");
}

std::vector<std::string> bundled_scenario_names() {
  return {"sccl2_1to6", "sccl2_1to3", "hcn_stage2", "hcn_sequential"};
}

}  // namespace stirapcd
