// stirapcd -- command-line front end for the STIRAP / counter-diabatic
// drive simulator.  Three subcommands:
//
//   propagate   run one scenario, write trajectory.csv + summary.txt
//   scan        sweep lambda, FWHM, or eta; write scan_<axis>.csv
//   validate    re-derive reference numbers for a dataset and print a report
//
// Exit codes: 0 success, 1 configuration/data error, 2 integration failure.

#include <CLI11.hpp>

#include "stirapcd/errors.hpp"
#include "stirapcd/level_system.hpp"
#include "stirapcd/propagator.hpp"
#include "stirapcd/pulse.hpp"
#include "stirapcd/rwa3.hpp"
#include "stirapcd/scenarios.hpp"
#include "stirapcd/units.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using namespace stirapcd;

namespace {

// ---------------------------------------------------------------------------
// Locale-independent number formatting (shortest round-trip / fixed styles).

std::string fmt(double v) {
  char buf[40];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::string fmt_general(double v, int precision) {
  char buf[48];
  auto [p, ec] =
      std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general,
                    precision);
  return std::string(buf, p);
}

std::string fmt_sci(double v, int precision) {
  char buf[48];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v,
                               std::chars_format::scientific, precision);
  return std::string(buf, p);
}

// ---------------------------------------------------------------------------
// Small string utilities for the config reader.

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

double parse_double(const std::string& text, const std::string& key) {
  const std::string t = trim(text);
  double v = 0.0;
  const char* first = t.data();
  const char* last = t.data() + t.size();
  auto [p, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || p != last) {
    throw DataError("config key '" + key + "': cannot parse number '" + t +
                    "'");
  }
  return v;
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Config file: line-oriented `key = value`, '#' comments, unknown keys
// rejected.  Stage fields may be given bare (single-stage shorthand, stage 1)
// or with a `stageN.` prefix for sequential schedules.

struct ConfigData {
  std::string name;
  std::string dataset;
  std::string levels_csv, tdm_csv;  // custom dataset paths
  std::string mode;                 // "stirap_plus_cdf" | "cdf_only"
  std::string picture;              // "interaction" | "schrodinger"
  std::string initial_state;        // propagation override
  std::vector<std::string> subset;
  bool subset_set = false;
  double pump_phase_rad = 0.0, stokes_phase_rad = 0.0, cdf_phase_rad = 0.0;
  std::optional<double> dt_au, window_start_ps, window_end_ps,
      sample_stride_ps, norm_tolerance;
  std::map<int, StageSpec> stages;
};

bool apply_stage_key(StageSpec& st, const std::string& field,
                     const std::string& value, const std::string& key) {
  if (field == "initial") st.initial = trim(value);
  else if (field == "intermediate") st.intermediate = trim(value);
  else if (field == "target") st.target = trim(value);
  else if (field == "pump_amplitude_au") st.pump_amplitude_au = parse_double(value, key);
  else if (field == "stokes_amplitude_au") st.stokes_amplitude_au = parse_double(value, key);
  else if (field == "fwhm_ps") st.fwhm_ps = parse_double(value, key);
  else if (field == "stokes_center_ps") st.stokes_center_ps = parse_double(value, key);
  else if (field == "pump_center_ps") st.pump_center_ps = parse_double(value, key);
  else if (field == "lambda") st.lambda = parse_double(value, key);
  else if (field == "eta") st.eta = parse_double(value, key);
  else return false;
  return true;
}

ConfigData parse_config(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open config file '" + path.string() + "'");

  ConfigData cd;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) {
      line.erase(hash);
    }
    const std::string stripped = trim(line);
    if (stripped.empty()) continue;

    const auto eq = stripped.find('=');
    if (eq == std::string::npos) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": expected 'key = value'");
    }
    const std::string key = trim(stripped.substr(0, eq));
    const std::string value = trim(stripped.substr(eq + 1));
    if (key.empty()) {
      throw DataError(path.string() + ":" + std::to_string(line_no) +
                      ": empty key");
    }

    try {
      if (key == "name") cd.name = value;
      else if (key == "dataset") cd.dataset = value;
      else if (key == "levels_csv") cd.levels_csv = value;
      else if (key == "tdm_csv") cd.tdm_csv = value;
      else if (key == "mode") cd.mode = value;
      else if (key == "picture") cd.picture = value;
      else if (key == "initial_state") cd.initial_state = value;
      else if (key == "subset") { cd.subset = split_list(value); cd.subset_set = true; }
      else if (key == "pump_phase_rad") cd.pump_phase_rad = parse_double(value, key);
      else if (key == "stokes_phase_rad") cd.stokes_phase_rad = parse_double(value, key);
      else if (key == "cdf_phase_rad") cd.cdf_phase_rad = parse_double(value, key);
      else if (key == "dt_au") cd.dt_au = parse_double(value, key);
      else if (key == "window_start_ps") cd.window_start_ps = parse_double(value, key);
      else if (key == "window_end_ps") cd.window_end_ps = parse_double(value, key);
      else if (key == "sample_stride_ps") cd.sample_stride_ps = parse_double(value, key);
      else if (key == "norm_tolerance") cd.norm_tolerance = parse_double(value, key);
      else if (key.rfind("stage", 0) == 0 && key.find('.') != std::string::npos) {
        const auto dot = key.find('.');
        if (dot == 5) throw DataError("malformed stage key '" + key + "'");
        int n = 0;
        const char* first = key.data() + 5;
        const char* last = key.data() + dot;
        auto [p, ec] = std::from_chars(first, last, n);
        if (ec != std::errc() || p != last || n < 1) {
          throw DataError("malformed stage key '" + key + "'");
        }
        const std::string field = key.substr(dot + 1);
        if (!apply_stage_key(cd.stages[n], field, value, key)) {
          throw DataError("unknown stage field '" + field + "' in key '" +
                          key + "'");
        }
      } else {
        // Bare stage fields are stage-1 shorthand for single-stage configs.
        auto it = cd.stages.find(1);
        StageSpec tmp = it == cd.stages.end() ? StageSpec{} : it->second;
        if (!apply_stage_key(tmp, key, value, key)) {
          throw DataError("unknown config key '" + key + "'");
        }
        cd.stages[1] = tmp;
      }
    } catch (const DataError& e) {
      throw DataError(path.string() + ":" + std::to_string(line_no) + ": " +
                      e.what());
    }
  }
  return cd;
}

// ---------------------------------------------------------------------------
// Assemble a runnable scenario + propagation config from config/flags.

struct RunSetup {
  Scenario sc;
  PropagationConfig cfg;
  std::unique_ptr<LevelSystem> owned_system;  // backs sc.system for custom data
};

DriveMode parse_mode(const std::string& text) {
  if (text == "stirap_plus_cdf") return DriveMode::stirap_plus_cdf;
  if (text == "cdf_only") return DriveMode::cdf_only;
  throw DataError("unknown drive mode '" + text +
                  "' (expected stirap_plus_cdf or cdf_only)");
}

Picture parse_picture(const std::string& text) {
  if (text == "interaction") return Picture::interaction;
  if (text == "schrodinger") return Picture::schrodinger;
  throw DataError("unknown picture '" + text +
                  "' (expected interaction or schrodinger)");
}

RunSetup setup_from_config(const fs::path& path) {
  const ConfigData cd = parse_config(path);
  RunSetup rs;

  rs.sc.name = cd.name.empty() ? path.stem().string() : cd.name;

  if (!cd.levels_csv.empty() || !cd.tdm_csv.empty()) {
    if (cd.levels_csv.empty() || cd.tdm_csv.empty()) {
      throw DataError(path.string() +
                      ": custom datasets need both levels_csv and tdm_csv");
    }
    if (!cd.dataset.empty() && cd.dataset != "custom") {
      throw DataError(path.string() +
                      ": dataset must be 'custom' (or omitted) when "
                      "levels_csv/tdm_csv are given");
    }
    // Paths are resolved relative to the config file.
    const fs::path base = path.parent_path();
    rs.owned_system = std::make_unique<LevelSystem>(LevelSystem::load(
        base / cd.levels_csv, base / cd.tdm_csv));
    rs.sc.dataset = "custom";
    rs.sc.system = rs.owned_system.get();
  } else if (!cd.dataset.empty()) {
    rs.sc.dataset = cd.dataset;
    rs.sc.system = &builtin_dataset(cd.dataset);
  } else {
    throw DataError(path.string() +
                    ": config needs a dataset (or levels_csv + tdm_csv)");
  }

  if (cd.stages.empty()) {
    throw DataError(path.string() + ": config defines no pulse stage");
  }
  int expect = 1;
  for (const auto& [n, st] : cd.stages) {
    if (n != expect) {
      throw DataError(path.string() + ": stage" + std::to_string(n) +
                      " configured but stage" + std::to_string(expect) +
                      " is missing");
    }
    if (st.initial.empty() || st.intermediate.empty() || st.target.empty()) {
      throw DataError(path.string() + ": stage" + std::to_string(n) +
                      " needs initial, intermediate, and target labels");
    }
    rs.sc.stages.push_back(st);
    ++expect;
  }

  if (cd.subset_set) rs.sc.subset = cd.subset;
  if (!cd.mode.empty()) rs.sc.mode = parse_mode(cd.mode);
  rs.sc.pump_phase_rad = cd.pump_phase_rad;
  rs.sc.stokes_phase_rad = cd.stokes_phase_rad;
  rs.sc.cdf_phase_rad = cd.cdf_phase_rad;

  if (cd.dt_au) rs.cfg.dt_au = *cd.dt_au;
  if (cd.window_start_ps || cd.window_end_ps) {
    if (!cd.window_start_ps || !cd.window_end_ps) {
      throw DataError(path.string() +
                      ": window_start_ps and window_end_ps must be given "
                      "together");
    }
    rs.cfg.auto_window = false;
    rs.cfg.window_start_ps = *cd.window_start_ps;
    rs.cfg.window_end_ps = *cd.window_end_ps;
  }
  if (cd.sample_stride_ps) rs.cfg.sample_stride_ps = *cd.sample_stride_ps;
  if (cd.norm_tolerance) rs.cfg.norm_tolerance = *cd.norm_tolerance;
  if (!cd.picture.empty()) rs.cfg.picture = parse_picture(cd.picture);
  if (!cd.initial_state.empty()) rs.cfg.initial_state = cd.initial_state;

  return rs;
}

// ---------------------------------------------------------------------------
// Common flags shared by propagate and scan.

struct CommonOpts {
  std::string dataset;  // bundled scenario name
  std::string config;   // config file path
  std::string out = ".";
  double dt_au = 0.0;
  bool dt_set = false;
  double lambda = 0.0;
  bool lambda_set = false;
  double eta = 0.0;
  bool eta_set = false;
  double fwhm_ps = 0.0;
  bool fwhm_set = false;
  std::string subset;
  bool subset_set = false;
  std::string picture;
  int threads = 1;
};

void add_common_flags(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--dataset", o.dataset,
                  "Bundled scenario: sccl2_1to6, sccl2_1to3, hcn_stage2, "
                  "hcn_sequential");
  cmd->add_option("--config", o.config, "Scenario config file (key = value)");
  cmd->add_option("--out", o.out, "Output directory (default: .)");
  cmd->add_option("--dt-au", o.dt_au, "Time step override in atomic units")
      ->check(CLI::PositiveNumber)
      ->each([&o](const std::string&) { o.dt_set = true; });
  cmd->add_option("--lambda", o.lambda,
                  "Counter-diabatic admixture override (all stages)")
      ->each([&o](const std::string&) { o.lambda_set = true; });
  cmd->add_option("--eta", o.eta,
                  "Pulse-delay ratio override delta_tau/Delta T (all stages)")
      ->check(CLI::PositiveNumber)
      ->each([&o](const std::string&) { o.eta_set = true; });
  cmd->add_option("--fwhm-ps", o.fwhm_ps,
                  "Pulse FWHM override in ps (all stages; amplitudes kept)")
      ->check(CLI::PositiveNumber)
      ->each([&o](const std::string&) { o.fwhm_set = true; });
  cmd->add_option("--subset", o.subset,
                  "Comma-separated labels to restrict the propagated basis")
      ->each([&o](const std::string&) { o.subset_set = true; });
  cmd->add_option("--picture", o.picture, "interaction | schrodinger");
  cmd->add_option("--threads", o.threads, "Worker threads for scan points")
      ->check(CLI::PositiveNumber);
}

RunSetup make_setup(const CommonOpts& o) {
  if (o.dataset.empty() == o.config.empty()) {
    throw DataError("give exactly one of --dataset or --config");
  }
  RunSetup rs;
  if (!o.config.empty()) {
    rs = setup_from_config(o.config);
  } else {
    rs.sc = bundled_scenario(o.dataset);
  }

  for (StageSpec& st : rs.sc.stages) {
    if (o.lambda_set) st.lambda = o.lambda;
    if (o.eta_set) st.eta = o.eta;
    if (o.fwhm_set) st.fwhm_ps = o.fwhm_ps;
  }
  if (o.subset_set) rs.sc.subset = split_list(o.subset);
  if (!o.picture.empty()) rs.cfg.picture = parse_picture(o.picture);
  if (o.dt_set) rs.cfg.dt_au = o.dt_au;
  return rs;
}

std::ofstream open_output(const fs::path& dir, const std::string& file) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  const fs::path full = dir / file;
  std::ofstream out(full);
  if (!out) throw DataError("cannot write '" + full.string() + "'");
  return out;
}

// ---------------------------------------------------------------------------
// propagate

void write_trajectory(const fs::path& dir, const PropagationResult& res) {
  std::ofstream out = open_output(dir, "trajectory.csv");
  out << "t_ps";
  for (const std::string& label : res.labels) out << ",P_" << label;
  out << ",norm\n";
  for (std::size_t i = 0; i < res.times_ps.size(); ++i) {
    out << fmt(res.times_ps[i]);
    const auto row = res.populations.row(static_cast<int>(i));
    for (int j = 0; j < row.size(); ++j) out << ',' << fmt(row(j));
    out << ',' << fmt(row.sum()) << '\n';
  }
}

void write_stage_report(std::ostream& out, const Scenario& sc,
                        const std::vector<StirapDrive>& drives,
                        const std::string& prefix, bool human) {
  for (std::size_t k = 0; k < drives.size(); ++k) {
    const StirapDrive& d = drives[k];
    const StageSpec& st = sc.stages[k];
    const std::string tag = prefix + "stage" + std::to_string(k + 1) + ".";
    const auto emit = [&](const std::string& key, const std::string& val) {
      if (human) {
        out << "  " << key << " = " << val << '\n';
      } else {
        out << tag << key << " = " << val << '\n';
      }
    };
    if (human) {
      out << "stage " << (k + 1) << ": " << st.initial << " -> "
          << st.intermediate << " -> " << st.target << '\n';
    } else {
      out << tag << "ladder = " << st.initial << " -> " << st.intermediate
          << " -> " << st.target << '\n';
    }
    emit("pump_carrier_cm1", fmt(d.pump.carrier_cm1));
    emit("stokes_carrier_cm1", fmt(d.stokes.carrier_cm1));
    emit("cdf_carrier_cm1", fmt(d.cdf_carrier_cm1));
    emit("pump_peak_rabi_au", fmt_sci(d.pump_rabi().peak(), 6));
    emit("stokes_peak_rabi_au", fmt_sci(d.stokes_rabi().peak(), 6));
    emit("pump_peak_intensity_w_cm2",
         fmt_sci(units::intensity_w_cm2(d.pump.amplitude_au), 2));
    emit("stokes_peak_intensity_w_cm2",
         fmt_sci(units::intensity_w_cm2(d.stokes.amplitude_au), 2));
    emit("adiabaticity", fmt_general(adiabaticity_metric(d), 6));
    emit("pulse_area_rad",
         fmt_general(d.pulse_area_theta(d.window_start_ps(8.0) * units::ps_to_atu,
                                        d.window_end_ps(8.0) * units::ps_to_atu),
                     9));
  }
}

int cmd_propagate(const CommonOpts& o) {
  RunSetup rs = make_setup(o);
  const std::vector<StirapDrive> drives = drives_for(rs.sc);
  const PropagationResult res = run(rs.sc, rs.cfg);
  const double fid = fidelity(res, rs.sc.target_label());

  write_trajectory(o.out, res);

  std::ofstream out = open_output(o.out, "summary.txt");
  out << "scenario = " << rs.sc.name << '\n';
  out << "dataset = " << rs.sc.dataset << '\n';
  out << "initial = " << rs.sc.initial_label() << '\n';
  out << "target = " << rs.sc.target_label() << '\n';
  out << "picture = "
      << (rs.cfg.picture == Picture::interaction ? "interaction"
                                                 : "schrodinger")
      << '\n';
  out << "states = " << res.labels.size() << '\n';
  out << "fidelity = " << fmt(fid) << '\n';
  out << "norm_drift = " << fmt(res.norm_drift) << '\n';
  out << "dt_au = " << fmt(res.dt_au) << '\n';
  out << "steps = " << res.steps << '\n';
  out << "samples = " << res.times_ps.size() << '\n';
  out << "window_start_ps = " << fmt(res.window_start_ps) << '\n';
  out << "window_end_ps = " << fmt(res.window_end_ps) << '\n';
  write_stage_report(out, rs.sc, drives, "", /*human=*/false);

  std::cout << "scenario " << rs.sc.name << ": fidelity = " << fmt_general(fid, 6)
            << ", norm drift = " << fmt_sci(res.norm_drift, 2) << '\n'
            << "wrote " << (fs::path(o.out) / "trajectory.csv").string()
            << " and " << (fs::path(o.out) / "summary.txt").string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// scan

struct ScanOpts {
  std::string axis;
  double from = 0.0, to = 0.0, step = 0.0;
  bool from_set = false, to_set = false, step_set = false;
  std::string grid;
  std::string mode;
};

std::vector<double> resolve_grid(const ScanOpts& s, const Scenario& sc) {
  if (!s.grid.empty()) {
    if (s.from_set || s.to_set || s.step_set) {
      throw DataError("--grid and --from/--to/--step are mutually exclusive");
    }
    std::vector<double> grid;
    for (const std::string& item : split_list(s.grid)) {
      grid.push_back(parse_double(item, "--grid"));
    }
    if (grid.empty()) throw DataError("--grid is empty");
    return grid;
  }
  if (s.from_set || s.to_set || s.step_set) {
    if (!(s.from_set && s.to_set && s.step_set)) {
      throw DataError("--from, --to, and --step must be given together");
    }
    if (!(s.step > 0.0)) throw DataError("--step must be positive");
    if (s.to < s.from) throw DataError("--to must not be below --from");
    const int n = 1 + static_cast<int>(
                          std::floor((s.to - s.from) / s.step * (1.0 + 1e-12)));
    std::vector<double> grid;
    grid.reserve(n);
    for (int i = 0; i < n; ++i) grid.push_back(s.from + i * s.step);
    return grid;
  }
  if (s.axis == "lambda") return default_lambda_grid();
  if (s.axis == "fwhm") return default_fwhm_grid(sc.dataset);
  return default_eta_grid();
}

int cmd_scan(const CommonOpts& o, const ScanOpts& s) {
  RunSetup rs = make_setup(o);
  if (!s.mode.empty()) rs.sc.mode = parse_mode(s.mode);
  const std::vector<double> grid = resolve_grid(s, rs.sc);

  ScanResult sr;
  if (s.axis == "lambda") {
    sr = scan_lambda(rs.sc, grid, o.threads, rs.cfg);
  } else if (s.axis == "fwhm") {
    sr = scan_fwhm(rs.sc, grid, o.threads, rs.cfg);
  } else if (s.axis == "eta") {
    sr = scan_eta(rs.sc, grid, o.threads, rs.cfg);
  } else {
    throw DataError("unknown scan axis '" + s.axis +
                    "' (expected lambda, fwhm, or eta)");
  }

  const std::string file = "scan_" + s.axis + ".csv";
  std::ofstream out = open_output(o.out, file);
  out << sr.parameter << ",fidelity,leakage,norm_drift\n";
  for (const ScanPoint& p : sr.points) {
    out << fmt(p.value) << ',' << fmt(p.fidelity) << ',' << fmt(p.leakage)
        << ',' << fmt(p.norm_drift) << '\n';
  }

  const int best = sr.argmax_fidelity();
  std::cout << "scan " << sr.parameter << ": " << sr.points.size()
            << " points, best fidelity " << fmt_general(sr.points[best].fidelity, 6)
            << " at " << sr.parameter << " = " << fmt(sr.points[best].value)
            << '\n'
            << "wrote " << (fs::path(o.out) / file).string() << '\n';
  return 0;
}

// ---------------------------------------------------------------------------
// validate

struct ValidateOpts {
  std::string dataset;
  std::string levels;
  std::string tdm;
};

void print_dataset_report(std::ostream& out, const LevelSystem& sys,
                          const std::string& name) {
  double lo = sys.state(0).energy_cm1, hi = lo;
  for (const SpectroState& st : sys.states()) {
    lo = std::min(lo, st.energy_cm1);
    hi = std::max(hi, st.energy_cm1);
  }
  int pairs = 0;
  for (int i = 0; i < sys.size(); ++i) {
    for (int j = i + 1; j < sys.size(); ++j) {
      if (sys.tdm()(i, j) != 0.0) ++pairs;
    }
  }
  out << "dataset " << name << ": " << sys.size() << " states, energies "
      << fmt_general(lo, 6) << " .. " << fmt_general(hi, 6)
      << " cm^-1, " << pairs << " dipole-coupled pairs\n";
  for (const std::string& w : sys.coupling_warnings()) {
    out << "warning: " << w << '\n';
  }
}

int cmd_validate(const ValidateOpts& v) {
  std::unique_ptr<LevelSystem> owned;
  const LevelSystem* sys = nullptr;
  std::string name;

  if (!v.levels.empty() || !v.tdm.empty()) {
    if (v.levels.empty() || v.tdm.empty()) {
      throw DataError("custom validation needs both --levels and --tdm");
    }
    if (!v.dataset.empty()) {
      throw DataError("give either --dataset or --levels/--tdm, not both");
    }
    owned = std::make_unique<LevelSystem>(LevelSystem::load(v.levels, v.tdm));
    sys = owned.get();
    name = "custom";
  } else {
    name = v.dataset.empty() ? "sccl2" : v.dataset;
    sys = &builtin_dataset(name);
  }

  print_dataset_report(std::cout, *sys, name);

  for (const std::string& sc_name : bundled_scenario_names()) {
    Scenario sc = bundled_scenario(sc_name);
    if (sc.dataset != name) continue;
    std::cout << "scenario " << sc_name << ":\n";
    write_stage_report(std::cout, sc, drives_for(sc), "", /*human=*/true);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "stirapcd: STIRAP and counter-diabatic-field dynamics in multilevel "
      "molecular systems"};
  app.require_subcommand(1);

  CommonOpts prop_opts;
  CLI::App* prop = app.add_subcommand(
      "propagate", "Run one scenario; write trajectory.csv and summary.txt");
  add_common_flags(prop, prop_opts);

  CommonOpts scan_opts_common;
  ScanOpts scan_opts;
  CLI::App* scan = app.add_subcommand(
      "scan", "Sweep lambda, FWHM, or eta; write scan_<axis>.csv");
  add_common_flags(scan, scan_opts_common);
  scan->add_option("--axis", scan_opts.axis, "lambda | fwhm | eta")
      ->required();
  scan->add_option("--from", scan_opts.from, "Grid start")
      ->each([&scan_opts](const std::string&) { scan_opts.from_set = true; });
  scan->add_option("--to", scan_opts.to, "Grid end (inclusive)")
      ->each([&scan_opts](const std::string&) { scan_opts.to_set = true; });
  scan->add_option("--step", scan_opts.step, "Grid spacing")
      ->each([&scan_opts](const std::string&) { scan_opts.step_set = true; });
  scan->add_option(
      "--grid", scan_opts.grid,
      "Explicit comma-separated grid (exclusive with --from/--to/--step)");
  scan->add_option("--mode", scan_opts.mode,
                   "Drive mode: stirap_plus_cdf | cdf_only");

  ValidateOpts val_opts;
  CLI::App* val = app.add_subcommand(
      "validate", "Re-derive reference numbers for a dataset");
  val->add_option("--dataset", val_opts.dataset,
                  "Bundled dataset: sccl2 | hcn (default sccl2)");
  val->add_option("--levels", val_opts.levels, "Custom levels CSV");
  val->add_option("--tdm", val_opts.tdm, "Custom couplings CSV");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (prop->parsed()) return cmd_propagate(prop_opts);
    if (scan->parsed()) return cmd_scan(scan_opts_common, scan_opts);
    return cmd_validate(val_opts);
  } catch (const IntegrationError& e) {
    std::cerr << "integration error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
