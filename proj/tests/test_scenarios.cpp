#include <doctest.h>

#include <cmath>
#include <vector>

#include "stirapcd/errors.hpp"
#include "stirapcd/level_system.hpp"
#include "stirapcd/scenarios.hpp"
#include "stirapcd/units.hpp"

using namespace stirapcd;

namespace {

// Light synthetic ladder for scan-machinery tests: soft carriers keep the
// default step large and each propagation at a few tens of milliseconds.
const LevelSystem& toy_system() {
  static LevelSystem sys = LevelSystem::parse(
      "a,0\nb,500\nc,140\nx,800\n",
      "a,b,0.08\nb,c,0.05\na,c,0.004\nb,x,0.02\n");
  return sys;
}

Scenario toy_scenario(double lambda = 1.0) {
  Scenario sc;
  sc.name = "toy";
  sc.dataset = "custom";
  sc.system = &toy_system();
  StageSpec st;
  st.initial = "a";
  st.intermediate = "b";
  st.target = "c";
  st.pump_amplitude_au = 4e-5;
  st.stokes_amplitude_au = 6e-5;
  st.fwhm_ps = 5.0;
  st.lambda = lambda;
  sc.stages.push_back(st);
  return sc;
}

}  // namespace

TEST_CASE("bundled scenario inventory") {
  auto names = bundled_scenario_names();
  REQUIRE(names.size() == 4);
  for (const auto& n : names) {
    Scenario sc = bundled_scenario(n);
    CHECK(sc.name == n);
    REQUIRE(sc.system != nullptr);
    CHECK(!sc.stages.empty());
    // Every bundled stage must materialize into valid drives.
    auto drives = drives_for(sc);
    CHECK(drives.size() == sc.stages.size());
  }
  CHECK_THROWS_AS(bundled_scenario("nope"), DataError);
}

TEST_CASE("bundled SCCl2 demonstration parameters") {
  Scenario sc = bundled_scenario("sccl2_1to6");
  CHECK(sc.dataset == "sccl2");
  REQUIRE(sc.stages.size() == 1);
  const StageSpec& st = sc.stage();
  CHECK(st.initial == "1");
  CHECK(st.intermediate == "5a");
  CHECK(st.target == "6");
  CHECK(st.pump_amplitude_au == 3.11e-6);
  CHECK(st.stokes_amplitude_au == 3.44e-6);
  CHECK(st.fwhm_ps == 215.0);
  CHECK(st.lambda == 1.0);
  CHECK(st.eta == 1.0);

  StirapDrive d = drive_for(sc);
  CHECK(d.pump.carrier_cm1 == doctest::Approx(858.4849).epsilon(1e-12));
  CHECK(d.stokes.carrier_cm1 == doctest::Approx(454.4743).epsilon(1e-12));
  CHECK(d.cdf_carrier_cm1 == doctest::Approx(1312.9592).epsilon(1e-12));
  CHECK(d.cdf_sign == 1.0);
  CHECK(d.stokes.center_ps == 0.0);
  CHECK(d.pump.center_ps == doctest::Approx(129.12065894454335).epsilon(1e-12));

  CHECK(sc.initial_label() == "1");
  CHECK(sc.target_label() == "6");
}

TEST_CASE("bundled secondary SCCl2 ladder keeps the reference Rabi peaks") {
  Scenario sc = bundled_scenario("sccl2_1to3");
  const StageSpec& st = sc.stage();
  CHECK(st.initial == "1");
  CHECK(st.intermediate == "2");
  CHECK(st.target == "3");
  // Amplitudes chosen so the peak Rabi frequencies match the 1->5a->6
  // demonstration: mu(1,2) E_p / 2 = mu(1,5a) 3.11e-6 / 2, etc.
  CHECK(st.pump_amplitude_au ==
        doctest::Approx(6.540356960734319e-6).epsilon(1e-12));
  CHECK(st.stokes_amplitude_au ==
        doctest::Approx(3.4867119301648884e-6).epsilon(1e-12));
  StirapDrive d = drive_for(sc);
  CHECK(d.pump_rabi().peak() == doctest::Approx(3.20641e-7).epsilon(1e-9));
  CHECK(d.stokes_rabi().peak() == doctest::Approx(3.5948e-7).epsilon(1e-9));
  CHECK(d.cdf_carrier_cm1 == doctest::Approx(1359.1212).epsilon(1e-12));
}

TEST_CASE("bundled HCN isomerization stage") {
  Scenario sc = bundled_scenario("hcn_stage2");
  const StageSpec& st = sc.stage();
  CHECK(sc.dataset == "hcn");
  CHECK(st.initial == "3");
  CHECK(st.intermediate == "4");
  CHECK(st.target == "5");
  CHECK(st.pump_amplitude_au == 9.295e-4);
  CHECK(st.stokes_amplitude_au == 2.875e-3);
  CHECK(st.fwhm_ps == 212.5);
  CHECK(st.lambda == 1.0);

  StirapDrive d = drive_for(sc);
  CHECK(d.pump.carrier_cm1 == doctest::Approx(3420.10).epsilon(1e-12));
  CHECK(d.stokes.carrier_cm1 == doctest::Approx(9131.10).epsilon(1e-12));
  CHECK(d.cdf_carrier_cm1 == doctest::Approx(12551.20).epsilon(1e-12));
  CHECK(d.cdf_sign == -1.0);  // downhill: E(5) < E(3)
  // Near-equal peak Rabi frequencies by construction.
  CHECK(d.pump_rabi().peak() == doctest::Approx(1.4193465e-6).epsilon(1e-12));
  CHECK(d.stokes_rabi().peak() == doctest::Approx(1.41780625e-6).epsilon(1e-12));
}

TEST_CASE("bundled sequential HCN schedule") {
  Scenario sc = bundled_scenario("hcn_sequential");
  REQUIRE(sc.stages.size() == 2);
  CHECK(sc.stages[0].initial == "1");
  CHECK(sc.stages[0].intermediate == "2");
  CHECK(sc.stages[0].target == "3");
  CHECK(sc.stages[1].initial == "3");
  CHECK(sc.stages[1].intermediate == "4");
  CHECK(sc.stages[1].target == "5");
  CHECK(sc.initial_label() == "1");
  CHECK(sc.target_label() == "5");
  CHECK_THROWS_AS(sc.stage(), DataError);  // "the" stage is ambiguous

  auto drives = drives_for(sc);
  REQUIRE(drives.size() == 2);
  // Counter-intuitive ordering inside each stage, stages ordered in time.
  CHECK(drives[0].stokes.center_ps == 133.0);
  CHECK(drives[0].pump.center_ps == 194.0);
  CHECK(drives[1].stokes.center_ps == 423.0);
  CHECK(drives[1].pump.center_ps == 484.0);
  // Explicit pump centers imply the effective delay ratio.
  const double dtau = drives[0].stokes.delta_tau_ps();
  CHECK(drives[0].eta == doctest::Approx(dtau / 61.0).epsilon(1e-12));

  // Misordered stages must be rejected.
  Scenario bad = sc;
  bad.stages[1].stokes_center_ps = 10.0;
  bad.stages[1].pump_center_ps = 71.0;
  CHECK_THROWS_AS(drives_for(bad), DataError);
  // Pump before Stokes inside a stage: also rejected.
  Scenario swapped = sc;
  swapped.stages[0].pump_center_ps = 100.0;  // < stokes at 133
  CHECK_THROWS_AS(drives_for(swapped), DataError);
}

TEST_CASE("scenario runs honor subset and initial state") {
  Scenario sc = toy_scenario(0.0);
  PropagationResult full = run(sc);
  CHECK(full.labels.size() == 4);
  CHECK(full.populations.rows() > 2);

  sc.subset = {"a", "b", "c"};
  PropagationResult sub = run(sc);
  CHECK(sub.labels.size() == 3);

  // Leakage: restricted run cannot leak outside its own basis.
  std::vector<std::string> ladder = {"a", "b", "c"};
  // Allow for norm drift at the integrator's floor: the sum of retained
  // populations can exceed 1 by a few 1e-12, making leakage slightly negative.
  CHECK(std::abs(leakage(sub, ladder)) <= 1e-9);
  CHECK(leakage(full, ladder) >= -1e-9);
  // Fidelity is the final target population.
  CHECK(fidelity(full, "c") ==
        doctest::Approx(full.final_population("c")).epsilon(1e-15));

  // The base config may hand over dt but not hijack the initial state.
  PropagationConfig base;
  base.dt_au = 15.0;
  PropagationResult r = run(sc, base);
  CHECK(r.dt_au == 15.0);
  CHECK(r.populations(0, r.column("a")) == 1.0);
}

TEST_CASE("null scenario drives leave population in place") {
  Scenario sc = toy_scenario(0.0);
  sc.stages[0].pump_amplitude_au = 0.0;
  sc.stages[0].stokes_amplitude_au = 0.0;
  PropagationResult r = run(sc);
  CHECK(r.final_population("a") == 1.0);
  CHECK(fidelity(r, "c") == 0.0);
}

TEST_CASE("cdf_only mode with lambda 0 drives nothing") {
  Scenario sc = toy_scenario(0.0);
  sc.mode = DriveMode::cdf_only;
  PropagationResult r = run(sc);
  CHECK(r.final_population("a") == 1.0);
  CHECK(fidelity(r, "c") == 0.0);
}

TEST_CASE("lambda scan machinery") {
  Scenario sc = toy_scenario();
  const std::vector<double> grid = {0.0, 0.5, 1.0};
  ScanResult scan = scan_lambda(sc, grid);
  CHECK(scan.parameter == "lambda");
  REQUIRE(scan.points.size() == 3);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(scan.points[i].value == grid[i]);
    CHECK(scan.points[i].fidelity >= 0.0);
    CHECK(scan.points[i].fidelity <= 1.0);
    CHECK(scan.points[i].norm_drift < 1e-6);
  }

  // The lambda = 0 point is exactly the bare-STIRAP run.
  Scenario bare = toy_scenario(0.0);
  PropagationResult r0 = run(bare);
  CHECK(scan.points[0].fidelity == fidelity(r0, "c"));

  // The lambda = 1 point is exactly the scenario's own run.
  PropagationResult r1 = run(toy_scenario(1.0));
  CHECK(scan.points[2].fidelity == fidelity(r1, "c"));

  // Identical results for any worker count.
  ScanResult threaded = scan_lambda(sc, grid, 4);
  REQUIRE(threaded.points.size() == scan.points.size());
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    CHECK(threaded.points[i].fidelity == scan.points[i].fidelity);
    CHECK(threaded.points[i].leakage == scan.points[i].leakage);
    CHECK(threaded.points[i].norm_drift == scan.points[i].norm_drift);
  }

  CHECK(scan.argmax_fidelity() >= 0);
  CHECK(scan.argmax_fidelity() < 3);

  // Empty grid is rejected.
  CHECK_THROWS_AS(scan_lambda(sc, std::vector<double>{}), DataError);
}

TEST_CASE("fwhm scan rescales amplitudes to keep the pulse area") {
  Scenario sc = toy_scenario(0.0);
  const double ref = sc.stage().fwhm_ps;
  const std::vector<double> grid = {ref, 2.0 * ref};
  ScanResult scan = scan_fwhm(sc, grid);
  CHECK(scan.parameter == "fwhm_ps");
  REQUIRE(scan.points.size() == 2);

  // The reference point reproduces the unmodified scenario exactly.
  PropagationResult r = run(sc);
  CHECK(scan.points[0].fidelity == fidelity(r, "c"));

  // Doubling the width halves the amplitude: pulse area (hence the
  // adiabaticity metric and the transfer) is essentially preserved.
  CHECK(scan.points[1].fidelity ==
        doctest::Approx(scan.points[0].fidelity).epsilon(5e-3));

  CHECK_THROWS_AS(scan_fwhm(sc, std::vector<double>{0.0, 5.0}), DataError);
  CHECK_THROWS_AS(scan_fwhm(sc, std::vector<double>{-1.0}), DataError);

  // Scenarios with pinned pump centers cannot be directly width-scanned.
  Scenario pinned = toy_scenario(0.0);
  pinned.stages[0].pump_center_ps = 4.0;
  CHECK_THROWS_AS(scan_fwhm(pinned, grid), DataError);
}

TEST_CASE("eta scan touches only the delay") {
  Scenario sc = toy_scenario();
  const std::vector<double> grid = {1.0, 2.0};
  ScanResult scan = scan_eta(sc, grid);
  CHECK(scan.parameter == "eta");
  REQUIRE(scan.points.size() == 2);

  // eta = 1 reproduces the unmodified scenario bitwise.
  PropagationResult r = run(sc);
  CHECK(scan.points[0].fidelity == fidelity(r, "c"));

  // Larger eta brings the pulses closer together.
  Scenario sc2 = toy_scenario();
  sc2.stages[0].eta = 2.0;
  StirapDrive d1 = drive_for(sc);
  StirapDrive d2 = drive_for(sc2);
  CHECK(d2.pump.center_ps == doctest::Approx(d1.pump.center_ps / 2.0).epsilon(1e-12));

  CHECK_THROWS_AS(scan_eta(sc, std::vector<double>{0.0}), DataError);
}

TEST_CASE("scan failures carry the offending grid value") {
  Scenario sc = toy_scenario();
  // lambda < 0 fails drive construction inside the scan.
  try {
    scan_lambda(sc, std::vector<double>{0.5, -1.0});
    FAIL("expected DataError");
  } catch (const DataError& e) {
    CHECK(std::string(e.what()).find("-1") != std::string::npos);
  }
}

TEST_CASE("default grids") {
  auto lg = default_lambda_grid();
  REQUIRE(lg.size() == 41);
  CHECK(lg.front() == 0.0);
  CHECK(lg.back() == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(lg[1] == doctest::Approx(0.05).epsilon(1e-12));

  auto fs = default_fwhm_grid("sccl2");
  REQUIRE(!fs.empty());
  CHECK(fs.front() < fs.back());
  for (std::size_t i = 1; i < fs.size(); ++i) CHECK(fs[i] > fs[i - 1]);
  // The reference width is on the grid.
  bool has215 = false;
  for (double v : fs) has215 = has215 || v == 215.0;
  CHECK(has215);

  auto fh = default_fwhm_grid("hcn");
  bool has2125 = false;
  for (double v : fh) has2125 = has2125 || v == 212.5;
  CHECK(has2125);

  auto eg = default_eta_grid();
  REQUIRE(!eg.empty());
  bool has1 = false, has5 = false;
  for (double v : eg) {
    has1 = has1 || v == 1.0;
    has5 = has5 || v == 5.0;
  }
  CHECK(has1);
  CHECK(has5);
}

TEST_CASE("scenario validation") {
  Scenario sc = toy_scenario();
  sc.stages.clear();
  CHECK_THROWS_AS(drives_for(sc), DataError);
  CHECK_THROWS_AS(run(sc), DataError);

  Scenario nosys = toy_scenario();
  nosys.system = nullptr;
  CHECK_THROWS_AS(run(nosys), DataError);
}
