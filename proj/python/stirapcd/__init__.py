"""STIRAP and counter-diabatic-field dynamics in multilevel molecular systems.

The heavy lifting lives in the compiled extension ``stirapcd._core``; this
package re-exports its public surface.  Typical use::

    import stirapcd as sd

    sc = sd.bundled_scenario("sccl2_1to6")
    res = sd.run(sc)
    print(sd.fidelity(res, sc.target_label()))
"""

from stirapcd._core import (  # noqa: F401
    # errors
    Error,
    DataError,
    IntegrationError,
    # units
    units,
    # level systems
    SpectroState,
    LevelSystem,
    builtin_dataset,
    builtin_levels_csv,
    builtin_tdm_csv,
    # pulses and drives
    Waveform,
    DriveMode,
    Picture,
    GaussianPulse,
    RabiProfile,
    StirapDrive,
    make_drive,
    mixing_angle,
    mixing_angle_rate,
    # propagation
    PropagationConfig,
    PropagationResult,
    ConvergenceReport,
    hamiltonian_interaction,
    propagate,
    default_dt_au,
    convergence_check,
    # three-level RWA reference
    Rwa3System,
    Rwa3Result,
    rwa3_from_drive,
    adiabaticity_metric,
    propagate_rwa3,
    # scenarios and scans
    StageSpec,
    Scenario,
    drives_for,
    drive_for,
    run,
    fidelity,
    leakage,
    ScanPoint,
    ScanResult,
    scan_lambda,
    scan_fwhm,
    scan_eta,
    default_lambda_grid,
    default_fwhm_grid,
    default_eta_grid,
    bundled_scenario,
    bundled_scenario_names,
)

__all__ = [
    "Error",
    "DataError",
    "IntegrationError",
    "units",
    "SpectroState",
    "LevelSystem",
    "builtin_dataset",
    "builtin_levels_csv",
    "builtin_tdm_csv",
    "Waveform",
    "DriveMode",
    "Picture",
    "GaussianPulse",
    "RabiProfile",
    "StirapDrive",
    "make_drive",
    "mixing_angle",
    "mixing_angle_rate",
    "PropagationConfig",
    "PropagationResult",
    "ConvergenceReport",
    "hamiltonian_interaction",
    "propagate",
    "default_dt_au",
    "convergence_check",
    "Rwa3System",
    "Rwa3Result",
    "rwa3_from_drive",
    "adiabaticity_metric",
    "propagate_rwa3",
    "StageSpec",
    "Scenario",
    "drives_for",
    "drive_for",
    "run",
    "fidelity",
    "leakage",
    "ScanPoint",
    "ScanResult",
    "scan_lambda",
    "scan_fwhm",
    "scan_eta",
    "default_lambda_grid",
    "default_fwhm_grid",
    "default_eta_grid",
    "bundled_scenario",
    "bundled_scenario_names",
]
