#pragma once

namespace stirapcd::units {

// Everything internal runs in Hartree atomic units (hbar = 1); the public
// interfaces speak cm^-1 for level energies and carrier frequencies, ps for
// times, and atomic units for fields and transition dipole moments.

inline constexpr double hbar = 1.0;

// 1 cm^-1 expressed in Hartree.
inline constexpr double cm1_to_hartree = 4.556335252912e-6;

// 1 ps expressed in atomic time units.
inline constexpr double ps_to_atu = 41341.3733366;

// Cycle-averaged intensity of a field with envelope amplitude E0 (a.u.):
// I [W/cm^2] = intensity_factor * E0^2.  3.50944758e16 W/cm^2 is the
// intensity of a 1 a.u. field.
inline constexpr double intensity_factor = 3.50944758e16;

inline constexpr double cm1_per_hartree = 1.0 / cm1_to_hartree;
inline constexpr double atu_per_ps = ps_to_atu;
inline constexpr double ps_per_atu = 1.0 / ps_to_atu;

// Angular frequency (rad / atomic time unit) of a transition or carrier
// specified as a wavenumber.  With hbar = 1 this is numerically the energy
// in Hartree.
inline constexpr double omega_au(double wavenumber_cm1) {
  return wavenumber_cm1 * cm1_to_hartree;
}

// Cycle-averaged intensity in W/cm^2 of a field with peak amplitude in a.u.
inline constexpr double intensity_w_cm2(double amplitude_au) {
  return intensity_factor * amplitude_au * amplitude_au;
}

}  // namespace stirapcd::units
