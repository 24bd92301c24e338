#pragma once

#include <Eigen/Dense>

#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace stirapcd {

// One molecular vibrational level.
struct SpectroState {
  std::string label;       // unique, e.g. "1", "5a"
  double energy_cm1 = 0.0; // vibrational term energy
  std::string mode_tag;    // optional free-form mode assignment
};

// A finite manifold of vibrational levels plus the (real, symmetric,
// zero-diagonal) matrix of transition dipole moments between them, in a.u.
class LevelSystem {
 public:
  LevelSystem(std::vector<SpectroState> states, Eigen::MatrixXd tdm);

  // Load from the two CSV files (levels: label,energy_cm1,mode_tag;
  // couplings: from,to,tdm_au).  '#' starts a comment; blank lines are
  // skipped.  Throws DataError on malformed rows, duplicate labels,
  // duplicate or self pairs, unknown labels, or negative dipole moments.
  static LevelSystem load(const std::filesystem::path& levels_csv,
                          const std::filesystem::path& tdm_csv);

  // Same, from in-memory CSV text.
  static LevelSystem parse(std::string_view levels_csv,
                           std::string_view tdm_csv);

  int size() const { return static_cast<int>(states_.size()); }
  const std::vector<SpectroState>& states() const { return states_; }
  const SpectroState& state(int i) const { return states_.at(i); }

  bool has_label(std::string_view label) const;
  int index_of(std::string_view label) const;  // DataError if unknown
  double energy_cm1(std::string_view label) const;

  // Full coupling matrix (a.u.); mu(a,b) == 0 means uncoupled.
  const Eigen::MatrixXd& tdm() const { return tdm_; }
  double mu(std::string_view a, std::string_view b) const;

  // Signed Bohr frequency of a -> b in cm^-1: E(b) - E(a).
  double transition_energy_cm1(std::string_view a, std::string_view b) const;

  // Human-readable notes about couplings whose magnitude exceeds
  // `threshold` a.u. -- likely transcription slips in custom data.
  std::vector<std::string> coupling_warnings(double threshold = 0.5) const;

 private:
  std::vector<SpectroState> states_;
  Eigen::MatrixXd tdm_;
  std::unordered_map<std::string, int> index_;
};

// Datasets compiled into the library ("sccl2", "hcn"); parsed once and
// cached.  Throws DataError for any other name.
const LevelSystem& builtin_dataset(std::string_view name);

// Raw CSV text of the bundled datasets (same content as the data/ files).
std::string_view builtin_levels_csv(std::string_view name);
std::string_view builtin_tdm_csv(std::string_view name);

}  // namespace stirapcd
