#include "stirapcd/level_system.hpp"

#include "stirapcd/errors.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <sstream>
#include <utility>

namespace stirapcd {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
    s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
    s.remove_suffix(1);
  return s;
}

// Split one CSV line into at most `max_fields` trimmed fields.  Quoting is
// not supported; the formats here never need it.
std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(trim(line.substr(start)));
      break;
    }
    fields.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return fields;
}

double parse_double(std::string_view text, std::string_view what, int lineno) {
  const std::string_view t = trim(text);
  double value = 0.0;
  const auto* end = t.data() + t.size();
  auto [ptr, ec] = std::from_chars(t.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    std::ostringstream msg;
    msg << "line " << lineno << ": cannot parse " << what << " from '" << t
        << "'";
    throw DataError(msg.str());
  }
  return value;
}

// Yields (lineno, content) for every non-blank, non-comment line.
template <typename Fn>
void for_each_data_line(std::string_view text, Fn&& fn) {
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string_view::npos) eol = text.size();
    ++lineno;
    std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    if (line.empty() || line.front() == '#') continue;
    fn(lineno, line);
    if (eol == text.size()) break;
  }
}

bool is_header(const std::vector<std::string_view>& fields,
               std::string_view first_column) {
  return !fields.empty() && fields.front() == first_column;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return std::move(buf).str();
}

}  // namespace

LevelSystem::LevelSystem(std::vector<SpectroState> states, Eigen::MatrixXd tdm)
    : states_(std::move(states)), tdm_(std::move(tdm)) {
  const int n = static_cast<int>(states_.size());
  if (n == 0) throw DataError("level system needs at least one state");
  if (tdm_.rows() != n || tdm_.cols() != n) {
    throw DataError("coupling matrix shape does not match the state count");
  }
  for (int i = 0; i < n; ++i) {
    if (states_[i].label.empty())
      throw DataError("state labels must be non-empty");
    if (!index_.emplace(states_[i].label, i).second)
      throw DataError("duplicate state label '" + states_[i].label + "'");
    if (tdm_(i, i) != 0.0)
      throw DataError("state '" + states_[i].label +
                      "' couples to itself; the diagonal must be zero");
    for (int j = 0; j < i; ++j) {
      if (tdm_(i, j) != tdm_(j, i)) {
        throw DataError("asymmetric coupling between '" + states_[j].label +
                        "' and '" + states_[i].label + "'");
      }
    }
  }
}

LevelSystem LevelSystem::load(const std::filesystem::path& levels_csv,
                              const std::filesystem::path& tdm_csv) {
  try {
    return parse(read_file(levels_csv), read_file(tdm_csv));
  } catch (const DataError& e) {
    throw DataError("loading '" + levels_csv.string() + "' + '" +
                    tdm_csv.string() + "': " + e.what());
  }
}

LevelSystem LevelSystem::parse(std::string_view levels_csv,
                               std::string_view tdm_csv) {
  std::vector<SpectroState> states;
  std::unordered_map<std::string, int> index;

  for_each_data_line(levels_csv, [&](int lineno, std::string_view line) {
    auto fields = split_fields(line);
    if (is_header(fields, "label")) return;
    if (fields.size() < 2 || fields.size() > 3) {
      throw DataError("levels line " + std::to_string(lineno) +
                      ": expected 'label,energy_cm1[,mode_tag]'");
    }
    SpectroState st;
    st.label = std::string(fields[0]);
    if (st.label.empty())
      throw DataError("levels line " + std::to_string(lineno) +
                      ": empty label");
    st.energy_cm1 = parse_double(fields[1], "energy_cm1", lineno);
    if (fields.size() == 3) st.mode_tag = std::string(fields[2]);
    if (!index.emplace(st.label, static_cast<int>(states.size())).second) {
      throw DataError("levels line " + std::to_string(lineno) +
                      ": duplicate label '" + st.label + "'");
    }
    states.push_back(std::move(st));
  });
  if (states.empty()) throw DataError("levels file holds no states");

  const int n = static_cast<int>(states.size());
  Eigen::MatrixXd tdm = Eigen::MatrixXd::Zero(n, n);
  std::vector<bool> seen(static_cast<std::size_t>(n) * n, false);

  for_each_data_line(tdm_csv, [&](int lineno, std::string_view line) {
    auto fields = split_fields(line);
    if (is_header(fields, "from")) return;
    if (fields.size() != 3) {
      throw DataError("couplings line " + std::to_string(lineno) +
                      ": expected 'from,to,tdm_au'");
    }
    auto lookup = [&](std::string_view label) {
      auto it = index.find(std::string(label));
      if (it == index.end()) {
        throw DataError("couplings line " + std::to_string(lineno) +
                        ": unknown label '" + std::string(label) + "'");
      }
      return it->second;
    };
    const int a = lookup(fields[0]);
    const int b = lookup(fields[1]);
    if (a == b) {
      throw DataError("couplings line " + std::to_string(lineno) +
                      ": state '" + std::string(fields[0]) +
                      "' cannot couple to itself");
    }
    const double mu = parse_double(fields[2], "tdm_au", lineno);
    if (mu < 0.0) {
      throw DataError("couplings line " + std::to_string(lineno) +
                      ": negative dipole moment " + std::string(fields[2]));
    }
    const std::size_t key = static_cast<std::size_t>(std::min(a, b)) * n +
                            static_cast<std::size_t>(std::max(a, b));
    if (seen[key]) {
      throw DataError("couplings line " + std::to_string(lineno) +
                      ": pair '" + std::string(fields[0]) + "','" +
                      std::string(fields[1]) + "' listed twice");
    }
    seen[key] = true;
    tdm(a, b) = mu;
    tdm(b, a) = mu;
  });

  return LevelSystem(std::move(states), std::move(tdm));
}

bool LevelSystem::has_label(std::string_view label) const {
  return index_.find(std::string(label)) != index_.end();
}

int LevelSystem::index_of(std::string_view label) const {
  auto it = index_.find(std::string(label));
  if (it == index_.end())
    throw DataError("unknown state label '" + std::string(label) + "'");
  return it->second;
}

double LevelSystem::energy_cm1(std::string_view label) const {
  return states_[index_of(label)].energy_cm1;
}

double LevelSystem::mu(std::string_view a, std::string_view b) const {
  return tdm_(index_of(a), index_of(b));
}

double LevelSystem::transition_energy_cm1(std::string_view a,
                                          std::string_view b) const {
  return energy_cm1(b) - energy_cm1(a);
}

std::vector<std::string> LevelSystem::coupling_warnings(
    double threshold) const {
  std::vector<std::string> notes;
  for (int i = 0; i < size(); ++i) {
    for (int j = i + 1; j < size(); ++j) {
      if (tdm_(i, j) > threshold) {
        std::ostringstream msg;
        msg << "coupling " << states_[i].label << " <-> " << states_[j].label
            << " = " << tdm_(i, j) << " a.u. exceeds " << threshold
            << " a.u.; check the input data";
        notes.push_back(std::move(msg).str());
      }
    }
  }
  return notes;
}

}  // namespace stirapcd
