// SPDX-License-Identifier: Apache-2.0
#include "rspk/harness/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "rspk/errors.hpp"

namespace rspk::harness {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  double out = 0.0;
  try {
    out = std::stod(v, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || trim(v.substr(pos)).size() != 0 || !std::isfinite(out)) {
    throw ConfigError("config: '" + key + "' expects a number, got '" + v + "'");
  }
  return out;
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  std::size_t pos = 0;
  unsigned long long out = 0;
  try {
    if (!v.empty() && v[0] == '-') throw std::invalid_argument("negative");
    out = std::stoull(v, &pos, 0);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos == 0 || trim(v.substr(pos)).size() != 0) {
    throw ConfigError("config: '" + key + "' expects a nonnegative integer, got '" + v + "'");
  }
  return out;
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("config: '" + key + "' expects true/false, got '" + v + "'");
}

/// Comma list; `a:b:step` expands to an inclusive range.
std::vector<double> to_list(const std::string& key, const std::string& v) {
  std::vector<double> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto c1 = item.find(':');
    if (c1 == std::string::npos) {
      out.push_back(to_double(key, item));
      continue;
    }
    const auto c2 = item.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ConfigError("config: '" + key + "' range needs lo:hi:step");
    const double lo = to_double(key, item.substr(0, c1));
    const double hi = to_double(key, item.substr(c1 + 1, c2 - c1 - 1));
    const double step = to_double(key, item.substr(c2 + 1));
    if (!(step > 0.0) || hi < lo) throw ConfigError("config: '" + key + "' range needs lo <= hi and step > 0");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < count; ++i) out.push_back(lo + static_cast<double>(i) * step);
  }
  return out;
}

std::string join(const std::vector<double>& xs) {
  std::ostringstream os;
  os << std::setprecision(17);
  for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
  return os.str();
}

const std::map<std::string, std::string>& presets() {
  static const std::map<std::string, std::string> table = {
      {"fig1",
       "# Eigenvalue histogram of the robust estimate against the limiting density.\n"
       "scenario = spectrum\nN = 200\nn = 1000\nangles_deg = 10,12\npowers_db = 0,0\n"
       "noise = student-t\nbeta = 100\nalpha = 0.2\ntrials = 50\ndensity_points = 400\n"},
      {"fig2",
       "# One realization of the six localization functions.\n"
       "scenario = oneshot\nN = 20\nn = 100\nangles_deg = 10,12\npowers_db = 5,5\n"
       "noise = student-t\nbeta = 100\nalpha = 0.2\ntrials = 1\n"},
      {"fig3",
       "# MSE of theta_1 versus source power, Student-t noise.\n"
       "scenario = mse\nN = 20\nn = 100\nangles_deg = 10,12\nsweep_db = -5:30:2.5\n"
       "noise = student-t\nbeta = 10\nalpha = 0.2\ntrials = 1000\n"},
      {"fig4",
       "# MSE of theta_1 versus source power, one outlier sample with tau = 100.\n"
       "scenario = mse\nN = 20\nn = 100\nangles_deg = 10,12\nsweep_db = -5:30:2.5\n"
       "noise = outlier\noutlier_count = 1\noutlier_value = 100\nalpha = 0.2\ntrials = 1000\n"},
  };
  return table;
}

}  // namespace

const char* scenario_name(Scenario s) noexcept {
  switch (s) {
    case Scenario::kSpectrum:
      return "spectrum";
    case Scenario::kOneshot:
      return "oneshot";
    case Scenario::kMse:
      return "mse";
    case Scenario::kEstimate:
      return "estimate";
  }
  return "?";
}

Scenario parse_scenario(const std::string& name) {
  for (Scenario s : {Scenario::kSpectrum, Scenario::kOneshot, Scenario::kMse, Scenario::kEstimate}) {
    if (name == scenario_name(s)) return s;
  }
  throw ConfigError("config: unknown scenario '" + name + "'");
}

NoiseModel ExperimentConfig::noise_model() const {
  if (noise == "gaussian") return NoiseModel::gaussian();
  if (noise == "student-t") return NoiseModel::student_t(beta);
  if (noise == "outlier") return NoiseModel::outlier(outlier_count, outlier_value);
  throw ConfigError("config: unknown noise '" + noise + "'");
}

SymbolLaw ExperimentConfig::symbol_law() const {
  if (symbols == "gaussian") return SymbolLaw::kGaussian;
  if (symbols == "qpsk") return SymbolLaw::kQpsk;
  throw ConfigError("config: unknown symbols '" + symbols + "'");
}

SourceConfig ExperimentConfig::sources() const {
  if (powers_db.size() != angles_deg.size()) {
    throw ConfigError("config: angles_deg and powers_db differ in length");
  }
  SourceConfig s;
  s.spacing = spacing;
  for (std::size_t l = 0; l < angles_deg.size(); ++l) {
    s.angles.push_back(deg_to_rad(angles_deg[l]));
    s.powers.push_back(db_to_power(powers_db[l]));
  }
  s.validate();
  return s;
}

SourceConfig ExperimentConfig::sources_at(double db) const {
  SourceConfig s;
  s.spacing = spacing;
  for (double a : angles_deg) {
    s.angles.push_back(deg_to_rad(a));
    s.powers.push_back(db_to_power(db));
  }
  s.validate();
  return s;
}

double ExperimentConfig::grid_lo() const {
  if (has_grid_bounds) return deg_to_rad(grid_lo_deg);
  if (angles_deg.empty()) return deg_to_rad(-90.0);
  const double mid = std::accumulate(angles_deg.begin(), angles_deg.end(), 0.0) / angles_deg.size();
  return deg_to_rad(mid - grid_half_width_deg);
}

double ExperimentConfig::grid_hi() const {
  if (has_grid_bounds) return deg_to_rad(grid_hi_deg);
  if (angles_deg.empty()) return deg_to_rad(90.0);
  const double mid = std::accumulate(angles_deg.begin(), angles_deg.end(), 0.0) / angles_deg.size();
  return deg_to_rad(mid + grid_half_width_deg);
}

void ExperimentConfig::set(const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string v = trim(raw_value);
  auto as_size = [&] { return static_cast<std::size_t>(to_u64(key, v)); };
  if (key == "scenario") {
    scenario = parse_scenario(v);
  } else if (key == "N") {
    n_antennas = static_cast<Index>(to_u64(key, v));
  } else if (key == "n") {
    n_samples = static_cast<Index>(to_u64(key, v));
  } else if (key == "angles_deg") {
    angles_deg = to_list(key, v);
  } else if (key == "powers_db") {
    powers_db = to_list(key, v);
  } else if (key == "sweep_db") {
    sweep_db = to_list(key, v);
  } else if (key == "noise") {
    noise = v;
  } else if (key == "beta") {
    beta = to_double(key, v);
  } else if (key == "outlier_count") {
    outlier_count = as_size();
  } else if (key == "outlier_value") {
    outlier_value = to_double(key, v);
  } else if (key == "symbols") {
    symbols = v;
  } else if (key == "alpha") {
    alpha = to_double(key, v);
  } else if (key == "spacing") {
    spacing = to_double(key, v);
  } else if (key == "trials") {
    trials = as_size();
  } else if (key == "seed") {
    seed = to_u64(key, v);
  } else if (key == "workers") {
    workers = as_size();
  } else if (key == "grid_half_width_deg") {
    grid_half_width_deg = to_double(key, v);
  } else if (key == "grid_step_deg") {
    grid_step_deg = to_double(key, v);
  } else if (key == "grid_lo_deg") {
    grid_lo_deg = to_double(key, v);
    has_grid_bounds = true;
  } else if (key == "grid_hi_deg") {
    grid_hi_deg = to_double(key, v);
    has_grid_bounds = true;
  } else if (key == "methods") {
    methods = v;
  } else if (key == "out") {
    out = v;
  } else if (key == "input") {
    input = v;
  } else if (key == "tolerance") {
    tolerance = to_double(key, v);
  } else if (key == "max_iterations") {
    max_iterations = static_cast<int>(to_u64(key, v));
  } else if (key == "quadrature_draws") {
    quadrature_draws = as_size();
  } else if (key == "quadrature_seed") {
    quadrature_seed = to_u64(key, v);
  } else if (key == "quadrature_bins") {
    quadrature_bins = as_size();
  } else if (key == "density_points") {
    density_points = as_size();
  } else if (key == "density_eps") {
    density_eps = to_double(key, v);
  } else if (key == "margin") {
    margin = to_double(key, v);
  } else if (key == "max_sources") {
    max_sources = static_cast<Index>(to_u64(key, v));
  } else if (key == "force_sources") {
    force_sources = to_bool(key, v);
  } else {
    throw ConfigError("config: unknown key '" + key + "'");
  }
}

void ExperimentConfig::validate() const {
  if (n_antennas < 1) throw ConfigError("config: N must be positive");
  if (scenario != Scenario::kEstimate && !(n_antennas < n_samples)) {
    throw ConfigError("config: need N < n, got N = " + std::to_string(n_antennas) + ", n = " +
                      std::to_string(n_samples));
  }
  if (trials < 1) throw ConfigError("config: trials must be at least 1");
  if (workers < 1) throw ConfigError("config: workers must be at least 1");
  if (!(alpha > 0.0)) throw ConfigError("config: alpha must be positive");
  if (!(grid_step_deg > 0.0)) throw ConfigError("config: grid_step_deg must be positive");
  if (has_grid_bounds && !(grid_hi_deg > grid_lo_deg)) throw ConfigError("config: grid_hi_deg must exceed grid_lo_deg");
  if (!(tolerance > 0.0) || max_iterations < 1) throw ConfigError("config: bad solver tolerance or iteration cap");
  if (!(density_eps > 0.0)) throw ConfigError("config: density_eps must be positive");
  if (scenario == Scenario::kMse && sweep_db.empty()) throw ConfigError("config: sweep_db is empty");
  if (scenario == Scenario::kMse && angles_deg.empty()) throw ConfigError("config: mse needs angles_deg");
  if (scenario == Scenario::kEstimate && input.empty()) throw ConfigError("config: estimate needs input");
  if (static_cast<Index>(angles_deg.size()) >= n_antennas && scenario != Scenario::kEstimate) {
    throw ConfigError("config: need L < N");
  }
  noise_model();
  symbol_law();
  if (scenario != Scenario::kMse && scenario != Scenario::kEstimate) sources();
}

std::string ExperimentConfig::canonical() const {
  std::map<std::string, std::string> kv;
  auto num = [](double x) {
    std::ostringstream os;
    os << std::setprecision(17) << x;
    return os.str();
  };
  kv["scenario"] = scenario_name(scenario);
  kv["N"] = std::to_string(n_antennas);
  kv["n"] = std::to_string(n_samples);
  kv["angles_deg"] = join(angles_deg);
  kv["powers_db"] = join(powers_db);
  kv["sweep_db"] = join(sweep_db);
  kv["noise"] = noise;
  kv["beta"] = num(beta);
  kv["outlier_count"] = std::to_string(outlier_count);
  kv["outlier_value"] = num(outlier_value);
  kv["symbols"] = symbols;
  kv["alpha"] = num(alpha);
  kv["spacing"] = num(spacing);
  kv["trials"] = std::to_string(trials);
  kv["seed"] = std::to_string(seed);
  kv["grid"] = num(rad_to_deg(grid_lo())) + ":" + num(rad_to_deg(grid_hi())) + ":" + num(grid_step_deg);
  kv["methods"] = methods;
  kv["input"] = input;
  kv["tolerance"] = num(tolerance);
  kv["max_iterations"] = std::to_string(max_iterations);
  kv["quadrature"] = std::to_string(quadrature_draws) + "/" + std::to_string(quadrature_seed) + "/" +
                     std::to_string(quadrature_bins);
  kv["density"] = std::to_string(density_points) + "/" + num(density_eps);
  kv["margin"] = num(margin);
  kv["max_sources"] = std::to_string(max_sources);
  kv["force_sources"] = force_sources ? "true" : "false";
  // workers and out do not change results and stay out of the hash.
  std::string s;
  for (const auto& [k, v] : kv) s += k + "=" + v + "\n";
  return s;
}

std::uint64_t ExperimentConfig::hash() const { return fnv1a(canonical()); }

void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& origin) {
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": expected key = value");
    }
    try {
      cfg.set(line.substr(0, eq), line.substr(eq + 1));
    } catch (const ConfigError& e) {
      throw ConfigError(origin + ":" + std::to_string(number) + ": " + e.what());
    }
  }
}

void apply_config_file(ExperimentConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  apply_config_text(cfg, ss.str(), path);
}

std::string preset_text(const std::string& name) {
  const auto it = presets().find(name);
  return it == presets().end() ? std::string{} : it->second;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : presets()) out.push_back(k);
  return out;
}

std::uint64_t fnv1a(const std::string& bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace rspk::harness
