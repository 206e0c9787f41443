// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "rspk/datagen.hpp"
#include "rspk/types.hpp"

namespace rspk::harness {

enum class Scenario { kSpectrum, kOneshot, kMse, kEstimate };

const char* scenario_name(Scenario s) noexcept;
Scenario parse_scenario(const std::string& name);

/// Flat experiment description. Every field has a key of the same name in
/// the key=value config format (see README).
struct ExperimentConfig {
  Scenario scenario = Scenario::kSpectrum;
  Index n_antennas = 20;   // key N
  Index n_samples = 100;   // key n
  std::vector<double> angles_deg{10.0, 12.0};
  std::vector<double> powers_db{0.0, 0.0};
  std::vector<double> sweep_db{10.0};  // mse: common source power per point

  std::string noise = "student-t";  // gaussian | student-t | outlier
  double beta = 100.0;
  std::size_t outlier_count = 1;
  double outlier_value = 100.0;
  std::string symbols = "gaussian";  // gaussian | qpsk

  double alpha = 0.2;
  double spacing = 0.5;

  std::size_t trials = 1;
  std::uint64_t seed = 1;
  std::size_t workers = 1;

  /// Search window around the mean source angle unless grid_lo/hi are set.
  double grid_half_width_deg = 5.0;
  double grid_step_deg = 0.02;
  bool has_grid_bounds = false;
  double grid_lo_deg = 0.0;
  double grid_hi_deg = 0.0;

  std::string methods = "all";
  std::string out = "out";
  std::string input;

  double tolerance = 1e-9;
  int max_iterations = 200;
  std::size_t quadrature_draws = 1'000'000;
  std::uint64_t quadrature_seed = 0x5eed'7a0u;
  std::size_t quadrature_bins = 4096;  // 0 keeps every draw
  std::size_t density_points = 400;
  double density_eps = 1e-3;
  double margin = 0.02;
  /// Largest number of spikes reported by `estimate`.
  Index max_sources = 4;
  /// Use the first L eigenpairs in localization even when undetected.
  bool force_sources = true;

  std::size_t n_sources() const noexcept { return angles_deg.size(); }
  NoiseModel noise_model() const;
  SymbolLaw symbol_law() const;
  SourceConfig sources() const;
  /// Sources with every power set to `db`.
  SourceConfig sources_at(double db) const;
  double grid_lo() const;  // radians
  double grid_hi() const;

  /// Sets one key; throws ConfigError on unknown keys or bad values.
  void set(const std::string& key, const std::string& value);
  /// Checks cross-field invariants.
  void validate() const;
  /// Sorted key=value lines of every field; input to the config hash.
  std::string canonical() const;
  std::uint64_t hash() const;
};

/// Applies `key = value` lines; `#` starts a comment.
void apply_config_text(ExperimentConfig& cfg, const std::string& text, const std::string& origin = "<text>");
void apply_config_file(ExperimentConfig& cfg, const std::string& path);

/// Built-in presets fig1..fig4; empty string when unknown.
std::string preset_text(const std::string& name);
std::vector<std::string> preset_names();

/// FNV-1a 64.
std::uint64_t fnv1a(const std::string& bytes) noexcept;

}  // namespace rspk::harness
