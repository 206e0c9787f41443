// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "rspk/datagen.hpp"
#include "rspk/inference.hpp"
#include "rspk/linalg.hpp"
#include "rspk/scatter.hpp"
#include "rspk/spectrum.hpp"

namespace rspk {

enum class Method {
  kMusic,
  kRobustMusic,
  kGMusic,
  kGMusicEmpirical,
  kRobustGMusic,
  kRobustGMusicEmpirical,
};

inline constexpr std::array<Method, 6> kAllMethods = {
    Method::kMusic,        Method::kRobustMusic,          Method::kGMusic,
    Method::kGMusicEmpirical, Method::kRobustGMusic, Method::kRobustGMusicEmpirical,
};

/// music, robust-music, gmusic, gmusic-emp, robust-gmusic, robust-gmusic-emp.
const char* method_name(Method m) noexcept;
/// Inverse of method_name; throws ConfigError on unknown names.
Method parse_method(const std::string& name);
/// Comma-separated list; "all" expands to every method.
std::vector<Method> parse_method_list(const std::string& list);

/// eta(theta) evaluated through a set of eigenvectors. Two shapes:
/// projector:  sum_{k >= L} |a^* u_k|^2 clamped to [0, 1];
/// weighted:   1 - sum_k w_k |a^* u_k|^2.
class LocalizationFunction {
 public:
  static LocalizationFunction projector(const CMatrix& eigenvectors, Index n_sources, double spacing);
  static LocalizationFunction weighted(const CMatrix& eigenvectors, const SpikeReport& report, double spacing);
  /// Weighted form with explicit columns and weights (test hook).
  static LocalizationFunction weighted(CMatrix vectors, RVector weights, double spacing);

  double operator()(double theta) const;
  std::vector<double> evaluate(const std::vector<double>& grid) const;

 private:
  LocalizationFunction(CMatrix vectors, RVector weights, bool projector, double spacing)
      : vectors_(std::move(vectors)), weights_(std::move(weights)), projector_(projector), spacing_(spacing) {}

  CMatrix vectors_;
  RVector weights_;
  bool projector_;
  double spacing_;
};

double eta_music(double theta, const SnapshotMatrix& y, Index n_sources, double spacing = 0.5);
double eta_robust_music(double theta, const ScatterEstimate& est, Index n_sources, double spacing = 0.5);
double eta_robust_gmusic(double theta, const ScatterEstimate& est, const SpikeReport& report, double spacing = 0.5);
/// Weighted form on the sample-covariance eigenvectors of y.
double eta_gmusic(double theta, const SnapshotMatrix& y, const SpikeReport& report, double spacing = 0.5);

/// All six localization functions of one realization.
class Localizer {
 public:
  struct Options {
    Index n_sources = 2;
    double spacing = 0.5;
    /// Use the first n_sources eigenpairs even when they are not detected.
    bool force_sources = true;
    double margin = 0.02;
  };

  /// `robust_known` and `gmusic_known` are the known-nu contexts for the
  /// robust weight and for v = 1; the empirical ones are built here.
  Localizer(const SnapshotMatrix& y, const ScatterEstimate& est, const SpectralContext& robust_known,
            const SpectralContext& gmusic_known, const Options& options);

  const LocalizationFunction& function(Method m) const { return functions_[static_cast<std::size_t>(m)]; }
  /// Spike report behind a G-MUSIC type method; nullopt for MUSIC types.
  const std::optional<SpikeReport>& report(Method m) const { return reports_[static_cast<std::size_t>(m)]; }
  const Eigenpairs& sample_eigen() const noexcept { return sample_; }

 private:
  Eigenpairs sample_;
  std::vector<LocalizationFunction> functions_;
  std::array<std::optional<SpikeReport>, 6> reports_;
};

/// Uniform grid lo, lo + step, ... up to hi inclusive (radians).
std::vector<double> make_grid(double lo, double hi, double step);

/// Golden-section minimum of f on [lo, hi] to tolerance `tol`.
double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol = 1e-7);

/// Deepest strict local minima of `values` on `grid`, each refined by golden
/// section inside its bracketing cells, sorted ascending. With fewer minima
/// than requested the deepest is repeated; with none the grid argmin is used.
std::vector<double> extract_angles(const std::vector<double>& grid, const std::vector<double>& values,
                                   const std::function<double(double)>& f, std::size_t n_sources,
                                   double tol = 1e-7);

struct LocalizationCurve {
  Method method = Method::kMusic;
  std::vector<double> grid;
  std::vector<double> values;
  std::vector<double> minima;
};

LocalizationCurve evaluate_curve(Method method, const LocalizationFunction& f, const std::vector<double>& grid,
                                 std::size_t n_sources);

/// Estimate closest to `truth`; ties go to the smaller angle.
double closest_estimate(const std::vector<double>& estimates, double truth);

/// theta_deg,value rows.
void write_curve_csv(std::ostream& out, const LocalizationCurve& curve);

}  // namespace rspk
