// SPDX-License-Identifier: Apache-2.0
#include "rspk/doa.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>

#include "rspk/errors.hpp"

namespace rspk {

const char* method_name(Method m) noexcept {
  switch (m) {
    case Method::kMusic:
      return "music";
    case Method::kRobustMusic:
      return "robust-music";
    case Method::kGMusic:
      return "gmusic";
    case Method::kGMusicEmpirical:
      return "gmusic-emp";
    case Method::kRobustGMusic:
      return "robust-gmusic";
    case Method::kRobustGMusicEmpirical:
      return "robust-gmusic-emp";
  }
  return "?";
}

Method parse_method(const std::string& name) {
  for (Method m : kAllMethods) {
    if (name == method_name(m)) return m;
  }
  throw ConfigError("unknown method '" + name + "'");
}

std::vector<Method> parse_method_list(const std::string& list) {
  if (list.empty() || list == "all") return {kAllMethods.begin(), kAllMethods.end()};
  std::vector<Method> out;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (item.empty()) continue;
    const Method m = parse_method(item);
    if (std::find(out.begin(), out.end(), m) == out.end()) out.push_back(m);
  }
  if (out.empty()) throw ConfigError("empty method list");
  std::sort(out.begin(), out.end());
  return out;
}

LocalizationFunction LocalizationFunction::projector(const CMatrix& eigenvectors, Index n_sources, double spacing) {
  const Index n = eigenvectors.cols();
  if (n_sources < 0 || n_sources >= n) throw DomainError("projector localization needs 0 <= L < N");
  return LocalizationFunction(eigenvectors.rightCols(n - n_sources), RVector::Ones(n - n_sources), true, spacing);
}

LocalizationFunction LocalizationFunction::weighted(const CMatrix& eigenvectors, const SpikeReport& report,
                                                    double spacing) {
  CMatrix vectors(eigenvectors.rows(), static_cast<Index>(report.size()));
  RVector weights(static_cast<Index>(report.size()));
  for (std::size_t k = 0; k < report.size(); ++k) {
    vectors.col(static_cast<Index>(k)) = eigenvectors.col(report.spikes[k].index);
    weights(static_cast<Index>(k)) = report.spikes[k].weight;
  }
  return weighted(std::move(vectors), std::move(weights), spacing);
}

LocalizationFunction LocalizationFunction::weighted(CMatrix vectors, RVector weights, double spacing) {
  if (vectors.cols() != weights.size()) throw DomainError("weighted localization: size mismatch");
  return LocalizationFunction(std::move(vectors), std::move(weights), false, spacing);
}

double LocalizationFunction::operator()(double theta) const {
  const CVector a = steering_vector(theta, vectors_.rows(), spacing_);
  const RVector proj = (vectors_.adjoint() * a).cwiseAbs2();
  const double s = proj.dot(weights_);
  if (projector_) return std::clamp(s, 0.0, 1.0);
  return 1.0 - s;
}

std::vector<double> LocalizationFunction::evaluate(const std::vector<double>& grid) const {
  const Index n = vectors_.rows();
  CMatrix a(n, static_cast<Index>(grid.size()));
  for (std::size_t g = 0; g < grid.size(); ++g) a.col(static_cast<Index>(g)) = steering_vector(grid[g], n, spacing_);
  const Eigen::MatrixXd proj = (vectors_.adjoint() * a).cwiseAbs2();
  const RVector s = proj.transpose() * weights_;
  std::vector<double> out(grid.size());
  for (std::size_t g = 0; g < grid.size(); ++g) {
    const double v = s(static_cast<Index>(g));
    out[g] = projector_ ? std::clamp(v, 0.0, 1.0) : 1.0 - v;
  }
  return out;
}

double eta_music(double theta, const SnapshotMatrix& y, Index n_sources, double spacing) {
  const auto eig = hermitian_eigen(sample_covariance(y.data()));
  return LocalizationFunction::projector(eig.vectors, n_sources, spacing)(theta);
}

double eta_robust_music(double theta, const ScatterEstimate& est, Index n_sources, double spacing) {
  return LocalizationFunction::projector(est.eigenvectors(), n_sources, spacing)(theta);
}

double eta_robust_gmusic(double theta, const ScatterEstimate& est, const SpikeReport& report, double spacing) {
  return LocalizationFunction::weighted(est.eigenvectors(), report, spacing)(theta);
}

double eta_gmusic(double theta, const SnapshotMatrix& y, const SpikeReport& report, double spacing) {
  const auto eig = hermitian_eigen(sample_covariance(y.data()));
  return LocalizationFunction::weighted(eig.vectors, report, spacing)(theta);
}

Localizer::Localizer(const SnapshotMatrix& y, const ScatterEstimate& est, const SpectralContext& robust_known,
                     const SpectralContext& gmusic_known, const Options& options)
    : sample_(hermitian_eigen(sample_covariance(y.data()))) {
  auto build = [&](const RVector& eigenvalues, const SpectralContext& ctx, EstimatorMode mode) {
    return options.force_sources ? forced_report(eigenvalues, ctx, mode, options.n_sources)
                                 : detect_spikes(eigenvalues, ctx, mode, options.n_sources, options.margin);
  };
  const SpectralContext robust_emp = empirical_context(est);
  const SpectralContext gmusic_emp = gmusic_context_empirical(y);

  reports_[static_cast<std::size_t>(Method::kGMusic)] = build(sample_.values, gmusic_known, EstimatorMode::kKnownNu);
  reports_[static_cast<std::size_t>(Method::kGMusicEmpirical)] =
      build(sample_.values, gmusic_emp, EstimatorMode::kEmpirical);
  reports_[static_cast<std::size_t>(Method::kRobustGMusic)] =
      build(est.eigenvalues(), robust_known, EstimatorMode::kKnownNu);
  reports_[static_cast<std::size_t>(Method::kRobustGMusicEmpirical)] =
      build(est.eigenvalues(), robust_emp, EstimatorMode::kEmpirical);

  for (Method m : kAllMethods) {
    const auto& rep = reports_[static_cast<std::size_t>(m)];
    switch (m) {
      case Method::kMusic:
        functions_.push_back(LocalizationFunction::projector(sample_.vectors, options.n_sources, options.spacing));
        break;
      case Method::kRobustMusic:
        functions_.push_back(LocalizationFunction::projector(est.eigenvectors(), options.n_sources, options.spacing));
        break;
      case Method::kGMusic:
      case Method::kGMusicEmpirical:
        functions_.push_back(LocalizationFunction::weighted(sample_.vectors, *rep, options.spacing));
        break;
      case Method::kRobustGMusic:
      case Method::kRobustGMusicEmpirical:
        functions_.push_back(LocalizationFunction::weighted(est.eigenvectors(), *rep, options.spacing));
        break;
    }
  }
}

std::vector<double> make_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || !(hi >= lo)) throw DomainError("make_grid: need step > 0 and hi >= lo");
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
  std::vector<double> grid(count);
  for (std::size_t i = 0; i < count; ++i) grid[i] = lo + static_cast<double>(i) * step;
  return grid;
}

double golden_section_minimize(const std::function<double(double)>& f, double lo, double hi, double tol) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo;
  double b = hi;
  double x1 = b - inv_phi * (b - a);
  double x2 = a + inv_phi * (b - a);
  double f1 = f(x1);
  double f2 = f(x2);
  while (b - a > tol) {
    if (f1 <= f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - inv_phi * (b - a);
      f1 = f(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + inv_phi * (b - a);
      f2 = f(x2);
    }
  }
  return 0.5 * (a + b);
}

std::vector<double> extract_angles(const std::vector<double>& grid, const std::vector<double>& values,
                                   const std::function<double(double)>& f, std::size_t n_sources, double tol) {
  if (grid.empty() || grid.size() != values.size()) throw DomainError("extract_angles: empty or mismatched grid");
  if (n_sources == 0) throw DomainError("extract_angles: n_sources must be positive");
  std::vector<std::size_t> minima;
  for (std::size_t i = 1; i + 1 < grid.size(); ++i) {
    if (values[i] < values[i - 1] && values[i] < values[i + 1]) minima.push_back(i);
  }
  if (minima.empty()) {
    minima.push_back(static_cast<std::size_t>(std::min_element(values.begin(), values.end()) - values.begin()));
  }
  std::stable_sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  if (minima.size() > n_sources) minima.resize(n_sources);

  std::vector<double> angles;
  for (std::size_t i : minima) {
    const double lo = grid[i == 0 ? 0 : i - 1];
    const double hi = grid[std::min(i + 1, grid.size() - 1)];
    double best = grid[i];
    if (hi > lo) {
      const double x = golden_section_minimize(f, lo, hi, tol);
      if (f(x) <= f(best)) best = x;
    }
    angles.push_back(best);
  }
  while (angles.size() < n_sources) angles.push_back(angles.front());
  std::sort(angles.begin(), angles.end());
  return angles;
}

LocalizationCurve evaluate_curve(Method method, const LocalizationFunction& f, const std::vector<double>& grid,
                                 std::size_t n_sources) {
  LocalizationCurve curve;
  curve.method = method;
  curve.grid = grid;
  curve.values = f.evaluate(grid);
  curve.minima = extract_angles(grid, curve.values, [&](double t) { return f(t); }, n_sources);
  return curve;
}

double closest_estimate(const std::vector<double>& estimates, double truth) {
  if (estimates.empty()) throw DomainError("closest_estimate: no estimates");
  double best = estimates.front();
  for (double e : estimates) {
    const double d = std::abs(e - truth);
    const double db = std::abs(best - truth);
    if (d < db || (d == db && e < best)) best = e;
  }
  return best;
}

void write_curve_csv(std::ostream& out, const LocalizationCurve& curve) {
  out << "theta_deg," << method_name(curve.method) << '\n' << std::setprecision(12);
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    out << rad_to_deg(curve.grid[i]) << ',' << curve.values[i] << '\n';
  }
}

}  // namespace rspk
