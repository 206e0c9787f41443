// SPDX-License-Identifier: Apache-2.0
#include "rspk/datagen.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rspk/errors.hpp"

namespace rspk {

void SourceConfig::validate() const {
  if (angles.size() != powers.size()) {
    throw ConfigError("sources: " + std::to_string(angles.size()) + " angles but " +
                      std::to_string(powers.size()) + " powers");
  }
  if (!(spacing > 0.0)) throw ConfigError("sources: antenna spacing must be positive");
  for (std::size_t i = 0; i < angles.size(); ++i) {
    if (!std::isfinite(angles[i])) throw ConfigError("sources: non-finite angle");
    if (!(powers[i] >= 0.0) || !std::isfinite(powers[i])) {
      throw ConfigError("sources: powers must be finite and nonnegative");
    }
    if (i > 0 && powers[i] > powers[i - 1]) throw ConfigError("sources: powers must be sorted non-increasing");
    for (std::size_t j = 0; j < i; ++j) {
      if (angles[i] == angles[j]) throw ConfigError("sources: angles must be pairwise distinct");
    }
  }
}

NoiseModel NoiseModel::gaussian() { return NoiseModel{}; }

NoiseModel NoiseModel::student_t(double beta) {
  NoiseModel m;
  m.kind = Kind::kStudentT;
  m.beta = beta;
  m.validate();
  return m;
}

NoiseModel NoiseModel::outlier(std::size_t count, double value) {
  NoiseModel m;
  m.kind = Kind::kOutlier;
  m.outlier_count = count;
  m.outlier_value = value;
  m.validate();
  return m;
}

void NoiseModel::validate() const {
  switch (kind) {
    case Kind::kGaussian:
      return;
    case Kind::kStudentT:
      if (!(beta > 2.0)) throw ConfigError("Student-t noise needs beta > 2, got " + std::to_string(beta));
      return;
    case Kind::kOutlier:
      if (outlier_count == 0) throw ConfigError("outlier noise needs a positive outlier count");
      if (!(outlier_value > 0.0)) throw ConfigError("outlier noise needs a positive outlier value");
      return;
  }
}

std::string NoiseModel::describe() const {
  std::ostringstream os;
  switch (kind) {
    case Kind::kGaussian:
      os << "gaussian";
      break;
    case Kind::kStudentT:
      os << "student-t(beta=" << beta << ")";
      break;
    case Kind::kOutlier:
      os << "outlier(count=" << outlier_count << ", value=" << outlier_value << ")";
      break;
  }
  return os.str();
}

SnapshotMatrix::SnapshotMatrix(CMatrix data) : data_(std::move(data)) {
  if (data_.rows() < 1 || data_.cols() < 1) throw ConfigError("snapshot matrix must be at least 1 x 1");
  if (!data_.allFinite()) throw DomainError("snapshot matrix has non-finite entries");
}

CVector steering_vector(double theta, Index n_antennas, double spacing) {
  if (n_antennas < 1) throw DomainError("steering vector needs at least one antenna");
  if (!(spacing > 0.0)) throw DomainError("steering vector needs positive spacing");
  const double phase = 2.0 * kPi * spacing * std::sin(theta);
  const double scale = 1.0 / std::sqrt(static_cast<double>(n_antennas));
  CVector a(n_antennas);
  for (Index j = 0; j < n_antennas; ++j) {
    a(j) = std::polar(scale, phase * static_cast<double>(j));
  }
  return a;
}

CMatrix steering_matrix(const SourceConfig& sources, Index n_antennas) {
  CMatrix a(n_antennas, static_cast<Index>(sources.size()));
  for (std::size_t l = 0; l < sources.size(); ++l) {
    a.col(static_cast<Index>(l)) =
        std::sqrt(sources.powers[l]) * steering_vector(sources.angles[l], n_antennas, sources.spacing);
  }
  return a;
}

std::vector<double> sample_tau(const NoiseModel& model, std::size_t n, Index n_antennas, Rng& rng) {
  model.validate();
  if (n == 0) throw DomainError("sample_tau: n must be positive");
  std::vector<double> taus(n, 1.0);
  switch (model.kind) {
    case NoiseModel::Kind::kGaussian: {
      if (n_antennas < 1) throw DomainError("sample_tau: Gaussian noise needs N >= 1");
      // chi2(2N) / 2N is Gamma(shape N, scale 1/N).
      const double shape = static_cast<double>(n_antennas);
      std::gamma_distribution<double> gamma(shape, 1.0 / shape);
      for (auto& t : taus) t = gamma(rng);
      break;
    }
    case NoiseModel::Kind::kStudentT: {
      std::student_t_distribution<double> student(model.beta);
      const double scale = (model.beta - 2.0) / model.beta;
      for (auto& t : taus) {
        const double x = student(rng);
        t = x * x * scale;
      }
      break;
    }
    case NoiseModel::Kind::kOutlier: {
      if (model.outlier_count > n) {
        throw ConfigError("outlier noise: " + std::to_string(model.outlier_count) + " outliers exceed n = " +
                          std::to_string(n));
      }
      std::fill(taus.end() - static_cast<std::ptrdiff_t>(model.outlier_count), taus.end(), model.outlier_value);
      break;
    }
  }
  return taus;
}

namespace {

cplx draw_symbol(SymbolLaw law, Rng& rng) {
  if (law == SymbolLaw::kGaussian) return complex_normal(rng);
  std::bernoulli_distribution coin(0.5);
  const double h = std::sqrt(0.5);
  return {coin(rng) ? h : -h, coin(rng) ? h : -h};
}

}  // namespace

Synthesis synthesize(const SourceConfig& sources, const NoiseModel& noise, Index n_antennas, Index n_samples,
                     Rng& rng, SymbolLaw symbol_law) {
  sources.validate();
  noise.validate();
  const auto n_sources = static_cast<Index>(sources.size());
  if (n_antennas < 1 || n_samples < 1) throw ConfigError("synthesize: N and n must be positive");
  if (n_antennas < n_sources) {
    throw ConfigError("synthesize: N = " + std::to_string(n_antennas) + " is smaller than L = " +
                      std::to_string(n_sources));
  }

  GroundTruth truth;
  truth.taus = sample_tau(noise, static_cast<std::size_t>(n_samples), n_antennas, rng);
  truth.angles = sources.angles;
  truth.powers = sources.powers;

  truth.symbols.resize(n_sources, n_samples);
  for (Index i = 0; i < n_samples; ++i) {
    for (Index l = 0; l < n_sources; ++l) truth.symbols(l, i) = draw_symbol(symbol_law, rng);
  }
  truth.gaussian.resize(n_antennas, n_samples);
  for (Index i = 0; i < n_samples; ++i) {
    for (Index j = 0; j < n_antennas; ++j) truth.gaussian(j, i) = complex_normal(rng);
  }

  const CMatrix a = steering_matrix(sources, n_antennas);
  const double sqrt_n = std::sqrt(static_cast<double>(n_antennas));
  CMatrix y = a * truth.symbols;
  for (Index i = 0; i < n_samples; ++i) {
    const double norm = truth.gaussian.col(i).norm();
    const double scale = std::sqrt(truth.taus[static_cast<std::size_t>(i)]) * sqrt_n / norm;
    y.col(i) += scale * truth.gaussian.col(i);
  }
  return Synthesis{SnapshotMatrix(std::move(y)), std::move(truth)};
}

}  // namespace rspk
