// SPDX-License-Identifier: Apache-2.0
#include "rspk/tau_measure.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "rspk/errors.hpp"
#include "rspk/rng.hpp"

namespace rspk {

TauMeasure::TauMeasure(Kind kind, std::vector<double> atoms, std::vector<double> weights)
    : kind_(kind), atoms_(std::move(atoms)), weights_(std::move(weights)) {}

TauMeasure TauMeasure::dirac(double t0) {
  if (!(t0 > 0.0) || !std::isfinite(t0)) throw DomainError("dirac measure needs a positive atom");
  return TauMeasure(Kind::kDirac, {t0}, {1.0});
}

TauMeasure TauMeasure::empirical(std::vector<double> values) {
  if (values.empty()) throw DomainError("empirical measure needs at least one value");
  std::vector<double> w(values.size(), 1.0 / static_cast<double>(values.size()));
  return weighted(std::move(values), std::move(w), Kind::kEmpirical);
}

TauMeasure TauMeasure::weighted(std::vector<double> atoms, std::vector<double> weights, Kind kind) {
  if (atoms.empty() || atoms.size() != weights.size()) throw DomainError("measure: atoms and weights mismatch");
  std::vector<std::size_t> order(atoms.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return atoms[a] < atoms[b]; });
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("measure: weights must be finite and nonnegative");
    total += w;
  }
  if (!(total > 0.0)) throw DomainError("measure: zero total mass");
  std::vector<double> a(atoms.size());
  std::vector<double> w(atoms.size());
  for (std::size_t k = 0; k < order.size(); ++k) {
    a[k] = atoms[order[k]];
    w[k] = weights[order[k]] / total;
    if (!(a[k] > 0.0) || !std::isfinite(a[k])) throw DomainError("measure: atoms must be positive and finite");
  }
  return TauMeasure(kind, std::move(a), std::move(w));
}

TauMeasure TauMeasure::analytic(const NoiseModel& model, std::size_t draws, std::uint64_t seed) {
  model.validate();
  if (model.kind != NoiseModel::Kind::kStudentT) return dirac(1.0);
  if (draws == 0) throw DomainError("analytic measure needs at least one draw");
  Rng rng(derive_seed(seed, 0, StreamRole::kQuadrature));
  auto taus = sample_tau(model, draws, 1, rng);
  std::vector<double> w(taus.size(), 1.0 / static_cast<double>(taus.size()));
  auto m = weighted(std::move(taus), std::move(w), Kind::kAnalytic);
  return m;
}

double TauMeasure::mean() const {
  return integrate([](double t) { return t; });
}

TauMeasure TauMeasure::compressed(std::size_t bins, std::size_t tail) const {
  if (bins == 0) throw DomainError("compressed: bins must be positive");
  if (atoms_.size() <= bins + tail) return *this;
  const std::size_t body = atoms_.size() - tail;
  std::vector<double> a;
  std::vector<double> w;
  a.reserve(bins + tail);
  w.reserve(bins + tail);
  // Bin edges by index; atoms are sorted, so index bins are quantile bins
  // for equal-mass measures.
  for (std::size_t b = 0; b < bins; ++b) {
    const std::size_t lo = b * body / bins;
    const std::size_t hi = (b + 1) * body / bins;
    double mass = 0.0;
    double first = 0.0;
    for (std::size_t k = lo; k < hi; ++k) {
      mass += weights_[k];
      first += weights_[k] * atoms_[k];
    }
    if (mass > 0.0) {
      a.push_back(first / mass);
      w.push_back(mass);
    }
  }
  for (std::size_t k = body; k < atoms_.size(); ++k) {
    a.push_back(atoms_[k]);
    w.push_back(weights_[k]);
  }
  return TauMeasure(kind_, std::move(a), std::move(w));
}

}  // namespace rspk
