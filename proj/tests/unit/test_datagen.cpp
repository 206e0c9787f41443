// SPDX-License-Identifier: Apache-2.0
#include <cmath>
#include <numeric>

#include <gtest/gtest.h>

#include "rspk/datagen.hpp"
#include "rspk/errors.hpp"
#include "rspk/rng.hpp"

namespace rspk {
namespace {

TEST(Steering, BroadsideIsFlat) {
  const CVector a = steering_vector(0.0, 4, 0.5);
  for (Index j = 0; j < 4; ++j) {
    EXPECT_NEAR(a(j).real(), 0.5, 1e-15);
    EXPECT_NEAR(a(j).imag(), 0.0, 1e-15);
  }
}

TEST(Steering, UnitNorm) {
  for (double theta : {-1.2, -0.3, 0.0, 0.17, 0.9, 1.5}) {
    for (Index n : {1, 7, 20, 200}) EXPECT_NEAR(steering_vector(theta, n, 0.5).norm(), 1.0, 1e-14);
  }
}

TEST(Steering, InnerProductMatchesDirectSum) {
  const double t1 = deg_to_rad(10.0);
  const double t2 = deg_to_rad(12.0);
  const CVector a = steering_vector(t1, 20, 0.5);
  const CVector b = steering_vector(t2, 20, 0.5);
  // Oracle: sum_j exp(i pi j (sin t2 - sin t1)) / N written out term by term.
  std::complex<double> acc = 0.0;
  const double dphi = kPi * (std::sin(t2) - std::sin(t1));
  for (int j = 0; j < 20; ++j) acc += std::exp(std::complex<double>(0.0, dphi * j));
  acc /= 20.0;
  EXPECT_NEAR(std::abs(a.dot(b)), std::abs(acc), 1e-13);
  // Dirichlet kernel closed form.
  const double dirichlet = std::abs(std::sin(20 * dphi / 2) / (20 * std::sin(dphi / 2)));
  EXPECT_NEAR(std::abs(a.dot(b)), dirichlet, 1e-13);
}

TEST(Steering, NearOrthogonalForLargeArrays) {
  SourceConfig s{{deg_to_rad(10.0), deg_to_rad(20.0)}, {1.0, 1.0}, 0.5};
  const CMatrix a = steering_matrix(s, 1000);
  CMatrix g = a.adjoint() * a;
  EXPECT_LT(std::abs(g(0, 1)), 0.05);
}

TEST(SampleTau, OutlierLayout) {
  Rng rng(1);
  const auto t = sample_tau(NoiseModel::outlier(1, 100.0), 5, 4, rng);
  EXPECT_EQ(t, (std::vector<double>{1, 1, 1, 1, 100}));
}

TEST(SampleTau, GaussianUnitMean) {
  Rng rng(2);
  const auto t = sample_tau(NoiseModel::gaussian(), 1'000'000, 20, rng);
  EXPECT_NEAR(std::accumulate(t.begin(), t.end(), 0.0) / t.size(), 1.0, 0.01);
}

TEST(SampleTau, StudentTUnitMean) {
  Rng rng(3);
  const auto t = sample_tau(NoiseModel::student_t(100.0), 1'000'000, 20, rng);
  EXPECT_NEAR(std::accumulate(t.begin(), t.end(), 0.0) / t.size(), 1.0, 0.01);
}

TEST(SampleTau, RejectsHeavyBeta) { EXPECT_THROW(NoiseModel::student_t(2.0), ConfigError); }

TEST(Synthesize, Shape) {
  Rng rng(4);
  SourceConfig s{{0.1, 0.3}, {1.0, 0.5}, 0.5};
  const auto syn = synthesize(s, NoiseModel::gaussian(), 8, 30, rng);
  EXPECT_EQ(syn.snapshots.n_antennas(), 8);
  EXPECT_EQ(syn.snapshots.n_samples(), 30);
  EXPECT_EQ(syn.truth.taus.size(), 30u);
  EXPECT_EQ(syn.truth.symbols.rows(), 2);
}

TEST(Synthesize, NoiseOnlyUnitPower) {
  Rng rng(5);
  const auto syn = synthesize(SourceConfig{}, NoiseModel::gaussian(), 10, 10'000, rng);
  const double mean = syn.snapshots.data().colwise().squaredNorm().mean() / 10.0;
  EXPECT_NEAR(mean, 1.0, 0.02);
}

TEST(Synthesize, NoiseColumnsHaveNormSqrtN) {
  Rng rng(6);
  const auto syn = synthesize(SourceConfig{}, NoiseModel::student_t(5.0), 12, 50, rng);
  for (Index i = 0; i < 50; ++i) {
    const double tau = syn.truth.taus[static_cast<std::size_t>(i)];
    EXPECT_NEAR(syn.snapshots.data().col(i).squaredNorm() / tau, 12.0, 1e-10);
  }
}

TEST(Synthesize, SecondMomentOracle) {
  // E|y_i|^2 / N = tau_i + sum_l p_l / N since |a_l| = 1 and E|s|^2 = 1.
  SourceConfig s{{deg_to_rad(10.0), deg_to_rad(12.0)}, {1.0, 1.0}, 0.5};
  const NoiseModel noise = NoiseModel::outlier(1, 3.0);
  double acc = 0.0;
  const int trials = 10'000;
  for (int t = 0; t < trials; ++t) {
    Rng rng = make_stream(11, static_cast<std::uint64_t>(t), StreamRole::kData);
    const auto syn = synthesize(s, noise, 200, 2, rng);
    acc += syn.snapshots.data().col(1).squaredNorm() / 200.0;
  }
  EXPECT_NEAR(acc / trials, 3.0 + 2.0 / 200.0, 0.002);
}

TEST(Synthesize, Reproducible) {
  SourceConfig s{{0.2}, {2.0}, 0.5};
  Rng r1 = make_stream(9, 3, StreamRole::kData);
  Rng r2 = make_stream(9, 3, StreamRole::kData);
  const auto a = synthesize(s, NoiseModel::student_t(10.0), 6, 20, r1);
  const auto b = synthesize(s, NoiseModel::student_t(10.0), 6, 20, r2);
  EXPECT_TRUE(a.snapshots.data() == b.snapshots.data());
}

TEST(Synthesize, RejectsTooManySources) {
  Rng rng(1);
  SourceConfig s{{0.1, 0.2, 0.3}, {1, 1, 1}, 0.5};
  EXPECT_THROW(synthesize(s, NoiseModel::gaussian(), 2, 10, rng), ConfigError);
}

TEST(Synthesize, QpskSymbolsHaveUnitModulus) {
  Rng rng(8);
  SourceConfig s{{0.2}, {1.0}, 0.5};
  const auto syn = synthesize(s, NoiseModel::gaussian(), 4, 40, rng, SymbolLaw::kQpsk);
  for (Index i = 0; i < 40; ++i) EXPECT_NEAR(std::abs(syn.truth.symbols(0, i)), 1.0, 1e-15);
}

TEST(Rng, StreamsDiffer) {
  EXPECT_NE(derive_seed(1, 0, StreamRole::kData), derive_seed(1, 1, StreamRole::kData));
  EXPECT_NE(derive_seed(1, 0, StreamRole::kData), derive_seed(1, 0, StreamRole::kQuadrature));
  EXPECT_NE(derive_seed(1, 0, StreamRole::kData), derive_seed(2, 0, StreamRole::kData));
}

}  // namespace
}  // namespace rspk
