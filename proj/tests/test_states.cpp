#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "parityscope/detection.hpp"
#include "parityscope/errors.hpp"
#include "parityscope/fig2.hpp"
#include "parityscope/states.hpp"

using namespace parityscope;
using cd = std::complex<double>;

namespace {

TruncationPolicy cutoff(int c) { return TruncationPolicy{c, 1e-9}; }

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

void expect_valid(const DensityMatrix& rho) {
  EXPECT_LE(max_abs(rho.elements() - rho.elements().adjoint()), 1e-12);
  EXPECT_LE(rho.trace(), 1.0 + 1e-12);
  EXPECT_GE(rho.trace(), 1.0 - rho.policy().tail_tol);
  for (int n = 0; n < rho.dim(); ++n) EXPECT_GE(rho.population(n), -1e-12);
}

}  // namespace

TEST(Vacuum, SmallCutoff) {
  const DensityMatrix v = vacuum(cutoff(4));
  ASSERT_EQ(v.dim(), 5);
  ComplexMatrix ref = ComplexMatrix::Zero(5, 5);
  ref(0, 0) = 1.0;
  EXPECT_EQ(max_abs(v.elements() - ref), 0.0);
  EXPECT_EQ(v.trace(), 1.0);
}

TEST(Vacuum, EvenParityAtOrigin) {
  const DensityMatrix v = vacuum(cutoff(48));
  EXPECT_EQ(parity_of_distribution(full_count_distribution(v, DetectorModel::ideal(), {})), 1.0);
}

TEST(Coherent, ZeroIsVacuum) {
  EXPECT_EQ(max_abs(coherent(0.0, cutoff(48)).elements() - vacuum(cutoff(48)).elements()), 0.0);
}

TEST(Coherent, SignalReferredMeanPhotonNumber) {
  const double eff = 0.70 * 0.986;
  const double n = 1.34 / eff;
  const DensityMatrix rho = coherent(std::sqrt(n), cutoff(48));
  EXPECT_NEAR(rho.mean_photon_number(), n, 1e-9);
  EXPECT_NEAR(rho.mean_photon_number(), 1.9415, 1e-4);
}

TEST(Coherent, MeanPhotonNumber) {
  for (double n : {0.25, 1.0, 4.0}) {
    const DensityMatrix rho = coherent(std::polar(std::sqrt(n), 2.0), cutoff(48));
    EXPECT_NEAR(rho.mean_photon_number(), n, 1e-9) << n;
    expect_valid(rho);
  }
}

TEST(Coherent, DiagonalIsPoisson) {
  const DensityMatrix rho = coherent(cd(1.0, 1.0), cutoff(48));
  for (int n = 0; n < rho.dim(); ++n) EXPECT_NEAR(rho.population(n), oracles::poisson_pmf(2.0, n), 1e-14);
}

TEST(Coherent, MatchesIndependentVector) {
  const cd a0(-0.9, 1.3);
  const Eigen::VectorXcd ref = oracles::coherent(a0, 49);
  EXPECT_LT((coherent_vector(a0, 49) - ref).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Coherent, HeadroomRule) {
  EXPECT_NO_THROW(coherent(std::sqrt(12.0), cutoff(48)));
  EXPECT_THROW(coherent(std::sqrt(12.5), cutoff(48)), TruncationOverflow);
}

TEST(FockState, Basics) {
  EXPECT_EQ(max_abs(fock(0, cutoff(6)).elements() - vacuum(cutoff(6)).elements()), 0.0);
  const DensityMatrix one = fock(1, cutoff(6));
  EXPECT_EQ(one.population(0), 0.0);
  EXPECT_EQ(one.population(1), 1.0);
  EXPECT_EQ(one.trace(), 1.0);
  EXPECT_THROW(fock(7, cutoff(6)), DomainError);
  EXPECT_THROW(fock(-1, cutoff(6)), DomainError);
}

TEST(FockState, OddParityAtOrigin) {
  const DensityMatrix one = fock(1, cutoff(48));
  const double pi = parity_of_distribution(full_count_distribution(one, DetectorModel::ideal(), {}));
  EXPECT_EQ(pi, -1.0);
  EXPECT_NEAR(2.0 / std::numbers::pi * pi, -0.63662, 5e-6);
}

TEST(PhaseDiffused, SpecValidation) {
  EXPECT_THROW((PhaseDiffusionSpec{0.0, 0.0, 64}.validate()), DomainError);
  EXPECT_THROW((PhaseDiffusionSpec{0.0, 3.2, 64}.validate()), DomainError);
  EXPECT_THROW((PhaseDiffusionSpec{0.0, 0.8, 2}.validate()), DomainError);
  EXPECT_NO_THROW((PhaseDiffusionSpec{0.0, std::numbers::pi, 3}.validate()));
  EXPECT_THROW(phase_diffused_coherent(-1.0, {}, cutoff(48)), DomainError);
}

TEST(PhaseDiffused, NegligibleModulationIsCoherent) {
  const double mag = std::sqrt(2.0);
  const DensityMatrix rho = phase_diffused_coherent(mag, {0.4, 1e-9, 64}, cutoff(48));
  const Eigen::VectorXcd c = oracles::coherent(std::polar(mag, 0.4), 49);
  const double fidelity = (c.adjoint() * rho.elements() * c)(0, 0).real();
  EXPECT_GT(fidelity, 1.0 - 1e-6);
  expect_valid(rho);
}

TEST(PhaseDiffused, ExplicitNodeMixture) {
  const double mag = 1.1;
  const PhaseDiffusionSpec spec{0.3, 0.8, 5};
  ComplexMatrix ref = ComplexMatrix::Zero(49, 49);
  for (int j = 0; j < 5; ++j) {
    const double theta = 0.3 + 0.8 * std::sin(2.0 * std::numbers::pi * (j + 0.5) / 5.0);
    const Eigen::VectorXcd c = oracles::coherent(std::polar(mag, theta), 49);
    ref += c * c.adjoint() / 5.0;
  }
  EXPECT_LT(max_abs(phase_diffused_coherent(mag, spec, cutoff(48)).elements() - ref), 1e-14);
}

TEST(PhaseDiffused, ConvergesInNodeCount) {
  const double mag = std::sqrt(2.0);
  const ComplexMatrix ref = phase_diffused_coherent(mag, {0.0, 0.8, 201}, cutoff(48)).elements();
  // The midpoint rule on a periodic integrand converges geometrically; odd and even node
  // counts approach the limit on different tracks, so the sequence is a doubling chain.
  double prev = 1.0;
  for (int m : {3, 5, 9, 17, 33, 65}) {
    const double d = oracles::trace_distance(
        phase_diffused_coherent(mag, {0.0, 0.8, m}, cutoff(48)).elements(), ref);
    EXPECT_TRUE(d < prev || d < 1e-13) << "M=" << m << " d=" << d << " prev=" << prev;
    prev = d;
  }
  const double d64 = oracles::trace_distance(
      phase_diffused_coherent(mag, PhaseDiffusionSpec{}, cutoff(48)).elements(), ref);
  EXPECT_LT(d64, 1e-6);
}

TEST(PhaseDiffused, PhaseCovariance) {
  const double mag = 1.3, delta = 0.77;
  const DensityMatrix a = phase_diffused_coherent(mag, {0.2, 0.8, 64}, cutoff(48));
  const DensityMatrix b = phase_diffused_coherent(mag, {0.2 + delta, 0.8, 64}, cutoff(48));
  Eigen::VectorXcd u(49);
  for (int n = 0; n < 49; ++n) u(n) = std::polar(1.0, n * delta);
  const ComplexMatrix rotated = u.asDiagonal() * a.elements() * u.conjugate().asDiagonal();
  EXPECT_LT(max_abs(rotated - b.elements()), 1e-9);
}

// On the ring through the attenuated amplitude the exact parity shows the two turning-point
// peaks of the harmonic phase modulation. The peak structure survives the Gaussian smoothing
// of the detected quasidistribution only when the ring is large against its unit width, so
// the check uses a bright field (ring radius 8) and a matching cutoff.
TEST(PhaseDiffused, TwoTurningPointPeaksOnAngularScan) {
  const DetectorParams dp;
  const DetectorModel model = dp.model();
  const double ring = 8.0;
  const double mag = ring / std::sqrt(model.overlap() * model.efficiency());
  const PhaseDiffusionSpec spec{0.0, 0.8, 64};
  const MeasurementChain chain(phase_diffused_coherent(mag, spec, cutoff(384)), model);

  const int n_phase = 80;
  const double step = 2.0 * std::numbers::pi / n_phase;
  std::vector<double> profile(n_phase);
  for (int k = 0; k < n_phase; ++k)
    profile[k] = parity_of_distribution(chain.full(ProbePoint{std::polar(ring, k * step)}));

  const auto maxima = angular_maxima(profile, 1e-9);
  ASSERT_EQ(maxima.size(), 2u);
  std::vector<double> offsets;
  for (auto k : maxima) offsets.push_back(wrapped_angle(k * step, spec.center_phase));
  std::sort(offsets.begin(), offsets.end());
  EXPECT_NEAR(offsets[0], -spec.modulation_amplitude, step);
  EXPECT_NEAR(offsets[1], spec.modulation_amplitude, step);
}

TEST(Mixture, SingleComponent) {
  const DensityMatrix c = coherent(cd(0.5, 0.2), cutoff(20));
  EXPECT_EQ(max_abs(mixture({{1.0, c}}).elements() - c.elements()), 0.0);
}

TEST(Mixture, VacuumAndOnePhoton) {
  const DensityMatrix m = mixture({{0.5, vacuum(cutoff(6))}, {0.5, fock(1, cutoff(6))}});
  EXPECT_EQ(m.population(0), 0.5);
  EXPECT_EQ(m.population(1), 0.5);
  for (int n = 2; n < 7; ++n) EXPECT_EQ(m.population(n), 0.0);
}

TEST(Mixture, CatMixtureOffDiagonals) {
  const cd a0(1.2, 0.3);
  const DensityMatrix p = coherent(a0, cutoff(48));
  const DensityMatrix q = coherent(-a0, cutoff(48));
  const DensityMatrix m = mixture({{0.5, p}, {0.5, q}});
  EXPECT_LT(max_abs(m.elements() - 0.5 * (p.elements() + q.elements())), 1e-16);
  EXPECT_NEAR(m.trace(), 1.0, 1e-12);
  expect_valid(m);
  // Odd coherences cancel between the two branches.
  EXPECT_LT(std::abs(m(1, 0)), 1e-16);
}

TEST(Mixture, Linearity) {
  std::mt19937_64 rng(17);
  const DensityMatrix a(testutil::random_state(rng, 21, 8), cutoff(20));
  const DensityMatrix b(testutil::random_state(rng, 21, 8), cutoff(20));
  const DensityMatrix c(testutil::random_state(rng, 21, 8), cutoff(20));
  const double w[3] = {0.25, 0.5, 0.25};
  const DensityMatrix m = mixture({{w[0], a}, {w[1], b}, {w[2], c}});
  const CountDistribution d = diagonal(m);
  for (int n = 0; n < 21; ++n)
    EXPECT_EQ(d[n], w[0] * a.population(n) + w[1] * b.population(n) + w[2] * c.population(n));
}

TEST(Mixture, Rejections) {
  EXPECT_THROW(mixture({}), DomainError);
  EXPECT_THROW(mixture({{0.6, vacuum(cutoff(4))}, {0.6, fock(1, cutoff(4))}}), DomainError);
  EXPECT_THROW(mixture({{-0.1, vacuum(cutoff(4))}, {1.1, fock(1, cutoff(4))}}), DomainError);
  EXPECT_THROW(mixture({{0.5, vacuum(cutoff(4))}, {0.5, vacuum(cutoff(5))}}), DomainError);
}

TEST(Constructors, AllValid) {
  expect_valid(vacuum(cutoff(48)));
  expect_valid(coherent(cd(1.0, -1.0), cutoff(48)));
  expect_valid(fock(5, cutoff(48)));
  expect_valid(phase_diffused_coherent(1.39, {}, cutoff(48)));
  expect_valid(mixture({{0.3, vacuum(cutoff(48))}, {0.7, coherent(1.0, cutoff(48))}}));
}
