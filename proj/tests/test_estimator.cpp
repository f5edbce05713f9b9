#include <cmath>
#include <numbers>
#include <numeric>
#include <set>

#include <gtest/gtest.h>

#include "oracles.hpp"
#include "parityscope/detection.hpp"
#include "parityscope/errors.hpp"
#include "parityscope/estimator.hpp"
#include "parityscope/states.hpp"

using namespace parityscope;
using cd = std::complex<double>;

namespace {

TruncationPolicy cutoff(int c) { return TruncationPolicy{c, 1e-9}; }

const DetectorModel kLab(0.70, 0.986, 0.985);

}  // namespace

TEST(SampleCounts, Delta) {
  const auto h = sample_counts(CountDistribution::delta(5), 100, 1);
  ASSERT_EQ(h.size(), 5u);
  EXPECT_EQ(h[0], 100);
  for (std::size_t n = 1; n < 5; ++n) EXPECT_EQ(h[n], 0);
}

TEST(SampleCounts, PoissonMean) {
  const long long N = 1'000'000;
  const auto h = sample_counts(poisson_distribution(1.0, 48), N, 7);
  EXPECT_EQ(std::accumulate(h.begin(), h.end(), 0LL), N);
  double mean = 0.0;
  for (std::size_t n = 0; n < h.size(); ++n) mean += static_cast<double>(n) * h[n];
  mean /= N;
  EXPECT_NEAR(mean, 1.0, 0.004);
  // Empirical frequencies against the pmf, 5 sigma each.
  for (int n = 0; n < 6; ++n) {
    const double p = oracles::poisson_pmf(1.0, n);
    EXPECT_NEAR(static_cast<double>(h[n]) / N, p, 5 * std::sqrt(p * (1 - p) / N)) << n;
  }
}

TEST(SampleCounts, Deterministic) {
  const CountDistribution p = poisson_distribution(0.8, 30);
  EXPECT_EQ(sample_counts(p, 5000, 99), sample_counts(p, 5000, 99));
  EXPECT_NE(sample_counts(p, 5000, 99), sample_counts(p, 5000, 100));
}

TEST(SampleCounts, RejectsEmptyRun) {
  EXPECT_THROW(sample_counts(CountDistribution::delta(3), 0, 1), DomainError);
}

TEST(Sampler, DeficitFoldedIntoLastBin) {
  const CountDistribution p({0.5, 0.3, 0.2 - 1e-4}, 1e-3);
  const CountSampler s(p);
  EXPECT_NEAR(s.folded_mass(), 1e-4, 1e-15);
  const auto h = sample_counts(p, 200000, 3);
  EXPECT_NEAR(static_cast<double>(h[2]) / 200000, 0.2, 5 * std::sqrt(0.2 * 0.8 / 200000));
}

TEST(EstimateParity, Examples) {
  const std::vector<long long> even{10, 0, 30, 0, 60};
  const ParityEstimate e = estimate_parity(even);
  EXPECT_EQ(e.pi_hat, 1.0);
  EXPECT_EQ(e.variance, 0.0);

  const std::vector<long long> balanced{4000, 4000};
  const ParityEstimate b = estimate_parity(balanced);
  EXPECT_EQ(b.pi_hat, 0.0);
  EXPECT_NEAR(b.sigma(), 1 / std::sqrt(8000.0), 1e-15);
  EXPECT_NEAR(b.sigma(), 0.01118, 5e-6);

  const std::vector<long long> h{3000, 5000};
  const ParityEstimate c = estimate_parity(h);
  EXPECT_EQ(c.pi_hat, -0.25);
  EXPECT_NEAR(c.variance, (1 - 0.0625) / 8000, 1e-18);
  EXPECT_NEAR(c.variance, 1.1719e-4, 5e-9);
  EXPECT_EQ(c.even_count, 3000);
  EXPECT_EQ(c.odd_count, 5000);
  EXPECT_EQ(c.n_intervals, 8000);
  EXPECT_EQ(c.histogram, h);
}

TEST(EstimateParity, Invariants) {
  const CountDistribution p = poisson_distribution(1.7, 40);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const ParityEstimate e = estimate_parity(sample_counts(p, 777, seed));
    EXPECT_EQ(e.even_count + e.odd_count, e.n_intervals);
    EXPECT_EQ(e.pi_hat, static_cast<double>(e.even_count - e.odd_count) / e.n_intervals);
    EXPECT_EQ(e.variance, (1 - e.pi_hat * e.pi_hat) / e.n_intervals);
    EXPECT_GE(e.pi_hat, -1.0);
    EXPECT_LE(e.pi_hat, 1.0);
  }
}

TEST(EstimateParity, Rejections) {
  EXPECT_THROW(estimate_parity(std::vector<long long>{}), DomainError);
  EXPECT_THROW(estimate_parity(std::vector<long long>{0, 0}), DomainError);
  EXPECT_THROW(estimate_parity(std::vector<long long>{5, -1}), DomainError);
}

TEST(Seeds, DistinctPerPoint) {
  const SeedSpec s(42);
  std::set<std::uint64_t> seen;
  for (std::size_t r = 0; r < 20; ++r)
    for (std::size_t k = 0; k < 40; ++k) seen.insert(s.point_seed(r, k));
  EXPECT_EQ(seen.size(), 800u);
  EXPECT_NE(s.point_seed(1, 2), s.point_seed(2, 1));
  EXPECT_NE(SeedSpec(1).point_seed(0, 0), SeedSpec(2).point_seed(0, 0));
  EXPECT_EQ(SeedSpec(9).point_seed(3, 4), SeedSpec(9).point_seed(3, 4));
}

TEST(Unbiasedness, RepeatedRuns) {
  const DensityMatrix rho = coherent(cd(1.0, 0.4), cutoff(48));
  const ProbePoint pt{cd(0.5, 0.5)};
  const CountDistribution p = full_count_distribution(rho, kLab, pt);
  const double pi0 = coherent_closed_form(cd(1.0, 0.4), kLab, pt);
  const int R = 200;
  const long long N = 8000;
  double sum = 0.0;
  const SeedSpec seeds(123);
  for (int r = 0; r < R; ++r) sum += estimate_parity(sample_counts(p, N, seeds.point_seed(r, 0))).pi_hat;
  const double sigma = std::sqrt((1 - pi0 * pi0) / N);
  EXPECT_NEAR(sum / R, pi0, 4 * sigma / std::sqrt(R));
}

TEST(Grid, UniformAmplitude) {
  const ScanGrid g = ScanGrid::uniform_amplitude(20, 40, 4.0);
  ASSERT_EQ(g.radial_levels.size(), 20u);
  ASSERT_EQ(g.phases.size(), 40u);
  EXPECT_EQ(g.radial_levels.front(), 0.0);
  EXPECT_NEAR(g.radial_levels.back(), 4.0, 1e-15);
  EXPECT_NEAR(std::sqrt(g.radial_levels[1]), 2.0 / 19, 1e-15);
  EXPECT_NEAR(g.phases[1], 2 * std::numbers::pi / 40, 1e-15);
  EXPECT_EQ(g.size(), 800u);
  EXPECT_NO_THROW(g.validate());
}

TEST(Grid, Validation) {
  EXPECT_THROW((ScanGrid{{}, {0.0}}.validate()), DomainError);
  EXPECT_THROW((ScanGrid{{1.0, 1.0}, {0.0}}.validate()), DomainError);
  EXPECT_THROW((ScanGrid{{-1.0}, {0.0}}.validate()), DomainError);
  EXPECT_THROW((ScanGrid{{1.0}, {0.5, 0.2}}.validate()), DomainError);
  EXPECT_THROW((ScanGrid{{1.0}, {2 * std::numbers::pi}}.validate()), DomainError);
  EXPECT_NO_THROW((ScanGrid{{0.0, 1.0}, {0.0, 3.0}}.validate()));
}

TEST(Scan, IdealVacuumExact) {
  const ScanGrid g = ScanGrid::uniform_amplitude(6, 8, 3.0);
  ScanOptions o;
  o.mode = ScanMode::Exact;
  const WignerSurface s = scan(vacuum(cutoff(48)), DetectorModel::ideal(), g, o);
  ASSERT_EQ(s.points.size(), g.size());
  for (std::size_t r = 0; r < 6; ++r)
    for (std::size_t k = 0; k < 8; ++k) {
      const SurfacePoint& p = s.at(r, k);
      EXPECT_EQ(p.radial_index, static_cast<int>(r));
      EXPECT_EQ(p.phase_index, static_cast<int>(k));
      EXPECT_NEAR(p.exact_pi, std::exp(-2 * g.radial_levels[r]), 1e-12);
      EXPECT_TRUE(std::isnan(p.pi_hat));
      EXPECT_TRUE(std::isnan(p.z));
    }
  EXPECT_TRUE(s.has_exact());
  EXPECT_FALSE(s.has_monte_carlo());
}

TEST(Scan, PointRecordsConsistent) {
  const ScanGrid g = ScanGrid::uniform_amplitude(4, 6, 2.0);
  ScanOptions o;
  o.n_intervals = 3000;
  o.seed = SeedSpec(5);
  const WignerSurface s = scan(coherent(cd(0.8, -0.2), cutoff(48)), kLab, g, o);
  for (const auto& p : s.points) {
    const ProbePoint probe = ProbePoint::polar(g.radial_levels[p.radial_index], g.phases[p.phase_index]);
    EXPECT_NEAR(p.re_beta, probe.beta.real(), 1e-15);
    EXPECT_NEAR(p.im_beta, probe.beta.imag(), 1e-15);
    EXPECT_EQ(p.even_count + p.odd_count, 3000);
    EXPECT_EQ(p.pi_hat, static_cast<double>(p.even_count - p.odd_count) / 3000);
    EXPECT_NEAR(p.sigma, std::sqrt((1 - p.pi_hat * p.pi_hat) / 3000), 1e-15);
    const double sigma0 = std::sqrt((1 - p.exact_pi * p.exact_pi) / 3000);
    EXPECT_NEAR(p.z, (p.pi_hat - p.exact_pi) / sigma0, 1e-12);
    EXPECT_TRUE(p.valid);
  }
  EXPECT_EQ(s.master_seed, 5u);
  EXPECT_EQ(s.n_intervals, 3000);
  EXPECT_FALSE(s.metadata.version.empty());
  EXPECT_FALSE(s.metadata.timestamp.empty());
}

TEST(Scan, LargeNConvergesToExact) {
  const ScanGrid g = ScanGrid::uniform_amplitude(3, 4, 2.0);
  ScanOptions o;
  o.n_intervals = 1'000'000;
  o.seed = SeedSpec(17);
  const WignerSurface s = scan(coherent(cd(1.0, 0.5), cutoff(48)), kLab, g, o);
  for (const auto& p : s.points) EXPECT_LE(std::abs(p.pi_hat - p.exact_pi), 5e-3);
}

TEST(Scan, ZScoreTailsOnLabGrid) {
  const double a0 = std::sqrt(1.34 / kLab.efficiency());
  ScanOptions o;
  o.seed = SeedSpec(2024);
  const WignerSurface s = scan(coherent(a0, cutoff(48)), kLab, ScanGrid::uniform_amplitude(20, 40, 4.0), o);
  int above = 0;
  for (const auto& p : s.points) above += std::abs(p.z) > 3.0;
  EXPECT_LE(above / 800.0, 0.025);
}

TEST(Scan, SerialAndParallelIdentical) {
  const ScanGrid g = ScanGrid::uniform_amplitude(5, 7, 3.0);
  const DensityMatrix rho = phase_diffused_coherent(1.2, {}, cutoff(48));
  ScanOptions o;
  o.n_intervals = 2000;
  o.seed = SeedSpec(77);
  o.threads = 1;
  const WignerSurface a = scan(rho, kLab, g, o);
  o.threads = 8;
  const WignerSurface b = scan(rho, kLab, g, o);
  o.threads = 35;
  const WignerSurface c = scan(rho, kLab, g, o);
  ASSERT_EQ(a.points.size(), b.points.size());
  for (std::size_t i = 0; i < a.points.size(); ++i) {
    EXPECT_EQ(a.points[i].pi_hat, b.points[i].pi_hat);
    EXPECT_EQ(a.points[i].even_count, b.points[i].even_count);
    EXPECT_EQ(a.points[i].exact_pi, b.points[i].exact_pi);
    EXPECT_EQ(a.points[i].pi_hat, c.points[i].pi_hat);
  }
}

TEST(Scan, TruncationMarksPointsInvalid) {
  ScanOptions o;
  o.n_intervals = 100;
  const ScanGrid g{{0.0, 1.0, 30.0}, {0.0, 1.0}};
  const WignerSurface s = scan(vacuum(cutoff(20)), kLab, g, o);
  EXPECT_TRUE(s.at(0, 0).valid);
  EXPECT_TRUE(s.at(1, 1).valid);
  EXPECT_FALSE(s.at(2, 0).valid);
  EXPECT_FALSE(s.at(2, 1).valid);
  EXPECT_EQ(s.metadata.invalid_points, 2u);
  EXPECT_TRUE(std::isnan(s.at(2, 0).pi_hat));
}

TEST(Scan, RejectsBadOptions) {
  ScanOptions o;
  o.n_intervals = 0;
  EXPECT_THROW(scan(vacuum(cutoff(8)), kLab, ScanGrid{{0.0}, {0.0}}, o), DomainError);
  o.n_intervals = 10;
  EXPECT_THROW(scan(vacuum(cutoff(8)), kLab, ScanGrid{{}, {0.0}}, o), DomainError);
}

TEST(ScanModeText, RoundTrip) {
  for (ScanMode m : {ScanMode::MonteCarlo, ScanMode::Exact, ScanMode::Both})
    EXPECT_EQ(parse_scan_mode(to_string(m)), m);
  EXPECT_EQ(parse_scan_mode("mc"), ScanMode::MonteCarlo);
  EXPECT_THROW(parse_scan_mode("fast"), DomainError);
}
