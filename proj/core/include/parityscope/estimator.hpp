#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "parityscope/count_distribution.hpp"
#include "parityscope/detection.hpp"
#include "parityscope/surface.hpp"

namespace parityscope {

/// Alternating-sum estimate from N counting intervals.
/// Invariants: even + odd = N, pi_hat = (even - odd) / N, variance = (1 - pi_hat^2) / N.
struct ParityEstimate {
  double pi_hat = 0.0;
  double variance = 0.0;
  long long n_intervals = 0;
  long long even_count = 0;
  long long odd_count = 0;
  std::vector<long long> histogram;

  double sigma() const;
};

/// Master seed plus the rule deriving an independent stream for every grid point, so the
/// result does not depend on evaluation order or thread count.
class SeedSpec {
 public:
  explicit SeedSpec(std::uint64_t master = 1) : master_(master) {}

  std::uint64_t master() const noexcept { return master_; }
  std::uint64_t point_seed(std::size_t radial_index, std::size_t phase_index) const noexcept;

 private:
  std::uint64_t master_;
};

/// Inverse-CDF sampler over a precomputed cumulative table. The truncation deficit is
/// folded into the last bin.
class CountSampler {
 public:
  explicit CountSampler(const CountDistribution& p);

  std::size_t operator()(std::mt19937_64& rng) const;
  std::size_t size() const noexcept { return cdf_.size(); }
  double folded_mass() const noexcept { return folded_; }

 private:
  std::vector<double> cdf_;
  double folded_ = 0.0;
};

/// Histogram of `n_intervals` independent click numbers drawn from `p`.
std::vector<long long> sample_counts(const CountDistribution& p, long long n_intervals,
                                     std::uint64_t stream_seed);

ParityEstimate estimate_parity(std::span<const long long> histogram);

struct ScanOptions {
  long long n_intervals = 8000;
  SeedSpec seed{1};
  ScanMode mode = ScanMode::Both;
  unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
};

/// Scans the probe over `grid`. Points whose displaced support leaks past the cutoff are
/// flagged invalid instead of aborting the scan.
WignerSurface scan(const MeasurementChain& chain, const ScanGrid& grid, const ScanOptions& options);
WignerSurface scan(const DensityMatrix& rho, const DetectorModel& model, const ScanGrid& grid,
                   const ScanOptions& options);

}  // namespace parityscope
