#include "parityscope/estimator.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <ctime>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "parityscope/errors.hpp"

#ifndef PARITYSCOPE_VERSION
#define PARITYSCOPE_VERSION "dev"
#endif

namespace parityscope {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// 53 random mantissa bits; avoids the implementation-defined uniform_real_distribution.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string_view to_string(ScanMode mode) {
  switch (mode) {
    case ScanMode::MonteCarlo: return "monte_carlo";
    case ScanMode::Exact: return "exact";
    case ScanMode::Both: return "both";
  }
  return "both";
}

ScanMode parse_scan_mode(std::string_view text) {
  if (text == "monte_carlo" || text == "mc") return ScanMode::MonteCarlo;
  if (text == "exact") return ScanMode::Exact;
  if (text == "both") return ScanMode::Both;
  throw DomainError("unknown scan mode '" + std::string(text) + "'");
}

ScanGrid ScanGrid::uniform_amplitude(int n_radial, int n_phase, double max_n_vac) {
  if (n_radial < 1 || n_phase < 1) throw DomainError("grid needs at least one level and phase");
  if (!(max_n_vac > 0.0) && n_radial > 1) throw DomainError("max_n_vac must be > 0");
  ScanGrid g;
  const double max_amp = std::sqrt(max_n_vac);
  for (int i = 0; i < n_radial; ++i) {
    const double amp = n_radial == 1 ? max_amp : max_amp * i / (n_radial - 1);
    g.radial_levels.push_back(amp * amp);
  }
  for (int k = 0; k < n_phase; ++k) g.phases.push_back(2.0 * std::numbers::pi * k / n_phase);
  return g;
}

void ScanGrid::validate() const {
  if (radial_levels.empty() || phases.empty()) throw DomainError("scan grid is empty");
  for (std::size_t i = 0; i < radial_levels.size(); ++i) {
    if (!(radial_levels[i] >= 0.0) || !std::isfinite(radial_levels[i]))
      throw DomainError("radial levels must be finite and >= 0");
    if (i > 0 && !(radial_levels[i] > radial_levels[i - 1]))
      throw DomainError("radial levels must be strictly increasing");
  }
  for (std::size_t k = 0; k < phases.size(); ++k) {
    if (!(phases[k] >= 0.0 && phases[k] < 2.0 * std::numbers::pi))
      throw DomainError("phases must lie in [0, 2 pi)");
    if (k > 0 && !(phases[k] > phases[k - 1])) throw DomainError("phases must be strictly increasing");
  }
}

double ParityEstimate::sigma() const { return std::sqrt(variance); }

std::uint64_t SeedSpec::point_seed(std::size_t radial_index, std::size_t phase_index) const noexcept {
  std::uint64_t h = splitmix64(master_);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(radial_index) + 1) * 0xD1B54A32D192ED03ull);
  h = splitmix64(h ^ (static_cast<std::uint64_t>(phase_index) + 1) * 0xABC98388FB8FAC03ull);
  return h;
}

CountSampler::CountSampler(const CountDistribution& p) {
  const auto probs = p.probs();
  cdf_.resize(probs.size());
  double acc = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) {
    acc += probs[n];
    cdf_[n] = acc;
  }
  folded_ = std::max(0.0, 1.0 - acc);
  cdf_.back() = 1.0;
}

std::size_t CountSampler::operator()(std::mt19937_64& rng) const {
  const double u = uniform01(rng);
  const auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
  return static_cast<std::size_t>(std::min<std::ptrdiff_t>(it - cdf_.begin(),
                                                           static_cast<std::ptrdiff_t>(cdf_.size()) - 1));
}

std::vector<long long> sample_counts(const CountDistribution& p, long long n_intervals,
                                     std::uint64_t stream_seed) {
  if (n_intervals < 1) throw DomainError("need at least one counting interval");
  const CountSampler sampler(p);
  std::mt19937_64 rng(stream_seed);
  std::vector<long long> hist(sampler.size(), 0);
  for (long long i = 0; i < n_intervals; ++i) ++hist[sampler(rng)];
  return hist;
}

ParityEstimate estimate_parity(std::span<const long long> histogram) {
  ParityEstimate e;
  for (std::size_t n = 0; n < histogram.size(); ++n) {
    if (histogram[n] < 0) throw DomainError("histogram counts must be non-negative");
    (n % 2 == 0 ? e.even_count : e.odd_count) += histogram[n];
  }
  e.n_intervals = e.even_count + e.odd_count;
  if (e.n_intervals < 1) throw DomainError("histogram is empty");
  const double N = static_cast<double>(e.n_intervals);
  e.pi_hat = static_cast<double>(e.even_count - e.odd_count) / N;
  e.variance = std::max(0.0, 1.0 - e.pi_hat * e.pi_hat) / N;
  e.histogram.assign(histogram.begin(), histogram.end());
  return e;
}

namespace {

SurfacePoint evaluate_point(const MeasurementChain& chain, const ScanGrid& grid,
                            const ScanOptions& options, std::size_t r, std::size_t k) {
  SurfacePoint pt;
  pt.radial_index = static_cast<int>(r);
  pt.phase_index = static_cast<int>(k);
  const ProbePoint probe = ProbePoint::polar(grid.radial_levels[r], grid.phases[k]);
  pt.re_beta = probe.beta.real();
  pt.im_beta = probe.beta.imag();
  try {
    if (options.mode != ScanMode::Exact) {
      const CountDistribution p = chain.full(probe);
      const ParityEstimate est =
          estimate_parity(sample_counts(p, options.n_intervals, options.seed.point_seed(r, k)));
      pt.pi_hat = est.pi_hat;
      pt.sigma = est.sigma();
      pt.even_count = est.even_count;
      pt.odd_count = est.odd_count;
      pt.truncation_deficit = p.deficit();
    }
    if (options.mode != ScanMode::MonteCarlo) {
      pt.exact_pi = chain.exact_pi(probe);
    }
    if (options.mode == ScanMode::Both) {
      const double N = static_cast<double>(options.n_intervals);
      const double sigma0 = std::sqrt(std::max(0.0, 1.0 - pt.exact_pi * pt.exact_pi) / N);
      const double diff = pt.pi_hat - pt.exact_pi;
      if (sigma0 > 0.0) {
        pt.z = diff / sigma0;
      } else {
        pt.z = diff == 0.0 ? 0.0 : std::copysign(std::numeric_limits<double>::infinity(), diff);
      }
    }
  } catch (const TruncationOverflow&) {
    pt = SurfacePoint{};
    pt.radial_index = static_cast<int>(r);
    pt.phase_index = static_cast<int>(k);
    pt.re_beta = probe.beta.real();
    pt.im_beta = probe.beta.imag();
    pt.valid = false;
  }
  return pt;
}

}  // namespace

WignerSurface scan(const MeasurementChain& chain, const ScanGrid& grid, const ScanOptions& options) {
  grid.validate();
  if (options.n_intervals < 1) throw DomainError("n_intervals must be >= 1");

  WignerSurface surface;
  surface.grid = grid;
  surface.mode = options.mode;
  surface.n_intervals = options.n_intervals;
  surface.master_seed = options.seed.master();
  surface.points.resize(grid.size());

  unsigned threads = options.threads == 0 ? std::thread::hardware_concurrency() : options.threads;
  threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(grid.size()));

  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < grid.size(); i = next++) {
      try {
        const std::size_t r = i / grid.phases.size();
        const std::size_t k = i % grid.phases.size();
        surface.points[i] = evaluate_point(chain, grid, options, r, k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next = grid.size();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  for (const SurfacePoint& pt : surface.points) {
    if (!pt.valid) ++surface.metadata.invalid_points;
    surface.metadata.max_truncation_deficit =
        std::max(surface.metadata.max_truncation_deficit, pt.truncation_deficit);
  }
  surface.metadata.version = PARITYSCOPE_VERSION;
  surface.metadata.timestamp = utc_timestamp();
  return surface;
}

WignerSurface scan(const DensityMatrix& rho, const DetectorModel& model, const ScanGrid& grid,
                   const ScanOptions& options) {
  return scan(MeasurementChain(rho, model), grid, options);
}

}  // namespace parityscope
