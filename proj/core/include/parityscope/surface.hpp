#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

namespace parityscope {

/// Phase-space scan in detected-referred coordinates: beta = exp(i phi) sqrt(n_vac).
/// Points are ordered row-major, radial level first, then phase.
struct ScanGrid {
  std::vector<double> radial_levels;  ///< n_vac values, strictly increasing, >= 0
  std::vector<double> phases;         ///< radians, strictly increasing in [0, 2 pi)

  /// `n_radial` levels uniform in amplitude sqrt(n_vac) over [0, sqrt(max_n_vac)] and
  /// `n_phase` equally spaced phases starting at zero.
  static ScanGrid uniform_amplitude(int n_radial, int n_phase, double max_n_vac);

  void validate() const;
  std::size_t size() const noexcept { return radial_levels.size() * phases.size(); }
  std::size_t index(std::size_t radial, std::size_t phase) const noexcept {
    return radial * phases.size() + phase;
  }
};

enum class ScanMode { MonteCarlo, Exact, Both };

std::string_view to_string(ScanMode mode);
/// Accepts "monte_carlo", "exact", "both"; throws DomainError otherwise.
ScanMode parse_scan_mode(std::string_view text);

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct SurfacePoint {
  int radial_index = 0;
  int phase_index = 0;
  double re_beta = 0.0;
  double im_beta = 0.0;
  double pi_hat = kNaN;
  double sigma = kNaN;
  double exact_pi = kNaN;
  double z = kNaN;
  long long even_count = 0;
  long long odd_count = 0;
  bool valid = true;
  double truncation_deficit = 0.0;  ///< mass folded into the last count bin (MC) or lost
};

struct SurfaceMetadata {
  std::string config_echo;  ///< JSON run configuration sufficient to re-run the scan
  std::string version;
  std::string timestamp;
  double counting_interval_us = 30.0;  ///< documents the temporal mode only
  double max_truncation_deficit = 0.0;
  long long invalid_points = 0;
};

/// Result of a phase-space scan; one record per grid point in grid order.
struct WignerSurface {
  ScanGrid grid;
  ScanMode mode = ScanMode::Both;
  long long n_intervals = 0;
  std::uint64_t master_seed = 0;
  std::vector<SurfacePoint> points;
  SurfaceMetadata metadata;

  const SurfacePoint& at(std::size_t radial, std::size_t phase) const {
    return points.at(grid.index(radial, phase));
  }
  bool has_monte_carlo() const noexcept { return mode != ScanMode::Exact; }
  bool has_exact() const noexcept { return mode != ScanMode::MonteCarlo; }
};

}  // namespace parityscope
