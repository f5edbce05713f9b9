#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parityscope/config.hpp"
#include "parityscope/surface.hpp"

namespace parityscope {

/// Parameters of the three-panel reproduction (vacuum, weak coherent, phase-diffused coherent).
/// Detector: eta = 0.70, T = 0.986, v = 0.985 (efficiency and visibility at their lower bounds).
struct Fig2Options {
  std::uint64_t seed = 2024;
  unsigned threads = 0;
  long long n_intervals = 8000;
  int n_radial = 20;
  int n_phase = 40;
  double max_n_vac = 4.0;  ///< the absolute axis scale is not given; n_vac in [0, 4]
  TruncationPolicy truncation{};
  DetectorParams detector{};
  double detected_mean_photons = 1.34;  ///< eta T |alpha0|^2 of the coherent panels
  double center_phase = 0.0;
  double modulation_amplitude = 0.8;
  int nodes = 64;
};

enum class Fig2Panel { Vacuum, Coherent, PhaseDiffused };

std::string_view to_string(Fig2Panel panel);

/// Signal-referred coherent amplitude |alpha0| for the requested detected mean.
double fig2_coherent_magnitude(const Fig2Options& options);

RunConfig fig2_panel_config(Fig2Panel panel, const Fig2Options& options);

/// Circular local maxima of an angular profile whose topographic prominence is at least
/// `min_prominence`; returns indices in increasing order.
std::vector<std::size_t> angular_maxima(std::span<const double> profile, double min_prominence);

/// Signed angular distance a - b wrapped into (-pi, pi].
double wrapped_angle(double a, double b);

struct PanelSummary {
  Fig2Panel panel = Fig2Panel::Vacuum;
  double mc_max = 0.0, mc_min = 0.0;
  double exact_max = 0.0, exact_min = 0.0;
  double peak_pi_hat = 0.0;
  double peak_sigma = 0.0;
  double peak_exact = 0.0;
  double peak_re_beta = 0.0, peak_im_beta = 0.0;
  /// Largest |pi_hat - ring mean| over all rings, in units of the ring's statistical error.
  double max_ring_deviation_sigma = 0.0;
  std::size_t ring_index = 0;  ///< ring used for the angular-maximum search
  std::vector<double> mc_maxima_phases;
  std::vector<double> exact_maxima_phases;
  double fraction_abs_z_above_3 = 0.0;
};

struct Fig2Result {
  WignerSurface vacuum, coherent, diffused;
  PanelSummary vacuum_summary, coherent_summary, diffused_summary;
  double coherent_to_vacuum_ratio = 0.0;
  Fig2Options options;

  std::string report() const;
};

PanelSummary summarize_panel(Fig2Panel panel, const WignerSurface& surface);

Fig2Result reproduce_fig2(const Fig2Options& options = {});

}  // namespace parityscope
