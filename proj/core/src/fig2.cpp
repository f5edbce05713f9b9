#include "parityscope/fig2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "parityscope/errors.hpp"

namespace parityscope {

std::string_view to_string(Fig2Panel panel) {
  switch (panel) {
    case Fig2Panel::Vacuum: return "vacuum";
    case Fig2Panel::Coherent: return "coherent";
    case Fig2Panel::PhaseDiffused: return "phase_diffused";
  }
  return "vacuum";
}

double fig2_coherent_magnitude(const Fig2Options& options) {
  const double eff = options.detector.eta * options.detector.transmission;
  return std::sqrt(options.detected_mean_photons / eff);
}

RunConfig fig2_panel_config(Fig2Panel panel, const Fig2Options& options) {
  RunConfig c;
  c.detector = options.detector;
  c.truncation = options.truncation;
  c.grid.n_radial = options.n_radial;
  c.grid.n_phase = options.n_phase;
  c.grid.max_n_vac = options.max_n_vac;
  c.n_intervals = options.n_intervals;
  c.seed = options.seed;
  c.mode = ScanMode::Both;
  c.threads = options.threads;
  c.output.stem = "fig2_" + std::string(to_string(panel));
  c.output.formats = {SurfaceFormat::Csv, SurfaceFormat::Json, SurfaceFormat::Matrix};
  switch (panel) {
    case Fig2Panel::Vacuum:
      c.state.kind = StateKind::Vacuum;
      break;
    case Fig2Panel::Coherent:
      c.state.kind = StateKind::Coherent;
      c.state.alpha = {fig2_coherent_magnitude(options), 0.0};
      break;
    case Fig2Panel::PhaseDiffused:
      c.state.kind = StateKind::PhaseDiffused;
      c.state.magnitude = fig2_coherent_magnitude(options);
      c.state.diffusion = {options.center_phase, options.modulation_amplitude, options.nodes};
      break;
  }
  return c;
}

double wrapped_angle(double a, double b) {
  double d = std::remainder(a - b, 2.0 * std::numbers::pi);
  if (d <= -std::numbers::pi) d += 2.0 * std::numbers::pi;
  return d;
}

std::vector<std::size_t> angular_maxima(std::span<const double> profile, double min_prominence) {
  const std::size_t n = profile.size();
  std::vector<std::size_t> out;
  if (n < 3) return out;
  const double global_min = *std::min_element(profile.begin(), profile.end());
  for (std::size_t i = 0; i < n; ++i) {
    const double v = profile[i];
    const double left = profile[(i + n - 1) % n];
    const double right = profile[(i + 1) % n];
    // Strict on the left and non-strict on the right so a flat top counts once.
    if (!(v > left && v >= right)) continue;

    double left_min = v, right_min = v;
    bool left_higher = false, right_higher = false;
    for (std::size_t s = 1; s < n; ++s) {
      const double w = profile[(i + n - s) % n];
      if (w > v) { left_higher = true; break; }
      left_min = std::min(left_min, w);
    }
    for (std::size_t s = 1; s < n; ++s) {
      const double w = profile[(i + s) % n];
      if (w > v) { right_higher = true; break; }
      right_min = std::min(right_min, w);
    }
    const double prominence =
        (left_higher || right_higher) ? v - std::max(left_min, right_min) : v - global_min;
    if (prominence >= min_prominence) out.push_back(i);
  }
  return out;
}

PanelSummary summarize_panel(Fig2Panel panel, const WignerSurface& s) {
  PanelSummary sum;
  sum.panel = panel;
  const std::size_t nr = s.grid.radial_levels.size();
  const std::size_t np = s.grid.phases.size();
  const double N = static_cast<double>(s.n_intervals);
  const double inf = std::numeric_limits<double>::infinity();

  sum.mc_max = sum.exact_max = -inf;
  sum.mc_min = sum.exact_min = inf;
  std::size_t peak = 0;
  std::size_t z_total = 0, z_above = 0;
  for (std::size_t i = 0; i < s.points.size(); ++i) {
    const SurfacePoint& p = s.points[i];
    if (!p.valid) continue;
    if (s.has_monte_carlo()) {
      if (p.pi_hat > sum.mc_max) {
        sum.mc_max = p.pi_hat;
        peak = i;
      }
      sum.mc_min = std::min(sum.mc_min, p.pi_hat);
    }
    if (s.has_exact()) {
      sum.exact_max = std::max(sum.exact_max, p.exact_pi);
      sum.exact_min = std::min(sum.exact_min, p.exact_pi);
    }
    if (s.mode == ScanMode::Both) {
      ++z_total;
      if (std::abs(p.z) > 3.0) ++z_above;
    }
  }
  const SurfacePoint& pk = s.points[peak];
  sum.peak_pi_hat = pk.pi_hat;
  sum.peak_sigma = pk.sigma;
  sum.peak_exact = pk.exact_pi;
  sum.peak_re_beta = pk.re_beta;
  sum.peak_im_beta = pk.im_beta;
  sum.fraction_abs_z_above_3 = z_total ? static_cast<double>(z_above) / z_total : 0.0;

  if (!s.has_monte_carlo()) return sum;

  double best_ring_sum = -inf;
  for (std::size_t r = 0; r < nr; ++r) {
    double ring_sum = 0.0;
    for (std::size_t k = 0; k < np; ++k) ring_sum += s.at(r, k).pi_hat;
    if (ring_sum > best_ring_sum) {
      best_ring_sum = ring_sum;
      sum.ring_index = r;
    }
    const double mean = ring_sum / static_cast<double>(np);
    const double sigma = std::sqrt(std::max(0.0, 1.0 - mean * mean) / N);
    double dev = 0.0;
    for (std::size_t k = 0; k < np; ++k) dev = std::max(dev, std::abs(s.at(r, k).pi_hat - mean));
    const double dev_sigma = sigma > 0.0 ? dev / sigma : (dev == 0.0 ? 0.0 : inf);
    sum.max_ring_deviation_sigma = std::max(sum.max_ring_deviation_sigma, dev_sigma);
  }

  std::vector<double> mc(np), ex(np);
  for (std::size_t k = 0; k < np; ++k) {
    mc[k] = s.at(sum.ring_index, k).pi_hat;
    ex[k] = s.at(sum.ring_index, k).exact_pi;
  }
  // A noise bump rarely rises 4 standard errors (at the worst case 1/sqrt(N)) above its
  // surroundings.
  for (std::size_t k : angular_maxima(mc, 4.0 / std::sqrt(N))) sum.mc_maxima_phases.push_back(s.grid.phases[k]);
  if (s.has_exact()) {
    for (std::size_t k : angular_maxima(ex, 1e-9)) sum.exact_maxima_phases.push_back(s.grid.phases[k]);
  }
  return sum;
}

Fig2Result reproduce_fig2(const Fig2Options& options) {
  Fig2Result res;
  res.options = options;
  res.vacuum = run(fig2_panel_config(Fig2Panel::Vacuum, options));
  res.coherent = run(fig2_panel_config(Fig2Panel::Coherent, options));
  res.diffused = run(fig2_panel_config(Fig2Panel::PhaseDiffused, options));
  res.vacuum_summary = summarize_panel(Fig2Panel::Vacuum, res.vacuum);
  res.coherent_summary = summarize_panel(Fig2Panel::Coherent, res.coherent);
  res.diffused_summary = summarize_panel(Fig2Panel::PhaseDiffused, res.diffused);
  res.coherent_to_vacuum_ratio = res.coherent_summary.peak_pi_hat / res.vacuum_summary.peak_pi_hat;
  return res;
}

namespace {

void panel_lines(std::ostringstream& os, const PanelSummary& s, double center_phase) {
  os << "[" << to_string(s.panel) << "]\n";
  os << "  pi_hat range      : [" << s.mc_min << ", " << s.mc_max << "]\n";
  os << "  exact range       : [" << s.exact_min << ", " << s.exact_max << "]\n";
  os << "  peak pi_hat       : " << s.peak_pi_hat << " +/- " << s.peak_sigma << " (exact " << s.peak_exact
     << ") at beta = (" << s.peak_re_beta << ", " << s.peak_im_beta << ")\n";
  os << "  ring deviation    : " << s.max_ring_deviation_sigma << " sigma (max over rings)\n";
  os << "  fraction |z| > 3  : " << s.fraction_abs_z_above_3 << "\n";
  os << "  angular maxima    : ring " << s.ring_index << ", pi_hat at phase offsets {";
  for (std::size_t i = 0; i < s.mc_maxima_phases.size(); ++i)
    os << (i ? ", " : "") << wrapped_angle(s.mc_maxima_phases[i], center_phase);
  os << "}, exact at {";
  for (std::size_t i = 0; i < s.exact_maxima_phases.size(); ++i)
    os << (i ? ", " : "") << wrapped_angle(s.exact_maxima_phases[i], center_phase);
  os << "}\n";
}

}  // namespace

std::string Fig2Result::report() const {
  std::ostringstream os;
  os.precision(6);
  os << "parity scan reproduction: " << options.n_radial << " x " << options.n_phase << " grid, N = "
     << options.n_intervals << ", n_vac in [0, " << options.max_n_vac << "]\n";
  os << "detector: eta = " << options.detector.eta << ", T = " << options.detector.transmission
     << ", v = " << options.detector.visibility << " (xi = " << options.detector.model().overlap()
     << ", s = " << options.detector.model().ordering().s << ")\n";
  os << "coherent amplitude |alpha0| = " << fig2_coherent_magnitude(options)
     << " (eta T |alpha0|^2 = " << options.detected_mean_photons << ")\n";
  os << "phase diffusion: center " << options.center_phase << " rad, amplitude +/-"
     << options.modulation_amplitude << " rad, " << options.nodes << " nodes\n";
  panel_lines(os, vacuum_summary, 0.0);
  panel_lines(os, coherent_summary, 0.0);
  panel_lines(os, diffused_summary, options.center_phase);
  os << "coherent / vacuum peak ratio: " << coherent_to_vacuum_ratio << "\n";
  return os.str();
}

}  // namespace parityscope
