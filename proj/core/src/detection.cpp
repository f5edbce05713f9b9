#include "parityscope/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "parityscope/errors.hpp"

namespace parityscope {

namespace {

void require_unit_interval(double value, const char* name) {
  if (!(value > 0.0 && value <= 1.0))
    throw DomainError(std::string(name) + " must lie in (0, 1], got " + std::to_string(value));
}

std::vector<double> poisson_pmf(double mean, int n_max, double& tail) {
  std::vector<double> p(static_cast<std::size_t>(n_max) + 1, 0.0);
  if (mean == 0.0) {
    p[0] = 1.0;
    tail = 0.0;
    return p;
  }
  const double log_mean = std::log(mean);
  double sum = 0.0;
  for (int n = 0; n <= n_max; ++n) {
    p[n] = std::exp(-mean + n * log_mean - std::lgamma(n + 1.0));
    sum += p[n];
  }
  tail = std::max(0.0, 1.0 - sum);
  return p;
}

CountDistribution poisson_or_overflow(double mean, int n_max, double tail_tol) {
  double tail = 0.0;
  std::vector<double> p = poisson_pmf(mean, n_max, tail);
  if (tail > tail_tol)
    throw TruncationOverflow("Poisson background of mean " + std::to_string(mean) +
                             " does not fit below n_max=" + std::to_string(n_max));
  return CountDistribution(std::move(p), tail_tol);
}

CountDistribution matched_from_lossy(const DensityMatrix& lossy, const DetectorModel& model,
                                     const ProbePoint& point) {
  const Amplitude shift = -std::sqrt(model.overlap()) * point.beta;
  return CountDistribution(displaced_populations(lossy, shift), lossy.policy().tail_tol);
}

CountDistribution add_backgrounds(const CountDistribution& matched, const DetectorModel& model,
                                  const ProbePoint& point, double tail_tol) {
  const int n_max = static_cast<int>(matched.size()) - 1;
  CountDistribution out = matched;
  const double mismatch_mean = (1.0 - model.overlap()) * std::norm(point.beta);
  if (mismatch_mean > 0.0) out = convolve(out, poisson_or_overflow(mismatch_mean, n_max, tail_tol));
  if (model.dark_mean() > 0.0)
    out = convolve(out, poisson_or_overflow(model.dark_mean(), n_max, tail_tol));
  return out;
}

}  // namespace

DetectorModel::DetectorModel(double eta, double transmission, double visibility, double dark_mean)
    : eta_(eta), transmission_(transmission), visibility_(visibility), dark_mean_(dark_mean) {
  require_unit_interval(eta, "eta");
  require_unit_interval(transmission, "transmission");
  require_unit_interval(visibility, "visibility");
  if (!(dark_mean >= 0.0) || !std::isfinite(dark_mean))
    throw DomainError("dark_mean must be finite and >= 0, got " + std::to_string(dark_mean));
}

DetectorModel DetectorModel::ideal() { return DetectorModel(1.0, 1.0, 1.0, 0.0); }

DetectorModel DetectorModel::from_overlap(double eta, double transmission, double xi,
                                          double dark_mean) {
  require_unit_interval(xi, "xi");
  return DetectorModel(eta, transmission, 2.0 * xi / (1.0 + xi), dark_mean);
}

ProbePoint ProbePoint::polar(double n_vac, double phase) {
  if (!(n_vac >= 0.0) || !std::isfinite(phase)) throw DomainError("probe point must be finite");
  return ProbePoint{std::polar(std::sqrt(n_vac), phase)};
}

CountDistribution matched_count_distribution(const DensityMatrix& rho, const DetectorModel& model,
                                             const ProbePoint& point) {
  return matched_from_lossy(loss_channel(rho, model.efficiency()), model, point);
}

CountDistribution matched_count_distribution_reversed(const DensityMatrix& rho,
                                                      const DetectorModel& model,
                                                      const ProbePoint& point) {
  const Amplitude shift = -std::sqrt(model.overlap() / model.efficiency()) * point.beta;
  return diagonal(loss_channel(apply_displacement(rho, shift), model.efficiency()));
}

CountDistribution poisson_distribution(double mean, int n_max, double tail_tol) {
  if (!(mean >= 0.0) || !std::isfinite(mean))
    throw DomainError("Poisson mean must be finite and >= 0");
  if (n_max < 0) throw DomainError("n_max must be >= 0");
  double tail = 0.0;
  std::vector<double> p = poisson_pmf(mean, n_max, tail);
  if (tail > tail_tol)
    throw DomainError("Poisson tail mass " + std::to_string(tail) + " above n_max=" +
                      std::to_string(n_max) + " exceeds tail_tol");
  return CountDistribution(std::move(p), tail_tol);
}

CountDistribution convolve(const CountDistribution& a, const CountDistribution& b) {
  const std::size_t len = std::max(a.size(), b.size());
  std::vector<double> out(len, 0.0);
  const auto pa = a.probs();
  const auto pb = b.probs();
  for (std::size_t i = 0; i < pa.size(); ++i) {
    if (pa[i] == 0.0) continue;
    for (std::size_t j = 0; j < pb.size() && i + j < len; ++j) out[i + j] += pa[i] * pb[j];
  }
  const double tol = std::min(a.tail_tol() + b.tail_tol(), 0.5);
  return CountDistribution(std::move(out), tol);
}

CountDistribution full_count_distribution(const DensityMatrix& rho, const DetectorModel& model,
                                          const ProbePoint& point) {
  return add_backgrounds(matched_count_distribution(rho, model, point), model, point,
                         rho.policy().tail_tol);
}

double parity_of_distribution(const CountDistribution& p) {
  const auto probs = p.probs();
  double sum = 0.0;
  for (std::size_t n = 0; n < probs.size(); ++n) sum += (n % 2 == 0) ? probs[n] : -probs[n];
  return sum;
}

double exact_pi(const DensityMatrix& rho, const DetectorModel& model, const ProbePoint& point) {
  const double xi = model.overlap();
  const double eff = model.efficiency();
  const Amplitude signal_point = std::sqrt(xi / eff) * point.beta;
  const double w = quasidist(rho, signal_point, model.ordering());
  return std::exp(-2.0 * (1.0 - xi) * std::norm(point.beta)) * std::numbers::pi / (2.0 * eff) * w *
         std::exp(-2.0 * model.dark_mean());
}

double coherent_closed_form(Amplitude alpha0, const DetectorModel& model, const ProbePoint& point) {
  const double xi = model.overlap();
  const double eff = model.efficiency();
  const Amplitude center = std::sqrt(xi * eff) * alpha0;
  return std::exp(-2.0 * std::norm(point.beta - center) - 2.0 * (1.0 - xi) * eff * std::norm(alpha0) -
                  2.0 * model.dark_mean());
}

MeasurementChain::MeasurementChain(DensityMatrix rho, DetectorModel model)
    : signal_(std::move(rho)), model_(model), lossy_(loss_channel(signal_, model_.efficiency())) {}

CountDistribution MeasurementChain::matched(const ProbePoint& point) const {
  return matched_from_lossy(lossy_, model_, point);
}

CountDistribution MeasurementChain::full(const ProbePoint& point) const {
  return add_backgrounds(matched(point), model_, point, signal_.policy().tail_tol);
}

double MeasurementChain::exact_pi(const ProbePoint& point) const {
  return parityscope::exact_pi(signal_, model_, point);
}

}  // namespace parityscope
