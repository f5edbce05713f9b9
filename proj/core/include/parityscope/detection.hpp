#pragma once

#include <optional>

#include "parityscope/count_distribution.hpp"
#include "parityscope/fock.hpp"
#include "parityscope/quasiprob.hpp"

namespace parityscope {

/// Photodetection chain: quantum efficiency eta, power transmission T of the combining beam
/// splitter, interference visibility v, and mean dark counts per interval.
///
/// Loss at the beam splitter and at the detector cannot be told apart in the count
/// statistics, so only the product eta*T enters the physics.
class DetectorModel {
 public:
  DetectorModel(double eta, double transmission, double visibility, double dark_mean = 0.0);

  /// eta = T = v = 1, no dark counts.
  static DetectorModel ideal();
  /// Builds the model from the squared mode overlap xi instead of the visibility.
  static DetectorModel from_overlap(double eta, double transmission, double xi,
                                    double dark_mean = 0.0);

  double eta() const noexcept { return eta_; }
  double transmission() const noexcept { return transmission_; }
  double visibility() const noexcept { return visibility_; }
  double dark_mean() const noexcept { return dark_mean_; }

  /// eta * T.
  double efficiency() const noexcept { return eta_ * transmission_; }
  /// Squared mode overlap xi = v / (2 - v).
  double overlap() const noexcept { return visibility_ / (2.0 - visibility_); }
  /// s = -(1 - eta T) / (eta T).
  OrderingParameter ordering() const noexcept {
    return {-(1.0 - efficiency()) / efficiency()};
  }

 private:
  double eta_;
  double transmission_;
  double visibility_;
  double dark_mean_;
};

/// Probe setting, in detected-referred units: |beta|^2 is the mean count with the signal
/// blocked (n_vac), arg(beta) the phase shift.
struct ProbePoint {
  Amplitude beta{};

  static ProbePoint polar(double n_vac, double phase);
  double radius() const noexcept { return std::abs(beta); }
  double phase() const noexcept { return std::arg(beta); }
};

/// Counts produced by the part of the probe that overlaps the signal mode: loss eta*T first,
/// then the detected-referred matched amplitude sqrt(xi)*beta.
CountDistribution matched_count_distribution(const DensityMatrix& rho, const DetectorModel& model,
                                             const ProbePoint& point);

/// Same distribution computed in the opposite order: displace the input by the
/// signal-referred amplitude sqrt(xi/(eta T))*beta, then apply the loss.
CountDistribution matched_count_distribution_reversed(const DensityMatrix& rho,
                                                      const DetectorModel& model,
                                                      const ProbePoint& point);

/// Poisson pmf on 0..n_max; throws DomainError when the mass above n_max exceeds tail_tol.
CountDistribution poisson_distribution(double mean, int n_max, double tail_tol = 1e-9);

/// (a * b)_n = sum_k a_k b_{n-k}, truncated to the longer input's length, never renormalized.
CountDistribution convolve(const CountDistribution& a, const CountDistribution& b);

/// Matched counts convolved with the Poissonian mismatched-probe counts (mean (1-xi)|beta|^2)
/// and dark counts.
CountDistribution full_count_distribution(const DensityMatrix& rho, const DetectorModel& model,
                                          const ProbePoint& point);

/// Alternating sum sum_n (-1)^n p_n.
double parity_of_distribution(const CountDistribution& p);

/// Parity from the product formula: exp(-2(1-xi)|beta|^2) * pi/(2 eta T) *
/// W(sqrt(xi/(eta T)) beta; s) * exp(-2 lambda_d), with W evaluated by series.
double exact_pi(const DensityMatrix& rho, const DetectorModel& model, const ProbePoint& point);

/// Gaussian closed form for a coherent input |alpha0>, including the dark-count factor.
double coherent_closed_form(Amplitude alpha0, const DetectorModel& model, const ProbePoint& point);

/// Caches the lossy state so repeated evaluations over a scan grid skip the loss channel.
/// Immutable after construction; safe to share across threads.
class MeasurementChain {
 public:
  MeasurementChain(DensityMatrix rho, DetectorModel model);

  const DensityMatrix& signal() const noexcept { return signal_; }
  const DensityMatrix& lossy_signal() const noexcept { return lossy_; }
  const DetectorModel& model() const noexcept { return model_; }

  CountDistribution matched(const ProbePoint& point) const;
  CountDistribution full(const ProbePoint& point) const;
  double exact_pi(const ProbePoint& point) const;

 private:
  DensityMatrix signal_;
  DetectorModel model_;
  DensityMatrix lossy_;
};

}  // namespace parityscope
