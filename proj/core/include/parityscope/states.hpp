#pragma once

#include <utility>
#include <vector>

#include "parityscope/fock.hpp"

namespace parityscope {

/// Harmonic phase modulation theta(u) = center_phase + modulation_amplitude * sin(u),
/// sampled at `nodes` midpoints of the uniform time variable u in [0, 2 pi).
///
/// The counting interval (30 us) is much shorter than a 400 Hz modulation period, so each
/// interval sees a frozen phase and the detected state is a static mixture.
struct PhaseDiffusionSpec {
  double center_phase = 0.0;
  double modulation_amplitude = 0.8;
  int nodes = 64;

  void validate() const;
};

DensityMatrix vacuum(const TruncationPolicy& policy);

/// Requires |alpha0|^2 <= cutoff / 4 and the Poisson tail above the cutoff below tail_tol.
DensityMatrix coherent(Amplitude alpha0, const TruncationPolicy& policy);

/// Truncated coherent-state vector <n|alpha0>, n = 0..cutoff.
ComplexVector coherent_vector(Amplitude alpha0, int dim);

DensityMatrix fock(int n, const TruncationPolicy& policy);

DensityMatrix phase_diffused_coherent(double alpha0_magnitude, const PhaseDiffusionSpec& spec,
                                      const TruncationPolicy& policy);

/// Convex combination; weights must be non-negative, sum to one within 1e-12, and all
/// components must share one truncation policy.
DensityMatrix mixture(const std::vector<std::pair<double, DensityMatrix>>& components);

}  // namespace parityscope
