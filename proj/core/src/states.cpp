#include "parityscope/states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "parityscope/errors.hpp"

namespace parityscope {

void PhaseDiffusionSpec::validate() const {
  if (!std::isfinite(center_phase)) throw DomainError("center_phase must be finite");
  if (!(modulation_amplitude > 0.0 && modulation_amplitude <= std::numbers::pi))
    throw DomainError("modulation_amplitude must lie in (0, pi]");
  if (nodes < 3) throw DomainError("phase diffusion needs at least 3 nodes");
}

DensityMatrix vacuum(const TruncationPolicy& policy) {
  policy.validate();
  ComplexMatrix rho = ComplexMatrix::Zero(policy.dim(), policy.dim());
  rho(0, 0) = 1.0;
  return DensityMatrix(std::move(rho), policy);
}

ComplexVector coherent_vector(Amplitude alpha0, int dim) {
  ComplexVector psi(dim);
  psi(0) = std::exp(-0.5 * std::norm(alpha0));
  for (int n = 1; n < dim; ++n) psi(n) = psi(n - 1) * alpha0 / std::sqrt(static_cast<double>(n));
  return psi;
}

DensityMatrix coherent(Amplitude alpha0, const TruncationPolicy& policy) {
  policy.validate();
  if (!std::isfinite(alpha0.real()) || !std::isfinite(alpha0.imag()))
    throw DomainError("coherent amplitude must be finite");
  if (std::norm(alpha0) > policy.cutoff / 4.0)
    throw TruncationOverflow("coherent state |alpha0|^2=" + std::to_string(std::norm(alpha0)) +
                             " violates headroom rule |alpha0|^2 <= cutoff/4 (cutoff " +
                             std::to_string(policy.cutoff) + ")");
  return DensityMatrix::projector(coherent_vector(alpha0, policy.dim()), policy);
}

DensityMatrix fock(int n, const TruncationPolicy& policy) {
  policy.validate();
  if (n < 0 || n > policy.cutoff)
    throw DomainError("Fock index " + std::to_string(n) + " outside 0.." +
                      std::to_string(policy.cutoff));
  ComplexMatrix rho = ComplexMatrix::Zero(policy.dim(), policy.dim());
  rho(n, n) = 1.0;
  return DensityMatrix(std::move(rho), policy);
}

DensityMatrix phase_diffused_coherent(double alpha0_magnitude, const PhaseDiffusionSpec& spec,
                                      const TruncationPolicy& policy) {
  if (!(alpha0_magnitude >= 0.0) || !std::isfinite(alpha0_magnitude))
    throw DomainError("alpha0 magnitude must be finite and >= 0");
  spec.validate();
  policy.validate();
  if (alpha0_magnitude * alpha0_magnitude > policy.cutoff / 4.0)
    throw TruncationOverflow("phase-diffused amplitude violates headroom rule |alpha0|^2 <= cutoff/4");

  const int dim = policy.dim();
  ComplexMatrix rho = ComplexMatrix::Zero(dim, dim);
  const double w = 1.0 / spec.nodes;
  for (int j = 0; j < spec.nodes; ++j) {
    const double u = 2.0 * std::numbers::pi * (j + 0.5) / spec.nodes;
    const double theta = spec.center_phase + spec.modulation_amplitude * std::sin(u);
    const ComplexVector psi = coherent_vector(std::polar(alpha0_magnitude, theta), dim);
    rho.noalias() += w * (psi * psi.adjoint());
  }
  rho = (0.5 * (rho + rho.adjoint())).eval();
  return DensityMatrix(std::move(rho), policy);
}

DensityMatrix mixture(const std::vector<std::pair<double, DensityMatrix>>& components) {
  if (components.empty()) throw DomainError("mixture needs at least one component");
  const TruncationPolicy& policy = components.front().second.policy();
  double total = 0.0;
  for (const auto& [w, rho] : components) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw DomainError("mixture weights must be >= 0");
    if (rho.dim() != policy.dim()) throw DomainError("mixture components differ in dimension");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw DomainError("mixture weights sum to " + std::to_string(total) + ", expected 1");
  if (components.size() == 1) return components.front().second;

  ComplexMatrix rho = ComplexMatrix::Zero(policy.dim(), policy.dim());
  for (const auto& [w, component] : components) rho += w * component.elements();
  return DensityMatrix(std::move(rho), policy);
}

}  // namespace parityscope
