#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "parityscope/count_distribution.hpp"

namespace parityscope {

/// Complex phase-space coordinate (mode amplitude), dimensionless.
using Amplitude = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

/// Fock levels 0..cutoff are kept; `tail_tol` bounds the probability mass allowed to leak
/// above the cutoff before an operation reports TruncationOverflow.
struct TruncationPolicy {
  int cutoff = 48;
  double tail_tol = 1e-9;

  int dim() const noexcept { return cutoff + 1; }
  void validate() const;

  friend bool operator==(const TruncationPolicy&, const TruncationPolicy&) = default;
};

/// Hermitian, unit-trace (up to truncation) operator in the truncated Fock basis.
///
/// Construction checks the invariants: Hermitian to 1e-12, trace within
/// [1 - tail_tol, 1 + 1e-12], real diagonal not below -1e-12. Diagonal entries in
/// [-1e-12, 0) are clamped to zero.
class DensityMatrix {
 public:
  DensityMatrix(ComplexMatrix elements, TruncationPolicy policy);

  /// |psi><psi| for a state vector of length policy.dim().
  static DensityMatrix projector(const ComplexVector& psi, TruncationPolicy policy);

  int dim() const noexcept { return static_cast<int>(rho_.rows()); }
  const TruncationPolicy& policy() const noexcept { return policy_; }
  const ComplexMatrix& elements() const noexcept { return rho_; }
  std::complex<double> operator()(int m, int n) const { return rho_(m, n); }

  double trace() const noexcept;
  double population(int n) const { return rho_(n, n).real(); }
  double mean_photon_number() const noexcept;

  /// One past the highest Fock index carrying non-negligible amplitude (|rho_mn| > 1e-30).
  int support() const noexcept;

 private:
  ComplexMatrix rho_;
  TruncationPolicy policy_;
};

/// Matrix elements <m|D(alpha)|n> for m, n < dim, with D(alpha) = exp(alpha a^+ - alpha^* a).
/// Elements are exact (not those of a truncated generator).
ComplexMatrix displacement_matrix(Amplitude alpha, int dim);

/// Block of the displacement operator: rows 0..rows-1, columns 0..cols-1.
ComplexMatrix displacement_block(Amplitude alpha, int rows, int cols);

/// D(alpha) rho D^+(alpha). Throws TruncationOverflow when the displaced state loses more
/// than tail_tol of its trace above the cutoff.
DensityMatrix apply_displacement(const DensityMatrix& rho, Amplitude alpha);

/// Diagonal of D(alpha) rho D^+(alpha) without forming the conjugated matrix.
/// Same truncation check as apply_displacement.
std::vector<double> displaced_populations(const DensityMatrix& rho, Amplitude alpha);

/// Pure-loss channel with the given transmissivity (photon-subtraction Kraus form).
DensityMatrix loss_channel(const DensityMatrix& rho, double transmissivity);

/// Photon-number distribution <n|rho|n>.
CountDistribution diagonal(const DensityMatrix& rho);

}  // namespace parityscope
