#include "parityscope/fock.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "parityscope/errors.hpp"

namespace parityscope {

namespace {

constexpr double kHermitianTol = 1e-12;
constexpr double kTraceExcess = 1e-12;
constexpr double kNegativeSlack = 1e-12;
constexpr double kSupportEps = 1e-30;

void hermitize(ComplexMatrix& m) {
  m = (0.5 * (m + m.adjoint())).eval();
  for (Eigen::Index i = 0; i < m.rows(); ++i) m(i, i) = m(i, i).real();
}

void check_finite(Amplitude alpha) {
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag()))
    throw DomainError("displacement amplitude must be finite");
}

// Wraps a freshly computed operator, reporting lost trace as truncation rather than as a
// malformed state.
DensityMatrix finish_channel_output(ComplexMatrix out, const TruncationPolicy& policy,
                                    const char* what) {
  hermitize(out);
  const double tr = out.trace().real();
  if (tr < 1.0 - policy.tail_tol)
    throw TruncationOverflow(std::string(what) + ": trace deficit " + std::to_string(1.0 - tr) +
                             " exceeds tail_tol at cutoff " + std::to_string(policy.cutoff));
  return DensityMatrix(std::move(out), policy);
}

}  // namespace

void TruncationPolicy::validate() const {
  if (cutoff < 1) throw DomainError("truncation cutoff must be >= 1");
  if (!(tail_tol > 0.0 && tail_tol < 1.0)) throw DomainError("tail_tol must lie in (0, 1)");
}

DensityMatrix::DensityMatrix(ComplexMatrix elements, TruncationPolicy policy)
    : rho_(std::move(elements)), policy_(policy) {
  policy_.validate();
  if (rho_.rows() != policy_.dim() || rho_.cols() != policy_.dim())
    throw DomainError("density matrix must be " + std::to_string(policy_.dim()) + "x" +
                      std::to_string(policy_.dim()) + " for cutoff " +
                      std::to_string(policy_.cutoff));
  if (!rho_.allFinite()) throw DomainError("density matrix has non-finite entries");
  const double asym = (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
  if (asym > kHermitianTol)
    throw DomainError("density matrix not Hermitian (max asymmetry " + std::to_string(asym) + ")");
  for (Eigen::Index n = 0; n < rho_.rows(); ++n) {
    const double p = rho_(n, n).real();
    if (p < 0.0) {
      if (p < -kNegativeSlack)
        throw DomainError("negative population " + std::to_string(p) + " at n=" + std::to_string(n));
      rho_(n, n) = 0.0;
    } else {
      rho_(n, n) = p;
    }
  }
  const double tr = trace();
  if (tr > 1.0 + kTraceExcess) throw DomainError("density matrix trace exceeds one");
  if (tr < 1.0 - policy_.tail_tol)
    throw TruncationOverflow("density matrix trace deficit " + std::to_string(1.0 - tr) +
                             " exceeds tail_tol");
}

DensityMatrix DensityMatrix::projector(const ComplexVector& psi, TruncationPolicy policy) {
  ComplexMatrix rho = psi * psi.adjoint();
  hermitize(rho);
  return DensityMatrix(std::move(rho), policy);
}

double DensityMatrix::trace() const noexcept { return rho_.trace().real(); }

double DensityMatrix::mean_photon_number() const noexcept {
  double m = 0.0;
  for (Eigen::Index n = 1; n < rho_.rows(); ++n) m += static_cast<double>(n) * rho_(n, n).real();
  return m;
}

int DensityMatrix::support() const noexcept {
  const ComplexMatrix::Index d = rho_.rows();
  for (Eigen::Index i = d - 1; i > 0; --i) {
    if (rho_.row(i).cwiseAbs().maxCoeff() > kSupportEps) return static_cast<int>(i + 1);
  }
  return 1;
}

ComplexMatrix displacement_block(Amplitude alpha, int rows, int cols) {
  check_finite(alpha);
  if (rows < 1 || cols < 1) throw DomainError("displacement block dimensions must be >= 1");
  ComplexMatrix D = ComplexMatrix::Zero(rows, cols);
  const double x = std::norm(alpha);
  const double theta = std::arg(alpha);
  const double log_x = x > 0.0 ? std::log(x) : 0.0;

  // Along the k-th diagonal, f_j = sqrt(j!/(j+k)!) x^{k/2} e^{-x/2} L_j^{(k)}(x) obeys the
  // normalized Laguerre three-term recurrence; magnitudes stay O(1) so no rescaling is needed.
  std::vector<double> f;
  const int kmax = std::max(rows, cols);
  for (int k = 0; k < kmax; ++k) {
    const int len_lower = k < rows ? std::min(cols, rows - k) : 0;
    const int len_upper = (k > 0 && k < cols) ? std::min(rows, cols - k) : 0;
    const int len = std::max(len_lower, len_upper);
    if (len <= 0) continue;
    f.assign(static_cast<std::size_t>(len), 0.0);
    if (x > 0.0) {
      f[0] = std::exp(-0.5 * x + 0.5 * k * log_x - 0.5 * std::lgamma(k + 1.0));
    } else {
      f[0] = k == 0 ? 1.0 : 0.0;
    }
    if (len > 1) f[1] = f[0] * (1.0 + k - x) / std::sqrt(k + 1.0);
    for (int j = 1; j + 1 < len; ++j) {
      const double jj = j;
      f[j + 1] = ((2.0 * jj + 1.0 + k - x) * f[j] - std::sqrt(jj * (jj + k)) * f[j - 1]) /
                 std::sqrt((jj + 1.0) * (jj + 1.0 + k));
    }
    const Amplitude lower_phase = std::polar(1.0, k * theta);
    const Amplitude upper_phase = std::polar((k % 2 == 0) ? 1.0 : -1.0, -k * theta);
    for (int j = 0; j < len_lower; ++j) D(j + k, j) = f[j] * lower_phase;
    for (int j = 0; j < len_upper; ++j) D(j, j + k) = f[j] * upper_phase;
  }
  return D;
}

ComplexMatrix displacement_matrix(Amplitude alpha, int dim) {
  return displacement_block(alpha, dim, dim);
}

DensityMatrix apply_displacement(const DensityMatrix& rho, Amplitude alpha) {
  check_finite(alpha);
  if (alpha == Amplitude{}) return rho;
  const int dim = rho.dim();
  const int K = rho.support();
  const ComplexMatrix D = displacement_block(alpha, dim, K);
  ComplexMatrix out = D * rho.elements().topLeftCorner(K, K) * D.adjoint();
  return finish_channel_output(std::move(out), rho.policy(), "apply_displacement");
}

std::vector<double> displaced_populations(const DensityMatrix& rho, Amplitude alpha) {
  check_finite(alpha);
  const int dim = rho.dim();
  std::vector<double> p(static_cast<std::size_t>(dim), 0.0);
  if (alpha == Amplitude{}) {
    for (int n = 0; n < dim; ++n) p[n] = rho.population(n);
    return p;
  }
  const int K = rho.support();
  const ComplexMatrix D = displacement_block(alpha, dim, K);
  const ComplexMatrix M = D * rho.elements().topLeftCorner(K, K);
  double total = 0.0;
  for (int n = 0; n < dim; ++n) {
    double v = 0.0;
    for (int l = 0; l < K; ++l) v += (M(n, l) * std::conj(D(n, l))).real();
    if (v < 0.0) {
      if (v < -kNegativeSlack)
        throw DomainError("displaced population negative at n=" + std::to_string(n));
      v = 0.0;
    }
    p[n] = v;
    total += v;
  }
  if (total < 1.0 - rho.policy().tail_tol)
    throw TruncationOverflow("displacement by |alpha|=" + std::to_string(std::abs(alpha)) +
                             " leaks " + std::to_string(1.0 - total) + " above cutoff " +
                             std::to_string(rho.policy().cutoff));
  return p;
}

DensityMatrix loss_channel(const DensityMatrix& rho, double transmissivity) {
  if (!(transmissivity >= 0.0 && transmissivity <= 1.0))
    throw DomainError("transmissivity must lie in [0, 1], got " + std::to_string(transmissivity));
  if (transmissivity == 1.0) return rho;
  const int dim = rho.dim();
  const int K = rho.support();

  // c(m,k)^2 = C(m+k,k) eta^m (1-eta)^k is the amplitude for losing k of m+k photons.
  Eigen::MatrixXd c = Eigen::MatrixXd::Zero(K, K);
  const double eta = transmissivity;
  const double log_eta = eta > 0.0 ? std::log(eta) : 0.0;
  const double log_loss = std::log1p(-eta);
  for (int m = 0; m < K; ++m) {
    for (int k = 0; m + k < K; ++k) {
      if (eta == 0.0) {
        c(m, k) = m == 0 ? 1.0 : 0.0;
        continue;
      }
      const double log_c2 = std::lgamma(m + k + 1.0) - std::lgamma(m + 1.0) -
                            std::lgamma(k + 1.0) + m * log_eta + k * log_loss;
      c(m, k) = std::exp(0.5 * log_c2);
    }
  }

  const ComplexMatrix& in = rho.elements();
  ComplexMatrix out = ComplexMatrix::Zero(dim, dim);
  for (int m = 0; m < K; ++m) {
    for (int n = m; n < K; ++n) {
      std::complex<double> acc{};
      for (int k = 0; n + k < K; ++k) acc += c(m, k) * c(n, k) * in(m + k, n + k);
      out(m, n) = acc;
      out(n, m) = std::conj(acc);
    }
  }
  return finish_channel_output(std::move(out), rho.policy(), "loss_channel");
}

CountDistribution diagonal(const DensityMatrix& rho) {
  std::vector<double> p(static_cast<std::size_t>(rho.dim()));
  for (int n = 0; n < rho.dim(); ++n) p[n] = std::max(rho.population(n), 0.0);
  return CountDistribution(std::move(p), rho.policy().tail_tol);
}

}  // namespace parityscope
