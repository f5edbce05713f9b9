#include "parityscope/quasiprob.hpp"

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "parityscope/errors.hpp"

namespace parityscope {

namespace {

constexpr double kSeriesCut = 1e-14;

void check_ordering(OrderingParameter ord) {
  if (!std::isfinite(ord.s) || ord.s >= 1.0)
    throw DomainError("ordering parameter s must be finite and < 1, got " + std::to_string(ord.s));
}

}  // namespace

double parity_operator_expectation(const DensityMatrix& rho, Amplitude alpha) {
  // D^+(alpha) rho D(alpha) is the state displaced by -alpha.
  const std::vector<double> p = displaced_populations(rho, -alpha);
  double sum = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) sum += (n % 2 == 0) ? p[n] : -p[n];
  return sum;
}

double quasidist(const DensityMatrix& rho, Amplitude alpha, OrderingParameter ord) {
  check_ordering(ord);
  const std::vector<double> p = displaced_populations(rho, -alpha);
  const double ratio = (ord.s + 1.0) / (ord.s - 1.0);
  const double prefactor = 2.0 / (std::numbers::pi * (1.0 - ord.s));

  double remaining = 0.0;
  for (double v : p) remaining += v;

  // For s <= 0 the weights are bounded by one in magnitude, so once |ratio|^n times the
  // remaining mass drops below kSeriesCut the rest of the series is negligible.
  const bool damped = std::abs(ratio) <= 1.0;
  double weight = 1.0;
  double sum = 0.0;
  for (std::size_t n = 0; n < p.size(); ++n) {
    if (damped && std::abs(weight) * remaining < kSeriesCut) break;
    sum += weight * p[n];
    remaining -= p[n];
    if (remaining < 0.0) remaining = 0.0;
    weight *= ratio;
  }
  return prefactor * sum;
}

double gaussian_quasidist_oracle(Amplitude alpha0, Amplitude alpha, OrderingParameter ord) {
  check_ordering(ord);
  const double width = 1.0 - ord.s;
  return 2.0 / (std::numbers::pi * width) * std::exp(-2.0 * std::norm(alpha - alpha0) / width);
}

}  // namespace parityscope
