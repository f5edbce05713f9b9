#include "parityscope/count_distribution.hpp"

#include <cmath>
#include <string>

#include "parityscope/errors.hpp"

namespace parityscope {

namespace {
constexpr double kNegativeSlack = 1e-12;
constexpr double kExcessSlack = 1e-12;
}  // namespace

CountDistribution::CountDistribution(std::vector<double> probs, double tail_tol)
    : probs_(std::move(probs)), tail_tol_(tail_tol) {
  if (probs_.empty()) throw DomainError("count distribution must have at least one entry");
  if (!(tail_tol > 0.0) || !(tail_tol < 1.0)) throw DomainError("tail_tol must lie in (0, 1)");
  double sum = 0.0;
  for (std::size_t n = 0; n < probs_.size(); ++n) {
    double& p = probs_[n];
    if (!std::isfinite(p)) throw DomainError("non-finite probability at n=" + std::to_string(n));
    if (p < 0.0) {
      if (p < -kNegativeSlack)
        throw DomainError("negative probability " + std::to_string(p) + " at n=" + std::to_string(n));
      p = 0.0;
    }
    sum += p;
  }
  if (sum > 1.0 + kExcessSlack) throw DomainError("probabilities sum to more than one");
  if (sum < 1.0 - tail_tol_)
    throw TruncationOverflow("count distribution deficit " + std::to_string(1.0 - sum) +
                             " exceeds tail tolerance");
  total_ = sum;
}

double CountDistribution::mean() const noexcept {
  double m = 0.0;
  for (std::size_t n = 1; n < probs_.size(); ++n) m += static_cast<double>(n) * probs_[n];
  return m;
}

CountDistribution CountDistribution::delta(std::size_t length) {
  std::vector<double> p(length == 0 ? 1 : length, 0.0);
  p[0] = 1.0;
  return CountDistribution(std::move(p));
}

}  // namespace parityscope
