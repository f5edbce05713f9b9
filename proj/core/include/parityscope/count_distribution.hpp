#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace parityscope {

/// Probability vector p_n over the number of detector clicks in one counting interval.
///
/// The vector is truncated at a fixed length; the missing mass `deficit()` is tracked but
/// never renormalized away, since rescaling would bias the alternating sum.
class CountDistribution {
 public:
  /// Entries must be non-negative (negatives down to -1e-12 are treated as rounding and
  /// clamped), the total may not exceed 1 + 1e-12 and may fall short of 1 by at most
  /// `tail_tol`.
  explicit CountDistribution(std::vector<double> probs, double tail_tol = 1e-9);

  std::span<const double> probs() const noexcept { return probs_; }
  std::size_t size() const noexcept { return probs_.size(); }
  double operator[](std::size_t n) const noexcept { return n < probs_.size() ? probs_[n] : 0.0; }

  double total() const noexcept { return total_; }
  double deficit() const noexcept { return total_ < 1.0 ? 1.0 - total_ : 0.0; }
  double tail_tol() const noexcept { return tail_tol_; }
  double mean() const noexcept;

  static CountDistribution delta(std::size_t length);

 private:
  std::vector<double> probs_;
  double total_ = 0.0;
  double tail_tol_ = 1e-9;
};

}  // namespace parityscope
