#pragma once

#include "parityscope/fock.hpp"

namespace parityscope {

/// Ordering parameter s of the quasidistribution family: s = 0 Wigner, s = -1 Husimi Q.
/// Series evaluation requires s < 1.
struct OrderingParameter {
  double s = 0.0;

  static constexpr OrderingParameter wigner() { return {0.0}; }
  static constexpr OrderingParameter husimi() { return {-1.0}; }
};

/// Expectation of the displaced parity, sum_n (-1)^n <n|D^+(alpha) rho D(alpha)|n>.
/// Multiply by 2/pi to obtain W(alpha).
double parity_operator_expectation(const DensityMatrix& rho, Amplitude alpha);

/// W(alpha; s) = 2/(pi(1-s)) sum_n ((s+1)/(s-1))^n <n|D^+(alpha) rho D(alpha)|n>.
double quasidist(const DensityMatrix& rho, Amplitude alpha, OrderingParameter ord);

/// Closed form for a coherent state |alpha0>: 2/(pi(1-s)) exp(-2|alpha-alpha0|^2/(1-s)).
double gaussian_quasidist_oracle(Amplitude alpha0, Amplitude alpha, OrderingParameter ord);

}  // namespace parityscope
