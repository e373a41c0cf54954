#pragma once

#include "gcpt/gamble.hpp"
#include "gcpt/weighting.hpp"

namespace gcpt {

/// One side of the piecewise exponential value function:
/// y -> m * y + V * (1 - exp(-a * y)) for y >= 0.
///
/// `m` is the asymptotic slope, `V` the vertical offset of the asymptote
/// m * y + V, and `a` the rate at which the curve converges to it.
struct ValueBranch {
  double m = 0.0;
  double V = 0.0;
  double a = 0.0;

  double operator()(double y) const noexcept;
};

/// Piecewise exponential value function
///
///   v(x) =  m+ x + V+ (1 - exp(-a+ x))          x >= 0
///   v(x) = -(m- |x| + V- (1 - exp(-a- |x|)))    x <  0
///
/// Loss steepness requires m- >= m+, V- >= V+, a- >= a+. Each side must be
/// non-degenerate: m > 0, or both V > 0 and a > 0.
class ValueParams {
 public:
  ValueParams(double m_minus, double V_minus, double a_minus,
              double m_plus, double V_plus, double a_plus);

  const ValueBranch& losses() const noexcept { return minus_; }
  const ValueBranch& gains() const noexcept { return plus_; }

  double m_minus() const noexcept { return minus_.m; }
  double V_minus() const noexcept { return minus_.V; }
  double a_minus() const noexcept { return minus_.a; }
  double m_plus() const noexcept { return plus_.m; }
  double V_plus() const noexcept { return plus_.V; }
  double a_plus() const noexcept { return plus_.a; }

 private:
  ValueBranch minus_;
  ValueBranch plus_;
};

double value(const ValueParams& v, double x) noexcept;

/// Inverse of `value`. Throws OutOfRange when y lies outside the range of v,
/// which is bounded above by V+ when m+ == 0 and below by -V- when m- == 0.
double value_inverse(const ValueParams& v, double y);

/// E[branch(Z) 1{Z >= 0}] for Z ~ N(mean, sd). Closed form built from the
/// three truncated moments E[Z 1{Z>=0}], P(Z >= 0) and E[exp(-aZ) 1{Z>=0}].
double positive_part_expectation(const ValueBranch& branch, double mean, double sd) noexcept;

/// E[v(Z) 1{Z >= 0}] for Z the tail-distorted Gaussian of the gain side.
double gain_partial_expectation(const ValueParams& v, const DistortedGaussian& z);

/// E[v(Z) 1{Z <= 0}] for Z the CDF-distorted Gaussian of the loss side. <= 0.
double loss_partial_expectation(const ValueParams& v, const DistortedGaussian& z);

}  // namespace gcpt
