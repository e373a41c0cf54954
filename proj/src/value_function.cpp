#include "gcpt/value_function.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "gcpt/errors.hpp"
#include "gcpt/normal.hpp"

namespace gcpt {

GaussianGamble::GaussianGamble(double mu, double sigma) : mu_(mu), sigma_(sigma) {
  if (!std::isfinite(mu)) throw InvalidParameter("mu finite", "mu = " + std::to_string(mu));
  if (!(sigma > 0.0) || !std::isfinite(sigma))
    throw InvalidParameter("sigma > 0", "sigma = " + std::to_string(sigma));
}

double ValueBranch::operator()(double y) const noexcept {
  // -expm1 keeps 1 - exp(-a y) accurate for small a y.
  return m * y - V * std::expm1(-a * y);
}

namespace {

void require_nonnegative(const char* name, double x) {
  if (!(x >= 0.0) || !std::isfinite(x))
    throw InvalidParameter(std::string(name) + " >= 0", std::string(name) + " = " + std::to_string(x));
}

void require_ordered(const char* rule, double minus, double plus) {
  if (!(minus >= plus))
    throw InvalidParameter(rule, std::to_string(minus) + " < " + std::to_string(plus));
}

void require_nondegenerate(const char* rule, const ValueBranch& b) {
  if (!(b.m > 0.0 || (b.V > 0.0 && b.a > 0.0)))
    throw InvalidParameter(rule, "branch is identically zero");
}

}  // namespace

ValueParams::ValueParams(double m_minus, double V_minus, double a_minus,
                         double m_plus, double V_plus, double a_plus)
    : minus_{m_minus, V_minus, a_minus}, plus_{m_plus, V_plus, a_plus} {
  require_nonnegative("m_minus", m_minus);
  require_nonnegative("V_minus", V_minus);
  require_nonnegative("a_minus", a_minus);
  require_nonnegative("m_plus", m_plus);
  require_nonnegative("V_plus", V_plus);
  require_nonnegative("a_plus", a_plus);
  require_ordered("m_minus >= m_plus", m_minus, m_plus);
  require_ordered("V_minus >= V_plus", V_minus, V_plus);
  require_ordered("a_minus >= a_plus", a_minus, a_plus);
  require_nondegenerate("m_plus > 0 or (V_plus > 0 and a_plus > 0)", plus_);
  require_nondegenerate("m_minus > 0 or (V_minus > 0 and a_minus > 0)", minus_);
}

double value(const ValueParams& v, double x) noexcept {
  return x >= 0.0 ? v.gains()(x) : -v.losses()(-x);
}

namespace {

// Solves branch(c) = y for c >= 0, y >= 0. The branch is increasing and
// concave, so Newton from the right of the root converges monotonically.
double invert_branch(const ValueBranch& b, double y, const char* side) {
  if (y == 0.0) return 0.0;
  if (b.m == 0.0 && !(y < b.V)) {
    throw OutOfRange(std::string("value_inverse: ") + side + " value " + std::to_string(y) +
                     " is not below the asymptote V = " + std::to_string(b.V));
  }
  // Starting point on the right of the root: the linear part alone, or the
  // exact inverse of the exponential part alone.
  double c;
  if (b.m > 0.0) {
    c = y / b.m;
  } else {
    c = -std::log1p(-y / b.V) / b.a;
  }
  for (int it = 0; it < 200; ++it) {
    const double f = b(c) - y;
    const double df = b.m + b.V * b.a * std::exp(-b.a * c);
    const double step = f / df;
    c -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(c))) break;
  }
  return c;
}

}  // namespace

double value_inverse(const ValueParams& v, double y) {
  if (!std::isfinite(y)) throw OutOfRange("value_inverse: non-finite value");
  if (y >= 0.0) return invert_branch(v.gains(), y, "gain");
  return -invert_branch(v.losses(), -y, "loss");
}

double positive_part_expectation(const ValueBranch& b, double mean, double sd) noexcept {
  const double x = mean / sd;
  const double prob = std_normal_cdf(x);
  double result = 0.0;
  if (b.m != 0.0) result += b.m * (mean * prob + sd * std_normal_pdf(x));
  if (b.V != 0.0) {
    // V (P(Z >= 0) - E[exp(-aZ) 1{Z >= 0}]); with a == 0 the two cancel exactly.
    if (b.a != 0.0) result += b.V * (prob - scaled_normal_cdf(x, b.a * sd));
  }
  return result;
}

double gain_partial_expectation(const ValueParams& v, const DistortedGaussian& z) {
  if (z.orientation != Orientation::tail)
    throw DomainError("gain_partial_expectation expects a tail-distorted Gaussian");
  return positive_part_expectation(v.gains(), z.mu_hat, z.sigma_hat);
}

double loss_partial_expectation(const ValueParams& v, const DistortedGaussian& z) {
  if (z.orientation != Orientation::cdf)
    throw DomainError("loss_partial_expectation expects a CDF-distorted Gaussian");
  // Z -> -Z maps the loss half-line onto the gain half-line.
  return -positive_part_expectation(v.losses(), -z.mu_hat, z.sigma_hat);
}

}  // namespace gcpt
