#include "gcpt/normal.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace gcpt {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

double polevl(double x, const double* c, int n) {
  double r = c[n];
  for (int i = n - 1; i >= 0; --i) r = r * x + c[i];
  return r;
}

// AS241 PPND16: quantile of the lower tail probability q, 0 < q <= 0.5.
double ppnd16_lower(double q) {
  static constexpr double a[] = {3.3871328727963666080e0, 1.3314166789178437745e+2,
                                 1.9715909503065514427e+3, 1.3731693765509461125e+4,
                                 4.5921953931549871457e+4, 6.7265770927008700853e+4,
                                 3.3430575583588128105e+4, 2.5090809287301226727e+3};
  static constexpr double b[] = {1.0,
                                 4.2313330701600911252e+1, 6.8718700749205790830e+2,
                                 5.3941960214247511077e+3, 2.1213794301586595867e+4,
                                 3.9307895800092710610e+4, 2.8729085735721942674e+4,
                                 5.2264952788528545610e+3};
  static constexpr double c[] = {1.42343711074968357734e0, 4.63033784615654529590e0,
                                 5.76949722146069140550e0, 3.64784832476320460504e0,
                                 1.27045825245236838258e0, 2.41780725177450611770e-1,
                                 2.27238449892691845833e-2, 7.74545014278341407640e-4};
  static constexpr double d[] = {1.0,
                                 2.05319162663775882187e0, 1.67638483018380384940e0,
                                 6.89767334985100004550e-1, 1.48103976427480074590e-1,
                                 1.51986665636164571966e-2, 5.47593808499534494600e-4,
                                 1.05075007164441684324e-9};
  static constexpr double e[] = {6.65790464350110377720e0, 5.46378491116411436990e0,
                                 1.78482653991729133580e0, 2.96560571828504891230e-1,
                                 2.65321895265761230930e-2, 1.24266094738807843860e-3,
                                 2.71155556874348757815e-5, 2.01033439929228813265e-7};
  static constexpr double f[] = {1.0,
                                 5.99832206555887937690e-1, 1.36929880922735805310e-1,
                                 1.48753612908506148525e-2, 7.86869131145613259100e-4,
                                 1.84631831751005468180e-5, 1.42151175831644588870e-7,
                                 2.04426310338993978564e-15};

  const double dq = q - 0.5;
  if (std::abs(dq) <= 0.425) {
    const double r = 0.180625 - dq * dq;
    return dq * polevl(r, a, 7) / polevl(r, b, 7);
  }
  double r = std::sqrt(-std::log(q));
  double val;
  if (r <= 5.0) {
    r -= 1.6;
    val = polevl(r, c, 7) / polevl(r, d, 7);
  } else {
    r -= 5.0;
    val = polevl(r, e, 7) / polevl(r, f, 7);
  }
  return -val;
}

}  // namespace

double std_normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x * kInvSqrt2); }

double std_normal_pdf(double x) noexcept { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double std_normal_quantile(double p) noexcept {
  if (!(p >= 0.0 && p <= 1.0)) return std::numeric_limits<double>::quiet_NaN();
  if (p == 0.0) return -std::numeric_limits<double>::infinity();
  if (p == 1.0) return std::numeric_limits<double>::infinity();
  if (p == 0.5) return 0.0;

  // Work on the lower tail; 1 - p is exact for p >= 0.5.
  const bool upper = p > 0.5;
  const double q = upper ? 1.0 - p : p;
  double z = ppnd16_lower(q);

  // Newton polish on Phi(z) = q, both sides taken from the same tail.
  const double dens = std_normal_pdf(z);
  if (dens > 0.0) z -= (std_normal_cdf(z) - q) / dens;
  return upper ? -z : z;
}

double mills_ratio(double z) noexcept {
  if (z < 5.0) {
    return std_normal_cdf(-z) / std_normal_pdf(z);
  }
  // Laplace continued fraction 1/(z + 1/(z + 2/(z + 3/(z + ...)))), modified Lentz.
  constexpr double tiny = 1e-300;
  double f = z;
  double C = z;
  double D = 0.0;
  for (int k = 1; k < 500; ++k) {
    D = z + k * D;
    if (D == 0.0) D = tiny;
    C = z + k / C;
    if (C == 0.0) C = tiny;
    D = 1.0 / D;
    const double delta = C * D;
    f *= delta;
    if (std::abs(delta - 1.0) < 1e-16) break;
  }
  return 1.0 / f;
}

double scaled_normal_cdf(double x, double c) noexcept {
  const double t = x - c;
  if (t >= -5.0) {
    return std::exp(c * (0.5 * c - x)) * std_normal_cdf(t);
  }
  // exp(c^2/2 - c x) Phi(x - c) = n(x) * Phi(t) / n(t)
  return std_normal_pdf(x) * mills_ratio(-t);
}

}  // namespace gcpt
