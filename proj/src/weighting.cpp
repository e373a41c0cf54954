#include "gcpt/weighting.hpp"

#include <cmath>
#include <string>

#include "gcpt/errors.hpp"
#include "gcpt/normal.hpp"

namespace gcpt {

WeightingParams::WeightingParams(double p0, double gamma) : p0_(p0), gamma_(gamma) {
  if (!(p0 > 0.0 && p0 < 1.0)) throw InvalidParameter("0 < p0 < 1", "p0 = " + std::to_string(p0));
  if (!(gamma > 0.0)) throw InvalidParameter("gamma > 0", "gamma = " + std::to_string(gamma));
  if (!(gamma <= 1.0)) throw InvalidParameter("gamma <= 1", "gamma = " + std::to_string(gamma));
  q0_ = std_normal_quantile(p0);
}

double distort(const WeightingParams& w, double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw DomainError("distort: p outside [0, 1]");
  if (p == 0.0 || p == 1.0) return p;
  if (w.is_identity()) return p;
  const double g = w.gamma();
  return std_normal_cdf(g * std_normal_quantile(p) + (1.0 - g) * w.p0_quantile());
}

double distort_derivative(const WeightingParams& w, double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("distort_derivative: p must lie in (0, 1)");
  const double g = w.gamma();
  const double z = std_normal_quantile(p);
  const double u = g * z + (1.0 - g) * w.p0_quantile();
  // gamma * n(u) / n(z)
  return g * std::exp(0.5 * (z - u) * (z + u));
}

std::optional<double> inflection_point(const WeightingParams& w) {
  if (w.is_identity()) return std::nullopt;
  const double g = w.gamma();
  return std_normal_cdf(g * w.p0_quantile() / (1.0 + g));
}

std::pair<double, double> crossover_slope(const WeightingParams& w) noexcept {
  return {w.p0(), w.gamma()};
}

namespace {

double stability_shift(const WeightingParams& w, const GaussianGamble& g) {
  return g.sigma() * (1.0 / w.gamma() - 1.0) * w.p0_quantile();
}

}  // namespace

DistortedGaussian stabilize_cdf(const WeightingParams& w, const GaussianGamble& g) {
  return {g.mu() - stability_shift(w, g), g.sigma() / w.gamma(), Orientation::cdf};
}

DistortedGaussian stabilize_tail(const WeightingParams& w, const GaussianGamble& g) {
  return {g.mu() + stability_shift(w, g), g.sigma() / w.gamma(), Orientation::tail};
}

}  // namespace gcpt
