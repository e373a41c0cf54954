#pragma once

#include <optional>
#include <utility>

#include "gcpt/gamble.hpp"

namespace gcpt {

/// Parameters of a normal distortion w(p) = Phi(gamma * Phi^-1(p) + (1 - gamma) * Phi^-1(p0)).
///
/// `p0` is the crossover point (w(p0) = p0) and `gamma` the slope at the
/// crossover. Construction enforces 0 < p0 < 1 and 0 < gamma <= 1; gamma > 1
/// would give an S-shape instead of the inverse-S shape.
class WeightingParams {
 public:
  WeightingParams(double p0, double gamma);

  double p0() const noexcept { return p0_; }
  double gamma() const noexcept { return gamma_; }
  /// Phi^-1(p0), cached.
  double p0_quantile() const noexcept { return q0_; }

  bool is_identity() const noexcept { return gamma_ == 1.0; }

 private:
  double p0_;
  double gamma_;
  double q0_;
};

enum class Orientation { cdf, tail };

/// Gaussian whose CDF (orientation cdf) or tail function (orientation tail)
/// equals the distortion of another Gaussian's CDF or tail.
struct DistortedGaussian {
  double mu_hat;
  double sigma_hat;
  Orientation orientation;

  double standardized_mean() const noexcept { return mu_hat / sigma_hat; }
};

double distort(const WeightingParams& w, double p);

/// w'(p) on the open interval; throws DomainError at p in {0, 1}.
double distort_derivative(const WeightingParams& w, double p);

/// Unique point where w'' changes sign (negative before, positive after).
/// Empty when gamma == 1, since the identity has w'' == 0 everywhere.
std::optional<double> inflection_point(const WeightingParams& w);

/// (crossover point, slope at crossover) = (p0, gamma).
std::pair<double, double> crossover_slope(const WeightingParams& w) noexcept;

/// w o F for F the CDF of g is the CDF of N(mu_hat, sigma / gamma) with
/// mu_hat = mu - sigma (1/gamma - 1) Phi^-1(p0).
DistortedGaussian stabilize_cdf(const WeightingParams& w, const GaussianGamble& g);

/// w o (1 - F) is the tail of N(mu_bar_hat, sigma / gamma) with
/// mu_bar_hat = mu + sigma (1/gamma - 1) Phi^-1(p0).
DistortedGaussian stabilize_tail(const WeightingParams& w, const GaussianGamble& g);

}  // namespace gcpt
