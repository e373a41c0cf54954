#include "gcpt/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gcpt/errors.hpp"
#include "gcpt/normal.hpp"
#include "gcpt/value_function.hpp"
#include "gcpt/weighting.hpp"

namespace gcpt {

void OracleConfig::validate() const {
  if (!(abs_tol >= 1e-12)) throw InvalidParameter("abs_tol >= 1e-12", std::to_string(abs_tol));
  if (mc_samples < 1) throw InvalidParameter("mc_samples >= 1", std::to_string(mc_samples));
}

namespace {

constexpr double kTruncation = 12.0;
constexpr unsigned kMaxDepth = 25;

using Kronrod = boost::math::quadrature::gauss_kronrod<double, 15>;

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3e", x);
  return buf;
}

// Integral of v(mean + sd t) n(t) over [lo, hi] in standardized units.
double integrate_side(const ValueParams& v, double mean, double sd, double lo, double hi,
                      double abs_tol, const char* side) {
  if (!(lo < hi)) return 0.0;
  auto integrand = [&](double t) { return value(v, mean + sd * t) * std_normal_pdf(t); };

  // One non-adaptive pass sets the scale that turns boost's relative
  // tolerance into an absolute one. Boost tests each subinterval against its
  // own share, so the summed estimate can land slightly above the request;
  // asking for a quarter of the budget leaves room for that.
  const double scale = std::abs(Kronrod::integrate(integrand, lo, hi, 0));
  const double rel_tol = 0.25 * abs_tol / std::max(scale, abs_tol);
  double error = 0.0;
  const double result = Kronrod::integrate(integrand, lo, hi, kMaxDepth, rel_tol, &error);
  if (!(error <= abs_tol)) {
    throw OracleFailure(std::string("quadrature_value: ") + side + " integral error estimate " +
                            sci(error) + " exceeds tolerance " + sci(abs_tol),
                        error);
  }
  return result;
}

}  // namespace

double quadrature_value(const CptAgent& agent, const GaussianGamble& g, const OracleConfig& cfg) {
  cfg.validate();
  const DistortedGaussian lo = stabilize_cdf(agent.w_minus, g);
  const DistortedGaussian hi = stabilize_tail(agent.w_plus, g);

  // r <= 0  <=>  t <= -mu_hat / sigma_hat
  const double loss = integrate_side(agent.value, lo.mu_hat, lo.sigma_hat, -kTruncation,
                                     std::min(kTruncation, -lo.mu_hat / lo.sigma_hat),
                                     0.5 * cfg.abs_tol, "loss");
  const double gain = integrate_side(agent.value, hi.mu_hat, hi.sigma_hat,
                                     std::max(-kTruncation, -hi.mu_hat / hi.sigma_hat), kTruncation,
                                     0.5 * cfg.abs_tol, "gain");
  return loss + gain;
}

MonteCarloEstimate monte_carlo_value(const CptAgent& agent, const GaussianGamble& g,
                                     const OracleConfig& cfg) {
  cfg.validate();
  const DistortedGaussian lo = stabilize_cdf(agent.w_minus, g);
  const DistortedGaussian hi = stabilize_tail(agent.w_plus, g);

  std::mt19937_64 rng(cfg.seed);
  // Welford accumulation of the summand.
  double mean = 0.0;
  double m2 = 0.0;
  for (std::uint64_t i = 0; i < cfg.mc_samples; ++i) {
    const double z_loss = lo.mu_hat + lo.sigma_hat * std_normal_quantile(open_unit_uniform(rng()));
    const double z_gain = hi.mu_hat + hi.sigma_hat * std_normal_quantile(open_unit_uniform(rng()));
    double y = 0.0;
    if (z_loss <= 0.0) y += value(agent.value, z_loss);
    if (z_gain >= 0.0) y += value(agent.value, z_gain);
    const double delta = y - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (y - mean);
  }
  const double n = static_cast<double>(cfg.mc_samples);
  const double var = cfg.mc_samples > 1 ? m2 / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

}  // namespace gcpt
