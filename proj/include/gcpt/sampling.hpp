#pragma once

#include <random>
#include <utility>

#include "gcpt/oracle.hpp"
#include "gcpt/valuation.hpp"

namespace gcpt {

/// Box used by the randomized checks: p0 in [0.05, 0.95], gamma in [0.2, 1],
/// m and V in [0, 5], a in [0, 2], mu in [-5, 5], sigma in [0.1, 5]. Loss and
/// gain value parameters are drawn as a pair and ordered so that the loss
/// side is the steeper one.
struct DrawBox {
  double p0_lo = 0.05, p0_hi = 0.95;
  double gamma_lo = 0.2, gamma_hi = 1.0;
  double m_hi = 5.0, V_hi = 5.0, a_hi = 2.0;
  double mu_lo = -5.0, mu_hi = 5.0;
  double sigma_lo = 0.1, sigma_hi = 5.0;
};

inline double draw_uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + (hi - lo) * open_unit_uniform(rng());
}

inline CptAgent draw_agent(std::mt19937_64& rng, const DrawBox& box = {}) {
  auto pair = [&](double hi) {
    const double a = draw_uniform(rng, 0.0, hi);
    const double b = draw_uniform(rng, 0.0, hi);
    return std::pair{std::max(a, b), std::min(a, b)};
  };
  const double p0m = draw_uniform(rng, box.p0_lo, box.p0_hi);
  const double gm = draw_uniform(rng, box.gamma_lo, box.gamma_hi);
  const double p0p = draw_uniform(rng, box.p0_lo, box.p0_hi);
  const double gp = draw_uniform(rng, box.gamma_lo, box.gamma_hi);
  const auto [m_minus, m_plus] = pair(box.m_hi);
  const auto [V_minus, V_plus] = pair(box.V_hi);
  const auto [a_minus, a_plus] = pair(box.a_hi);
  return CptAgent{ValueParams(m_minus, V_minus, a_minus, m_plus, V_plus, a_plus),
                  WeightingParams(p0m, gm), WeightingParams(p0p, gp)};
}

inline GaussianGamble draw_gamble(std::mt19937_64& rng, const DrawBox& box = {}) {
  const double mu = draw_uniform(rng, box.mu_lo, box.mu_hi);
  const double sigma = draw_uniform(rng, box.sigma_lo, box.sigma_hi);
  return GaussianGamble(mu, sigma);
}

}  // namespace gcpt
