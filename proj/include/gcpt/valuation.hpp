#pragma once

#include <array>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "gcpt/gamble.hpp"
#include "gcpt/value_function.hpp"
#include "gcpt/weighting.hpp"

namespace gcpt {

/// Full CPT preference: a value function plus separate normal distortions
/// for the loss CDF and the gain tail.
struct CptAgent {
  ValueParams value;
  WeightingParams w_minus;
  WeightingParams w_plus;
};

struct ValuationBreakdown {
  double total;
  double loss_part;  // <= 0
  double gain_part;  // >= 0

  // Distorted Gaussians seen by each side and their standardized means.
  double mu_hat_minus;
  double sigma_hat_minus;
  double mu_bar_hat_plus;
  double sigma_hat_plus;
  double x_minus;
  double x_bar_plus;
};

/// Coordinates of the twelve-dimensional parameter vector, in gradient order.
enum class Param : int {
  mu = 0,
  sigma,
  p0_minus,
  gamma_minus,
  p0_plus,
  gamma_plus,
  m_minus,
  V_minus,
  a_minus,
  m_plus,
  V_plus,
  a_plus,
};

inline constexpr int kNumParams = 12;

std::string_view param_name(Param p) noexcept;

using ParamVector = Eigen::Matrix<double, kNumParams, 1>;

/// Partial derivatives of the valuation total with respect to every parameter.
struct CptGradient {
  ParamVector partials = ParamVector::Zero();

  double operator[](Param p) const noexcept { return partials(static_cast<int>(p)); }
  double& operator[](Param p) noexcept { return partials(static_cast<int>(p)); }
};

/// Packs (gamble, agent) into the 12-vector in Param order.
ParamVector pack_parameters(const CptAgent& agent, const GaussianGamble& g);

/// Inverse of pack_parameters; runs every construction check.
std::pair<CptAgent, GaussianGamble> unpack_parameters(const ParamVector& theta);

/// Closed-form CPT valuation of a Gaussian gamble.
ValuationBreakdown cpt_value(const CptAgent& agent, const GaussianGamble& g);

/// Valuation of a deterministic reward mu: the CDF is a step, and w(0) = 0,
/// w(1) = 1 leave it untouched, so the result is v(mu).
double cpt_value_degenerate(const CptAgent& agent, double mu) noexcept;

/// c with v(c) equal to the valuation total. Throws OutOfRange when the total
/// is outside the range of v (only possible when m+ == 0 or m- == 0).
double certainty_equivalent(const CptAgent& agent, const GaussianGamble& g);

/// Analytic gradient of cpt_value(...).total.
CptGradient cpt_gradient(const CptAgent& agent, const GaussianGamble& g);

/// Totals for paired agents and gambles, in input order. Large batches are
/// split across threads; results are identical to a sequential loop.
std::vector<double> batch_value(std::span<const CptAgent> agents,
                                std::span<const GaussianGamble> gambles);

}  // namespace gcpt
