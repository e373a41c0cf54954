#include "gcpt/valuation.hpp"

#include <cmath>

#include "gcpt/errors.hpp"
#include "gcpt/normal.hpp"
#include "gcpt/parallel.hpp"

namespace gcpt {

std::string_view param_name(Param p) noexcept {
  static constexpr std::array<std::string_view, kNumParams> names = {
      "mu",      "sigma",   "p0_minus", "gamma_minus", "p0_plus", "gamma_plus",
      "m_minus", "V_minus", "a_minus",  "m_plus",      "V_plus",  "a_plus"};
  return names[static_cast<int>(p)];
}

ParamVector pack_parameters(const CptAgent& agent, const GaussianGamble& g) {
  ParamVector t;
  t << g.mu(), g.sigma(), agent.w_minus.p0(), agent.w_minus.gamma(), agent.w_plus.p0(),
      agent.w_plus.gamma(), agent.value.m_minus(), agent.value.V_minus(), agent.value.a_minus(),
      agent.value.m_plus(), agent.value.V_plus(), agent.value.a_plus();
  return t;
}

std::pair<CptAgent, GaussianGamble> unpack_parameters(const ParamVector& t) {
  CptAgent agent{ValueParams(t(6), t(7), t(8), t(9), t(10), t(11)), WeightingParams(t(2), t(3)),
                 WeightingParams(t(4), t(5))};
  return {agent, GaussianGamble(t(0), t(1))};
}

ValuationBreakdown cpt_value(const CptAgent& agent, const GaussianGamble& g) {
  const DistortedGaussian lo = stabilize_cdf(agent.w_minus, g);
  const DistortedGaussian hi = stabilize_tail(agent.w_plus, g);
  const double loss = loss_partial_expectation(agent.value, lo);
  const double gain = gain_partial_expectation(agent.value, hi);
  return {loss + gain,
          loss,
          gain,
          lo.mu_hat,
          lo.sigma_hat,
          hi.mu_hat,
          hi.sigma_hat,
          lo.standardized_mean(),
          hi.standardized_mean()};
}

double cpt_value_degenerate(const CptAgent& agent, double mu) noexcept {
  return value(agent.value, mu);
}

double certainty_equivalent(const CptAgent& agent, const GaussianGamble& g) {
  return value_inverse(agent.value, cpt_value(agent, g).total);
}

namespace {

// Partials of G = positive_part_expectation(branch, mean, sd) with respect to
// the branch parameters and the Gaussian's mean and standard deviation.
struct BranchSensitivity {
  double d_m, d_V, d_a, d_mean, d_sd;
};

BranchSensitivity branch_sensitivity(const ValueBranch& b, double mean, double sd) {
  const double x = mean / sd;
  const double prob = std_normal_cdf(x);
  const double dens = std_normal_pdf(x);
  // K = E[exp(-aZ) 1{Z >= 0}]
  const double K = scaled_normal_cdf(x, b.a * sd);

  BranchSensitivity s{};
  s.d_m = mean * prob + sd * dens;
  s.d_V = prob - K;
  // dK/da = K (a sd^2 - mean) - sd n(x)
  s.d_a = -b.V * (K * (b.a * sd * sd - mean) - sd * dens);
  s.d_mean = b.m * prob + b.V * b.a * K;
  s.d_sd = b.m * dens + b.V * b.a * (dens - b.a * sd * K);
  return s;
}

}  // namespace

CptGradient cpt_gradient(const CptAgent& agent, const GaussianGamble& g) {
  const double mu = g.mu();
  const double sigma = g.sigma();

  const double gm = agent.w_minus.gamma();
  const double qm = agent.w_minus.p0_quantile();
  const double gp = agent.w_plus.gamma();
  const double qp = agent.w_plus.p0_quantile();

  // Loss side: total_loss = -G(losses; -mu_hat, s_m)
  const double mu_hat = mu - sigma * (1.0 / gm - 1.0) * qm;
  const double s_m = sigma / gm;
  const BranchSensitivity L = branch_sensitivity(agent.value.losses(), -mu_hat, s_m);
  const double dloss_dmuhat = L.d_mean;
  const double dloss_dsm = -L.d_sd;

  // Gain side: total_gain = G(gains; mu_bar, s_p)
  const double mu_bar = mu + sigma * (1.0 / gp - 1.0) * qp;
  const double s_p = sigma / gp;
  const BranchSensitivity G = branch_sensitivity(agent.value.gains(), mu_bar, s_p);

  CptGradient grad;
  grad[Param::mu] = dloss_dmuhat + G.d_mean;
  grad[Param::sigma] = dloss_dmuhat * (-(1.0 / gm - 1.0) * qm) + dloss_dsm / gm +
                       G.d_mean * ((1.0 / gp - 1.0) * qp) + G.d_sd / gp;
  // d quantile(p0) / d p0 = 1 / n(quantile(p0))
  grad[Param::p0_minus] = dloss_dmuhat * (-sigma * (1.0 / gm - 1.0) / std_normal_pdf(qm));
  grad[Param::gamma_minus] =
      dloss_dmuhat * (sigma * qm / (gm * gm)) + dloss_dsm * (-sigma / (gm * gm));
  grad[Param::p0_plus] = G.d_mean * (sigma * (1.0 / gp - 1.0) / std_normal_pdf(qp));
  grad[Param::gamma_plus] = G.d_mean * (-sigma * qp / (gp * gp)) + G.d_sd * (-sigma / (gp * gp));
  grad[Param::m_minus] = -L.d_m;
  grad[Param::V_minus] = -L.d_V;
  grad[Param::a_minus] = -L.d_a;
  grad[Param::m_plus] = G.d_m;
  grad[Param::V_plus] = G.d_V;
  grad[Param::a_plus] = G.d_a;
  return grad;
}

std::vector<double> batch_value(std::span<const CptAgent> agents,
                                std::span<const GaussianGamble> gambles) {
  if (agents.size() != gambles.size())
    throw std::invalid_argument("batch_value: agent and gamble lists differ in length");
  std::vector<double> out(agents.size());
  parallel_for(agents.size(), [&](std::size_t i) { out[i] = cpt_value(agents[i], gambles[i]).total; });
  return out;
}

}  // namespace gcpt
