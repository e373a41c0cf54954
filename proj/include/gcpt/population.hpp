#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "gcpt/gamble.hpp"
#include "gcpt/valuation.hpp"

namespace gcpt {

/// Personality traits e of one individual.
using Personality = Eigen::VectorXd;

/// Program controls P.
using Program = Eigen::VectorXd;

/// Closed box of admissible programs.
struct ProgramBounds {
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;

  Eigen::Index dim() const noexcept { return lower.size(); }
  Program center() const { return 0.5 * (lower + upper); }
  bool contains(const Program& p) const;
  Program project(const Program& p) const { return p.cwiseMax(lower).cwiseMin(upper); }
};

/// What an individual with personality e perceives when shown program P.
struct Perception {
  CptAgent agent;
  GaussianGamble gamble;
};

/// Named mapping (e, P) -> (agent, gamble). The optional jacobian returns the
/// 2 x d_p matrix of d(mu, sigma)/dP; when absent, gradient ascent falls back
/// to central differences of the mapping.
struct ParameterMap {
  using Evaluate = std::function<Perception(const Personality&, const Program&)>;
  using Jacobian = std::function<Eigen::Matrix<double, 2, Eigen::Dynamic>(const Personality&,
                                                                          const Program&)>;
  std::string name;
  Evaluate evaluate;
  Jacobian mean_sd_jacobian;
};

/// Built-in map: mu = alpha0 + e' A P, sigma = softplus(beta0 + e' B P), where
/// e is the first A.rows() personality entries. With `agent` unset, the ten
/// trailing personality entries carry the agent in agent-file key order
/// (p0_minus, gamma_minus, p0_plus, gamma_plus, m_minus, V_minus, a_minus,
/// m_plus, V_plus, a_plus).
struct AffineMapSpec {
  double alpha0 = 0.0;
  Eigen::MatrixXd A;
  double beta0 = 0.0;
  Eigen::MatrixXd B;
  std::optional<CptAgent> agent;
};

ParameterMap make_affine_map(AffineMapSpec spec);

double softplus(double z) noexcept;

/// Agent from ten numbers in agent-file key order (see kAgentKeys).
CptAgent agent_from_spec_vector(const Eigen::Ref<const Eigen::VectorXd>& v);

/// Designer's gain g(P, q) together with its partial derivatives.
struct GainFunction {
  std::string name;
  std::function<double(const Program&, double)> value;
  std::function<double(const Program&, double)> d_q;
  std::function<Eigen::VectorXd(const Program&, double)> d_program;
};

/// g = q
GainFunction adoption_gain();
/// g = q - c |P|^2
GainFunction quadratic_cost_gain(double c);
/// g = q * P[k]: adoption times a price-like control.
GainFunction revenue_gain(Eigen::Index price_index);

/// Nondecreasing social benefit u(q) added to every individual's mean.
struct SocialUtility {
  std::string name;
  std::function<double(double)> u;
};

/// u(q) = kappa q, kappa >= 0.
SocialUtility linear_social(double kappa);
/// u(q) = kappa q^beta, kappa >= 0, beta > 0.
SocialUtility power_social(double kappa, double beta);

/// Throws InvalidParameter unless u is nondecreasing on a 1001-point grid of [0, 1].
void check_nondecreasing(const SocialUtility& s);

/// Mean-field personality distribution.
struct PersonalitySampler {
  std::string name;
  std::function<Personality(std::mt19937_64&)> draw;
};

/// Independent N(mean_i, sd_i) coordinates, drawn by inverse CDF.
PersonalitySampler gaussian_sampler(Eigen::VectorXd mean, Eigen::VectorXd sd);
PersonalitySampler point_sampler(Personality at);

struct PopulationScenario {
  std::vector<Personality> individuals;
  std::optional<PersonalitySampler> sampler;
  std::uint64_t sample_count = 0;
  std::uint64_t sample_seed = 0;

  ParameterMap parameter_map;
  GainFunction gain = adoption_gain();
  std::optional<SocialUtility> social;
  ProgramBounds bounds;
  /// Fixed program for equilibrium runs; defaults to the box center.
  std::optional<Program> program;

  bool is_finite() const noexcept { return !individuals.empty(); }
};

/// Finite scenario whose individuals are `count` sampler draws.
PopulationScenario materialize(const PopulationScenario& scn, std::uint64_t count,
                               std::uint64_t seed);

/// Valuation totals per individual for program P with every mean shifted by
/// `mean_shift`. Throws ScenarioError naming "/individuals/<n>" for the first
/// individual whose perception is invalid.
std::vector<double> population_totals(const PopulationScenario& scn, const Program& p,
                                      double mean_shift = 0.0);

/// Share of individuals with a strictly positive valuation.
double adoption_fraction(const PopulationScenario& scn, const Program& p);

double program_gain(const PopulationScenario& scn, const Program& p);

enum class OptimizeMethod { grid, ascent };

struct TraceEntry {
  Program program;
  double gain;
};

struct OptimizationResult {
  Program best;
  double gain;
  std::vector<TraceEntry> trace;
};

/// Points per axis of the grid lattice: the largest k with k^d <= budget.
Eigen::Index lattice_points_per_axis(std::uint64_t budget, Eigen::Index dim);

/// Maximizes program_gain over the bounds.
///
/// grid: exhaustive lattice lower (1 - t) + upper t, t = j / (k - 1), in
/// lexicographic order (first coordinate slowest);
/// a single point per axis means the box center. Ties keep the first point.
///
/// ascent: projected gradient ascent on the smoothed objective
/// g(P, mean_n logistic(total_n / tau)) with tau annealed geometrically, from
/// the box center and further seeded random starts. Every iterate is scored
/// with the exact gain and recorded; the best is returned.
OptimizationResult optimize_program(const PopulationScenario& scn, OptimizeMethod method,
                                    std::uint64_t budget, std::uint64_t seed);

struct MeanFieldEstimate {
  double estimate;
  double std_error;
};

MeanFieldEstimate mean_field_adoption(const PopulationScenario& scn, const Program& p,
                                      std::uint64_t samples, std::uint64_t seed);

/// Psi(q): adoption share when every mean is shifted by u(q).
double social_response(const PopulationScenario& scn, const Program& p, double q);

struct BisectionStep {
  double lo;
  double hi;
  double mid;
  double psi_mid;
};

struct EquilibriumResult {
  double q;
  double residual;  // |q - Psi(q)|
  std::vector<BisectionStep> trace;
};

/// Fixed point of Psi by bisection on Psi(q) - q over [0, 1]. Psi is a
/// nondecreasing step function, so an exact fixed point need not exist; the
/// result satisfies |q - Psi(q)| <= max(tol, 1/N).
EquilibriumResult equilibrium(const PopulationScenario& scn, const Program& p, double tol);

}  // namespace gcpt
