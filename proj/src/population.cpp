#include "gcpt/population.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <string>

#include "gcpt/errors.hpp"
#include "gcpt/normal.hpp"
#include "gcpt/oracle.hpp"
#include "gcpt/parallel.hpp"

namespace gcpt {

bool ProgramBounds::contains(const Program& p) const {
  return p.size() == dim() && (p.array() >= lower.array()).all() &&
         (p.array() <= upper.array()).all();
}

double softplus(double z) noexcept {
  if (z > 30.0) return z;
  return std::log1p(std::exp(z));
}

namespace {

double logistic(double z) noexcept {
  if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

}  // namespace

CptAgent agent_from_spec_vector(const Eigen::Ref<const Eigen::VectorXd>& v) {
  if (v.size() != 10) throw InvalidParameter("agent has 10 entries", std::to_string(v.size()));
  return CptAgent{ValueParams(v(4), v(5), v(6), v(7), v(8), v(9)), WeightingParams(v(0), v(1)),
                  WeightingParams(v(2), v(3))};
}

ParameterMap make_affine_map(AffineMapSpec spec) {
  if (spec.A.rows() != spec.B.rows() || spec.A.cols() != spec.B.cols())
    throw InvalidParameter("A and B have equal shape", "affine parameter map");
  const Eigen::Index de = spec.A.rows();
  const Eigen::Index dp = spec.A.cols();
  const bool agent_in_features = !spec.agent.has_value();
  const Eigen::Index expected = de + (agent_in_features ? 10 : 0);

  auto check_dims = [=](const Personality& e, const Program& p) {
    if (e.size() != expected)
      throw InvalidParameter("personality dimension",
                             std::to_string(e.size()) + " != " + std::to_string(expected));
    if (p.size() != dp)
      throw InvalidParameter("program dimension",
                             std::to_string(p.size()) + " != " + std::to_string(dp));
  };

  ParameterMap map;
  map.name = "affine";
  map.evaluate = [spec, de, agent_in_features, check_dims](const Personality& e, const Program& p) {
    check_dims(e, p);
    const auto traits = e.head(de);
    const double mu = spec.alpha0 + traits.dot(spec.A * p);
    const double sigma = softplus(spec.beta0 + traits.dot(spec.B * p));
    CptAgent agent = agent_in_features ? agent_from_spec_vector(e.tail(10)) : *spec.agent;
    return Perception{agent, GaussianGamble(mu, sigma)};
  };
  map.mean_sd_jacobian = [spec, de, check_dims](const Personality& e, const Program& p) {
    check_dims(e, p);
    const auto traits = e.head(de);
    Eigen::Matrix<double, 2, Eigen::Dynamic> jac(2, p.size());
    jac.row(0) = traits.transpose() * spec.A;
    const double z = spec.beta0 + traits.dot(spec.B * p);
    jac.row(1) = logistic(z) * (traits.transpose() * spec.B);
    return jac;
  };
  return map;
}

GainFunction adoption_gain() {
  return {"adoption",
          [](const Program&, double q) { return q; },
          [](const Program&, double) { return 1.0; },
          [](const Program& p, double) { return Eigen::VectorXd::Zero(p.size()).eval(); }};
}

GainFunction quadratic_cost_gain(double c) {
  if (!(c >= 0.0)) throw InvalidParameter("c >= 0", std::to_string(c));
  return {"quadratic_cost",
          [c](const Program& p, double q) { return q - c * p.squaredNorm(); },
          [](const Program&, double) { return 1.0; },
          [c](const Program& p, double) { return (-2.0 * c * p).eval(); }};
}

GainFunction revenue_gain(Eigen::Index k) {
  if (k < 0) throw InvalidParameter("price_index >= 0", std::to_string(k));
  auto check = [k](const Program& p) {
    if (k >= p.size()) throw InvalidParameter("price_index < program dimension", std::to_string(k));
  };
  return {"revenue",
          [k, check](const Program& p, double q) {
            check(p);
            return q * p(k);
          },
          [k](const Program& p, double) { return p(k); },
          [k](const Program& p, double q) {
            Eigen::VectorXd d = Eigen::VectorXd::Zero(p.size());
            d(k) = q;
            return d;
          }};
}

SocialUtility linear_social(double kappa) {
  if (!(kappa >= 0.0)) throw InvalidParameter("kappa >= 0", std::to_string(kappa));
  return {"linear", [kappa](double q) { return kappa * q; }};
}

SocialUtility power_social(double kappa, double beta) {
  if (!(kappa >= 0.0)) throw InvalidParameter("kappa >= 0", std::to_string(kappa));
  if (!(beta > 0.0)) throw InvalidParameter("beta > 0", std::to_string(beta));
  return {"power", [kappa, beta](double q) { return kappa * std::pow(q, beta); }};
}

void check_nondecreasing(const SocialUtility& s) {
  constexpr int n = 1000;
  double prev = s.u(0.0);
  for (int i = 1; i <= n; ++i) {
    const double q = static_cast<double>(i) / n;
    const double cur = s.u(q);
    if (!(cur >= prev))
      throw InvalidParameter("social utility nondecreasing",
                             s.name + " decreases near q = " + std::to_string(q));
    prev = cur;
  }
}

PersonalitySampler gaussian_sampler(Eigen::VectorXd mean, Eigen::VectorXd sd) {
  if (mean.size() != sd.size()) throw InvalidParameter("mean and stddev have equal length", "");
  if (!(sd.array() >= 0.0).all()) throw InvalidParameter("stddev >= 0", "gaussian sampler");
  return {"gaussian", [mean, sd](std::mt19937_64& rng) {
            Personality e(mean.size());
            for (Eigen::Index i = 0; i < e.size(); ++i)
              e(i) = mean(i) + sd(i) * std_normal_quantile(open_unit_uniform(rng()));
            return e;
          }};
}

PersonalitySampler point_sampler(Personality at) {
  return {"point", [at](std::mt19937_64&) { return at; }};
}

PopulationScenario materialize(const PopulationScenario& scn, std::uint64_t count,
                               std::uint64_t seed) {
  if (!scn.sampler) throw ScenarioError("/population", "no personality sampler");
  if (count == 0) throw ScenarioError("/population/samples", "sample count must be positive");
  PopulationScenario out = scn;
  out.individuals.clear();
  out.individuals.reserve(count);
  std::mt19937_64 rng(seed);
  for (std::uint64_t i = 0; i < count; ++i) {
    try {
      out.individuals.push_back(scn.sampler->draw(rng));
    } catch (const std::exception& ex) {
      throw ScenarioError("/population/sampler", ex.what());
    }
  }
  return out;
}

namespace {

Perception perceive(const PopulationScenario& scn, std::size_t n, const Personality& e,
                    const Program& p) {
  try {
    return scn.parameter_map.evaluate(e, p);
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ScenarioError("/individuals/" + std::to_string(n), ex.what());
  }
}

std::vector<double> totals_of(const PopulationScenario& scn, const std::vector<Personality>& people,
                              const Program& p, double shift, std::size_t first_index = 0) {
  std::vector<double> totals(people.size());
  parallel_for(
      people.size(),
      [&](std::size_t n) {
        Perception x = perceive(scn, first_index + n, people[n], p);
        if (shift != 0.0) x.gamble = GaussianGamble(x.gamble.mu() + shift, x.gamble.sigma());
        totals[n] = cpt_value(x.agent, x.gamble).total;
      },
      256);
  return totals;
}

double positive_share(const std::vector<double>& totals) {
  // Ties at zero count as non-adoption.
  const auto adopters = std::count_if(totals.begin(), totals.end(), [](double t) { return t > 0.0; });
  return static_cast<double>(adopters) / static_cast<double>(totals.size());
}

void require_finite(const PopulationScenario& scn) {
  if (!scn.is_finite()) throw ScenarioError("/population", "scenario has no individuals");
}

}  // namespace

std::vector<double> population_totals(const PopulationScenario& scn, const Program& p,
                                      double mean_shift) {
  require_finite(scn);
  return totals_of(scn, scn.individuals, p, mean_shift);
}

double adoption_fraction(const PopulationScenario& scn, const Program& p) {
  return positive_share(population_totals(scn, p));
}

double program_gain(const PopulationScenario& scn, const Program& p) {
  return scn.gain.value(p, adoption_fraction(scn, p));
}

Eigen::Index lattice_points_per_axis(std::uint64_t budget, Eigen::Index dim) {
  if (budget == 0 || dim <= 0) return 0;
  auto fits = [&](std::uint64_t k) {
    std::uint64_t total = 1;
    for (Eigen::Index i = 0; i < dim; ++i) {
      if (total > budget / k) return false;
      total *= k;
    }
    return total <= budget;
  };
  std::uint64_t k = 1;
  while (fits(k + 1)) ++k;
  return static_cast<Eigen::Index>(k);
}

namespace {

void validate_box(const ProgramBounds& b) {
  if (b.lower.size() != b.upper.size() || b.dim() == 0)
    throw std::invalid_argument("optimize_program: program bounds have mismatched or zero dimension");
  if (!((b.upper.array() > b.lower.array()).all()))
    throw std::invalid_argument("optimize_program: program box has zero volume");
}

OptimizationResult grid_search(const PopulationScenario& scn, std::uint64_t budget) {
  const ProgramBounds& b = scn.bounds;
  const Eigen::Index d = b.dim();
  const Eigen::Index k = lattice_points_per_axis(budget, d);

  auto coordinate = [&](Eigen::Index axis, Eigen::Index j) {
    if (k == 1) return 0.5 * (b.lower(axis) + b.upper(axis));
    const double t = static_cast<double>(j) / static_cast<double>(k - 1);
    return b.lower(axis) * (1.0 - t) + b.upper(axis) * t;
  };

  OptimizationResult res{Program(), -std::numeric_limits<double>::infinity(), {}};
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d), 0);
  while (true) {
    Program p(d);
    for (Eigen::Index a = 0; a < d; ++a) p(a) = coordinate(a, idx[static_cast<std::size_t>(a)]);
    const double g = program_gain(scn, p);
    res.trace.push_back({p, g});
    if (g > res.gain) {
      res.gain = g;
      res.best = p;
    }
    // Odometer increment, last axis fastest.
    Eigen::Index a = d - 1;
    while (a >= 0 && ++idx[static_cast<std::size_t>(a)] == k) idx[static_cast<std::size_t>(a--)] = 0;
    if (a < 0) break;
  }
  return res;
}

// d(mu, sigma)/dP for one individual, by the map's jacobian or central differences.
Eigen::Matrix<double, 2, Eigen::Dynamic> mean_sd_jacobian(const PopulationScenario& scn,
                                                          std::size_t n, const Personality& e,
                                                          const Program& p) {
  if (scn.parameter_map.mean_sd_jacobian) return scn.parameter_map.mean_sd_jacobian(e, p);
  Eigen::Matrix<double, 2, Eigen::Dynamic> jac(2, p.size());
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(p(i)));
    Program up = p, dn = p;
    up(i) += h;
    dn(i) -= h;
    const Perception a = perceive(scn, n, e, up);
    const Perception b = perceive(scn, n, e, dn);
    jac(0, i) = (a.gamble.mu() - b.gamble.mu()) / (2 * h);
    jac(1, i) = (a.gamble.sigma() - b.gamble.sigma()) / (2 * h);
  }
  return jac;
}

// Smoothed adoption share and its gradient with respect to P.
std::pair<double, Eigen::VectorXd> smoothed_share(const PopulationScenario& scn, const Program& p,
                                                  double tau) {
  const std::size_t N = scn.individuals.size();
  std::vector<double> share(N);
  std::vector<Eigen::VectorXd> grads(N);
  parallel_for(
      N,
      [&](std::size_t n) {
        const Personality& e = scn.individuals[n];
        const Perception x = perceive(scn, n, e, p);
        const double t = cpt_value(x.agent, x.gamble).total;
        const double s = logistic(t / tau);
        share[n] = s;
        const CptGradient g = cpt_gradient(x.agent, x.gamble);
        const auto jac = mean_sd_jacobian(scn, n, e, p);
        const double slope = s * (1.0 - s) / tau;
        grads[n] = slope * (g[Param::mu] * jac.row(0) + g[Param::sigma] * jac.row(1)).transpose();
      },
      256);
  double q = 0.0;
  Eigen::VectorXd grad = Eigen::VectorXd::Zero(p.size());
  for (std::size_t n = 0; n < N; ++n) {
    q += share[n];
    grad += grads[n];
  }
  return {q / static_cast<double>(N), grad / static_cast<double>(N)};
}

OptimizationResult gradient_ascent(const PopulationScenario& scn, std::uint64_t budget,
                                   std::uint64_t seed) {
  const ProgramBounds& b = scn.bounds;
  const Eigen::VectorXd width = b.upper - b.lower;
  const std::uint64_t starts = std::min<std::uint64_t>(4, budget);
  std::mt19937_64 rng(seed);

  OptimizationResult res{Program(), -std::numeric_limits<double>::infinity(), {}};
  auto record = [&](const Program& p) {
    const double g = program_gain(scn, p);
    res.trace.push_back({p, g});
    if (g > res.gain) {
      res.gain = g;
      res.best = p;
    }
  };

  for (std::uint64_t s = 0; s < starts; ++s) {
    std::uint64_t iterations = budget / starts + (s < budget % starts ? 1 : 0);
    Program p = b.center();
    if (s > 0) {
      for (Eigen::Index i = 0; i < p.size(); ++i)
        p(i) = b.lower(i) + width(i) * open_unit_uniform(rng());
    }

    // Temperature starts at the typical size of a valuation and shrinks
    // geometrically towards the hard indicator.
    const std::vector<double> t0 = population_totals(scn, p);
    double scale = 0.0;
    for (double t : t0) scale += std::abs(t);
    scale /= static_cast<double>(t0.size());
    double tau = std::max(scale, 1e-3);
    const double tau_min = 1e-3 * tau;
    double step = 0.25;

    while (iterations-- > 0) {
      record(p);
      if (iterations == 0) break;
      const auto [q, dq_dp] = smoothed_share(scn, p, tau);
      const Eigen::VectorXd grad =
          scn.gain.d_q(p, q) * dq_dp + scn.gain.d_program(p, q);
      const Eigen::VectorXd scaled = grad.cwiseProduct(width);
      const double norm = scaled.cwiseAbs().maxCoeff();
      if (!(norm > 0.0) || !std::isfinite(norm)) {
        // Flat smoothed objective: widen the logistic ramp and retry.
        tau *= 4.0;
        continue;
      }
      p = b.project(p + step * width.cwiseProduct(scaled) / norm);
      step = std::max(0.9 * step, 1e-3);
      tau = std::max(0.85 * tau, tau_min);
    }
  }
  return res;
}

}  // namespace

OptimizationResult optimize_program(const PopulationScenario& scn, OptimizeMethod method,
                                    std::uint64_t budget, std::uint64_t seed) {
  require_finite(scn);
  validate_box(scn.bounds);
  if (budget < 1) throw std::invalid_argument("optimize_program: budget must be >= 1");
  return method == OptimizeMethod::grid ? grid_search(scn, budget)
                                        : gradient_ascent(scn, budget, seed);
}

MeanFieldEstimate mean_field_adoption(const PopulationScenario& scn, const Program& p,
                                      std::uint64_t samples, std::uint64_t seed) {
  if (!scn.sampler) throw ScenarioError("/population", "no personality sampler");
  if (samples == 0) throw ScenarioError("/population/samples", "sample count must be positive");
  // Same draw sequence as materialize(scn, samples, seed), evaluated in
  // bounded chunks so memory does not grow with the sample count.
  constexpr std::uint64_t kChunk = 1 << 16;
  std::mt19937_64 rng(seed);
  std::vector<Personality> chunk;
  std::uint64_t adopters = 0;
  for (std::uint64_t first = 0; first < samples; first += kChunk) {
    const std::uint64_t count = std::min(kChunk, samples - first);
    chunk.clear();
    for (std::uint64_t i = 0; i < count; ++i) {
      try {
        chunk.push_back(scn.sampler->draw(rng));
      } catch (const std::exception& ex) {
        throw ScenarioError("/population/sampler", ex.what());
      }
    }
    for (double t : totals_of(scn, chunk, p, 0.0, first)) adopters += t > 0.0;
  }
  const double n = static_cast<double>(samples);
  const double q = static_cast<double>(adopters) / n;
  const double var = samples > 1 ? q * (1.0 - q) * n / (n - 1.0) : 0.0;
  return {q, std::sqrt(var / n)};
}

double social_response(const PopulationScenario& scn, const Program& p, double q) {
  const double shift = scn.social ? scn.social->u(q) : 0.0;
  return positive_share(population_totals(scn, p, shift));
}

EquilibriumResult equilibrium(const PopulationScenario& scn, const Program& p, double tol) {
  require_finite(scn);
  const double eps = std::max(tol, 1e-15);
  auto psi = [&](double q) { return social_response(scn, p, q); };

  EquilibriumResult res{0.0, 0.0, {}};
  // Invariant: Psi(lo) >= lo and Psi(hi) <= hi.
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > eps) {
    const double mid = 0.5 * (lo + hi);
    const double v = psi(mid);
    res.trace.push_back({lo, hi, mid, v});
    if (v == mid) {
      res.q = mid;
      res.residual = 0.0;
      return res;
    }
    (v > mid ? lo : hi) = mid;
  }
  // Psi takes values k/N; if Psi(lo) is itself fixed, it is the exact equilibrium.
  const double at_lo = psi(lo);
  if (psi(at_lo) == at_lo) {
    res.q = at_lo;
    res.residual = 0.0;
    return res;
  }
  res.q = lo;
  res.residual = std::abs(at_lo - lo);
  return res;
}

}  // namespace gcpt
