#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "fixture_values.hpp"
#include "gcpt/errors.hpp"
#include "gcpt/normal.hpp"
#include "gcpt/sampling.hpp"
#include "gcpt/valuation.hpp"
#include "support.hpp"

using namespace gcpt;

TEST_CASE("regression fixture") {
  const auto b = cpt_value(fixture::agent(), fixture::gamble());
  CHECK(std::abs(b.total - fixture::kTotal) <= 1e-14);
  CHECK(std::abs(b.loss_part - fixture::kLossPart) <= 1e-14);
  CHECK(std::abs(b.gain_part - fixture::kGainPart) <= 1e-14);
  CHECK(b.total == b.loss_part + b.gain_part);
  CHECK(std::abs(b.mu_hat_minus - fixture::kMuHatMinus) <= 1e-15);
  CHECK(std::abs(b.sigma_hat_minus - fixture::kSigmaHatMinus) <= 1e-15);
  CHECK(std::abs(b.mu_bar_hat_plus - fixture::kMuBarHatPlus) <= 1e-15);
  CHECK(std::abs(b.sigma_hat_plus - fixture::kSigmaHatPlus) <= 1e-15);
  CHECK(b.x_minus == b.mu_hat_minus / b.sigma_hat_minus);
  CHECK(b.x_bar_plus == b.mu_bar_hat_plus / b.sigma_hat_plus);

  const double ce = certainty_equivalent(fixture::agent(), fixture::gamble());
  CHECK(std::abs(ce - fixture::kCertaintyEquivalent) <= 1e-15);
  CHECK(std::abs(value(fixture::agent().value, ce) - b.total) <= 1e-10 * std::abs(b.total));

  const auto grad = cpt_gradient(fixture::agent(), fixture::gamble());
  for (int i = 0; i < kNumParams; ++i) {
    CAPTURE(param_name(static_cast<Param>(i)));
    CHECK(test::close_rel(grad.partials(i), fixture::kGradient[i], 1e-12, 1e-14));
  }
}

TEST_CASE("identity and symmetric agents") {
  for (double m : {0.5, 1.0, 3.0}) {
    for (double mu : {-2.0, 0.0, 1.0, 4.5}) {
      const GaussianGamble g(mu, 1.7);
      CHECK(std::abs(cpt_value(test::identity_agent(m), g).total - m * mu) <= 1e-12);
      CHECK(std::abs(certainty_equivalent(test::identity_agent(m), g) - mu) <= 1e-12);
      CHECK(std::abs(cpt_gradient(test::identity_agent(m), g)[Param::mu] - m) <= 1e-12);
    }
  }
  const auto sym = test::mirrored_agent(1.5, 2.0, 0.8, 0.37, 0.61);
  CHECK(std::abs(cpt_value(sym, GaussianGamble(0.0, 2.0)).total) <= 1e-15);
  CHECK(std::abs(certainty_equivalent(sym, GaussianGamble(0.0, 2.0))) <= 1e-12);
}

TEST_CASE("degenerate gamble") {
  const auto agent = fixture::agent();
  CHECK(cpt_value_degenerate(agent, 0.0) == 0.0);
  const CptAgent linear{ValueParams(3, 0, 0, 2, 0, 0), WeightingParams(0.3, 0.5),
                        WeightingParams(0.6, 0.7)};
  CHECK(cpt_value_degenerate(linear, 3.0) == 6.0);
  const auto mirror = test::mirrored_agent(1.0, 2.0, 0.5, 0.4, 0.6);
  CHECK(cpt_value_degenerate(mirror, -1.0) == -value(mirror.value, 1.0));
  for (double mu : {-2.0, -0.3, 0.4, 3.0})
    CHECK(std::abs(cpt_value(agent, GaussianGamble(mu, 1e-8)).total - cpt_value_degenerate(agent, mu)) <=
          1e-4);
}

TEST_CASE("gain asymptote offset enters affinely") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const auto agent = draw_agent(rng);
    const auto g = draw_gamble(rng);
    const auto b = cpt_value(agent, g);
    const double a = agent.value.a_plus(), s = b.sigma_hat_plus, x = b.x_bar_plus;
    const double expected = std_normal_cdf(x) - scaled_normal_cdf(x, a * s);
    CHECK(test::close_rel(cpt_gradient(agent, g)[Param::V_plus], expected, 1e-13, 1e-15));
  }
}

TEST_CASE("gradient matches finite differences") {
  std::mt19937_64 rng(21);
  int failures = 0;
  for (int k = 0; k < 60; ++k) {
    const auto agent = draw_agent(rng);
    const auto g = draw_gamble(rng);
    const auto grad = cpt_gradient(agent, g);
    const auto fd = test::fd_gradient(agent, g);
    CHECK(grad[Param::mu] > 0.0);
    for (int i = 0; i < kNumParams; ++i) {
      CHECK(std::isfinite(grad.partials(i)));
      if (!test::close_rel(grad.partials(i), fd(i), 1e-5, 1e-8)) {
        ++failures;
        MESSAGE("draw ", k, " ", param_name(static_cast<Param>(i)), " analytic ", grad.partials(i),
                " fd ", fd(i));
      }
    }
  }
  CHECK(failures == 0);
}

TEST_CASE("pack and unpack round trip") {
  const auto theta = pack_parameters(fixture::agent(), fixture::gamble());
  CHECK(theta(0) == 0.5);
  CHECK(theta(static_cast<int>(Param::a_plus)) == 1.0);
  const auto [agent, g] = unpack_parameters(theta);
  CHECK(pack_parameters(agent, g) == theta);
  ParamVector bad = theta;
  bad(static_cast<int>(Param::sigma)) = -1.0;
  CHECK_THROWS_AS(unpack_parameters(bad), InvalidParameter);
}

TEST_CASE("structural properties") {
  std::mt19937_64 rng(99);
  for (int k = 0; k < 100; ++k) {
    const auto agent = draw_agent(rng);
    const double sigma = draw_uniform(rng, 0.1, 5.0);
    const double mu1 = draw_uniform(rng, -5, 5), mu2 = draw_uniform(rng, -5, 5);
    const double lo = std::min(mu1, mu2), hi = std::max(mu1, mu2);
    if (lo < hi)
      CHECK(cpt_value(agent, GaussianGamble(lo, sigma)).total <
            cpt_value(agent, GaussianGamble(hi, sigma)).total);

    const double m = draw_uniform(rng, 0, 5), V = draw_uniform(rng, 0.01, 5),
                 a = draw_uniform(rng, 0.01, 2), p0 = draw_uniform(rng, 0.05, 0.95),
                 gamma = draw_uniform(rng, 0.2, 1);
    const auto mirror = test::mirrored_agent(m, V, a, p0, gamma);
    const double mu = draw_uniform(rng, -5, 5);
    CHECK(std::abs(cpt_value(mirror, GaussianGamble(mu, sigma)).total +
                   cpt_value(mirror, GaussianGamble(-mu, sigma)).total) <= 1e-10);

    const CptAgent averse{ValueParams(m + 0.5, V + 0.5, a + 0.2, m, V, a), WeightingParams(p0, gamma),
                          WeightingParams(p0, gamma)};
    CHECK(cpt_value(averse, GaussianGamble(0.0, sigma)).total < 0.0);

    const double scale = draw_uniform(rng, 0.1, 10);
    const CptAgent scaled{
        ValueParams(scale * agent.value.m_minus(), scale * agent.value.V_minus(), agent.value.a_minus(),
                    scale * agent.value.m_plus(), scale * agent.value.V_plus(), agent.value.a_plus()),
        agent.w_minus, agent.w_plus};
    const GaussianGamble g(mu, sigma);
    const double base = cpt_value(agent, g).total;
    CHECK(test::close_rel(cpt_value(scaled, g).total, scale * base, 1e-12, 1e-13));
  }
}

TEST_CASE("certainty equivalent outside the value range") {
  const CptAgent capped{ValueParams(1, 1, 1, 0, 1, 1), WeightingParams(0.5, 1.0),
                        WeightingParams(0.5, 1.0)};
  const GaussianGamble g(3.0, 1.0);
  CHECK(cpt_value(capped, g).total < 1.0);
  CHECK(value(capped.value, certainty_equivalent(capped, g)) ==
        doctest::Approx(cpt_value(capped, g).total).epsilon(1e-10));
  const CptAgent flat{ValueParams(0, 1, 1, 0, 1, 1), WeightingParams(0.5, 1.0), WeightingParams(0.5, 1.0)};
  CHECK_NOTHROW(certainty_equivalent(flat, GaussianGamble(-3.0, 1.0)));
}

TEST_CASE("batch evaluation") {
  CHECK(batch_value({}, {}).empty());
  const std::vector<CptAgent> one{fixture::agent()};
  const std::vector<GaussianGamble> one_g{fixture::gamble()};
  CHECK(batch_value(one, one_g) == std::vector<double>{cpt_value(fixture::agent(), fixture::gamble()).total});
  CHECK_THROWS_AS(batch_value(one, std::vector<GaussianGamble>{}), std::invalid_argument);

  std::mt19937_64 rng(1234);
  std::vector<CptAgent> agents;
  std::vector<GaussianGamble> gambles;
  const int n = 100000;
  agents.reserve(n);
  gambles.reserve(n);
  for (int i = 0; i < n; ++i) {
    agents.push_back(draw_agent(rng));
    gambles.push_back(draw_gamble(rng));
  }
  const auto totals = batch_value(agents, gambles);
  REQUIRE(totals.size() == static_cast<std::size_t>(n));
  int mismatches = 0;
  for (int i = 0; i < n; ++i) mismatches += totals[i] != cpt_value(agents[i], gambles[i]).total;
  CHECK(mismatches == 0);
}
