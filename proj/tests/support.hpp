#pragma once

// Test-only oracles and helpers. Nothing here is used by the library.

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "gcpt/errors.hpp"
#include "gcpt/normal.hpp"
#include "gcpt/valuation.hpp"
#include "gcpt/value_function.hpp"
#include "gcpt/weighting.hpp"

namespace gcpt::test {

inline bool close_rel(double actual, double expected, double rel, double abs_floor) {
  return std::abs(actual - expected) <= std::max(abs_floor, rel * std::abs(expected));
}

/// Fourth-order central difference of w' (itself analytic), i.e. a
/// finite-difference second derivative of the weighting function.
inline double fd_second_derivative(const WeightingParams& w, double p, double h = 1e-4) {
  const double h_eff = std::min(h, 0.25 * std::min(p, 1.0 - p));
  auto d1 = [&](double x) { return distort_derivative(w, x); };
  return (8.0 * (d1(p + h_eff) - d1(p - h_eff)) - (d1(p + 2 * h_eff) - d1(p - 2 * h_eff))) /
         (12.0 * h_eff);
}

struct SignChangeScan {
  int changes = 0;
  std::optional<double> root;  // refined location of the first change
};

/// Scans the finite-difference w'' on the grid i / n, i = 1..n-1, counts sign
/// changes and refines the first one by bisection to width 1e-14.
inline SignChangeScan scan_second_derivative(const WeightingParams& w, int n = 10000) {
  SignChangeScan scan;
  double prev_p = 1.0 / n;
  double prev = fd_second_derivative(w, prev_p);
  for (int i = 2; i < n; ++i) {
    const double p = static_cast<double>(i) / n;
    const double cur = fd_second_derivative(w, p);
    if ((prev < 0.0) != (cur < 0.0)) {
      ++scan.changes;
      if (!scan.root) {
        double lo = prev_p, hi = p;
        const bool lo_neg = prev < 0.0;
        while (hi - lo > 1e-14) {
          const double mid = 0.5 * (lo + hi);
          if ((fd_second_derivative(w, mid) < 0.0) == lo_neg)
            lo = mid;
          else
            hi = mid;
        }
        scan.root = 0.5 * (lo + hi);
      }
    }
    prev = cur;
    prev_p = p;
  }
  return scan;
}

/// Adaptive Gauss-Kronrod estimate of E[f(Z) 1{lo <= Z <= hi}] for
/// Z ~ N(mean, sd), integrated in standardized units over +-12 sd.
inline double gaussian_expectation(const std::function<double(double)>& f, double mean, double sd,
                                   double lo, double hi, double tol = 1e-13) {
  const double tlo = std::max(-12.0, (lo - mean) / sd);
  const double thi = std::min(12.0, (hi - mean) / sd);
  if (!(tlo < thi)) return 0.0;
  auto g = [&](double t) { return f(mean + sd * t) * std_normal_pdf(t); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(g, tlo, thi, 30, tol);
}

inline CptAgent identity_agent(double m) {
  return CptAgent{ValueParams(m, 0, 0, m, 0, 0), WeightingParams(0.5, 1.0), WeightingParams(0.5, 1.0)};
}

/// Same numeric parameters on both sides, so v is odd and the two
/// distortions mirror each other.
inline CptAgent mirrored_agent(double m, double V, double a, double p0, double gamma) {
  return CptAgent{ValueParams(m, V, a, m, V, a), WeightingParams(p0, gamma),
                  WeightingParams(p0, gamma)};
}

/// Central differences of cpt_value(...).total in every coordinate, step
/// 1e-6 * max(1, |theta_i|). Where the symmetric stencil would leave the
/// parameter domain, a second-order one-sided stencil into the domain is used.
inline ParamVector fd_gradient(const CptAgent& agent, const GaussianGamble& g) {
  const ParamVector theta = pack_parameters(agent, g);
  auto total_at = [&](int i, double delta) -> std::optional<double> {
    ParamVector t = theta;
    t(i) += delta;
    try {
      const auto [a, gg] = unpack_parameters(t);
      return cpt_value(a, gg).total;
    } catch (const InvalidParameter&) {
      return std::nullopt;
    }
  };
  ParamVector out;
  for (int i = 0; i < kNumParams; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(theta(i)));
    const auto up = total_at(i, h), down = total_at(i, -h);
    if (up && down) {
      out(i) = (*up - *down) / (2 * h);
      continue;
    }
    const double f0 = cpt_value(agent, g).total;
    const double s = up ? 1.0 : -1.0;
    const auto f1 = total_at(i, s * h), f2 = total_at(i, s * 2 * h);
    out(i) = s * (-3 * f0 + 4 * f1.value() - f2.value()) / (2 * h);
  }
  return out;
}

}  // namespace gcpt::test
