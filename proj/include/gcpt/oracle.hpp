#pragma once

#include <cstdint>

#include "gcpt/gamble.hpp"
#include "gcpt/valuation.hpp"

namespace gcpt {

/// Settings for the reference valuations. Construction enforces
/// abs_tol >= 1e-12 and mc_samples >= 1.
struct OracleConfig {
  double abs_tol = 1e-10;
  std::uint64_t mc_samples = 1'000'000;
  std::uint64_t seed = 20240917;

  void validate() const;
};

/// Valuation by adaptive Gauss-Kronrod integration of v against the density
/// of the distorted loss CDF on (-inf, 0] and of the distorted gain tail on
/// [0, inf). Both densities are Gaussian (stabilize_cdf / stabilize_tail);
/// the integrals are taken in standardized units and truncated at 12 distorted
/// standard deviations. Only `value` is evaluated pointwise; no closed-form
/// partial expectation is used. Throws OracleFailure if the error estimate
/// exceeds cfg.abs_tol.
double quadrature_value(const CptAgent& agent, const GaussianGamble& g, const OracleConfig& cfg);

struct MonteCarloEstimate {
  double estimate;
  double std_error;
};

/// Sample-mean valuation: z- and z+ are drawn from the distorted loss and
/// gain Gaussians by inverse-CDF sampling, and the summand is
/// v(z-) 1{z- <= 0} + v(z+) 1{z+ >= 0}.
///
/// Uniforms come from std::mt19937_64 seeded with cfg.seed; the top 52 bits
/// of each output give (k + 0.5) / 2^52, exact in a double and never 0 or 1,
/// so results are identical across platforms.
MonteCarloEstimate monte_carlo_value(const CptAgent& agent, const GaussianGamble& g,
                                     const OracleConfig& cfg);

/// Portable open-interval uniform from a 64-bit generator output.
inline double open_unit_uniform(std::uint64_t bits) noexcept {
  return (static_cast<double>(bits >> 12) + 0.5) * 0x1.0p-52;
}

}  // namespace gcpt
