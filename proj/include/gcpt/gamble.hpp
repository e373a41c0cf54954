#pragma once

namespace gcpt {

/// Gaussian reward with mean `mu` and standard deviation `sigma > 0`.
/// Deterministic rewards (sigma == 0) are handled by cpt_value_degenerate and
/// are not representable here.
class GaussianGamble {
 public:
  GaussianGamble(double mu, double sigma);

  double mu() const noexcept { return mu_; }
  double sigma() const noexcept { return sigma_; }

 private:
  double mu_;
  double sigma_;
};

}  // namespace gcpt
