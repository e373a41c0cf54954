#pragma once

// Standard normal primitives shared by every other component.

namespace gcpt {

/// Standard normal CDF. Accurate to full relative precision in both tails.
double std_normal_cdf(double x) noexcept;

/// Standard normal density n(x) = exp(-x^2/2) / sqrt(2 pi).
double std_normal_pdf(double x) noexcept;

/// Inverse of std_normal_cdf. Returns -inf at p == 0 and +inf at p == 1 so
/// that compositions such as cdf(a * quantile(p) + b) evaluate exactly to 0/1
/// at the endpoints. NaN for p outside [0, 1].
///
/// Wichura's AS241 (PPND16) rational approximation followed by one Newton
/// step on the complementary side of the median.
double std_normal_quantile(double p) noexcept;

/// Mills ratio of the lower tail: Phi(-z) / n(z), for z >= 0. Stays finite and
/// accurate where Phi(-z) itself underflows.
double mills_ratio(double z) noexcept;

/// exp(c^2 / 2 - c x) * Phi(x - c), evaluated without forming the exponential
/// separately. With x = mu / s and c = a s this is e^{-a mu + (a s)^2/2}
/// Phi(x - a s), the building block of the exponential partial expectation.
/// The shift is passed rather than x - c so that tiny c survives huge x.
double scaled_normal_cdf(double x, double c) noexcept;

}  // namespace gcpt
