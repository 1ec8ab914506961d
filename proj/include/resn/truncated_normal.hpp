#pragma once

#include <span>

namespace resn {

/// Standard normal CDF, accurate in both tails (erfc based).
double normal_cdf(double z);

/// log of the standard normal CDF; switches to an asymptotic expansion deep
/// in the lower tail where erfc underflows.
double log_normal_cdf(double z);

/// Lower bound applied to every fitted standard deviation so the CDF of a
/// degenerate sample is still defined.
inline constexpr double kSdFloor = 1e-12;

struct TruncatedNormalFit {
  double mean = 0;
  double sd = kSdFloor;
};

/// Maximum-likelihood parameters of a normal distribution truncated to
/// [0, +inf) fitted to nonnegative samples (>= 2 of them). Identical samples
/// short-circuit to (value, kSdFloor). The optimizer is Nelder-Mead over
/// (mu, log sigma) started at the sample moments.
TruncatedNormalFit fit_truncated_normal(std::span<const double> samples);

/// CDF at `x` of normal(mean, sd) truncated to [0, +inf):
///   (Phi((x-mu)/sd) - Phi((0-mu)/sd)) / (1 - Phi((0-mu)/sd)),
/// clamped to [0, 1]. Requires sd >= kSdFloor and x > 0.
double truncated_normal_cdf(double mean, double sd, double x);

}  // namespace resn
