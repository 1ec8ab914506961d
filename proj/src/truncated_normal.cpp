#include "resn/truncated_normal.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace resn {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kLogSqrt2Pi = 0.9189385332046727;  // log(sqrt(2*pi))

struct Moments {
  double n = 0;
  double sum = 0;
  double sum_sq = 0;
};

// Negative log-likelihood (up to the constant n*log(sqrt(2pi))) of a normal
// truncated to [0, inf):
//   n*log(sigma) + n*log(Phi(mu/sigma)) + sum((x - mu)^2) / (2 sigma^2)
double truncated_nll(const Moments& m, double mu, double log_sigma) {
  const double sigma = std::exp(log_sigma);
  const double rss = m.sum_sq - 2.0 * mu * m.sum + m.n * mu * mu;
  return m.n * log_sigma + m.n * log_normal_cdf(mu / sigma) + rss / (2.0 * sigma * sigma);
}

// Minimal Nelder-Mead on two parameters; deterministic, no restarts.
std::array<double, 2> nelder_mead_2d(const Moments& m, std::array<double, 2> start) {
  constexpr double alpha = 1.0, gamma = 2.0, rho = 0.5, shrink = 0.5;
  constexpr int max_iter = 800;
  constexpr double tol = 1e-12;

  std::array<std::array<double, 2>, 3> x{start, start, start};
  x[1][0] += std::max(0.1 * std::abs(start[0]), 1e-4);
  x[2][1] += 0.1;
  std::array<double, 3> f;
  for (int i = 0; i < 3; ++i) f[i] = truncated_nll(m, x[i][0], x[i][1]);

  for (int iter = 0; iter < max_iter; ++iter) {
    std::array<int, 3> idx{0, 1, 2};
    std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
    const auto& best = x[idx[0]];
    const auto& worst = x[idx[2]];
    if (std::abs(f[idx[2]] - f[idx[0]]) < tol &&
        std::abs(worst[0] - best[0]) + std::abs(worst[1] - best[1]) < tol) {
      break;
    }
    std::array<double, 2> centroid{(x[idx[0]][0] + x[idx[1]][0]) / 2.0,
                                   (x[idx[0]][1] + x[idx[1]][1]) / 2.0};
    auto point = [&](double coef) {
      return std::array<double, 2>{centroid[0] + coef * (centroid[0] - worst[0]),
                                   centroid[1] + coef * (centroid[1] - worst[1])};
    };
    auto reflected = point(alpha);
    double fr = truncated_nll(m, reflected[0], reflected[1]);
    if (fr < f[idx[0]]) {
      auto expanded = point(gamma);
      double fe = truncated_nll(m, expanded[0], expanded[1]);
      if (fe < fr) {
        x[idx[2]] = expanded;
        f[idx[2]] = fe;
      } else {
        x[idx[2]] = reflected;
        f[idx[2]] = fr;
      }
    } else if (fr < f[idx[1]]) {
      x[idx[2]] = reflected;
      f[idx[2]] = fr;
    } else {
      auto contracted = point(-rho);
      double fc = truncated_nll(m, contracted[0], contracted[1]);
      if (fc < f[idx[2]]) {
        x[idx[2]] = contracted;
        f[idx[2]] = fc;
      } else {
        for (int i : {idx[1], idx[2]}) {
          x[i][0] = x[idx[0]][0] + shrink * (x[i][0] - x[idx[0]][0]);
          x[i][1] = x[idx[0]][1] + shrink * (x[i][1] - x[idx[0]][1]);
          f[i] = truncated_nll(m, x[i][0], x[i][1]);
        }
      }
    }
  }
  std::array<int, 3> idx{0, 1, 2};
  std::sort(idx.begin(), idx.end(), [&](int a, int b) { return f[a] < f[b]; });
  return x[idx[0]];
}
}  // namespace

double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / kSqrt2);
}

double log_normal_cdf(double z) {
  if (z > -8.0) {
    return std::log(normal_cdf(z));
  }
  const double c = normal_cdf(z);
  if (c > 0.0) {
    return std::log(c);
  }
  // Mills-ratio expansion of the lower tail: Phi(z) ~ phi(z)/(-z) * (1 - 1/z^2 + 3/z^4)
  const double z2 = z * z;
  return -0.5 * z2 - kLogSqrt2Pi - std::log(-z) + std::log1p(-1.0 / z2 + 3.0 / (z2 * z2));
}

TruncatedNormalFit fit_truncated_normal(std::span<const double> samples) {
  if (samples.size() < 2) {
    throw std::invalid_argument("fit_truncated_normal: need at least 2 samples");
  }
  Moments m;
  m.n = static_cast<double>(samples.size());
  double lo = samples[0], hi = samples[0];
  for (double x : samples) {
    if (!(x >= 0.0)) {
      throw std::invalid_argument("fit_truncated_normal: samples must be >= 0");
    }
    m.sum += x;
    m.sum_sq += x * x;
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  const double mean = m.sum / m.n;
  const double var = std::max(m.sum_sq / m.n - mean * mean, 0.0);
  if (hi - lo <= 0.0) {
    return {mean, kSdFloor};  // degenerate sample, skip the optimizer
  }
  const double sd = std::max(std::sqrt(var), kSdFloor);
  const auto best = nelder_mead_2d(m, {mean, std::log(sd)});
  return {best[0], std::max(std::exp(best[1]), kSdFloor)};
}

double truncated_normal_cdf(double mean, double sd, double x) {
  if (!(sd >= kSdFloor)) {
    throw std::invalid_argument("truncated_normal_cdf: sd below floor");
  }
  if (!(x > 0.0)) {
    throw std::invalid_argument("truncated_normal_cdf: x must be positive");
  }
  const double alpha = (0.0 - mean) / sd;
  const double xi = (x - mean) / sd;
  // Phi(xi) - Phi(alpha) == Phi(-alpha) - Phi(-xi); evaluate whichever side
  // keeps both CDFs in the erfc-accurate lower tail.
  const double numer = alpha + xi > 0.0 ? normal_cdf(-alpha) - normal_cdf(-xi)
                                        : normal_cdf(xi) - normal_cdf(alpha);
  const double mass = normal_cdf(-alpha);  // 1 - Phi(alpha), tail-accurate
  if (mass <= 0.0) {
    return 1.0;  // all truncated mass collapses at 0+
  }
  return std::clamp(numer / mass, 0.0, 1.0);
}

}  // namespace resn
