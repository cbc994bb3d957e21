#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace polyprophet {

struct SummaryStats {
  int64_t count = 0;
  double mean = 0.0;
  double stddev = 0.0;  // sample standard deviation
  double se = 0.0;      // standard error of the mean
};

inline SummaryStats summarize(const std::vector<double>& xs) {
  SummaryStats s;
  s.count = static_cast<int64_t>(xs.size());
  if (s.count == 0) return s;
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(s.count);
  if (s.count > 1) {
    double m2 = 0.0;
    for (double x : xs) {
      const double d = x - s.mean;
      m2 += d * d;
    }
    s.stddev = std::sqrt(m2 / static_cast<double>(s.count - 1));
    s.se = s.stddev / std::sqrt(static_cast<double>(s.count));
  }
  return s;
}

inline double covariance(const std::vector<double>& xs, const std::vector<double>& ys,
                         double mean_x, double mean_y) {
  if (xs.size() < 2) return 0.0;
  double acc = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    acc += (xs[i] - mean_x) * (ys[i] - mean_y);
  }
  return acc / static_cast<double>(xs.size() - 1);
}

// Standard error of the ratio of means mean(xs)/mean(ys) by the delta method,
// accounting for per-trial correlation: Var(r) ~ (var_x - 2r cov + r^2 var_y) / (n mean_y^2).
inline double ratio_of_means_se(const std::vector<double>& xs, const std::vector<double>& ys,
                                double mean_x, double mean_y) {
  if (xs.size() < 2 || mean_y == 0.0) return 0.0;
  const double n = static_cast<double>(xs.size());
  double var_x = 0.0, var_y = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    var_x += (xs[i] - mean_x) * (xs[i] - mean_x);
    var_y += (ys[i] - mean_y) * (ys[i] - mean_y);
  }
  var_x /= (n - 1);
  var_y /= (n - 1);
  const double cov = covariance(xs, ys, mean_x, mean_y);
  const double r = mean_x / mean_y;
  const double var_r = (var_x - 2.0 * r * cov + r * r * var_y) / (n * mean_y * mean_y);
  // can dip below zero from rounding when alg == opt identically
  return std::sqrt(std::max(var_r, 0.0));
}

}  // namespace polyprophet
