#include "rumor/stats.hpp"

#include <boost/math/distributions/students_t.hpp>
#include <cmath>
#include <numeric>

#include "rumor/common.hpp"

namespace rumor::stats {

double quantile_sorted(std::span<const double> sorted, double q) {
  if (sorted.empty()) throw InvalidArgument("quantile of empty sample");
  const double pos = q * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  if (frac == 0.0) return sorted[lo];
  return sorted[lo] + (sorted[hi] - sorted[lo]) * frac;
}

double mean(std::span<const double> xs) {
  if (xs.empty()) throw InvalidArgument("mean of empty sample");
  return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

double population_stddev(std::span<const double> xs) {
  const double m = mean(xs);
  double ss = 0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size()));
}

double sample_stddev(std::span<const double> xs) {
  if (xs.size() < 2) throw InvalidArgument("sample stddev needs at least two values");
  const double m = mean(xs);
  double ss = 0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

double t_critical_95(int dof) {
  if (dof < 1) throw InvalidArgument("t distribution needs dof >= 1");
  const boost::math::students_t dist(dof);
  return boost::math::quantile(dist, 0.975);
}

std::optional<double> ci95_half_width(std::span<const double> xs) {
  if (xs.size() < 2) return std::nullopt;
  const auto n = static_cast<double>(xs.size());
  return t_critical_95(static_cast<int>(xs.size()) - 1) * sample_stddev(xs) / std::sqrt(n);
}

double ols_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("slope needs >= 2 aligned points");
  const double mx = mean(x);
  const double my = mean(y);
  double sxy = 0;
  double sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (sxx == 0) throw InvalidArgument("slope undefined for constant x");
  return sxy / sxx;
}

}  // namespace rumor::stats
