#pragma once

#include <optional>
#include <span>
#include <vector>

namespace rumor::stats {

/// Quantile with linear interpolation between order statistics
/// (position q * (n - 1) in the sorted sample). Even-length medians are the
/// mean of the two middle values. `sorted` must be ascending and non-empty.
double quantile_sorted(std::span<const double> sorted, double q);

double mean(std::span<const double> xs);

/// Population standard deviation.
double population_stddev(std::span<const double> xs);

/// Sample standard deviation (n - 1 denominator); needs >= 2 values.
double sample_stddev(std::span<const double> xs);

/// Half-width of the two-sided 95% Student-t confidence interval for the
/// mean. Absent for fewer than two samples.
std::optional<double> ci95_half_width(std::span<const double> xs);

/// Two-sided 95% critical value of Student's t with `dof` degrees of freedom.
double t_critical_95(int dof);

/// Ordinary least-squares slope of y on x.
double ols_slope(std::span<const double> x, std::span<const double> y);

}  // namespace rumor::stats
