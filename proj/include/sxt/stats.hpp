#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <vector>

namespace sxt {

double mean(const Eigen::VectorXd& x);
/// Unbiased sample variance.
double sample_variance(const Eigen::VectorXd& x);
/// Standard error of the sample variance from the fourth central moment.
double variance_se(const Eigen::VectorXd& x);
/// Standard error of the mean.
double mean_se(const Eigen::VectorXd& x);

double sample_covariance(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);
/// Spearman rank correlation (average ranks for ties).
double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

/// Unbiased cumulant estimators k_2, k_3, k_4.
struct KStatistics {
  double k2 = 0.0, k3 = 0.0, k4 = 0.0;
};
KStatistics k_statistics(const Eigen::VectorXd& x);

/// Delete-one-group jackknife of a statistic of the whole sample.
struct JackknifeResult {
  double estimate = 0.0;
  double se = 0.0;
};
template <typename Stat>
JackknifeResult jackknife(const Eigen::VectorXd& x, int groups, Stat stat);

/// Standard normal CDF.
double normal_cdf(double x);

/// Anderson-Darling A^2 against the fully specified N(0,1).
double anderson_darling_normal(const Eigen::VectorXd& x);
/// 1% upper critical value of A^2 for a fully specified null.
inline constexpr double kAndersonDarling1Percent = 3.857;

/// sup |F_n - Phi|.
double kolmogorov_distance_normal(const Eigen::VectorXd& x);
/// sup |F_a - F_b| between two empirical CDFs.
double kolmogorov_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// 1 - alpha quantile of the two-sample distance under random relabelling of the pooled sample.
double permutation_threshold(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int shuffles, double alpha,
                             std::uint64_t seed);

/// Ordinary least squares y = intercept + slope x.
struct LineFit {
  double slope = 0.0, intercept = 0.0, r_squared = 0.0;
};
LineFit ols(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

}  // namespace sxt

#include "sxt/stats_impl.hpp"
