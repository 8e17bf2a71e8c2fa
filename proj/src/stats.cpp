#include "sxt/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <stdexcept>

namespace sxt {

namespace {

void need(const Eigen::VectorXd& x, Eigen::Index n, const char* who) {
  if (x.size() < n) throw std::invalid_argument(std::string(who) + ": not enough observations");
}

std::vector<double> sorted(const Eigen::VectorXd& x) {
  std::vector<double> v(x.data(), x.data() + x.size());
  std::sort(v.begin(), v.end());
  return v;
}

Eigen::VectorXd ranks(const Eigen::VectorXd& x) {
  const Eigen::Index n = x.size();
  std::vector<Eigen::Index> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return x(a) < x(b); });
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n;) {
    Eigen::Index j = i;
    while (j + 1 < n && x(idx[j + 1]) == x(idx[i])) ++j;
    const double avg = 0.5 * (i + j) + 1.0;
    for (Eigen::Index k = i; k <= j; ++k) r(idx[k]) = avg;
    i = j + 1;
  }
  return r;
}

}  // namespace

double mean(const Eigen::VectorXd& x) {
  need(x, 1, "mean");
  return x.mean();
}

double sample_variance(const Eigen::VectorXd& x) {
  need(x, 2, "sample_variance");
  const double m = x.mean();
  return (x.array() - m).square().sum() / (x.size() - 1.0);
}

double variance_se(const Eigen::VectorXd& x) {
  need(x, 4, "variance_se");
  const double n = static_cast<double>(x.size());
  const double m = x.mean();
  const double m2 = (x.array() - m).square().mean();
  const double m4 = (x.array() - m).square().square().mean();
  // Var(s^2) = (mu4 - mu2^2 (n-3)/(n-1)) / n.
  return std::sqrt(std::max(0.0, (m4 - m2 * m2 * (n - 3.0) / (n - 1.0)) / n));
}

double mean_se(const Eigen::VectorXd& x) { return std::sqrt(sample_variance(x) / x.size()); }

double sample_covariance(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw std::invalid_argument("sample_covariance: size mismatch");
  need(x, 2, "sample_covariance");
  return ((x.array() - x.mean()) * (y.array() - y.mean())).sum() / (x.size() - 1.0);
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  return sample_covariance(x, y) / std::sqrt(sample_variance(x) * sample_variance(y));
}

double spearman(const Eigen::VectorXd& x, const Eigen::VectorXd& y) { return pearson(ranks(x), ranks(y)); }

KStatistics k_statistics(const Eigen::VectorXd& x) {
  need(x, 4, "k_statistics");
  const double n = static_cast<double>(x.size());
  const double m = x.mean();
  const Eigen::ArrayXd d = x.array() - m;
  const double s2 = d.square().sum(), s3 = d.cube().sum(), s4 = d.square().square().sum();
  KStatistics k;
  k.k2 = s2 / (n - 1.0);
  k.k3 = n * s3 / ((n - 1.0) * (n - 2.0));
  k.k4 = n * ((n + 1.0) * s4 - 3.0 * (n - 1.0) * s2 * s2 / n) / ((n - 1.0) * (n - 2.0) * (n - 3.0));
  return k;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

double anderson_darling_normal(const Eigen::VectorXd& x) {
  need(x, 2, "anderson_darling_normal");
  const auto v = sorted(x);
  const double n = static_cast<double>(v.size());
  double s = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    // log(1 - Phi(x)) = log Phi(-x); both tails through erfc to keep precision.
    const double lo = std::log(std::max(normal_cdf(v[i]), 1e-300));
    const double hi = std::log(std::max(normal_cdf(-v[v.size() - 1 - i]), 1e-300));
    s += (2.0 * i + 1.0) * (lo + hi);
  }
  return -n - s / n;
}

double kolmogorov_distance_normal(const Eigen::VectorXd& x) {
  need(x, 1, "kolmogorov_distance_normal");
  const auto v = sorted(x);
  const double n = static_cast<double>(v.size());
  double d = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double f = normal_cdf(v[i]);
    d = std::max({d, (i + 1.0) / n - f, f - i / n});
  }
  return d;
}

double kolmogorov_distance(const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
  need(a, 1, "kolmogorov_distance");
  need(b, 1, "kolmogorov_distance");
  const auto va = sorted(a), vb = sorted(b);
  const double na = static_cast<double>(va.size()), nb = static_cast<double>(vb.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < va.size() && j < vb.size()) {
    const double x = std::min(va[i], vb[j]);
    while (i < va.size() && va[i] == x) ++i;
    while (j < vb.size() && vb[j] == x) ++j;
    d = std::max(d, std::abs(i / na - j / nb));
  }
  // Once one sample is exhausted the gap can only shrink.
  return d;
}

double permutation_threshold(const Eigen::VectorXd& a, const Eigen::VectorXd& b, int shuffles, double alpha,
                             std::uint64_t seed) {
  if (shuffles < 1) throw std::invalid_argument("permutation_threshold: need shuffles >= 1");
  Eigen::VectorXd pool(a.size() + b.size());
  pool << a, b;
  std::mt19937_64 rng(seed);
  std::vector<double> stats;
  stats.reserve(shuffles);
  std::vector<double> v(pool.data(), pool.data() + pool.size());
  for (int s = 0; s < shuffles; ++s) {
    std::shuffle(v.begin(), v.end(), rng);
    const Eigen::Map<const Eigen::VectorXd> all(v.data(), static_cast<Eigen::Index>(v.size()));
    stats.push_back(kolmogorov_distance(all.head(a.size()), all.tail(b.size())));
  }
  std::sort(stats.begin(), stats.end());
  const auto k = static_cast<std::size_t>(std::ceil((1.0 - alpha) * shuffles)) - 1;
  return stats[std::min(k, stats.size() - 1)];
}

LineFit ols(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw std::invalid_argument("ols: size mismatch");
  need(x, 2, "ols");
  const double mx = x.mean(), my = y.mean();
  const double sxx = (x.array() - mx).square().sum();
  if (!(sxx > 0.0)) throw std::invalid_argument("ols: degenerate abscissae");
  const double sxy = ((x.array() - mx) * (y.array() - my)).sum();
  const double syy = (y.array() - my).square().sum();
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  f.r_squared = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  return f;
}

}  // namespace sxt
