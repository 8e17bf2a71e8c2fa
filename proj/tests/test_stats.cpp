#include "sxt/stats.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sxt;
using doctest::Approx;

namespace {

Eigen::VectorXd normals(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z;
  Eigen::VectorXd x(n);
  for (auto& v : x) v = z(rng);
  return x;
}

}  // namespace

TEST_CASE("moments and cumulants") {
  Eigen::VectorXd x(5);
  x << 1, 2, 3, 4, 10;
  CHECK(mean(x) == 4.0);
  CHECK(sample_variance(x) == Approx(12.5));
  const KStatistics k = k_statistics(normals(200000, 1));
  CHECK(std::abs(k.k2 - 1) < 0.02);
  CHECK(std::abs(k.k3) < 0.03);
  CHECK(std::abs(k.k4) < 0.08);
  // Chi-square(1) centered: cumulants 2, 8, 48.
  Eigen::VectorXd c = normals(400000, 2).array().square() - 1.0;
  const KStatistics kc = k_statistics(c);
  CHECK(kc.k2 == Approx(2).epsilon(0.02));
  CHECK(kc.k3 == Approx(8).epsilon(0.06));
  CHECK(kc.k4 == Approx(48).epsilon(0.2));
  const Eigen::VectorXd z = normals(10000, 3);
  CHECK(variance_se(z) == Approx(std::sqrt(2.0 / 10000)).epsilon(0.1));
}

TEST_CASE("correlations") {
  Eigen::VectorXd a(6), b(6);
  a << 1, 2, 3, 4, 5, 6;
  b << 2, 4, 5, 4, 5, 7;
  CHECK(pearson(a, a) == Approx(1.0));
  CHECK(spearman(a, (a.array().exp()).matrix()) == Approx(1.0));
  CHECK(spearman(a, -a) == Approx(-1.0));
  CHECK(spearman(a, b) > 0.7);
}

TEST_CASE("jackknife of the mean matches the standard error") {
  const Eigen::VectorXd x = normals(4000, 4);
  const JackknifeResult j = jackknife(x, 40, [](const Eigen::VectorXd& v) { return v.mean(); });
  CHECK(j.estimate == Approx(x.mean()));
  CHECK(j.se == Approx(mean_se(x)).epsilon(0.35));
}

TEST_CASE("goodness of fit") {
  const Eigen::VectorXd z = normals(10000, 5);
  CHECK(anderson_darling_normal(z) < kAndersonDarling1Percent);
  const Eigen::VectorXd skewed = (normals(10000, 6).array().square() - 1.0) / std::sqrt(2.0);
  CHECK(anderson_darling_normal(skewed) > kAndersonDarling1Percent);

  CHECK(kolmogorov_distance(z, z) == 0.0);
  CHECK(kolmogorov_distance_normal(normals(100000, 7)) < 0.01);
  Eigen::VectorXd lo = Eigen::VectorXd::LinSpaced(50, 0, 1), hi = Eigen::VectorXd::LinSpaced(50, 2, 3);
  CHECK(kolmogorov_distance(lo, hi) == 1.0);
  const Eigen::VectorXd a = normals(2000, 8), b = normals(2000, 9);
  const double thr = permutation_threshold(a, b, 300, 0.01, 10);
  CHECK(thr > 0.0);
  CHECK(thr < 0.1);
  CHECK(thr == Approx(1.63 * std::sqrt(2.0 / 2000)).epsilon(0.25));
}

TEST_CASE("least squares") {
  Eigen::VectorXd x(5), y(5);
  x << 1, 2, 3, 4, 5;
  y = 2.5 * x.array() - 1.0;
  const LineFit f = ols(x, y);
  CHECK(f.slope == Approx(2.5).epsilon(1e-14));
  CHECK(f.intercept == Approx(-1.0).epsilon(1e-13));
  CHECK(f.r_squared == Approx(1.0));
  CHECK_THROWS(ols(Eigen::VectorXd::Ones(3), y.head(3)));
}
