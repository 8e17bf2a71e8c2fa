#include "sxt/rosenblatt.hpp"
#include "sxt/stats.hpp"

#include <doctest.h>

#include <cmath>

using namespace sxt;
using doctest::Approx;

namespace {

double beta_fn(double a, double b) { return std::tgamma(a) * std::tgamma(b) / std::tgamma(a + b); }

}  // namespace

TEST_CASE("sigma, a_2 and unit variance") {
  CHECK(sigma_and_a(0.25).sigma == Approx(std::sqrt(0.1875)).epsilon(1e-15));
  CHECK(a_j_coefficient(2, 0.25).value == Approx(8.0 / 3.0).epsilon(1e-15));
  for (double b : {0.05, 0.15, 0.25, 0.35, 0.45}) CHECK(cumulant(2, b).value == Approx(1.0).epsilon(1e-14));
  CHECK_THROWS_AS(sigma_and_a(0.6), std::domain_error);
  CHECK_THROWS_AS(sigma_and_a(0.0), std::domain_error);
  CHECK_THROWS_AS(a_j_coefficient(1, 0.2), std::domain_error);
}

TEST_CASE("a_3 and a_4") {
  // The cyclic triple integral has a Beta-function closed form.
  for (double b : {0.1, 0.25, 0.4}) {
    const double closed = 6 * beta_fn(1 - b, 1 - b) / ((2 - 3 * b) * (3 - 3 * b));
    CHECK(a_j_coefficient(3, b).value == Approx(closed).epsilon(1e-9));
  }
  const CircularIntegral mc3 = a_j_monte_carlo(3, 0.15, 2000000, 3);
  CHECK(std::abs(mc3.value - a_j_coefficient(3, 0.15).value) < 4 * mc3.se);
  const CircularIntegral mc4 = a_j_monte_carlo(4, 0.1, 2000000, 4);
  CHECK(std::abs(mc4.value - a_j_coefficient(4, 0.1).value) < 4 * mc4.se);
  CHECK(a_j_monte_carlo(5, 0.45, 1000, 1).finite_variance == false);
  CHECK(a_j_monte_carlo(5, 0.1, 1000, 1).finite_variance == true);
}

TEST_CASE("third cumulant limits") {
  CHECK(cumulant(3, 1e-6).value == Approx(2 * std::sqrt(2.0)).epsilon(1e-4));
  CHECK(cumulant(3, 0.5 - 1e-6).value < 1e-2);
  double prev = 3.0;
  for (double b : {0.05, 0.15, 0.25, 0.35, 0.45}) {
    const double k = cumulant(3, b).value;
    CHECK(k < prev);
    prev = k;
  }
}

TEST_CASE("sampler") {
  RosenblattParams p;
  p.beta = 0.25;
  p.n_terms = 1024;
  const RosenblattSampler s(p);
  const Eigen::VectorXd x = s.standard(20000, 17);
  CHECK(std::abs(mean(x)) < 4 * mean_se(x));
  CHECK(std::abs(sample_variance(x) - 1.0) < 4 * variance_se(x));
  const KStatistics k = k_statistics(x);
  CHECK(k.k3 > 1.5);  // about 2.5 here, strongly skewed

  CHECK(s.standard(500, 3, 1) == s.standard(500, 3, 2));
  CHECK(s.standard(500, 3) != s.standard(500, 4));

  // One unit weight is the standard law.
  p.weights = Eigen::VectorXd::Ones(1);
  const Eigen::VectorXd c = sample_composite(p, 20000, 18);
  CHECK(kolmogorov_distance(x, c) < 1.63 * std::sqrt(2.0 / 20000));

  p.weights = Eigen::VectorXd::Constant(3, 1 / std::sqrt(3.0));
  const Eigen::VectorXd three = sample_composite(p, 20000, 19);
  CHECK(std::abs(sample_variance(three) - 1.0) < 4 * variance_se(three));
  CHECK(k_statistics(three).k3 < k.k3);

  p.beta = 0.6;
  CHECK_THROWS_AS(RosenblattSampler{p}, std::domain_error);
}

TEST_CASE("Galerkin reference law") {
  const RosenblattLaw law(0.25, 400);
  const Eigen::VectorXd& l = law.eigenvalues();
  CHECK(2 * l.squaredNorm() + law.residual_variance() == Approx(1.0).epsilon(1e-12));
  CHECK(law.residual_variance() < 0.05);
  // Third cumulant of sum lambda (xi^2 - 1) is 8 sum lambda^3.
  CHECK(8 * l.array().cube().sum() == Approx(cumulant(3, 0.25).value).epsilon(0.02));

  CHECK(law.cdf(-50.0) < 1e-8);
  CHECK(law.cdf(50.0) > 1 - 1e-8);
  double prev = 0.0;
  for (double x = -2.0; x < 6.0; x += 0.5) {
    const double F = law.cdf(x);
    CHECK(F >= prev - 1e-9);
    prev = F;
  }
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(3, 1 / std::sqrt(3.0));
  const Eigen::Vector3d grid(-1.3, 0.2, 2.5);
  const Eigen::VectorXd G = law.cdf(grid, w);
  for (int j = 0; j < 3; ++j) CHECK(G(j) == Approx(law.cdf(grid(j), w)).epsilon(1e-14));
  RosenblattParams p;
  p.beta = 0.25;
  p.n_terms = 2048;
  const Eigen::VectorXd x = sample_rosenblatt(p, 20000, 5);
  for (double q : {-0.8, 0.0, 1.0}) {
    const double emp = (x.array() <= q).cast<double>().mean();
    CHECK(std::abs(emp - law.cdf(q)) < 0.015);
  }
}
