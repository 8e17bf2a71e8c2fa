#include "sxt/excursion.hpp"
#include "sxt/stats.hpp"
#include "sxt/variance_engine.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace sxt;
using namespace sxt::test;
using doctest::Approx;

namespace {

const CovarianceModel& mixed() {
  static const CovarianceModel m = model({share(0, 0.3, 0.3), share(1, 0.3, 0.8), share(2, 0.4, 1.0, 2.0)});
  return m;
}

}  // namespace

TEST_CASE("areas") {
  const SphereQuadrature sphere(10, 20);
  const FieldSimulator sim(mixed(), sphere, TimeGrid(4.0, 16));
  const FieldSample s = sim.sample(3, 0);
  CHECK(excursion_area(s, sphere, 0, -10.0) == Approx(kFourPi).epsilon(1e-12));
  CHECK(excursion_area(s, sphere, 0, 10.0) == 0.0);
  for (int k = 0; k < 16; ++k) {
    double prev = kFourPi + 1.0;
    for (double u : {-2.0, -1.0, 0.0, 0.5, 1.0, 2.0}) {
      const double a = excursion_area(s, sphere, k, u);
      CHECK(a <= prev);
      prev = a;
    }
  }
  CHECK_THROWS(excursion_area(s, sphere, 16, 0.0));
  CHECK(expected_area(0.0) == Approx(2 * std::numbers::pi));
  CHECK(m_functional(s, sphere, -10.0) == Approx(0.0).scale(1.0));
  CHECK(m_tilde(3.0, 4.0) == 1.5);
  CHECK_THROWS(m_tilde(1.0, 0.0));
}

TEST_CASE("mean of the functional is zero") {
  const SphereQuadrature sphere(6, 12);
  const FieldSimulator sim(mixed(), sphere, TimeGrid(8.0, 32));
  Eigen::VectorXd v(400);
  for (int r = 0; r < 400; ++r) v(r) = m_functional(sim.sample(8, r), sphere, 0.7);
  CHECK(std::abs(mean(v)) < 4 * mean_se(v));
}

TEST_CASE("chaos projections") {
  const SphereQuadrature sphere(8, 16);
  const FieldSimulator sim(mixed(), sphere, TimeGrid(8.0, 32));
  const FieldSample s = sim.sample(4, 1);
  for (double u : {0.0, 0.8, -1.3}) CHECK(chaos_projection(s, sphere, u, 1) == Approx(first_chaos_from_coefficients(s, u)).epsilon(1e-8));
  CHECK(chaos_projection(s, sphere, 0.0, 2) == 0.0);
  CHECK(chaos_projection(s, sphere, 1.0, 3) == 0.0);

  const Eigen::VectorXd h = hermite_integrals(s, sphere, 5);
  const Eigen::VectorXd p = chaos_projections(h, 0.6);
  for (int q = 1; q <= 5; ++q) CHECK(p(q - 1) == Approx(chaos_projection(s, sphere, 0.6, q)));
  CHECK_THROWS(hermite_integrals(s, sphere, 0));

  CHECK(m_monochromatic(sim, s, 1, 0.0) == 0.0);
  CHECK(m_monochromatic(sim, s, 1, 1.0) != 0.0);
  CHECK_THROWS(m_monochromatic(sim, s, 4, 1.0));
}

TEST_CASE("chaos expansion reconstructs the functional on average") {
  // Sum of the first 12 chaoses against M_T(u): the remainder is small in mean square.
  const SphereQuadrature sphere(6, 12);
  const FieldSimulator sim(mixed(), sphere, TimeGrid(4.0, 16));
  const double u = 0.5;
  double resid = 0.0, total = 0.0;
  for (int r = 0; r < 100; ++r) {
    const FieldSample s = sim.sample(2, r);
    const double M = m_functional(s, sphere, u);
    const double C = chaos_projections(hermite_integrals(s, sphere, 12), u).sum();
    resid += (M - C) * (M - C);
    total += M * M;
  }
  const ChaosVarianceBreakdown b = var_total_discrete(mixed(), u, 4.0, 12, 0.25);
  CHECK(resid / total < 0.1);
  CHECK(resid / 100 < 3 * b.tail_bound + 1e-3 * b.total);
}
