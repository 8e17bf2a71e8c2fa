#include "sxt/quadrature.hpp"
#include "sxt/special_functions.hpp"
#include "sxt/variance_engine.hpp"

#include "test_support.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace sxt;
using namespace sxt::test;
using doctest::Approx;

namespace {

// int_0^T int_0^T f(|t-s|) by Gauss-Legendre on the two triangles (s = t v), no shared code
// with the engine's half-line reduction.
double double_integral(const std::function<double(double)>& f, double T, int n = 200) {
  const QuadratureRule r = gauss_legendre(n, 0.0, 1.0);
  double s = 0.0;
  for (Eigen::Index i = 0; i < r.nodes.size(); ++i)
    for (Eigen::Index j = 0; j < r.nodes.size(); ++j) {
      const double t = T * r.nodes(i), v = r.nodes(j);
      s += r.weights(i) * r.weights(j) * T * t * f(t * (1.0 - v));
    }
  return 2.0 * s;
}

Multipole with_c0(int ell, double c0, double beta, std::optional<double> alpha = std::nullopt) {
  Multipole m;
  m.ell = ell;
  m.c0 = c0;
  m.beta = beta;
  m.alpha = alpha;
  return m;
}

}  // namespace

TEST_CASE("k integrals") {
  CHECK(k_integral([](double) { return 0.7; }, 13.0) == Approx(0.7 * 169.0).epsilon(1e-13));

  // C_0(0) = 1 with the rest of the variance parked at l = 3.
  const CovarianceModel m = model({with_c0(0, 1.0, 0.5), with_c0(3, (kFourPi - 1.0) / 7.0, 0.8)});
  const double oracle = double_integral([](double x) { return std::pow(1.0 + x, -0.5); }, 10.0);
  CHECK(k_integral(m, {0}, 10.0) == Approx(oracle).epsilon(1e-9));

  const double b = 0.2;
  const CovarianceModel lm = model({share(0, 0.5, 1.0, 2.0), share(1, 0.5, b)});
  const double c = lm.multipole(1).c0;
  const double T = 1e7;
  CHECK(k_integral(lm, {1, 1}, T) / std::pow(T, 2 - 2 * b) ==
        Approx(c * c / ((1 - b) * (1 - 2 * b))).epsilon(2e-3));

  // Midpoint-grid analogue converges to the integral as dt shrinks.
  const double kc = k_integral(lm, {1, 1}, 20.0);
  CHECK(std::abs(k_riemann(lm, {1, 1}, 20.0, 0.05) - kc) < std::abs(k_riemann(lm, {1, 1}, 20.0, 0.5) - kc));
  CHECK(k_riemann(lm, {1, 1}, 20.0, 0.01) == Approx(kc).epsilon(1e-3));
}

TEST_CASE("chaos variances") {
  const CovarianceModel m = model({share(0, 0.5, 0.3), share(1, 0.3, 0.8), share(2, 0.2, 1.0, 2.0)});
  for (int q : {2, 4, 6}) CHECK(var_chaos(m, 0.0, q, 10.0) == 0.0);
  CHECK(var_chaos(m, 1.0, 3, 10.0) == 0.0);

  // l = 0 only, short memory, u = 0: the field is a00(t)/sqrt(4 pi) on the whole sphere.
  const CovarianceModel zero = model({share(0, 1.0, 1.0, 2.0)});
  const double T = 100.0;
  const double inner = T / (1 + T) - (std::log1p(T) + 1 / (1 + T) - 1) / T;
  const double phi0 = gaussian_phi_Phi(0.0).density;
  CHECK(var_chaos(zero, 0.0, 1, T) == Approx(kFourPi * kFourPi * phi0 * phi0 * 2 * T * inner).epsilon(1e-9));

  // Second chaos: (u^2 phi^2 / 2) sum_l (2l+1) k(l,l) by orthogonality of the harmonics.
  const double u = 0.7, phi = gaussian_phi_Phi(u).density;
  double direct = 0.0;
  for (int l : {0, 1, 2}) direct += (2 * l + 1) * k_integral(m, {l, l}, 15.0);
  CHECK(var_chaos(m, u, 2, 15.0) == Approx(0.5 * u * u * phi * phi * direct).epsilon(1e-10));

  const ChaosVarianceBreakdown far = var_total(m, -10.0, 10.0, 5);
  CHECK(far.total < 1e-30);
  CHECK(far.tail_bound < 1e-30);
  // The indicator's Hermite coefficients decay slowly, so the remainder shrinks like Q^{-1/2}.
  const double p3 = gaussian_phi_Phi(0.3).tail;
  CHECK(hermite_mass_beyond(0.3, 0) == Approx(p3 * (1 - p3)).epsilon(1e-14));
  CHECK(hermite_mass_beyond(0.3, 40) < hermite_mass_beyond(0.3, 10));
  CHECK(hermite_mass_beyond(0.3, 40) > 0.0);

  const ChaosVarianceBreakdown b = var_total(m, 0.5, 20.0, 6);
  double s = 0.0;
  for (double v : b.per_q) s += v;
  CHECK(b.total == Approx(s));
}

TEST_CASE("asymptotic constants") {
  // First-chaos regime at u = 0 with C_0(0) = 1, beta_0 = 1/2. The spatial integral of Z is
  // sqrt(4 pi) a00, so the constant is 4 pi * 2 phi(0)^2 C_0(0) / ((1-b)(2-b)) = 16/3.
  const CovarianceModel f = model({with_c0(0, 1.0, 0.5), with_c0(1, (kFourPi - 1.0) / 3.0, 0.8)});
  const AsymptoticPrediction p = asymptotic_prediction(f, 0.0);
  CHECK(p.exponent == Approx(1.5));
  CHECK(!p.log_factor);
  CHECK(p.constant == Approx(kFourPi * 0.42441318157838759).epsilon(1e-9));
  CHECK(p.constant == Approx(16.0 / 3.0).epsilon(1e-12));

  const CovarianceModel s = model({share(0, 0.4, 1.0, 2.0), share(1, 0.6, 0.2)});
  const double c = s.multipole(1).c0, phi1 = gaussian_phi_Phi(1.0).density;
  const AsymptoticPrediction q = asymptotic_prediction(s, 1.0);
  CHECK(q.exponent == Approx(1.6));
  CHECK(q.constant == Approx(0.5 * phi1 * phi1 / (0.6 * 0.8) * 3 * c * c).epsilon(1e-10));

  const CovarianceModel lg = model({share(0, 0.4, 1.0, 2.0), share(1, 0.6, 0.5)});
  const double c5 = lg.multipole(1).c0;
  const AsymptoticPrediction r = asymptotic_prediction(lg, 1.0);
  CHECK(r.log_factor);
  CHECK(r.exponent == Approx(1.0));
  CHECK(r.constant == Approx(phi1 * phi1 * 3 * c5 * c5).epsilon(1e-10));

  CHECK_THROWS_AS(asymptotic_prediction(model({share(0, 0.5, 0.8), share(1, 0.5, 0.4)}), 1.0), ModelError);

  // Short memory: the rate-T constant is the sum of the s_q^2.
  const CovarianceModel sm = model({share(0, 0.5, 1.0, 2.0), share(1, 0.5, 0.8)});
  const AsymptoticPrediction a = asymptotic_prediction(sm, 1.0);
  CHECK(a.exponent == 1.0);
  double sum = 0.0;
  for (double v : a.per_q) sum += v;
  CHECK(a.constant == Approx(sum).epsilon(1e-12));
  CHECK(s_squared(sm, 1.0, 1) == Approx(2 * kFourPi * phi1 * phi1 * sm.multipole(0).c0).epsilon(1e-10));
}

TEST_CASE("kernel integral bounds") {
  const CovarianceModel m = model({with_c0(0, kFourPi - 0.9, 0.5), with_c0(1, 0.3, 1.0, 2.0)});
  const BoundReport r = kernel_bound_check(m, {1, 1}, 100.0, 0.1, 5.0);
  CHECK(r.family == BoundFamily::SquareShortMemory);
  CHECK(r.holds);
  CHECK(r.rhs == Approx(2 * 0.09 * (5 + 2 * 1.1 * 1.1 / 1.0)).epsilon(1e-14));
  CHECK(r.lhs <= r.rhs);
  CHECK_THROWS_AS(kernel_bound_check(m, {1, 1}, 0.5, 0.1, 5.0), std::invalid_argument);
  CHECK_THROWS_AS(kernel_bound_check(m, {1, 1}, 100.0, 0.1, 5.0, BoundFamily::SquareDominant),
                  std::invalid_argument);

  const auto [peak, at] = log_power_peak(0.5);
  CHECK(peak > 0.0);
  CHECK(std::log1p(at) / std::pow(at, 0.5) == Approx(peak).epsilon(1e-12));
  for (double x : {0.1, 1.0, 3.0, 10.0, 100.0}) CHECK(std::log1p(x) / std::pow(x, 0.5) <= peak * (1 + 1e-12));

  Multipole mod = with_c0(1, 0.3, 0.4);
  mod.g_fn = [](double t) { return 1.0 + 0.05 * std::sin(t) / (1.0 + t); };
  const CovarianceModel modulated = model({with_c0(0, kFourPi - 0.9, 0.5), mod});
  CHECK(modulation_sup(modulated, {1}, 10.0) <= 0.05 / 11.0 + 1e-12);
  CHECK(modulation_sup(modulated, {1}, 10.0) > 0.0);
}
