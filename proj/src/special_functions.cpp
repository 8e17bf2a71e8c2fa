#include "sxt/special_functions.hpp"

#include "sxt/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace sxt {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

// Normalized associated Legendre values pbar(l, m), m >= 0, including 1/sqrt(4 pi),
// so that Y_l0 = pbar(l,0). Stored at harmonic_index(l, m).
Eigen::VectorXd normalized_assoc_legendre(int L, double x, double s) {
  Eigen::VectorXd p = Eigen::VectorXd::Zero((L + 1) * (L + 1));
  double pmm = 1.0 / std::sqrt(kFourPi);
  for (int m = 0; m <= L; ++m) {
    if (m > 0) pmm *= std::sqrt((2.0 * m + 1.0) / (2.0 * m)) * s;
    p(harmonic_index(m, m)) = pmm;
    if (m + 1 > L) break;
    double prev2 = pmm;
    double prev1 = std::sqrt(2.0 * m + 3.0) * x * pmm;
    p(harmonic_index(m + 1, m)) = prev1;
    for (int l = m + 2; l <= L; ++l) {
      const double a = std::sqrt((4.0 * l * l - 1.0) / (static_cast<double>(l) * l - static_cast<double>(m) * m));
      const double b = std::sqrt((static_cast<double>(l - 1) * (l - 1) - static_cast<double>(m) * m) /
                                 (4.0 * (l - 1) * (l - 1) - 1.0));
      const double cur = a * (x * prev1 - b * prev2);
      p(harmonic_index(l, m)) = cur;
      prev2 = prev1;
      prev1 = cur;
    }
  }
  return p;
}

}  // namespace

double real_spherical_harmonic(int ell, int m, double theta, double phi) {
  if (ell < 0 || std::abs(m) > ell) throw std::domain_error("real_spherical_harmonic: need |m| <= ell");
  const Eigen::VectorXd p = normalized_assoc_legendre(ell, std::cos(theta), std::sin(theta));
  const double v = p(harmonic_index(ell, std::abs(m)));
  if (m == 0) return v;
  if (m > 0) return std::numbers::sqrt2 * v * std::cos(m * phi);
  return std::numbers::sqrt2 * v * std::sin(-m * phi);
}

Eigen::VectorXd real_spherical_harmonics(int L, double theta, double phi) {
  const Eigen::VectorXd p = normalized_assoc_legendre(L, std::cos(theta), std::sin(theta));
  Eigen::VectorXd y((L + 1) * (L + 1));
  for (int l = 0; l <= L; ++l) {
    y(harmonic_index(l, 0)) = p(harmonic_index(l, 0));
    for (int m = 1; m <= l; ++m) {
      const double v = std::numbers::sqrt2 * p(harmonic_index(l, m));
      y(harmonic_index(l, m)) = v * std::cos(m * phi);
      y(harmonic_index(l, -m)) = v * std::sin(m * phi);
    }
  }
  return y;
}

GaussianLevel gaussian_phi_Phi(double u) {
  return {std::exp(-0.5 * u * u) * std::numbers::inv_sqrtpi / std::numbers::sqrt2,
          0.5 * std::erfc(u / std::numbers::sqrt2)};
}

double j_coefficient(int q, double u) {
  if (q < 1) throw std::domain_error("j_coefficient: q must be >= 1");
  return hermite(q - 1, u) * gaussian_phi_Phi(u).density;
}

double wigner3j_000(int l1, int l2, int l3) {
  if (l1 < 0 || l2 < 0 || l3 < 0) return 0.0;
  const int L = l1 + l2 + l3;
  if (L % 2 != 0) return 0.0;
  if (l3 > l1 + l2 || l3 < std::abs(l1 - l2)) return 0.0;
  const int g = L / 2;
  auto lf = [](int n) { return std::lgamma(n + 1.0); };
  const double log_mag = 0.5 * (lf(L - 2 * l1) + lf(L - 2 * l2) + lf(L - 2 * l3) - lf(L + 1)) + lf(g) -
                         lf(g - l1) - lf(g - l2) - lf(g - l3);
  const double sign = (g % 2 == 0) ? 1.0 : -1.0;
  return sign * std::exp(log_mag);
}

double gaunt3(int l1, int l2, int l3) {
  const double w = wigner3j_000(l1, l2, l3);
  if (w == 0.0) return 0.0;
  return std::sqrt((2.0 * l1 + 1.0) * (2.0 * l2 + 1.0) * (2.0 * l3 + 1.0) / kFourPi) * w * w;
}

SphereQuadrature::SphereQuadrature(int n_colatitude, int n_longitude) : n_longitude_(n_longitude) {
  if (n_colatitude < 1 || n_longitude < 1) throw std::invalid_argument("SphereQuadrature: empty grid");
  const QuadratureRule gl = gauss_legendre(n_colatitude);
  // Colatitudes increase from the north pole, so take cos nodes in decreasing order.
  cos_nodes_ = gl.nodes.reverse();
  lat_weights_ = gl.weights.reverse();
  theta_ = cos_nodes_.array().acos().matrix();
  exactness_ = std::min(2 * n_colatitude - 1, n_longitude - 1);
  weights_.resize(size());
  const double wl = longitude_weight();
  for (int i = 0; i < n_colatitude; ++i)
    for (int j = 0; j < n_longitude_; ++j) weights_(i * n_longitude_ + j) = lat_weights_(i) * wl;
}

SphereQuadrature SphereQuadrature::for_degree(int degree) {
  if (degree < 0) throw std::invalid_argument("SphereQuadrature::for_degree: negative degree");
  return SphereQuadrature((degree + 2) / 2, degree + 1);
}

double SphereQuadrature::longitude_weight() const { return 2.0 * std::numbers::pi / n_longitude_; }

double SphereQuadrature::longitude(int j) const { return 2.0 * std::numbers::pi * j / n_longitude_; }

Eigen::Vector3d SphereQuadrature::point(int p) const {
  const double t = theta(p), f = phi(p);
  return {std::sin(t) * std::cos(f), std::sin(t) * std::sin(f), std::cos(t)};
}

Eigen::MatrixXd SphereQuadrature::harmonic_matrix(int L) const {
  Eigen::MatrixXd y(size(), (L + 1) * (L + 1));
  for (int p = 0; p < size(); ++p) y.row(p) = real_spherical_harmonics(L, theta(p), phi(p)).transpose();
  return y;
}

namespace {

double zonal_product_integral(const std::vector<int>& ells, const Eigen::VectorXd& x, const Eigen::VectorXd& w) {
  const int L = ells.empty() ? 0 : *std::max_element(ells.begin(), ells.end());
  double sum = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const Eigen::VectorXd p = legendre_all(L, x(k));
    double prod = 1.0;
    for (int l : ells) prod *= std::sqrt((2.0 * l + 1.0) / kFourPi) * p(l);
    sum += w(k) * prod;
  }
  return 2.0 * std::numbers::pi * sum;
}

void check_ells(const std::vector<int>& ells) {
  for (int l : ells)
    if (l < 0) throw std::domain_error("gaunt: negative multipole");
}

}  // namespace

double gaunt_general(const std::vector<int>& ells, const SphereQuadrature& quad) {
  check_ells(ells);
  const int total = std::accumulate(ells.begin(), ells.end(), 0);
  if (quad.exactness_degree() < total)
    throw std::invalid_argument("gaunt_general: quadrature exactness below the sum of multipoles");
  if (total % 2 != 0) return 0.0;
  return zonal_product_integral(ells, quad.cos_colatitude_nodes(), quad.colatitude_weights());
}

double gaunt_general(const std::vector<int>& ells) {
  check_ells(ells);
  const int total = std::accumulate(ells.begin(), ells.end(), 0);
  if (total % 2 != 0) return 0.0;
  const QuadratureRule gl = gauss_legendre(total / 2 + 2);
  return zonal_product_integral(ells, gl.nodes, gl.weights);
}

double gaunt_bound(const std::vector<int>& ells) {
  const int q = static_cast<int>(ells.size());
  if (q < 2) throw std::invalid_argument("gaunt_bound: need at least two multipoles");
  double num = 1.0;
  for (int i = 0; i + 1 < q; ++i) num *= 2.0 * ells[i] + 1.0;
  return std::sqrt(num / (std::pow(kFourPi, q - 2) * (2.0 * ells[q - 1] + 1.0)));
}

double hermite_sup_ratio(int q) {
  if (q < 1) throw std::domain_error("hermite_sup_ratio: q must be >= 1");
  const double xmax = 2.0 * std::sqrt(q + 1.0) + 8.0;
  const int n = static_cast<int>(xmax / 1e-3);
  double best = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * 1e-3;  // |He_q| is even or odd, so x >= 0 suffices
    best = std::max(best, std::abs(std::exp(-0.25 * x * x) * hermite(q, x)));
  }
  return best / (std::exp(0.5 * std::lgamma(q + 1.0)) * std::pow(q, -1.0 / 12.0));
}

}  // namespace sxt
