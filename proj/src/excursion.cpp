#include "sxt/excursion.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace sxt {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

void check_grid(const FieldSample& s, const SphereQuadrature& sphere) {
  if (s.values.rows() != sphere.size()) throw std::invalid_argument("field sample does not match the sphere grid");
}

}  // namespace

double excursion_area(const FieldSample& s, const SphereQuadrature& sphere, int t_index, double u) {
  check_grid(s, sphere);
  if (t_index < 0 || t_index >= s.values.cols()) throw std::out_of_range("excursion_area: time index");
  const auto& w = sphere.weights();
  double a = 0.0;
  for (Eigen::Index p = 0; p < s.values.rows(); ++p)
    if (s.values(p, t_index) >= u) a += w(p);
  return a;
}

double expected_area(double u) { return kFourPi * gaussian_phi_Phi(u).tail; }

double m_functional(const FieldSample& s, const SphereQuadrature& sphere, double u) {
  check_grid(s, sphere);
  const double mean = expected_area(u);
  double acc = 0.0;
  for (int k = 0; k < s.values.cols(); ++k) acc += excursion_area(s, sphere, k, u) - mean;
  return acc * s.grid.dt();
}

double m_tilde(double value, double variance) {
  if (!(variance > 0.0)) throw std::invalid_argument("m_tilde: variance must be positive");
  return value / std::sqrt(variance);
}

Eigen::VectorXd hermite_integrals(const FieldSample& s, const SphereQuadrature& sphere, int Q) {
  check_grid(s, sphere);
  if (Q < 1) throw std::invalid_argument("hermite_integrals: Q must be >= 1");
  const auto& w = sphere.weights();
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(Q);
  const Eigen::Index P = s.values.rows();
  for (Eigen::Index k = 0; k < s.values.cols(); ++k) {
    for (Eigen::Index p = 0; p < P; ++p) {
      const double x = s.values(p, k);
      const double wp = w(p);
      double h0 = 1.0, h1 = x;
      acc(0) += wp * h1;
      for (int q = 1; q < Q; ++q) {
        const double h2 = x * h1 - q * h0;
        acc(q) += wp * h2;
        h0 = h1;
        h1 = h2;
      }
    }
  }
  return acc * s.grid.dt();
}

Eigen::VectorXd chaos_projections(const Eigen::VectorXd& hermite_sums, double u) {
  Eigen::VectorXd out(hermite_sums.size());
  double fact = 1.0;
  for (Eigen::Index i = 0; i < hermite_sums.size(); ++i) {
    const int q = static_cast<int>(i) + 1;
    fact *= q;
    out(i) = j_coefficient(q, u) / fact * hermite_sums(i);
  }
  return out;
}

double chaos_projection(const FieldSample& s, const SphereQuadrature& sphere, double u, int q) {
  if (q < 1) throw std::invalid_argument("chaos_projection: q must be >= 1");
  return chaos_projections(hermite_integrals(s, sphere, q), u)(q - 1);
}

double first_chaos_from_coefficients(const FieldSample& s, double u) {
  const double integral = s.paths.a.col(0).sum() * s.grid.dt();
  return gaussian_phi_Phi(u).density * std::sqrt(kFourPi) * integral;
}

double m_monochromatic(const FieldSimulator& sim, const FieldSample& s, int ell_star, double u) {
  const Multipole& m = sim.model().multipole(ell_star);
  const double var = (2.0 * ell_star + 1.0) * m.c0 / kFourPi;
  if (!(var > 0.0)) throw std::invalid_argument("m_monochromatic: multipole has zero variance");
  const double sigma = std::sqrt(var);
  const Eigen::MatrixXd z = sim.monochromatic(s, ell_star);
  const auto& w = sim.sphere().weights();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < z.cols(); ++k)
    for (Eigen::Index p = 0; p < z.rows(); ++p) {
      const double x = z(p, k) / sigma;
      acc += w(p) * (x * x - 1.0);
    }
  acc *= s.grid.dt();
  return u / (2.0 * sigma) * gaussian_phi_Phi(u / sigma).density * acc;
}

}  // namespace sxt
