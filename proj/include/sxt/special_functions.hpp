#pragma once

#include <Eigen/Core>

#include <cmath>
#include <stdexcept>
#include <vector>

namespace sxt {

/// P_ell(x) by the three-term recurrence.
template <typename Scalar>
Scalar legendre_p(int ell, Scalar x) {
  using std::abs;
  if (ell < 0) throw std::domain_error("legendre_p: negative degree");
  if (abs(x) > Scalar(1)) throw std::domain_error("legendre_p: |x| > 1");
  Scalar p0(1), p1 = x;
  if (ell == 0) return p0;
  for (int k = 2; k <= ell; ++k) {
    const Scalar p2 = (Scalar(2 * k - 1) * x * p1 - Scalar(k - 1) * p0) / Scalar(k);
    p0 = p1;
    p1 = p2;
  }
  return p1;
}

/// P_0(x) .. P_L(x).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> legendre_all(int L, Scalar x) {
  using std::abs;
  if (abs(x) > Scalar(1)) throw std::domain_error("legendre_all: |x| > 1");
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> p(L + 1);
  p(0) = Scalar(1);
  if (L >= 1) p(1) = x;
  for (int k = 2; k <= L; ++k) p(k) = (Scalar(2 * k - 1) * x * p(k - 1) - Scalar(k - 1) * p(k - 2)) / Scalar(k);
  return p;
}

/// Probabilists' Hermite polynomial He_q(x).
template <typename Scalar>
Scalar hermite(int q, Scalar x) {
  if (q < 0) throw std::domain_error("hermite: negative order");
  Scalar h0(1), h1 = x;
  if (q == 0) return h0;
  for (int k = 1; k < q; ++k) {
    const Scalar h2 = x * h1 - Scalar(k) * h0;
    h0 = h1;
    h1 = h2;
  }
  return h1;
}

/// He_0(x) .. He_Q(x).
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, 1> hermite_all(int Q, Scalar x) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> h(Q + 1);
  h(0) = Scalar(1);
  if (Q >= 1) h(1) = x;
  for (int k = 1; k < Q; ++k) h(k + 1) = x * h(k) - Scalar(k) * h(k - 1);
  return h;
}

/// Flat index of (ell, m) in degree-major order.
inline int harmonic_index(int ell, int m) { return ell * ell + ell + m; }

/// Real orthonormal spherical harmonic without the Condon-Shortley phase:
/// Y_l0 = N P_l(cos t), Y_lm = sqrt2 N P_l^m cos(m p) for m > 0, sqrt2 N P_l^|m| sin(|m| p) for m < 0.
double real_spherical_harmonic(int ell, int m, double theta, double phi);

/// All Y_lm with l <= L at one point, indexed by harmonic_index.
Eigen::VectorXd real_spherical_harmonics(int L, double theta, double phi);

struct GaussianLevel {
  double density;  // phi(u)
  double tail;     // upper tail P(Z >= u)
};
GaussianLevel gaussian_phi_Phi(double u);

/// J_q(u) = He_{q-1}(u) phi(u).
double j_coefficient(int q, double u);

/// Wigner 3j symbol with all magnetic numbers zero.
double wigner3j_000(int l1, int l2, int l3);

/// Integral over the sphere of Y_{l1,0} Y_{l2,0} Y_{l3,0}.
double gaunt3(int l1, int l2, int l3);

/// Gauss-Legendre in cos(colatitude) times uniform longitudes.
class SphereQuadrature {
 public:
  SphereQuadrature(int n_colatitude, int n_longitude);
  /// Smallest grid of this family integrating spherical polynomials of degree <= degree exactly.
  static SphereQuadrature for_degree(int degree);

  int n_colatitude() const { return static_cast<int>(cos_nodes_.size()); }
  int n_longitude() const { return n_longitude_; }
  int size() const { return n_colatitude() * n_longitude_; }
  /// Spherical polynomials up to this total degree integrate exactly.
  int exactness_degree() const { return exactness_; }

  const Eigen::VectorXd& colatitude_nodes() const { return theta_; }
  const Eigen::VectorXd& cos_colatitude_nodes() const { return cos_nodes_; }
  const Eigen::VectorXd& colatitude_weights() const { return lat_weights_; }
  double longitude_weight() const;
  double longitude(int j) const;

  /// Point p = i * n_longitude + j sits at colatitude node i, longitude j.
  double theta(int p) const { return theta_(p / n_longitude_); }
  double phi(int p) const { return longitude(p % n_longitude_); }
  const Eigen::VectorXd& weights() const { return weights_; }
  Eigen::Vector3d point(int p) const;

  /// Matrix of Y_lm (columns, harmonic_index order) at every grid point (rows).
  Eigen::MatrixXd harmonic_matrix(int L) const;

 private:
  Eigen::VectorXd theta_, cos_nodes_, lat_weights_, weights_;
  int n_longitude_;
  int exactness_;
};

/// Integral over the sphere of prod_i Y_{l_i,0}, by the zonal Gauss-Legendre rule of `quad`.
double gaunt_general(const std::vector<int>& ells, const SphereQuadrature& quad);
/// Same integral with a rule of exactness sum(l_i) + 2.
double gaunt_general(const std::vector<int>& ells);

/// Upper bound sqrt((2l_1+1)...(2l_{q-1}+1) / ((4 pi)^{q-2} (2l_q+1))) for the zonal integral.
double gaunt_bound(const std::vector<int>& ells);

/// max_x |e^{-x^2/4} He_q(x)| / (sqrt(q!) q^{-1/12}) over a dense grid.
double hermite_sup_ratio(int q);

}  // namespace sxt
