#pragma once

#include <Eigen/Core>

#include <functional>

namespace sxt {

/// Nodes and weights of a one-dimensional rule.
struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

/// n-point Gauss-Legendre rule on [-1,1]; exact for polynomials of degree 2n-1.
QuadratureRule gauss_legendre(int n);
QuadratureRule gauss_legendre(int n, double a, double b);

/// Gauss-Hermite rule for the standard normal weight e^{-x^2/2} (weights sum to sqrt(2 pi)).
QuadratureRule gauss_hermite(int n);

/// Tanh-sinh rule on [0,1]. `complements` holds 1 - node computed without
/// cancellation, which matters for integrands singular at the right end.
struct TanhSinhRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd complements;
  Eigen::VectorXd weights;
};
TanhSinhRule tanh_sinh(int level);

struct IntegrationResult {
  double value = 0.0;
  double abs_error = 0.0;
  int intervals = 0;
  bool converged = false;
};

/// Globally adaptive 7/15-point Gauss-Kronrod. Stops when the summed error
/// estimate is below max(abs_tol, rel_tol*|value|).
IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol = 1e-12, double rel_tol = 1e-8,
                                     int max_intervals = 4000);

/// Integral over [a, inf) through x = a + t/(1-t).
IntegrationResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                        double abs_tol = 1e-12, double rel_tol = 1e-8);

}  // namespace sxt
