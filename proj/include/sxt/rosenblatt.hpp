#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <memory>
#include <optional>
#include <random>

namespace sxt {

struct SigmaA {
  double sigma;  // sqrt((1-2b)(1-b)/2)
  double a;      // sigma / (2 Gamma(b) sin((1-b) pi / 2))
};
SigmaA sigma_and_a(double beta);

/// a_j = int_[0,1]^j prod_i |x_i - x_{i+1}|^{-beta}, indices cyclic.
struct CircularIntegral {
  double value = 0.0;
  double se = 0.0;              // Monte Carlo standard error, 0 for quadrature
  bool finite_variance = true;  // false when the Monte Carlo integrand has infinite variance
};
/// j = 2 closed form, j = 3, 4 by quadrature on the ordered simplex, j >= 5 by Monte Carlo.
CircularIntegral a_j_coefficient(int j, double beta, std::uint64_t seed = 1, long mc_samples = 2000000);
/// Plain uniform Monte Carlo for any j (used to cross-check the quadrature).
CircularIntegral a_j_monte_carlo(int j, double beta, long samples, std::uint64_t seed);

/// kappa_j = 2^{j-1} (j-1)! sigma^j a_j, the j-th cumulant of the unit-variance law.
CircularIntegral cumulant(int j, double beta, std::uint64_t seed = 1);

struct RosenblattParams {
  double beta = 0.25;
  int n_terms = 1 << 16;
  int burn_in = 0;
  Eigen::VectorXd weights;  // empty for the standard law
};

/// Finite-n approximation S_n = sum_{k<n} H_2(xi_k) / sqrt(2 sum_{j,k} r(j-k)^2) with
/// r(k) = (1+k)^{-beta}; the exact finite-n variance gives unit variance.
class RosenblattSampler {
 public:
  explicit RosenblattSampler(const RosenblattParams& params);
  ~RosenblattSampler();
  RosenblattSampler(RosenblattSampler&&) noexcept;

  const RosenblattParams& params() const { return params_; }
  double normalizer() const { return norm_; }

  /// Samples in blocks with independent derived streams; deterministic for any thread count.
  Eigen::VectorXd standard(long n_samples, std::uint64_t seed, int threads = 1) const;
  /// sum_k c_k X_k with independent standard draws.
  Eigen::VectorXd composite(long n_samples, std::uint64_t seed, int threads = 1) const;

 private:
  RosenblattParams params_;
  double norm_ = 1.0;
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Eigen::VectorXd sample_rosenblatt(const RosenblattParams& params, long n_samples, std::uint64_t seed, int threads = 1);
Eigen::VectorXd sample_composite(const RosenblattParams& params, long n_samples, std::uint64_t seed, int threads = 1);

/// Reference law through a Galerkin approximation of the kernel sigma |x-y|^{-beta} on [0,1]:
/// X = sum_k lambda_k (xi_k^2 - 1), with the missing variance carried by a Gaussian term.
class RosenblattLaw {
 public:
  RosenblattLaw(double beta, int cells = 1000);
  const Eigen::VectorXd& eigenvalues() const { return lambda_; }
  double residual_variance() const { return residual_; }
  /// CDF of sum_k c_k X_k for the given weights (a single unit weight for X itself).
  double cdf(double x, const Eigen::VectorXd& weights) const;
  Eigen::VectorXd cdf(const Eigen::VectorXd& xs, const Eigen::VectorXd& weights) const;
  double cdf(double x) const;

 private:
  double beta_;
  Eigen::VectorXd lambda_;
  double residual_;
};

}  // namespace sxt
