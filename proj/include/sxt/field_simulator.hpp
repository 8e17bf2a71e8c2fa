#pragma once

#include "sxt/covariance_model.hpp"
#include "sxt/special_functions.hpp"

#include <Eigen/Core>

#include <complex>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <memory>
#include <random>
#include <string>
#include <vector>

namespace sxt {

/// Time nodes sit at cell midpoints t_k = (k + 1/2) dt, k = 0..n_steps-1.
struct TimeGrid {
  double T = 1.0;
  int n_steps = 1;

  TimeGrid() = default;
  TimeGrid(double horizon, int steps);
  /// n_steps = round(T / dt); throws when T is not a multiple of dt.
  static TimeGrid from_step(double horizon, double dt);
  double dt() const { return T / n_steps; }
  double node(int k) const { return (k + 0.5) * dt(); }
};

/// Seed for an independent stream keyed by (master seed, replication, l, m, purpose).
std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t ell, std::uint64_t m,
                          std::uint64_t purpose);
std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t replication, std::uint64_t ell, std::uint64_t m,
                            std::uint64_t purpose);

/// Exact sampler of a stationary Gaussian vector x_0..x_{n-1} with Cov(x_j, x_k) = r(|j-k|).
/// Circulant embedding on a power-of-two ring of size >= 2(n-1); tiny negative eigenvalues are
/// clipped, larger ones switch to a dense Cholesky factor.
class StationarySampler {
 public:
  enum class Method { Zero, Circulant, Cholesky };

  StationarySampler(const std::function<double(int)>& r, int n);
  ~StationarySampler();
  StationarySampler(StationarySampler&&) noexcept;
  StationarySampler& operator=(StationarySampler&&) noexcept;

  int size() const { return n_; }
  Method method() const { return method_; }
  int embedding_size() const { return m_; }
  /// Negative eigenvalue mass set to zero (relative to the largest eigenvalue).
  double clipped_fraction() const { return clipped_; }

  /// Two independent paths per call (one complex FFT).
  void sample_pair(std::mt19937_64& rng, double* first, double* second) const;
  Eigen::VectorXd sample(std::mt19937_64& rng) const;

 private:
  int n_ = 0, m_ = 0;
  Method method_ = Method::Zero;
  double clipped_ = 0.0;
  Eigen::VectorXd scale_;   // sqrt(lambda_k / m)
  Eigen::MatrixXd chol_;    // lower factor for the fallback
  struct Plan;
  std::unique_ptr<Plan> plan_;
};

/// One coefficient path a(t_k) with E a(t)a(s) = c(t - s) on the grid.
Eigen::VectorXd sample_coefficient_path(const std::function<double(double)>& c, const TimeGrid& grid,
                                        std::mt19937_64& rng);

/// a_lm(t_k): rows are time steps, columns harmonic_index(l, m) up to the model's largest l.
struct CoefficientPaths {
  TimeGrid grid;
  int L = 0;
  std::uint64_t seed = 0;
  std::uint64_t replication = 0;
  Eigen::MatrixXd a;
};

/// Z(x_p, t_k): column k holds the time slice, row p the sphere point.
struct FieldSample {
  TimeGrid grid;
  CoefficientPaths paths;
  Eigen::MatrixXd values;
};

/// Synthesis Z(x,t) = sum a_lm(t) Y_lm(x) on the sphere grid.
FieldSample synthesize_field(const CoefficientPaths& paths, const SphereQuadrature& sphere, const TimeGrid& grid);

/// Prepared samplers for one model on one grid; sampling is const and thread-safe.
class FieldSimulator {
 public:
  FieldSimulator(const CovarianceModel& model, SphereQuadrature sphere, TimeGrid grid);

  const CovarianceModel& model() const { return model_; }
  const SphereQuadrature& sphere() const { return sphere_; }
  const TimeGrid& grid() const { return grid_; }
  const Eigen::MatrixXd& harmonics() const { return harmonics_; }
  const StationarySampler& sampler(int ell) const;

  CoefficientPaths sample_paths(std::uint64_t master_seed, std::uint64_t replication) const;
  FieldSample synthesize(CoefficientPaths paths) const;
  FieldSample sample(std::uint64_t master_seed, std::uint64_t replication) const;

  /// Z_l(x, t) = sum_m a_lm(t) Y_lm(x) for one multipole.
  Eigen::MatrixXd monochromatic(const FieldSample& s, int ell) const;

 private:
  CovarianceModel model_;
  SphereQuadrature sphere_;
  TimeGrid grid_;
  Eigen::MatrixXd harmonics_;
  std::vector<int> ells_;
  std::vector<StationarySampler> samplers_;
};

struct Estimate {
  double value = 0.0;
  double se = 0.0;
};

/// Monte Carlo E[Z(x,t) Z(y,s)] over all grid pairs with <x,y> = theta and s - t = tau.
/// The standard error comes from the spread of per-sample means.
Estimate empirical_space_time_cov(const std::vector<FieldSample>& samples, const SphereQuadrature& sphere,
                                  double theta, double tau);

/// Delimited text: one row per time slice, one column per grid point.
void write_field_csv(const FieldSample& s, std::ostream& os);

}  // namespace sxt
