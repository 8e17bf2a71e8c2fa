#pragma once

#include "sxt/covariance_model.hpp"
#include "sxt/field_simulator.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sxt {

struct ExperimentConfig {
  explicit ExperimentConfig(CovarianceModel m) : model(std::move(m)) {}

  CovarianceModel model;
  std::vector<double> levels{1.0};
  std::vector<double> T_ladder{64, 128, 256, 512, 1024};
  int replications = 400;
  std::uint64_t master_seed = 12345;
  double dt = 0.25;
  int n_colatitude = 12;
  int n_longitude = 24;
  int q_max = 7;
  std::optional<int> ell_star;
  int threads = 1;  // wall time only, never the numbers

  /// Throws std::invalid_argument on a bad ladder, level list or grid.
  void validate() const;
};

/// One replication at one (u, T). chaos(q-1) is the q-th projection; m_mono is NaN unless
/// ell_star was set.
struct ReplicateRow {
  double u = 0.0;
  double T = 0.0;
  int r = 0;
  double M = 0.0;
  Eigen::VectorXd chaos;
  double m_mono = 0.0;
};

/// Rows ordered by (u, T, r).
struct ReplicateTable {
  std::uint64_t master_seed = 0;
  std::vector<double> levels;
  std::vector<double> T_ladder;
  int replications = 0;
  int q_max = 0;
  bool has_mono = false;
  std::vector<ReplicateRow> rows;

  const ReplicateRow& at(int level_index, int T_index, int r) const;
  /// M over the replications at one (u, T).
  Eigen::VectorXd values(int level_index, int T_index) const;
  /// q-th chaos projection over the replications at one (u, T).
  Eigen::VectorXd chaos(int level_index, int T_index, int q) const;
  Eigen::VectorXd mono(int level_index, int T_index) const;
  int level_index(double u) const;
};

/// Every (u, T, r) from one field draw per (T, r); the levels share the draw. Replications fan
/// out over config.threads workers and land in fixed slots, so the table depends on the seed only.
ReplicateTable run_experiment(const ExperimentConfig& config);

/// Comma-separated rows: seed,u,T,r,M,chaos_1..chaos_Q[,m_mono]. Values printed with %.17g.
void write_table_csv(const ReplicateTable& table, std::ostream& os);

struct VarianceFit {
  double slope = 0.0;
  double slope_se = 0.0;  // delete-a-group jackknife over replications
  double intercept = 0.0;
  double r_squared = 0.0;
  bool log_corrected = false;  // fitted log(V / log T) against log T
  std::vector<double> T;
  std::vector<double> variance;
  std::vector<double> variance_se;
};

/// OLS of log V_hat(T) on log T over the ladder. Needs at least 4 ladder points.
VarianceFit fit_variance_exponent(const ReplicateTable& table, double u, bool log_corrected = false,
                                  int jackknife_groups = 20);
/// Same fit for raw per-T samples (one vector per ladder point).
VarianceFit fit_variance_exponent(const std::vector<double>& T, const std::vector<Eigen::VectorXd>& samples,
                                  bool log_corrected = false, int jackknife_groups = 20);

/// slope(u_b) - slope(u_a) on one table; the jackknife drops the same replication group at both
/// levels, so the shared field draws enter the error.
struct ExponentGap {
  double gap = 0.0;
  double se = 0.0;
  VarianceFit first, second;
};
ExponentGap exponent_gap(const ReplicateTable& table, double u_a, double u_b, int jackknife_groups = 20);

struct DistributionReference {
  enum class Kind { Normal, CompositeRosenblatt } kind = Kind::Normal;
  Eigen::VectorXd reference_samples;  // composite only
  int shuffles = 1000;
  std::uint64_t seed = 1;
};

struct DistributionTest {
  std::string statistic_name;
  double statistic = 0.0;
  double threshold = 0.0;
  bool pass = false;
};

/// Normal: Anderson-Darling A^2 at the 1% point. Composite: two-sample Kolmogorov distance
/// against the permutation 99% quantile. Samples must already be standardized.
DistributionTest test_distribution(const Eigen::VectorXd& samples, const DistributionReference& ref);

struct CorrelationPoint {
  double T = 0.0;
  double corr = 0.0;
  double se = 0.0;
};
struct CorrelationReport {
  int ell_star = 0;
  std::vector<CorrelationPoint> points;
  double rank_trend = 0.0;  // Spearman correlation of (T, corr)
  bool increasing = false;  // every step up the ladder raises the correlation
};

/// Corr(M_T(u), m_{T;l*}(u)) along the ladder, first level only. Needs the second-chaos
/// regime with a unique minimizing multipole.
CorrelationReport correlation_experiment(ExperimentConfig config);
/// Same from a finished table with the monochromatic column.
CorrelationReport correlation_from_table(const ReplicateTable& table, int ell_star, int level_index = 0);

/// k_4 / k_2^2 of the given projection samples, with a jackknife standard error.
Estimate fourth_cumulant_diagnostic(const Eigen::VectorXd& chaos_samples, int q, int jackknife_groups = 20);

}  // namespace sxt
