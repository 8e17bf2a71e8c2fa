#pragma once

#include "sxt/covariance_model.hpp"

#include <functional>
#include <string>
#include <vector>

namespace sxt {

/// k(T) = int_[0,T]^2 prod_i C_{l_i}(t-s) dt ds = 2T int_0^T (1 - tau/T) prod_i C_{l_i}(tau) dtau.
double k_integral(const CovarianceModel& model, const std::vector<int>& ells, double T);
/// Same reduction for an arbitrary even kernel.
double k_integral(const std::function<double(double)>& kernel, double T);

/// Midpoint-grid analogue: dt^2 sum_{j,k < n} prod_i C_{l_i}((j-k) dt), n = round(T/dt).
/// This is the exact variance functional seen by a simulation on that grid.
double k_riemann(const CovarianceModel& model, const std::vector<int>& ells, double T, double dt);

/// int_0^inf prod_i C_{l_i}(tau) dtau (finite only when the product is integrable).
double half_line_integral(const CovarianceModel& model, const std::vector<int>& ells);

/// One multiset of multipoles with its angular weight 4 pi * (multinomial) * prod sqrt((2l+1)/4pi) * G.
struct ChaosTerm {
  std::vector<int> ells;
  double weight = 0.0;
};

/// All multisets of size q over the model support whose angular weight is nonzero.
std::vector<ChaosTerm> chaos_terms(const CovarianceModel& model, int q);

/// int over ([0,T] x S^2)^2 of Gamma^q = sum_terms weight * k(term).
double gamma_power_integral(const CovarianceModel& model, int q, double T);

/// Var(M_T(u)[q]) = J_q(u)^2 / q! * int Gamma^q.
double var_chaos(const CovarianceModel& model, double u, int q, double T);
/// The same with time integrals replaced by the midpoint sum on step dt.
double var_chaos_discrete(const CovarianceModel& model, double u, int q, double T, double dt);

struct ChaosVarianceBreakdown {
  double u = 0.0;
  double T = 0.0;
  int q_max = 0;
  std::vector<double> per_q;  // per_q[q-1]
  double tail_bound = 0.0;    // upper bound for sum_{q > q_max}
  double total = 0.0;         // sum of per_q (tail excluded)
};

/// Per-chaos variances up to q_max and a rigorous bound on the remainder:
/// sum_{q>Q} J_q^2/q! int Gamma^q <= (Phi(1-Phi) - sum_{q<=Q} J_q^2/q!) * int Gamma^p, p the
/// smallest even integer > Q (|Gamma| <= 1).
ChaosVarianceBreakdown var_total(const CovarianceModel& model, double u, double T, int q_max);
ChaosVarianceBreakdown var_total_discrete(const CovarianceModel& model, double u, double T, int q_max, double dt);

/// Sum over q > Q of J_q(u)^2 / q!, from the variance of the indicator.
double hermite_mass_beyond(double u, int Q);

/// Large-T law of one chaos: Var_q ~ constant * T^exponent (* log T).
struct GrowthLaw {
  double exponent = 1.0;
  bool log_factor = false;
  double constant = 0.0;
};
GrowthLaw chaos_asymptotics(const CovarianceModel& model, double u, int q);

/// lim Var_q / T for chaoses whose products are all integrable (NaN otherwise).
double s_squared(const CovarianceModel& model, double u, int q);

struct AsymptoticPrediction {
  double exponent = 1.0;
  bool log_factor = false;
  double constant = 0.0;
  double tail_bound = 0.0;      // remainder of a truncated sum over q (rate T only)
  int q_used = 0;
  std::vector<double> per_q;    // constant contributed by each q at the leading rate
};

/// Leading growth of Var(M_T(u)) combined over chaoses 1..q_max. No regime checks.
AsymptoticPrediction leading_growth(const CovarianceModel& model, double u, int q_max = 9);

/// Leading growth for a classified regime; throws ModelError on Boundary.
AsymptoticPrediction asymptotic_prediction(const CovarianceModel& model, double u);

// Dominating bounds for normalized k-integrals.

enum class BoundFamily {
  Auto,
  SquareShortMemory,
  SquareDominant,
  SquareSubdominant,
  SquareLogDominant,
  SquareLogSubdominant,
  SquareIntegrable,
  ProductWithShortMemory,
  ProductDominant,
  ProductSubdominant,
  ProductLogDominant,
  ProductLogSubdominant,
  ProductIntegrable,
  ProductWithZero,
};
std::string to_string(BoundFamily f);

struct BoundReport {
  BoundFamily family = BoundFamily::Auto;
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  std::string normalization;  // "T", "T^e", "T log T" or "none"
};

/// sup over tau >= M of |g_fn(tau) - 1| for every multipole in ells, scanned on a log grid.
double modulation_sup(const CovarianceModel& model, const std::vector<int>& ells, double M);

/// max_{x>0} log(1+x) / x^{1-gamma} and its argmax, for gamma in (0,1).
std::pair<double, double> log_power_peak(double gamma);

/// Checks lhs <= rhs for the applicable family. Throws std::invalid_argument on violated
/// preconditions (T, eps/M, or a family that does not match the multipoles).
BoundReport kernel_bound_check(const CovarianceModel& model, const std::vector<int>& ells, double T,
                                 double eps, double M, BoundFamily family = BoundFamily::Auto);

}  // namespace sxt
