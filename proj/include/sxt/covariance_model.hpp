#pragma once

#include <Eigen/Core>

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sxt {

/// Raised for invalid models and configurations.
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Memory kernel: (1+|tau|)^{-beta} for beta < 1, (1+|tau|)^{-alpha} for beta = 1.
double g_beta(double beta, std::optional<double> alpha, double tau);

/// One multipole: C_l(tau) = c0 * g_fn(tau) * g_beta(tau). An empty g_fn means g_fn == 1.
struct Multipole {
  int ell = 0;
  double c0 = 0.0;
  double beta = 1.0;
  std::optional<double> alpha;
  std::function<double(double)> g_fn;
};

/// Validated, immutable finite multipole list sorted by ell.
class CovarianceModel {
 public:
  /// Throws ModelError on any violated invariant. With autonormalize the c0 are rescaled so
  /// that sum (2l+1)/(4 pi) c0 = 1; otherwise a violation is an error.
  static CovarianceModel create(std::vector<Multipole> entries, bool autonormalize = false);

  const std::vector<Multipole>& multipoles() const { return entries_; }
  bool has(int ell) const;
  const Multipole& multipole(int ell) const;
  int max_ell() const { return entries_.back().ell; }
  /// True when every g_fn is the default constant 1.
  bool unmodulated() const;

  double c_ell(int ell, double tau) const;
  /// Normalized memory factor C_l(tau)/C_l(0).
  double shape(const Multipole& m, double tau) const;

  /// Stable textual form used for hashing (g_fn recorded only as present/absent).
  std::string canonical_text() const;

 private:
  std::vector<Multipole> entries_;
};

double c_ell(const CovarianceModel& model, int ell, double tau);

/// Gamma(theta, tau) = sum_{l <= L} (2l+1)/(4 pi) C_l(tau) P_l(theta).
double gamma_cov(const CovarianceModel& model, double theta, double tau, int L);
double gamma_cov(const CovarianceModel& model, double theta, double tau);

enum class Chaos { FirstChaos, SecondChaos, ThirdChaos, AllChaoses, Boundary };
enum class LimitLaw { Gaussian, CompositeRosenblatt2, NonGaussianOrder3, DegenerateBoundary };
std::string to_string(Chaos c);
std::string to_string(LimitLaw l);

struct RegimeReport {
  double beta_star = 0.0;  // +inf when no l >= 1 carries variance
  std::vector<int> I_star;
  std::optional<double> beta_starstar;
  Chaos dominating = Chaos::Boundary;
  double exponent = 1.0;
  bool log_factor = false;
  LimitLaw limit_law = LimitLaw::DegenerateBoundary;
  double limit_constant = 0.0;  // NaN for Boundary
  std::string diagnostic;
};

/// Tie tolerance for comparing memory exponents.
inline constexpr double kBetaTolerance = 1e-12;

/// beta_star and beta_starstar range over l >= 1 with C_l(0) > 0; I_star may contain l = 0.
struct StarExponents {
  double beta_star = 0.0;
  std::vector<int> I_star;
  std::optional<double> beta_starstar;
};
StarExponents star_exponents(const CovarianceModel& model);

RegimeReport classify_regime(const CovarianceModel& model, double u);

/// Weights of the composite Rosenblatt limit in the second-chaos regime.
struct RosenblattWeights {
  double beta = 0.0;
  int N_star = 0;
  Eigen::VectorXd weights;      // C_l(0)/sqrt(v_star), multiplicity 2l+1 per l in I*
  std::vector<int> multipole;   // owning l of each weight
  double v_star = 0.0;          // sum_{I*} (2l+1) C_l(0)^2: gives a unit-variance limit
  double v_star_with_a = 0.0;   // a(beta)^2 sum 2(2l+1)C_l(0)^2/((1-beta)(1-2beta))
};
RosenblattWeights composite_weights(const CovarianceModel& model);

}  // namespace sxt
