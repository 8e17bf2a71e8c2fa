#include "sxt/covariance_model.hpp"

#include "sxt/quadrature.hpp"
#include "sxt/rosenblatt.hpp"
#include "sxt/special_functions.hpp"
#include "sxt/variance_engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace sxt {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;

bool same_beta(double a, double b) { return std::abs(a - b) <= kBetaTolerance; }

}  // namespace

double g_beta(double beta, std::optional<double> alpha, double tau) {
  if (!(beta > 0.0 && beta <= 1.0)) throw std::domain_error("g_beta: beta must lie in (0,1]");
  if (beta == 1.0) {
    if (!alpha) throw std::domain_error("g_beta: alpha required when beta = 1");
    if (*alpha < 2.0) throw std::domain_error("g_beta: alpha must be >= 2");
    return std::pow(1.0 + std::abs(tau), -*alpha);
  }
  return std::pow(1.0 + std::abs(tau), -beta);
}

CovarianceModel CovarianceModel::create(std::vector<Multipole> entries, bool autonormalize) {
  if (entries.empty()) throw ModelError("model has no multipoles");
  std::sort(entries.begin(), entries.end(), [](const Multipole& a, const Multipole& b) { return a.ell < b.ell; });
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Multipole& m = entries[i];
    const std::string where = "multipole ell=" + std::to_string(m.ell) + ": ";
    if (m.ell < 0) throw ModelError(where + "ell must be nonnegative");
    if (i > 0 && entries[i - 1].ell == m.ell) throw ModelError(where + "duplicate entry");
    if (!std::isfinite(m.c0) || m.c0 < 0.0) throw ModelError(where + "c0 must be finite and >= 0");
    if (!(m.beta > 0.0 && m.beta <= 1.0)) throw ModelError(where + "beta must lie in (0,1]");
    if (m.beta == 1.0 && !m.alpha) throw ModelError(where + "alpha is required when beta = 1");
    if (m.beta < 1.0 && m.alpha) throw ModelError(where + "alpha is only allowed when beta = 1");
    if (m.alpha && !(*m.alpha >= 2.0 && std::isfinite(*m.alpha))) throw ModelError(where + "alpha must be >= 2");
    if (m.g_fn) {
      if (std::abs(m.g_fn(0.0) - 1.0) > 1e-12) throw ModelError(where + "g_fn(0) must equal 1");
      // Deviation from 1 must shrink along the tail and end small.
      double prev = std::numeric_limits<double>::infinity();
      for (double tau : {1e2, 1e4, 1e6, 1e8}) {
        const double dev = std::abs(m.g_fn(tau) - 1.0);
        if (!std::isfinite(dev) || dev > prev + 1e-12) throw ModelError(where + "g_fn does not settle to 1");
        prev = dev;
      }
      if (prev > 0.1) throw ModelError(where + "g_fn does not settle to 1");
    }
  }
  if (entries.front().ell != 0 || !(entries.front().c0 > 0.0))
    throw ModelError("model needs an ell=0 entry with c0 > 0");

  double total = 0.0;
  for (const auto& m : entries) total += (2.0 * m.ell + 1.0) / kFourPi * m.c0;
  if (autonormalize) {
    for (auto& m : entries) m.c0 /= total;
  } else if (std::abs(total - 1.0) > 1e-10) {
    std::ostringstream os;
    os.precision(17);
    os << "normalization sum (2l+1)/(4pi) c0 = " << total << ", expected 1";
    throw ModelError(os.str());
  }

  CovarianceModel model;
  model.entries_ = std::move(entries);
  const Multipole& zero = model.entries_.front();
  if (zero.beta == 1.0) {
    const auto r = integrate_to_infinity([&](double t) { return model.c_ell(0, t); }, 0.0);
    if (!(r.value > 0.0)) throw ModelError("integral of C_0 over the line must be positive when beta_0 = 1");
  }
  return model;
}

bool CovarianceModel::has(int ell) const {
  return std::any_of(entries_.begin(), entries_.end(), [ell](const Multipole& m) { return m.ell == ell; });
}

const Multipole& CovarianceModel::multipole(int ell) const {
  for (const auto& m : entries_)
    if (m.ell == ell) return m;
  throw ModelError("unknown multipole ell=" + std::to_string(ell));
}

bool CovarianceModel::unmodulated() const {
  return std::none_of(entries_.begin(), entries_.end(), [](const Multipole& m) { return bool(m.g_fn); });
}

double CovarianceModel::shape(const Multipole& m, double tau) const {
  const double g = m.g_fn ? m.g_fn(std::abs(tau)) : 1.0;
  return g * g_beta(m.beta, m.alpha, tau);
}

double CovarianceModel::c_ell(int ell, double tau) const {
  if (ell < 0) throw ModelError("c_ell: negative multipole index");
  if (!has(ell)) return 0.0;  // outside the finite support
  const Multipole& m = multipole(ell);
  return m.c0 * shape(m, tau);
}

std::string CovarianceModel::canonical_text() const {
  std::ostringstream os;
  os.precision(17);
  for (const auto& m : entries_) {
    os << "ell=" << m.ell << " c0=" << m.c0 << " beta=" << m.beta;
    if (m.alpha) os << " alpha=" << *m.alpha;
    os << " g=" << (m.g_fn ? "custom" : "one") << '\n';
  }
  return os.str();
}

double c_ell(const CovarianceModel& model, int ell, double tau) { return model.c_ell(ell, tau); }

double gamma_cov(const CovarianceModel& model, double theta, double tau, int L) {
  if (L < model.max_ell()) throw ModelError("gamma_cov: truncation below the model's largest multipole");
  const Eigen::VectorXd p = legendre_all(L, theta);
  double sum = 0.0;
  for (const auto& m : model.multipoles())
    sum += (2.0 * m.ell + 1.0) / kFourPi * m.c0 * model.shape(m, tau) * p(m.ell);
  return sum;
}

double gamma_cov(const CovarianceModel& model, double theta, double tau) {
  return gamma_cov(model, theta, tau, model.max_ell());
}

std::string to_string(Chaos c) {
  switch (c) {
    case Chaos::FirstChaos: return "FirstChaos";
    case Chaos::SecondChaos: return "SecondChaos";
    case Chaos::ThirdChaos: return "ThirdChaos";
    case Chaos::AllChaoses: return "AllChaoses";
    case Chaos::Boundary: return "Boundary";
  }
  return "?";
}

std::string to_string(LimitLaw l) {
  switch (l) {
    case LimitLaw::Gaussian: return "Gaussian";
    case LimitLaw::CompositeRosenblatt2: return "CompositeRosenblatt2";
    case LimitLaw::NonGaussianOrder3: return "NonGaussianOrder3";
    case LimitLaw::DegenerateBoundary: return "DegenerateBoundary";
  }
  return "?";
}

StarExponents star_exponents(const CovarianceModel& model) {
  StarExponents s;
  s.beta_star = std::numeric_limits<double>::infinity();
  for (const auto& m : model.multipoles())
    if (m.ell >= 1 && m.c0 > 0.0) s.beta_star = std::min(s.beta_star, m.beta);
  for (const auto& m : model.multipoles())
    if (m.c0 > 0.0 && same_beta(m.beta, s.beta_star)) s.I_star.push_back(m.ell);
  for (const auto& m : model.multipoles()) {
    if (m.ell < 1 || m.c0 <= 0.0 || m.beta <= s.beta_star + kBetaTolerance) continue;
    if (!s.beta_starstar || m.beta < *s.beta_starstar) s.beta_starstar = m.beta;
  }
  return s;
}

RegimeReport classify_regime(const CovarianceModel& model, double u) {
  RegimeReport r;
  const StarExponents se = star_exponents(model);
  r.beta_star = se.beta_star;
  r.I_star = se.I_star;
  r.beta_starstar = se.beta_starstar;

  const double b0 = model.multipole(0).beta;
  const double bs = r.beta_star;
  const bool level_zero = (u == 0.0);
  const int q = level_zero ? 3 : 2;
  const double qb = q * bs;  // inf when no l >= 1 carries variance
  auto lt = [](double a, double b) { return a < b - kBetaTolerance; };
  auto eq = [](double a, double b) { return std::abs(a - b) <= kBetaTolerance; };
  const bool b0_short = eq(b0, 1.0);

  if (lt(b0, 1.0) && lt(b0, qb)) {
    r.dominating = Chaos::FirstChaos;
    r.exponent = 2.0 - b0;
    r.limit_law = LimitLaw::Gaussian;
  } else if (lt(qb, 1.0) && lt(qb, b0)) {
    r.exponent = 2.0 - qb;
    if (!level_zero) {
      r.dominating = Chaos::SecondChaos;
      r.limit_law = LimitLaw::CompositeRosenblatt2;
    } else if (std::any_of(r.I_star.begin(), r.I_star.end(), [](int l) { return l % 2 == 0; })) {
      r.dominating = Chaos::ThirdChaos;
      r.limit_law = LimitLaw::NonGaussianOrder3;
    } else {
      r.dominating = Chaos::Boundary;
      r.limit_law = LimitLaw::DegenerateBoundary;
      r.diagnostic = "third chaos dominance needs an even multipole among the minimizers of beta";
    }
  } else if (b0_short && lt(1.0, qb)) {
    r.dominating = Chaos::AllChaoses;
    r.exponent = 1.0;
    r.limit_law = LimitLaw::Gaussian;
  } else if (b0_short && eq(qb, 1.0)) {
    // T log T growth of the second (u != 0) or third (u = 0) chaos; no limit law is asserted.
    r.exponent = 1.0;
    r.log_factor = true;
    r.limit_law = LimitLaw::DegenerateBoundary;
    if (!level_zero) {
      r.dominating = Chaos::SecondChaos;
    } else if (std::any_of(r.I_star.begin(), r.I_star.end(), [](int l) { return l % 2 == 0; })) {
      r.dominating = Chaos::ThirdChaos;
    } else {
      r.dominating = Chaos::Boundary;
      r.diagnostic = "third chaos dominance needs an even multipole among the minimizers of beta";
    }
  } else {
    r.dominating = Chaos::Boundary;
    r.limit_law = LimitLaw::DegenerateBoundary;
    r.exponent = std::max({2.0 - b0, 2.0 - qb, 1.0});
    std::ostringstream os;
    os << "boundary case: beta_0 = " << b0 << " equals " << q << " * beta_star = " << qb;
    r.diagnostic = os.str();
  }

  if (r.dominating == Chaos::Boundary) {
    r.limit_constant = std::numeric_limits<double>::quiet_NaN();
  } else {
    r.limit_constant = leading_growth(model, u).constant;
  }
  return r;
}

RosenblattWeights composite_weights(const CovarianceModel& model) {
  const RegimeReport r = classify_regime(model, 1.0);
  if (r.dominating != Chaos::SecondChaos || r.log_factor)
    throw ModelError("composite weights need the second-chaos regime with 2 beta_star < 1");
  RosenblattWeights w;
  w.beta = r.beta_star;
  double sum_sq = 0.0;
  for (int l : r.I_star) {
    const double c = model.multipole(l).c0;
    sum_sq += (2.0 * l + 1.0) * c * c;
    w.N_star += 2 * l + 1;
  }
  w.v_star = sum_sq;
  const double a = sigma_and_a(w.beta).a;
  w.v_star_with_a = a * a * 2.0 * sum_sq / ((1.0 - w.beta) * (1.0 - 2.0 * w.beta));
  w.weights.resize(w.N_star);
  int k = 0;
  for (int l : r.I_star) {
    const double c = model.multipole(l).c0 / std::sqrt(w.v_star);
    for (int m = 0; m < 2 * l + 1; ++m, ++k) {
      w.weights(k) = c;
      w.multipole.push_back(l);
    }
  }
  return w;
}

}  // namespace sxt
