#include "sxt/variance_engine.hpp"

#include "sxt/quadrature.hpp"
#include "sxt/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace sxt {

namespace {

constexpr double kFourPi = 4.0 * std::numbers::pi;
constexpr double kRateTolerance = 1e-9;

std::vector<const Multipole*> lookup(const CovarianceModel& model, const std::vector<int>& ells) {
  std::vector<const Multipole*> out;
  out.reserve(ells.size());
  for (int l : ells) out.push_back(&model.multipole(l));
  return out;
}

double c0_product(const std::vector<const Multipole*>& ms) {
  double p = 1.0;
  for (const auto* m : ms) p *= m->c0;
  return p;
}

// Decay power of the kernel tail: beta for long memory, alpha for short memory.
double decay_power(const Multipole& m) { return m.beta < 1.0 ? m.beta : *m.alpha; }

std::function<double(double)> product_kernel(const CovarianceModel& model, const std::vector<const Multipole*>& ms) {
  return [&model, ms](double tau) {
    double p = 1.0;
    for (const auto* m : ms) p *= m->c0 * model.shape(*m, tau);
    return p;
  };
}

double pairwise_sum(const double* x, std::size_t n) {
  if (n <= 8) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t h = n / 2;
  return pairwise_sum(x, h) + pairwise_sum(x + h, n - h);
}

double pairwise_sum(const std::vector<double>& x) { return pairwise_sum(x.data(), x.size()); }

double integrate_piecewise(const std::function<double(double)>& f, double a, double b) {
  // Geometric breakpoints resolve the kink at 0 and the slow tail alike.
  std::vector<double> pts{a};
  for (double x = std::max(1.0, 2.0 * a); x < b; x *= 2.0)
    if (x > pts.back()) pts.push_back(x);
  pts.push_back(b);
  std::vector<double> parts;
  parts.reserve(pts.size());
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    parts.push_back(integrate_adaptive(f, pts[i], pts[i + 1], 0.0, 1e-11, 2000).value);
  return pairwise_sum(parts);
}

double factorial(int n) { return std::exp(std::lgamma(n + 1.0)); }

double j_squared_over_factorial(double u, int q) {
  const double j = j_coefficient(q, u);
  return j * j / factorial(q);
}

// int_0^inf (1+tau)^{-gamma}
double power_half_line(double gamma) {
  return gamma > 1.0 ? 1.0 / (gamma - 1.0) : std::numeric_limits<double>::infinity();
}

}  // namespace

double k_integral(const std::function<double(double)>& kernel, double T) {
  if (!(T > 0.0)) throw std::invalid_argument("k_integral: T must be positive");
  auto f = [&](double tau) { return (1.0 - tau / T) * kernel(tau); };
  return 2.0 * T * integrate_piecewise(f, 0.0, T);
}

double k_integral(const CovarianceModel& model, const std::vector<int>& ells, double T) {
  return k_integral(product_kernel(model, lookup(model, ells)), T);
}

double k_riemann(const CovarianceModel& model, const std::vector<int>& ells, double T, double dt) {
  if (!(T > 0.0) || !(dt > 0.0)) throw std::invalid_argument("k_riemann: T and dt must be positive");
  const long n = std::lround(T / dt);
  if (n < 1) throw std::invalid_argument("k_riemann: fewer than one step");
  const auto kernel = product_kernel(model, lookup(model, ells));
  std::vector<double> terms(static_cast<std::size_t>(n));
  terms[0] = n * kernel(0.0);
  for (long m = 1; m < n; ++m) terms[m] = 2.0 * (n - m) * kernel(m * dt);
  return dt * dt * pairwise_sum(terms);
}

double half_line_integral(const CovarianceModel& model, const std::vector<int>& ells) {
  const auto ms = lookup(model, ells);
  double gamma = 0.0;
  for (const auto* m : ms) gamma += decay_power(*m);
  if (gamma <= 1.0) return std::numeric_limits<double>::infinity();
  const bool plain = std::none_of(ms.begin(), ms.end(), [](const Multipole* m) { return bool(m->g_fn); });
  if (plain) return c0_product(ms) * power_half_line(gamma);
  const auto kernel = product_kernel(model, ms);
  const double A = std::ldexp(1.0, 40);
  double g_at_A = 1.0;
  for (const auto* m : ms) g_at_A *= m->g_fn ? m->g_fn(A) : 1.0;
  // Beyond A the modulation is frozen at its value there.
  const double tail = c0_product(ms) * g_at_A * std::pow(1.0 + A, 1.0 - gamma) / (gamma - 1.0);
  return integrate_piecewise(kernel, 0.0, A) + tail;
}

std::vector<ChaosTerm> chaos_terms(const CovarianceModel& model, int q) {
  if (q < 1) throw std::invalid_argument("chaos_terms: q must be >= 1");
  std::vector<int> support;
  for (const auto& m : model.multipoles())
    if (m.c0 > 0.0) support.push_back(m.ell);
  const int n = static_cast<int>(support.size());
  std::vector<ChaosTerm> out;
  std::vector<int> idx(q, 0);
  const double qfact = factorial(q);
  while (true) {
    std::vector<int> ells(q);
    for (int i = 0; i < q; ++i) ells[i] = support[idx[i]];
    const int sum = std::accumulate(ells.begin(), ells.end(), 0);
    const int top = ells.back();
    // Zero by parity, or because P_top is orthogonal to the product of the lower degrees.
    if (sum % 2 == 0 && 2 * top <= sum) {
      const double g = gaunt_general(ells);
      double norm = 1.0;
      for (int l : ells) norm *= std::sqrt((2.0 * l + 1.0) / kFourPi);
      double mult = qfact;
      for (int i = 0, run = 1; i < q; ++i, ++run) {
        if (i + 1 == q || idx[i + 1] != idx[i]) {
          mult /= factorial(run);
          run = 0;
        }
      }
      const double w = kFourPi * mult * norm * g;
      if (w != 0.0) out.push_back({std::move(ells), w});
    }
    int k = q - 1;
    while (k >= 0 && idx[k] == n - 1) --k;
    if (k < 0) break;
    ++idx[k];
    for (int i = k + 1; i < q; ++i) idx[i] = idx[k];
  }
  return out;
}

namespace {

// Sum of weight * k(term) with k computed by `kfun`; unmodulated models share k by total decay.
template <typename KFun>
double weighted_k_sum(const CovarianceModel& model, int q, KFun kfun) {
  const auto terms = chaos_terms(model, q);
  std::vector<double> parts;
  parts.reserve(terms.size());
  const bool plain = model.unmodulated();
  std::map<double, double> cache;
  for (const auto& t : terms) {
    const auto ms = lookup(model, t.ells);
    if (plain) {
      double gamma = 0.0;
      for (const auto* m : ms) gamma += decay_power(*m);
      auto it = cache.find(gamma);
      if (it == cache.end()) {
        const std::function<double(double)> unit = [gamma](double tau) { return std::pow(1.0 + std::abs(tau), -gamma); };
        it = cache.emplace(gamma, kfun(unit)).first;
      }
      parts.push_back(t.weight * c0_product(ms) * it->second);
    } else {
      parts.push_back(t.weight * kfun(product_kernel(model, ms)));
    }
  }
  return pairwise_sum(parts);
}

double riemann_from_kernel(const std::function<double(double)>& kernel, double T, double dt) {
  const long n = std::lround(T / dt);
  if (n < 1) throw std::invalid_argument("discrete variance: fewer than one step");
  std::vector<double> terms(static_cast<std::size_t>(n));
  terms[0] = n * kernel(0.0);
  for (long m = 1; m < n; ++m) terms[m] = 2.0 * (n - m) * kernel(m * dt);
  return dt * dt * pairwise_sum(terms);
}

double discrete_gamma_power(const CovarianceModel& model, int q, double T, double dt) {
  return weighted_k_sum(model, q, [&](const std::function<double(double)>& k) { return riemann_from_kernel(k, T, dt); });
}

int even_above(int Q) { return (Q + 1) % 2 == 0 ? Q + 1 : Q + 2; }

}  // namespace

double gamma_power_integral(const CovarianceModel& model, int q, double T) {
  return weighted_k_sum(model, q, [&](const std::function<double(double)>& k) { return k_integral(k, T); });
}

double var_chaos(const CovarianceModel& model, double u, int q, double T) {
  if (q < 1) throw std::invalid_argument("var_chaos: q must be >= 1");
  const double c = j_squared_over_factorial(u, q);
  if (c == 0.0) return 0.0;
  return std::max(0.0, c * gamma_power_integral(model, q, T));
}

double var_chaos_discrete(const CovarianceModel& model, double u, int q, double T, double dt) {
  if (q < 1) throw std::invalid_argument("var_chaos_discrete: q must be >= 1");
  const double c = j_squared_over_factorial(u, q);
  if (c == 0.0) return 0.0;
  return std::max(0.0, c * discrete_gamma_power(model, q, T, dt));
}

double hermite_mass_beyond(double u, int Q) {
  const GaussianLevel g = gaussian_phi_Phi(u);
  std::vector<double> parts{g.tail * (1.0 - g.tail)};
  for (int q = 1; q <= Q; ++q) parts.push_back(-j_squared_over_factorial(u, q));
  return std::max(0.0, pairwise_sum(parts));
}

namespace {

template <typename PowerFun>
ChaosVarianceBreakdown breakdown(double u, double T, int q_max, PowerFun power) {
  if (q_max < 1) throw std::invalid_argument("var_total: q_max must be >= 1");
  ChaosVarianceBreakdown b;
  b.u = u;
  b.T = T;
  b.q_max = q_max;
  for (int q = 1; q <= q_max; ++q) {
    const double c = j_squared_over_factorial(u, q);
    b.per_q.push_back(c == 0.0 ? 0.0 : std::max(0.0, c * power(q)));
  }
  b.total = pairwise_sum(b.per_q);
  const double mass = hermite_mass_beyond(u, q_max);
  b.tail_bound = mass > 0.0 ? mass * power(even_above(q_max)) : 0.0;
  return b;
}

}  // namespace

ChaosVarianceBreakdown var_total(const CovarianceModel& model, double u, double T, int q_max) {
  return breakdown(u, T, q_max, [&](int q) { return gamma_power_integral(model, q, T); });
}

ChaosVarianceBreakdown var_total_discrete(const CovarianceModel& model, double u, double T, int q_max, double dt) {
  return breakdown(u, T, q_max, [&](int q) { return discrete_gamma_power(model, q, T, dt); });
}

namespace {

struct TermGrowth {
  double exponent;
  bool log_factor;
  double constant;  // before the angular weight
};

TermGrowth term_growth(const CovarianceModel& model, const std::vector<int>& ells) {
  const auto ms = lookup(model, ells);
  const bool short_memory = std::any_of(ms.begin(), ms.end(), [](const Multipole* m) { return m->beta >= 1.0; });
  double gamma = 0.0;
  for (const auto* m : ms) gamma += m->beta;
  const double c = c0_product(ms);
  if (!short_memory && gamma < 1.0 - kBetaTolerance)
    return {2.0 - gamma, false, 2.0 * c / ((1.0 - gamma) * (2.0 - gamma))};
  if (!short_memory && gamma <= 1.0 + kBetaTolerance) return {1.0, true, 2.0 * c};
  return {1.0, false, 2.0 * half_line_integral(model, ells)};
}

// Ordering of growth laws: larger power first, then the log factor.
int compare_growth(double e1, bool l1, double e2, bool l2) {
  if (e1 > e2 + kRateTolerance) return 1;
  if (e2 > e1 + kRateTolerance) return -1;
  if (l1 != l2) return l1 ? 1 : -1;
  return 0;
}

}  // namespace

GrowthLaw chaos_asymptotics(const CovarianceModel& model, double u, int q) {
  GrowthLaw law;
  const double c = j_squared_over_factorial(u, q);
  if (c == 0.0) return law;
  std::vector<double> parts;
  bool first = true;
  for (const auto& t : chaos_terms(model, q)) {
    const TermGrowth g = term_growth(model, t.ells);
    const int cmp = first ? 1 : compare_growth(g.exponent, g.log_factor, law.exponent, law.log_factor);
    if (cmp > 0) {
      law.exponent = g.exponent;
      law.log_factor = g.log_factor;
      parts.assign(1, t.weight * g.constant);
      first = false;
    } else if (cmp == 0) {
      parts.push_back(t.weight * g.constant);
    }
  }
  law.constant = c * pairwise_sum(parts);
  return law;
}

double s_squared(const CovarianceModel& model, double u, int q) {
  const double c = j_squared_over_factorial(u, q);
  if (c == 0.0) return 0.0;
  std::vector<double> parts;
  for (const auto& t : chaos_terms(model, q)) parts.push_back(t.weight * 2.0 * half_line_integral(model, t.ells));
  return c * pairwise_sum(parts);
}

AsymptoticPrediction leading_growth(const CovarianceModel& model, double u, int q_max) {
  AsymptoticPrediction p;
  p.q_used = q_max;
  std::vector<GrowthLaw> laws;
  bool any = false;
  for (int q = 1; q <= q_max; ++q) {
    laws.push_back(chaos_asymptotics(model, u, q));
    const GrowthLaw& g = laws.back();
    if (g.constant == 0.0) continue;
    if (!any || compare_growth(g.exponent, g.log_factor, p.exponent, p.log_factor) > 0) {
      p.exponent = g.exponent;
      p.log_factor = g.log_factor;
      any = true;
    }
  }
  for (const auto& g : laws) {
    const bool leading = g.constant != 0.0 && compare_growth(g.exponent, g.log_factor, p.exponent, p.log_factor) == 0;
    p.per_q.push_back(leading ? g.constant : 0.0);
  }
  p.constant = pairwise_sum(p.per_q);
  if (p.exponent == 1.0 && !p.log_factor) {
    // Every chaos grows like T; bound the ones left out.
    const double mass = hermite_mass_beyond(u, q_max);
    if (mass > 0.0) {
      const int r = even_above(q_max);
      std::vector<double> parts;
      for (const auto& t : chaos_terms(model, r)) parts.push_back(t.weight * 2.0 * half_line_integral(model, t.ells));
      p.tail_bound = mass * pairwise_sum(parts);
    }
  }
  return p;
}

AsymptoticPrediction asymptotic_prediction(const CovarianceModel& model, double u) {
  const RegimeReport r = classify_regime(model, u);
  if (r.dominating == Chaos::Boundary) throw ModelError("no asymptotic prediction for a boundary case: " + r.diagnostic);
  return leading_growth(model, u);
}

std::string to_string(BoundFamily f) {
  switch (f) {
    case BoundFamily::Auto: return "Auto";
    case BoundFamily::SquareShortMemory: return "SquareShortMemory";
    case BoundFamily::SquareDominant: return "SquareDominant";
    case BoundFamily::SquareSubdominant: return "SquareSubdominant";
    case BoundFamily::SquareLogDominant: return "SquareLogDominant";
    case BoundFamily::SquareLogSubdominant: return "SquareLogSubdominant";
    case BoundFamily::SquareIntegrable: return "SquareIntegrable";
    case BoundFamily::ProductWithShortMemory: return "ProductWithShortMemory";
    case BoundFamily::ProductDominant: return "ProductDominant";
    case BoundFamily::ProductSubdominant: return "ProductSubdominant";
    case BoundFamily::ProductLogDominant: return "ProductLogDominant";
    case BoundFamily::ProductLogSubdominant: return "ProductLogSubdominant";
    case BoundFamily::ProductIntegrable: return "ProductIntegrable";
    case BoundFamily::ProductWithZero: return "ProductWithZero";
  }
  return "?";
}

double modulation_sup(const CovarianceModel& model, const std::vector<int>& ells, double M) {
  double sup = 0.0;
  for (const auto* m : lookup(model, ells)) {
    if (!m->g_fn) continue;
    // 200 points per decade out to 1e10 * M, plus M itself.
    for (int k = 0; k <= 2000; ++k) {
      const double tau = M * std::pow(10.0, k / 200.0);
      sup = std::max(sup, std::abs(m->g_fn(tau) - 1.0));
    }
  }
  return sup;
}

std::pair<double, double> log_power_peak(double gamma) {
  if (!(gamma > 0.0 && gamma < 1.0)) throw std::domain_error("log_power_peak: gamma must lie in (0,1)");
  auto f = [gamma](double y) {
    const double x = std::exp(y);
    return std::log1p(x) / std::pow(x, 1.0 - gamma);
  };
  // Coarse scan in log x, then golden-section refinement around the best cell.
  double best_y = -30.0, best = f(best_y);
  for (double y = -30.0; y <= 80.0; y += 0.05) {
    const double v = f(y);
    if (v > best) {
      best = v;
      best_y = y;
    }
  }
  double a = best_y - 0.05, b = best_y + 0.05;
  const double r = 0.5 * (std::sqrt(5.0) - 1.0);
  for (int i = 0; i < 100; ++i) {
    const double c = b - r * (b - a), d = a + r * (b - a);
    if (f(c) > f(d)) b = d;
    else a = c;
  }
  const double y = 0.5 * (a + b);
  return {f(y), std::exp(y)};
}

namespace {

bool in_set(const std::vector<int>& s, int l) { return std::find(s.begin(), s.end(), l) != s.end(); }

[[noreturn]] void family_mismatch(BoundFamily f, const std::string& why) {
  throw std::invalid_argument("kernel_bound_check: " + to_string(f) + " does not apply: " + why);
}

// Shared tail term for the non-dominant branches: b is the decay of the slowest non-star product.
double branch_tail(double b, double M, double m_peak, double pow_eps) {
  if (std::abs(b - 1.0) <= kBetaTolerance) return 2.0 * m_peak * pow_eps;
  if (b < 1.0) return pow_eps / (1.0 - b) * std::pow(1.0 + 1.0 / M, 1.0 - b);
  return pow_eps / (b - 1.0) * std::pow(1.0 / (1.0 + M), b - 1.0);
}

}  // namespace

BoundReport kernel_bound_check(const CovarianceModel& model, const std::vector<int>& ells, double T, double eps,
                                 double M, BoundFamily family) {
  if (ells.empty()) throw std::invalid_argument("kernel_bound_check: empty multipole list");
  if (!(M > 0.0) || !(eps > 0.0)) throw std::invalid_argument("kernel_bound_check: need eps > 0 and M > 0");
  if (!(T > std::max(1.0, M))) throw std::invalid_argument("kernel_bound_check: need T > max(1, M)");
  const double sup = modulation_sup(model, ells, M);
  if (!(sup < eps)) throw std::invalid_argument("kernel_bound_check: sup_{tau >= M} |g - 1| is not below eps");

  const auto ms = lookup(model, ells);
  const int q = static_cast<int>(ells.size());
  const StarExponents se = star_exponents(model);
  const double bs = se.beta_star;
  const double b0 = model.multipole(0).beta;
  const bool any_short = std::any_of(ms.begin(), ms.end(), [](const Multipole* m) { return m->beta >= 1.0; });
  const bool any_zero = in_set(ells, 0);
  const bool all_star = std::all_of(ells.begin(), ells.end(), [&](int l) { return in_set(se.I_star, l); });
  const bool square = q == 2 && ells[0] == ells[1];
  auto cmp1 = [](double x) { return std::abs(x - 1.0) <= kBetaTolerance ? 0 : (x < 1.0 ? -1 : 1); };

  if (family == BoundFamily::Auto) {
    if (square && ms[0]->beta >= 1.0) family = BoundFamily::SquareShortMemory;
    else if (any_short) family = BoundFamily::ProductWithShortMemory;
    else if (any_zero) family = BoundFamily::ProductWithZero;
    else if (square) {
      const int c = cmp1(2.0 * bs);
      if (c < 0) family = all_star ? BoundFamily::SquareDominant : BoundFamily::SquareSubdominant;
      else if (c == 0) family = all_star ? BoundFamily::SquareLogDominant : BoundFamily::SquareLogSubdominant;
      else family = BoundFamily::SquareIntegrable;
    } else {
      const int c = cmp1(q * bs);
      if (c < 0) family = all_star ? BoundFamily::ProductDominant : BoundFamily::ProductSubdominant;
      else if (c == 0) family = all_star ? BoundFamily::ProductLogDominant : BoundFamily::ProductLogSubdominant;
      else family = BoundFamily::ProductIntegrable;
    }
  }

  const bool square_family = family == BoundFamily::SquareShortMemory || family == BoundFamily::SquareDominant ||
                             family == BoundFamily::SquareSubdominant || family == BoundFamily::SquareLogDominant ||
                             family == BoundFamily::SquareLogSubdominant || family == BoundFamily::SquareIntegrable;
  if (square_family && !square) family_mismatch(family, "needs a repeated single multipole");
  const bool long_nonzero = !any_short && !any_zero;
  const int qq = square_family ? 2 : q;
  const double cprod = c0_product(ms);
  const double pe = std::pow(eps + 1.0, qq);
  const double k = k_integral(model, ells, T);

  BoundReport rep;
  rep.family = family;
  auto need_e = [&] {
    if (!(T > std::numbers::e)) family_mismatch(family, "needs T > e");
  };
  auto need_long = [&] {
    if (!long_nonzero) family_mismatch(family, "needs l >= 1 and beta < 1 throughout");
  };
  auto need_peak = [&](double gamma) {
    const auto [m_peak, t_m] = log_power_peak(gamma);
    if (!(T > t_m)) family_mismatch(family, "needs T > T_m");
    return m_peak;
  };
  auto subdominant_decay = [&]() {
    if (!se.beta_starstar) family_mismatch(family, "no second smallest memory exponent");
    return *se.beta_starstar + (qq - 1) * bs;
  };

  switch (family) {
    case BoundFamily::SquareShortMemory: {
      if (ms[0]->beta < 1.0) family_mismatch(family, "needs beta = 1");
      rep.normalization = "T";
      rep.lhs = k / T;
      rep.rhs = 2.0 * cprod * (M + 2.0 * pe / (*ms[0]->alpha - 1.0));
      break;
    }
    case BoundFamily::SquareDominant:
    case BoundFamily::ProductDominant: {
      need_long();
      if (!all_star || cmp1(qq * bs) >= 0) family_mismatch(family, "needs all multipoles in I* and q beta* < 1");
      const double g = qq * bs;
      rep.normalization = "T^e";
      rep.lhs = k / std::pow(T, 2.0 - g);
      rep.rhs = 2.0 * cprod * (M + pe / (1.0 - g) * std::pow(1.0 + 1.0 / M, 1.0 - g));
      break;
    }
    case BoundFamily::SquareSubdominant:
    case BoundFamily::ProductSubdominant: {
      need_long();
      if (all_star || cmp1(qq * bs) >= 0) family_mismatch(family, "needs a multipole outside I* and q beta* < 1");
      const double g = qq * bs;
      const double m_peak = need_peak(g);
      const double b = subdominant_decay();
      rep.normalization = "T^e";
      rep.lhs = k / std::pow(T, 2.0 - g);
      rep.rhs = 2.0 * cprod * (M + branch_tail(b, M, m_peak, pe));
      break;
    }
    case BoundFamily::SquareLogDominant:
    case BoundFamily::ProductLogDominant: {
      need_long();
      need_e();
      if (!all_star || cmp1(qq * bs) != 0) family_mismatch(family, "needs all multipoles in I* and q beta* = 1");
      rep.normalization = "T log T";
      rep.lhs = k / (T * std::log(T));
      rep.rhs = 2.0 * cprod * (M + std::log(std::numbers::e + 1.0));
      break;
    }
    case BoundFamily::SquareLogSubdominant:
    case BoundFamily::ProductLogSubdominant: {
      need_long();
      need_e();
      if (all_star || cmp1(qq * bs) != 0) family_mismatch(family, "needs a multipole outside I* and q beta* = 1");
      const double b = subdominant_decay();
      rep.normalization = "T log T";
      rep.lhs = k / (T * std::log(T));
      // The squared version carries no (eps+1)^2 factor in front of the integral.
      const double lead = square_family ? 1.0 : pe;
      rep.rhs = 2.0 * cprod * (M + lead * 2.0 * power_half_line(b));
      break;
    }
    case BoundFamily::SquareIntegrable: {
      need_long();
      if (cmp1(2.0 * bs) <= 0) family_mismatch(family, "needs 2 beta* > 1");
      rep.normalization = "T";
      rep.lhs = k / T;
      rep.rhs = 2.0 * cprod * (M + pe * 2.0 * power_half_line(2.0 * bs));
      break;
    }
    case BoundFamily::ProductIntegrable: {
      need_long();
      if (cmp1(q * bs) <= 0) family_mismatch(family, "needs q beta* > 1");
      rep.normalization = "T";
      rep.lhs = k / T;
      rep.rhs = 2.0 * cprod * (M + (1.0 + M) / (q * bs - 1.0) * std::pow((1.0 + eps) / std::pow(1.0 + M, bs), q));
      break;
    }
    case BoundFamily::ProductWithShortMemory: {
      if (!any_short) family_mismatch(family, "needs a multipole with beta = 1");
      const double mn = std::min(b0, bs);
      rep.normalization = "T";
      rep.lhs = k / T;
      rep.rhs = 2.0 * cprod * (M + 1.0 / (q * mn) * std::pow((eps + 1.0) / std::pow(1.0 + M, mn), q));
      break;
    }
    case BoundFamily::ProductWithZero: {
      if (!any_zero) family_mismatch(family, "needs l = 0 among the multipoles");
      const double b = bs <= b0 ? (q - 1) * bs + b0 : q * b0;
      const double tail = std::abs(b - 1.0) <= kBetaTolerance
                              ? std::log((1.0 + T) / (1.0 + M))
                              : (std::pow(1.0 + T, 1.0 - b) - std::pow(1.0 + M, 1.0 - b)) / (1.0 - b);
      rep.normalization = "none";
      rep.lhs = k;
      rep.rhs = 2.0 * T * cprod * (M + pe * tail);
      break;
    }
    case BoundFamily::Auto: break;
  }
  rep.holds = rep.lhs <= rep.rhs;
  return rep;
}

}  // namespace sxt
