#include "sxt/rosenblatt.hpp"

#include "sxt/field_simulator.hpp"
#include "sxt/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <thread>
#include <vector>

namespace sxt {

namespace {

void check_beta(double beta) {
  if (!(beta > 0.0 && beta < 0.5)) throw std::domain_error("Rosenblatt laws need beta in (0, 1/2)");
}

// Upper-half tanh-sinh level: h = 1/64 resolves x^{-beta} end-point singularities to ~1e-12.
constexpr int kTanhSinhLevel = 6;

}  // namespace

SigmaA sigma_and_a(double beta) {
  check_beta(beta);
  const double sigma = std::sqrt(0.5 * (1.0 - 2.0 * beta) * (1.0 - beta));
  const double a = sigma / (2.0 * std::tgamma(beta) * std::sin((1.0 - beta) * std::numbers::pi / 2.0));
  return {sigma, a};
}

CircularIntegral a_j_monte_carlo(int j, double beta, long samples, std::uint64_t seed) {
  if (j < 2) throw std::domain_error("a_j: j must be >= 2");
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("a_j: beta must lie in (0,1)");
  if (samples < 2) throw std::invalid_argument("a_j_monte_carlo: need at least two samples");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> x(j);
  double s = 0.0, s2 = 0.0;
  for (long n = 0; n < samples; ++n) {
    for (auto& v : x) v = unif(rng);
    double f = 1.0;
    for (int i = 0; i < j; ++i) f *= std::abs(x[i] - x[(i + 1) % j]);
    f = std::pow(f, -beta);
    s += f;
    s2 += f * f;
  }
  CircularIntegral r;
  r.value = s / samples;
  r.se = std::sqrt(std::max(0.0, (s2 / samples - r.value * r.value) / (samples - 1.0)));
  // E f^2 = int prod |x_i - x_{i+1}|^{-2 beta} diverges once 2 beta j >= j - 1.
  r.finite_variance = 2.0 * beta * j < j - 1.0;
  return r;
}

namespace {

// a_3 = 6 int_{0<x1<x2<x3<1}: gaps g1 = s w, g2 = s(1-w) with Jacobian s and weight (1-s).
double a3_quadrature(double beta) {
  const TanhSinhRule r = tanh_sinh(kTanhSinhLevel);
  double s_part = 0.0, w_part = 0.0;
  for (Eigen::Index i = 0; i < r.nodes.size(); ++i) {
    const double s = r.nodes(i), one_minus = r.complements(i);
    s_part += r.weights(i) * one_minus * std::pow(s, 1.0 - 3.0 * beta);
    w_part += r.weights(i) * std::pow(s * one_minus, -beta);
  }
  return 6.0 * s_part * w_part;
}

// a_4 = 8 int_0^1 (1-s) s^{2-4b} ds * int_{simplex} (F1 + F2 + F3), the three cyclic orders of
// four sorted points written in normalized gaps (g1, g2, g3), g1 + g2 + g3 = 1.
double a4_quadrature(double beta) {
  const TanhSinhRule r = tanh_sinh(kTanhSinhLevel);
  double s_part = 0.0;
  for (Eigen::Index i = 0; i < r.nodes.size(); ++i)
    s_part += r.weights(i) * r.complements(i) * std::pow(r.nodes(i), 2.0 - 4.0 * beta);
  double w_part = 0.0;
  for (Eigen::Index i = 0; i < r.nodes.size(); ++i) {
    const double u = r.nodes(i), one_minus_u = r.complements(i);
    for (Eigen::Index k = 0; k < r.nodes.size(); ++k) {
      const double v = r.nodes(k), one_minus_v = r.complements(k);
      const double g1 = u, g2 = one_minus_u * v, g3 = one_minus_u * one_minus_v;
      const double f1 = std::pow(g1 * g2 * g3, -beta);
      const double f2 = std::pow(g1 * one_minus_u * g3 * (g1 + g2), -beta);
      const double f3 = std::pow((g1 + g2) * g2 * one_minus_u, -beta);
      w_part += r.weights(i) * r.weights(k) * one_minus_u * (f1 + f2 + f3);
    }
  }
  return 8.0 * s_part * w_part;
}

}  // namespace

CircularIntegral a_j_coefficient(int j, double beta, std::uint64_t seed, long mc_samples) {
  if (j < 2) throw std::domain_error("a_j: j must be >= 2");
  if (!(beta > 0.0 && beta < 1.0)) throw std::domain_error("a_j: beta must lie in (0,1)");
  CircularIntegral r;
  switch (j) {
    case 2: r.value = 2.0 / ((1.0 - 2.0 * beta) * (2.0 - 2.0 * beta)); return r;
    case 3: r.value = a3_quadrature(beta); return r;
    case 4: r.value = a4_quadrature(beta); return r;
    default: return a_j_monte_carlo(j, beta, mc_samples, seed);
  }
}

CircularIntegral cumulant(int j, double beta, std::uint64_t seed) {
  const double sigma = sigma_and_a(beta).sigma;
  const CircularIntegral a = a_j_coefficient(j, beta, seed);
  const double f = std::pow(2.0, j - 1) * std::tgamma(static_cast<double>(j)) * std::pow(sigma, j);
  return {f * a.value, f * a.se, a.finite_variance};
}

struct RosenblattSampler::Impl {
  StationarySampler sampler;
  explicit Impl(StationarySampler s) : sampler(std::move(s)) {}
};

RosenblattSampler::~RosenblattSampler() = default;
RosenblattSampler::RosenblattSampler(RosenblattSampler&&) noexcept = default;

RosenblattSampler::RosenblattSampler(const RosenblattParams& params) : params_(params) {
  check_beta(params.beta);
  if (params.n_terms < 2 || params.burn_in < 0) throw std::invalid_argument("RosenblattParams: need n_terms >= 2");
  if (params.weights.size() > 0) {
    if (!params.weights.allFinite() || params.weights.cwiseAbs().maxCoeff() == 0.0)
      throw std::invalid_argument("RosenblattParams: weights must be finite and not all zero");
  }
  const double b = params.beta;
  auto r = [b](int k) { return std::pow(1.0 + k, -b); };
  const int n = params.n_terms;
  // Var(sum H_2(xi_k)) = 2 sum_{j,k} r(j-k)^2, summed by lag.
  double v = n;
  for (int m = 1; m < n; ++m) v += 2.0 * (n - m) * r(m) * r(m);
  norm_ = std::sqrt(2.0 * v);
  impl_ = std::make_unique<Impl>(StationarySampler(r, n + params.burn_in));
}

namespace {

constexpr long kBlock = 256;

template <typename Work>
void run_blocks(long blocks, int threads, Work work) {
  const long t = std::max<long>(1, std::min<long>(threads, blocks));
  if (t == 1) {
    for (long b = 0; b < blocks; ++b) work(b);
    return;
  }
  std::atomic<long> next{0};
  std::vector<std::thread> pool;
  for (long i = 0; i < t; ++i)
    pool.emplace_back([&] {
      for (long b = next++; b < blocks; b = next++) work(b);
    });
  for (auto& th : pool) th.join();
}

}  // namespace

Eigen::VectorXd RosenblattSampler::standard(long n_samples, std::uint64_t seed, int threads) const {
  if (n_samples < 0) throw std::invalid_argument("sample count must be nonnegative");
  Eigen::VectorXd out(n_samples);
  const long blocks = (n_samples + kBlock - 1) / kBlock;
  const int total = params_.n_terms + params_.burn_in;
  run_blocks(blocks, threads, [&](long b) {
    std::mt19937_64 rng = make_stream(seed, static_cast<std::uint64_t>(b), 0, 0, 7);
    std::vector<double> x(total), y(total);
    const long lo = b * kBlock, hi = std::min(n_samples, lo + kBlock);
    for (long i = lo; i < hi; i += 2) {
      impl_->sampler.sample_pair(rng, x.data(), y.data());
      double sx = 0.0, sy = 0.0;
      for (int k = params_.burn_in; k < total; ++k) {
        sx += x[k] * x[k] - 1.0;
        sy += y[k] * y[k] - 1.0;
      }
      out(i) = sx / norm_;
      if (i + 1 < hi) out(i + 1) = sy / norm_;
    }
  });
  return out;
}

Eigen::VectorXd RosenblattSampler::composite(long n_samples, std::uint64_t seed, int threads) const {
  const Eigen::VectorXd& c = params_.weights;
  if (c.size() == 0) return standard(n_samples, seed, threads);
  const Eigen::VectorXd draws = standard(n_samples * c.size(), seed, threads);
  Eigen::VectorXd out(n_samples);
  for (long i = 0; i < n_samples; ++i) out(i) = c.dot(draws.segment(i * c.size(), c.size()));
  return out;
}

Eigen::VectorXd sample_rosenblatt(const RosenblattParams& params, long n_samples, std::uint64_t seed, int threads) {
  return RosenblattSampler(params).standard(n_samples, seed, threads);
}

Eigen::VectorXd sample_composite(const RosenblattParams& params, long n_samples, std::uint64_t seed, int threads) {
  if (params.weights.size() == 0) throw std::invalid_argument("sample_composite: weights are required");
  return RosenblattSampler(params).composite(n_samples, seed, threads);
}

RosenblattLaw::RosenblattLaw(double beta, int cells) : beta_(beta) {
  check_beta(beta);
  if (cells < 2) throw std::invalid_argument("RosenblattLaw: need at least two cells");
  // Cell-pair integrals of |x-y|^{-beta} for width h: h^{2-beta} times the second difference of
  // |x|^{2-beta} / ((1-beta)(2-beta)) at the lag; the orthonormal basis adds a factor 1/h.
  const double h = 1.0 / cells;
  auto F = [beta](double x) { return std::pow(std::abs(x), 2.0 - beta) / ((1.0 - beta) * (2.0 - beta)); };
  Eigen::VectorXd row(cells);
  for (int d = 0; d < cells; ++d) row(d) = std::pow(h, 1.0 - beta) * (F(d + 1.0) - 2.0 * F(d) + F(d - 1.0));
  Eigen::MatrixXd A(cells, cells);
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j) A(i, j) = row(std::abs(i - j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(A, Eigen::EigenvaluesOnly);
  lambda_ = sigma_and_a(beta).sigma * es.eigenvalues();
  residual_ = std::max(0.0, 1.0 - 2.0 * lambda_.squaredNorm());
}

Eigen::VectorXd RosenblattLaw::cdf(const Eigen::VectorXd& xs, const Eigen::VectorXd& weights) const {
  using C = std::complex<double>;
  const double res = residual_ * weights.squaredNorm();
  auto log_cf = [&](double theta) {
    C acc(-0.5 * theta * theta * res, 0.0);
    for (Eigen::Index k = 0; k < weights.size(); ++k)
      for (Eigen::Index i = 0; i < lambda_.size(); ++i) {
        const double l = weights(k) * lambda_(i);
        acc += -0.5 * std::log(C(1.0, -2.0 * theta * l)) - C(0.0, theta * l);
      }
    return acc;
  };
  // Gil-Pelaez: F(x) = 1/2 - (1/pi) int_0^inf Im(e^{-i theta x} cf(theta)) / theta dtheta.
  // The cf does not depend on x, so one pass serves the whole grid.
  const QuadratureRule gl = gauss_legendre(20, 0.0, 0.25);
  Eigen::VectorXd integral = Eigen::VectorXd::Zero(xs.size());
  for (int panel = 0; panel < 4000; ++panel) {
    double biggest = 0.0;
    for (Eigen::Index i = 0; i < gl.nodes.size(); ++i) {
      const double t = panel * 0.25 + gl.nodes(i);
      const C cf = std::exp(log_cf(t));
      biggest = std::max(biggest, std::abs(cf));
      for (Eigen::Index j = 0; j < xs.size(); ++j)
        integral(j) += gl.weights(i) * (cf * std::polar(1.0, -t * xs(j))).imag() / t;
    }
    if (biggest < 1e-14) break;
  }
  return (0.5 - integral.array() / std::numbers::pi).matrix();
}

double RosenblattLaw::cdf(double x, const Eigen::VectorXd& weights) const {
  return cdf(Eigen::VectorXd::Constant(1, x), weights)(0);
}

double RosenblattLaw::cdf(double x) const { return cdf(x, Eigen::VectorXd::Ones(1)); }

}  // namespace sxt
