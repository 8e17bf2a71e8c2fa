#include "sxt/quadrature.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace sxt {

QuadratureRule gauss_legendre(int n) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
  QuadratureRule rule{Eigen::VectorXd(n), Eigen::VectorXd(n)};
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi's initial guess, then Newton on P_n.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node for the weight.
    double p0 = 1.0, p1 = x;
    for (int k = 2; k <= n; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes(i) = -x;
    rule.nodes(n - 1 - i) = x;
    rule.weights(i) = w;
    rule.weights(n - 1 - i) = w;
  }
  if (n % 2 == 1) rule.nodes(n / 2) = 0.0;
  return rule;
}

QuadratureRule gauss_legendre(int n, double a, double b) {
  QuadratureRule rule = gauss_legendre(n);
  const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
  rule.nodes = (rule.nodes.array() * half + mid).matrix();
  rule.weights *= half;
  return rule;
}

QuadratureRule gauss_hermite(int n) {
  if (n < 1) throw std::invalid_argument("gauss_hermite: n must be positive");
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite family.
  Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) jac(k, k - 1) = jac(k - 1, k) = std::sqrt(static_cast<double>(k));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(jac);
  QuadratureRule rule{es.eigenvalues(), Eigen::VectorXd(n)};
  const double mass = std::sqrt(2.0 * std::numbers::pi);
  for (int i = 0; i < n; ++i) rule.weights(i) = mass * es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
  return rule;
}

TanhSinhRule tanh_sinh(int level) {
  const double h = std::ldexp(1.0, -level);
  const double t_max = 4.0;
  const int half = static_cast<int>(std::ceil(t_max / h));
  std::vector<double> x, c, w;
  for (int j = -half; j <= half; ++j) {
    const double t = j * h;
    const double s = 0.5 * std::numbers::pi * std::sinh(t);
    const double xn = 1.0 / (1.0 + std::exp(-2.0 * s));
    const double cn = 1.0 / (1.0 + std::exp(2.0 * s));
    const double ch = std::cosh(s);
    const double wn = h * 0.25 * std::numbers::pi * std::cosh(t) / (ch * ch);
    if (!(xn > 0.0) || !(cn > 0.0) || wn < 1e-300) continue;
    x.push_back(xn);
    c.push_back(cn);
    w.push_back(wn);
  }
  TanhSinhRule rule;
  rule.nodes = Eigen::Map<Eigen::VectorXd>(x.data(), static_cast<Eigen::Index>(x.size()));
  rule.complements = Eigen::Map<Eigen::VectorXd>(c.data(), static_cast<Eigen::Index>(c.size()));
  rule.weights = Eigen::Map<Eigen::VectorXd>(w.data(), static_cast<Eigen::Index>(w.size()));
  return rule;
}

namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double a, b, value, error;
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const double fc = f(c);
  double kron = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * kXgk[j];
    const double fs = f(c - dx) + f(c + dx);
    kron += kWgk[j] * fs;
    if (j % 2 == 1) gauss += kWg[j / 2] * fs;
  }
  kron *= h;
  gauss *= h;
  return {a, b, kron, std::abs(kron - gauss)};
}

}  // namespace

IntegrationResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                                     double abs_tol, double rel_tol, int max_intervals) {
  IntegrationResult out;
  if (a == b) {
    out.converged = true;
    return out;
  }
  std::vector<Segment> segs{gk15(f, a, b)};
  auto total = [&](double Segment::*field) {
    double s = 0.0;
    for (const auto& sg : segs) s += sg.*field;
    return s;
  };
  while (true) {
    const double value = total(&Segment::value);
    const double err = total(&Segment::error);
    if (err <= std::max(abs_tol, rel_tol * std::abs(value))) {
      out.converged = true;
      break;
    }
    if (static_cast<int>(segs.size()) >= max_intervals) break;
    auto worst = std::max_element(segs.begin(), segs.end(),
                                  [](const Segment& x, const Segment& y) { return x.error < y.error; });
    const Segment s = *worst;
    const double mid = 0.5 * (s.a + s.b);
    if (!(mid > s.a && mid < s.b)) break;
    *worst = gk15(f, s.a, mid);
    segs.push_back(gk15(f, mid, s.b));
  }
  // Sum in interval order so the result does not depend on refinement history.
  std::sort(segs.begin(), segs.end(), [](const Segment& x, const Segment& y) { return x.a < y.a; });
  out.value = total(&Segment::value);
  out.abs_error = total(&Segment::error);
  out.intervals = static_cast<int>(segs.size());
  return out;
}

IntegrationResult integrate_to_infinity(const std::function<double(double)>& f, double a,
                                        double abs_tol, double rel_tol) {
  auto g = [&](double t) {
    if (t >= 1.0) return 0.0;
    const double one_minus = 1.0 - t;
    return f(a + t / one_minus) / (one_minus * one_minus);
  };
  return integrate_adaptive(g, 0.0, 1.0, abs_tol, rel_tol);
}

}  // namespace sxt
