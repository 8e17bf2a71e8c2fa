#include "sxt/field_simulator.hpp"

#include <Eigen/Cholesky>
#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sxt {

TimeGrid::TimeGrid(double horizon, int steps) : T(horizon), n_steps(steps) {
  if (!(horizon > 0.0) || steps < 1) throw std::invalid_argument("TimeGrid: need T > 0 and n_steps >= 1");
}

TimeGrid TimeGrid::from_step(double horizon, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("TimeGrid: dt must be positive");
  const double n = horizon / dt;
  const long steps = std::lround(n);
  if (steps < 1 || std::abs(n - steps) > 1e-9 * std::max(1.0, n))
    throw std::invalid_argument("TimeGrid: T must be a positive multiple of dt");
  return TimeGrid(horizon, static_cast<int>(steps));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// FFTW's planner is not reentrant; execution of an existing plan on fresh arrays is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

}  // namespace

std::uint64_t stream_seed(std::uint64_t master, std::uint64_t replication, std::uint64_t ell, std::uint64_t m,
                          std::uint64_t purpose) {
  std::uint64_t h = splitmix64(master);
  for (std::uint64_t part : {replication, ell, m, purpose}) h = splitmix64(h ^ splitmix64(part + 0x632be59bd9b4e019ULL));
  return h;
}

std::mt19937_64 make_stream(std::uint64_t master, std::uint64_t replication, std::uint64_t ell, std::uint64_t m,
                            std::uint64_t purpose) {
  return std::mt19937_64(stream_seed(master, replication, ell, m, purpose));
}

struct StationarySampler::Plan {
  fftw_plan plan = nullptr;
  int m = 0;
  ~Plan() {
    if (plan) {
      std::lock_guard<std::mutex> lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }
};

StationarySampler::~StationarySampler() = default;
StationarySampler::StationarySampler(StationarySampler&&) noexcept = default;
StationarySampler& StationarySampler::operator=(StationarySampler&&) noexcept = default;

StationarySampler::StationarySampler(const std::function<double(int)>& r, int n) : n_(n) {
  if (n < 1) throw std::invalid_argument("StationarySampler: n must be positive");
  const double r0 = r(0);
  if (r0 < 0.0) throw std::invalid_argument("StationarySampler: negative variance");
  if (r0 == 0.0) {
    method_ = Method::Zero;
    return;
  }
  m_ = 1;
  while (m_ < 2 * (n - 1)) m_ *= 2;
  m_ = std::max(m_, 2);
  fftw_complex* buf = fftw_alloc_complex(m_);
  {
    std::lock_guard<std::mutex> lock(planner_mutex());
    plan_ = std::make_unique<Plan>();
    plan_->m = m_;
    plan_->plan = fftw_plan_dft_1d(m_, buf, buf, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  for (int j = 0; j < m_; ++j) {
    const int lag = std::min(j, m_ - j);
    // Lags past n - 1 continue the true covariance, which keeps decaying kernels nonnegative.
    buf[j][0] = r(lag);
    buf[j][1] = 0.0;
  }
  fftw_execute_dft(plan_->plan, buf, buf);
  Eigen::VectorXd lambda(m_);
  for (int j = 0; j < m_; ++j) lambda(j) = buf[j][0];
  fftw_free(buf);

  const double lmax = lambda.maxCoeff();
  const double lmin = lambda.minCoeff();
  if (lmin >= -1e-8 * lmax) {
    method_ = Method::Circulant;
    double neg = 0.0;
    for (int j = 0; j < m_; ++j)
      if (lambda(j) < 0.0) {
        neg += -lambda(j);
        lambda(j) = 0.0;
      }
    clipped_ = neg / lmax;
    if (neg > 0.0)
      std::clog << "warning: circulant embedding clipped negative eigenvalues (relative mass " << clipped_ << ")\n";
    scale_ = (lambda / m_).cwiseSqrt();
  } else {
    method_ = Method::Cholesky;
    plan_.reset();
    m_ = 0;
    Eigen::MatrixXd cov(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) cov(i, j) = r(std::abs(i - j));
    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() != Eigen::Success) throw std::runtime_error("StationarySampler: covariance is not positive definite");
    chol_ = llt.matrixL();
  }
}

void StationarySampler::sample_pair(std::mt19937_64& rng, double* first, double* second) const {
  std::normal_distribution<double> normal;
  switch (method_) {
    case Method::Zero:
      std::fill(first, first + n_, 0.0);
      std::fill(second, second + n_, 0.0);
      return;
    case Method::Cholesky: {
      Eigen::VectorXd z1(n_), z2(n_);
      for (int i = 0; i < n_; ++i) z1(i) = normal(rng);
      for (int i = 0; i < n_; ++i) z2(i) = normal(rng);
      Eigen::Map<Eigen::VectorXd>(first, n_) = chol_ * z1;
      Eigen::Map<Eigen::VectorXd>(second, n_) = chol_ * z2;
      return;
    }
    case Method::Circulant: {
      fftw_complex* buf = fftw_alloc_complex(m_);
      for (int j = 0; j < m_; ++j) {
        const double re = normal(rng);
        const double im = normal(rng);
        buf[j][0] = scale_(j) * re;
        buf[j][1] = scale_(j) * im;
      }
      fftw_execute_dft(plan_->plan, buf, buf);
      for (int i = 0; i < n_; ++i) {
        first[i] = buf[i][0];
        second[i] = buf[i][1];
      }
      fftw_free(buf);
      return;
    }
  }
}

Eigen::VectorXd StationarySampler::sample(std::mt19937_64& rng) const {
  Eigen::VectorXd a(n_), b(n_);
  sample_pair(rng, a.data(), b.data());
  return a;
}

Eigen::VectorXd sample_coefficient_path(const std::function<double(double)>& c, const TimeGrid& grid,
                                        std::mt19937_64& rng) {
  const double dt = grid.dt();
  StationarySampler s([&](int k) { return c(k * dt); }, grid.n_steps);
  return s.sample(rng);
}

FieldSample synthesize_field(const CoefficientPaths& paths, const SphereQuadrature& sphere, const TimeGrid& grid) {
  if (paths.grid.n_steps != grid.n_steps || paths.grid.T != grid.T)
    throw std::invalid_argument("synthesize_field: coefficient paths were drawn on a different time grid");
  if (paths.a.cols() != (paths.L + 1) * (paths.L + 1) || paths.a.rows() != grid.n_steps)
    throw std::invalid_argument("synthesize_field: coefficient matrix has the wrong shape");
  FieldSample s;
  s.grid = grid;
  s.paths = paths;
  s.values.noalias() = sphere.harmonic_matrix(paths.L) * paths.a.transpose();
  return s;
}

FieldSimulator::FieldSimulator(const CovarianceModel& model, SphereQuadrature sphere, TimeGrid grid)
    : model_(model), sphere_(std::move(sphere)), grid_(grid) {
  harmonics_ = sphere_.harmonic_matrix(model_.max_ell());
  const double dt = grid_.dt();
  for (const auto& m : model_.multipoles()) {
    ells_.push_back(m.ell);
    const Multipole* mp = &model_.multipole(m.ell);
    samplers_.emplace_back([this, mp, dt](int k) { return mp->c0 * model_.shape(*mp, k * dt); }, grid_.n_steps);
  }
}

const StationarySampler& FieldSimulator::sampler(int ell) const {
  for (std::size_t i = 0; i < ells_.size(); ++i)
    if (ells_[i] == ell) return samplers_[i];
  throw ModelError("unknown multipole ell=" + std::to_string(ell));
}

CoefficientPaths FieldSimulator::sample_paths(std::uint64_t master_seed, std::uint64_t replication) const {
  CoefficientPaths p;
  p.grid = grid_;
  p.L = model_.max_ell();
  p.seed = master_seed;
  p.replication = replication;
  const int n = grid_.n_steps;
  p.a = Eigen::MatrixXd::Zero(n, (p.L + 1) * (p.L + 1));
  Eigen::VectorXd spare(n);
  for (std::size_t i = 0; i < ells_.size(); ++i) {
    const int l = ells_[i];
    const StationarySampler& s = samplers_[i];
    if (s.method() == StationarySampler::Method::Zero) continue;
    // Orders m = -l..l are drawn two at a time from one stream per pair.
    for (int j = 0; j < 2 * l + 1; j += 2) {
      std::mt19937_64 rng = make_stream(master_seed, replication, l, j / 2, 0);
      double* first = p.a.col(harmonic_index(l, j - l)).data();
      double* second = j + 1 < 2 * l + 1 ? p.a.col(harmonic_index(l, j + 1 - l)).data() : spare.data();
      s.sample_pair(rng, first, second);
    }
  }
  return p;
}

FieldSample FieldSimulator::synthesize(CoefficientPaths paths) const {
  FieldSample s;
  s.grid = grid_;
  s.values.noalias() = harmonics_ * paths.a.transpose();
  s.paths = std::move(paths);
  return s;
}

FieldSample FieldSimulator::sample(std::uint64_t master_seed, std::uint64_t replication) const {
  return synthesize(sample_paths(master_seed, replication));
}

Eigen::MatrixXd FieldSimulator::monochromatic(const FieldSample& s, int ell) const {
  if (!model_.has(ell)) throw ModelError("unknown multipole ell=" + std::to_string(ell));
  const int first = harmonic_index(ell, -ell);
  const int width = 2 * ell + 1;
  return harmonics_.middleCols(first, width) * s.paths.a.middleCols(first, width).transpose();
}

Estimate empirical_space_time_cov(const std::vector<FieldSample>& samples, const SphereQuadrature& sphere,
                                  double theta, double tau) {
  if (samples.empty()) throw std::invalid_argument("empirical_space_time_cov: no samples");
  const TimeGrid& grid = samples.front().grid;
  const double lag_f = tau / grid.dt();
  const long lag = std::lround(lag_f);
  if (std::abs(lag_f - lag) > 1e-9 || std::abs(lag) >= grid.n_steps)
    throw std::invalid_argument("empirical_space_time_cov: tau must be a multiple of dt inside the horizon");
  std::vector<std::pair<int, int>> pairs;
  for (int p = 0; p < sphere.size(); ++p)
    for (int r = 0; r < sphere.size(); ++r)
      if (std::abs(sphere.point(p).dot(sphere.point(r)) - theta) < 1e-9) pairs.emplace_back(p, r);
  if (pairs.empty()) throw std::invalid_argument("empirical_space_time_cov: no grid pair at the requested angle");
  const long a = std::abs(lag);
  std::vector<double> means;
  for (const auto& s : samples) {
    double acc = 0.0;
    long count = 0;
    for (const auto& [p, r] : pairs)
      for (long k = 0; k + a < grid.n_steps; ++k) {
        acc += s.values(p, k) * s.values(r, k + a);
        ++count;
      }
    means.push_back(acc / count);
  }
  Estimate e;
  const double n = static_cast<double>(means.size());
  for (double v : means) e.value += v / n;
  if (means.size() > 1) {
    double ss = 0.0;
    for (double v : means) ss += (v - e.value) * (v - e.value);
    e.se = std::sqrt(ss / (n - 1.0) / n);
  }
  return e;
}

void write_field_csv(const FieldSample& s, std::ostream& os) {
  os.precision(17);
  os << "t";
  for (Eigen::Index p = 0; p < s.values.rows(); ++p) os << ",p" << p;
  os << '\n';
  for (Eigen::Index k = 0; k < s.values.cols(); ++k) {
    os << s.grid.node(static_cast<int>(k));
    for (Eigen::Index p = 0; p < s.values.rows(); ++p) os << ',' << s.values(p, k);
    os << '\n';
  }
}

}  // namespace sxt
