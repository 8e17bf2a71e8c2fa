#include "sxt/mc_harness.hpp"

#include "sxt/excursion.hpp"
#include "sxt/stats.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

namespace sxt {

void ExperimentConfig::validate() const {
  if (levels.empty()) throw std::invalid_argument("experiment: need at least one level");
  for (double u : levels)
    if (!std::isfinite(u)) throw std::invalid_argument("experiment: levels must be finite");
  if (T_ladder.empty()) throw std::invalid_argument("experiment: T_ladder is empty");
  for (std::size_t i = 0; i < T_ladder.size(); ++i) {
    if (!(T_ladder[i] > 0.0)) throw std::invalid_argument("experiment: T_ladder entries must be positive");
    if (i > 0 && !(T_ladder[i] > T_ladder[i - 1]))
      throw std::invalid_argument("experiment: T_ladder must be strictly increasing");
  }
  if (replications < 1) throw std::invalid_argument("experiment: replications must be >= 1");
  if (!(dt > 0.0)) throw std::invalid_argument("experiment: dt must be positive");
  for (double T : T_ladder) TimeGrid::from_step(T, dt);
  if (n_colatitude < 1 || n_longitude < 1) throw std::invalid_argument("experiment: empty sphere grid");
  if (q_max < 1) throw std::invalid_argument("experiment: q_max must be >= 1");
  if (ell_star && !model.has(*ell_star))
    throw std::invalid_argument("experiment: ell_star " + std::to_string(*ell_star) + " is not in the model");
  if (threads < 1) throw std::invalid_argument("experiment: threads must be >= 1");
}

const ReplicateRow& ReplicateTable::at(int level_index, int T_index, int r) const {
  const std::size_t k =
      (static_cast<std::size_t>(level_index) * T_ladder.size() + T_index) * replications + r;
  return rows.at(k);
}

Eigen::VectorXd ReplicateTable::values(int level_index, int T_index) const {
  Eigen::VectorXd v(replications);
  for (int r = 0; r < replications; ++r) v(r) = at(level_index, T_index, r).M;
  return v;
}

Eigen::VectorXd ReplicateTable::chaos(int level_index, int T_index, int q) const {
  if (q < 1 || q > q_max) throw std::out_of_range("ReplicateTable::chaos: q outside 1..q_max");
  Eigen::VectorXd v(replications);
  for (int r = 0; r < replications; ++r) v(r) = at(level_index, T_index, r).chaos(q - 1);
  return v;
}

Eigen::VectorXd ReplicateTable::mono(int level_index, int T_index) const {
  if (!has_mono) throw std::logic_error("ReplicateTable: no monochromatic column (ell_star unset)");
  Eigen::VectorXd v(replications);
  for (int r = 0; r < replications; ++r) v(r) = at(level_index, T_index, r).m_mono;
  return v;
}

int ReplicateTable::level_index(double u) const {
  for (std::size_t i = 0; i < levels.size(); ++i)
    if (levels[i] == u) return static_cast<int>(i);
  throw std::out_of_range("ReplicateTable: level not in the table");
}

namespace {

// Runs job(i) for i in [0, n) on up to `threads` workers; the first exception is rethrown.
template <typename Job>
void parallel_for(int n, int threads, Job job) {
  const int t = std::max(1, std::min(threads, n));
  if (t == 1) {
    for (int i = 0; i < n; ++i) job(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  std::vector<std::thread> pool;
  for (int w = 0; w < t; ++w)
    pool.emplace_back([&] {
      for (int i = next++; i < n; i = next++) {
        try {
          job(i);
        } catch (...) {
          std::lock_guard lock(failure_mutex);
          if (!failure) failure = std::current_exception();
          next = n;
        }
      }
    });
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

ReplicateTable run_experiment(const ExperimentConfig& config) {
  config.validate();
  ReplicateTable table;
  table.master_seed = config.master_seed;
  table.levels = config.levels;
  table.T_ladder = config.T_ladder;
  table.replications = config.replications;
  table.q_max = config.q_max;
  table.has_mono = config.ell_star.has_value();
  const int n_levels = static_cast<int>(config.levels.size());
  const int n_T = static_cast<int>(config.T_ladder.size());
  const int R = config.replications;
  table.rows.resize(static_cast<std::size_t>(n_levels) * n_T * R);

  const SphereQuadrature sphere(config.n_colatitude, config.n_longitude);
  for (int ti = 0; ti < n_T; ++ti) {
    const double T = config.T_ladder[ti];
    const FieldSimulator sim(config.model, sphere, TimeGrid::from_step(T, config.dt));
    parallel_for(R, config.threads, [&](int r) {
      // Replication streams are distinct across the ladder as well.
      const std::uint64_t rep = (static_cast<std::uint64_t>(ti) << 32) | static_cast<std::uint64_t>(r);
      try {
        const FieldSample s = sim.sample(config.master_seed, rep);
        const Eigen::VectorXd sums = hermite_integrals(s, sphere, config.q_max);
        for (int li = 0; li < n_levels; ++li) {
          const double u = config.levels[li];
          ReplicateRow& row = table.rows[(static_cast<std::size_t>(li) * n_T + ti) * R + r];
          row.u = u;
          row.T = T;
          row.r = r;
          row.M = m_functional(s, sphere, u);
          row.chaos = chaos_projections(sums, u);
          row.m_mono = config.ell_star ? m_monochromatic(sim, s, *config.ell_star, u)
                                       : std::numeric_limits<double>::quiet_NaN();
        }
      } catch (const std::exception& e) {
        throw std::runtime_error("replication failed at T=" + std::to_string(T) + ", r=" + std::to_string(r) +
                                 ": " + e.what());
      }
    });
  }
  return table;
}

void write_table_csv(const ReplicateTable& table, std::ostream& os) {
  os << "seed,u,T,r,M";
  for (int q = 1; q <= table.q_max; ++q) os << ",chaos_" << q;
  if (table.has_mono) os << ",m_mono";
  os << '\n';
  char buf[40];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (const auto& row : table.rows) {
    os << table.master_seed << ',';
    put(row.u);
    os << ',';
    put(row.T);
    os << ',' << row.r << ',';
    put(row.M);
    for (Eigen::Index q = 0; q < row.chaos.size(); ++q) {
      os << ',';
      put(row.chaos(q));
    }
    if (table.has_mono) {
      os << ',';
      put(row.m_mono);
    }
    os << '\n';
  }
}

namespace {

LineFit log_fit(const std::vector<double>& T, const std::vector<double>& v, bool log_corrected) {
  Eigen::VectorXd x(T.size()), y(T.size());
  for (std::size_t i = 0; i < T.size(); ++i) {
    if (!(v[i] > 0.0)) throw std::domain_error("fit_variance_exponent: nonpositive variance estimate");
    x(i) = std::log(T[i]);
    y(i) = std::log(log_corrected ? v[i] / std::log(T[i]) : v[i]);
  }
  return ols(x, y);
}

Eigen::VectorXd drop_group(const Eigen::VectorXd& x, int g, int groups) {
  const Eigen::Index n = x.size(), lo = n * g / groups, hi = n * (g + 1) / groups;
  Eigen::VectorXd rest(n - (hi - lo));
  rest << x.head(lo), x.tail(n - hi);
  return rest;
}

}  // namespace

VarianceFit fit_variance_exponent(const std::vector<double>& T, const std::vector<Eigen::VectorXd>& samples,
                                  bool log_corrected, int jackknife_groups) {
  if (T.size() != samples.size()) throw std::invalid_argument("fit_variance_exponent: size mismatch");
  if (T.size() < 4) throw std::invalid_argument("fit_variance_exponent: need at least 4 ladder points");
  for (std::size_t i = 1; i < T.size(); ++i)
    if (!(T[i] > T[i - 1])) throw std::invalid_argument("fit_variance_exponent: degenerate ladder");
  if (!(T[0] > 0.0) || (log_corrected && !(T[0] > 1.0)))
    throw std::invalid_argument("fit_variance_exponent: degenerate ladder");
  VarianceFit fit;
  fit.log_corrected = log_corrected;
  fit.T = T;
  for (const auto& s : samples) {
    fit.variance.push_back(sample_variance(s));
    fit.variance_se.push_back(variance_se(s));
  }
  const LineFit line = log_fit(T, fit.variance, log_corrected);
  fit.slope = line.slope;
  fit.intercept = line.intercept;
  fit.r_squared = line.r_squared;

  std::size_t smallest = samples.front().size();
  for (const auto& s : samples) smallest = std::min<std::size_t>(smallest, s.size());
  const int groups = static_cast<int>(std::min<std::size_t>(jackknife_groups, smallest));
  if (groups >= 2) {
    std::vector<double> leave(groups);
    for (int g = 0; g < groups; ++g) {
      std::vector<double> v;
      for (const auto& s : samples) v.push_back(sample_variance(drop_group(s, g, groups)));
      leave[g] = log_fit(T, v, log_corrected).slope;
    }
    double m = 0.0;
    for (double s : leave) m += s / groups;
    double ss = 0.0;
    for (double s : leave) ss += (s - m) * (s - m);
    fit.slope_se = std::sqrt((groups - 1.0) / groups * ss);
  }
  return fit;
}

VarianceFit fit_variance_exponent(const ReplicateTable& table, double u, bool log_corrected, int jackknife_groups) {
  const int li = table.level_index(u);
  std::vector<Eigen::VectorXd> samples;
  for (std::size_t ti = 0; ti < table.T_ladder.size(); ++ti) samples.push_back(table.values(li, static_cast<int>(ti)));
  return fit_variance_exponent(table.T_ladder, samples, log_corrected, jackknife_groups);
}

ExponentGap exponent_gap(const ReplicateTable& table, double u_a, double u_b, int jackknife_groups) {
  const int la = table.level_index(u_a), lb = table.level_index(u_b);
  const int n_T = static_cast<int>(table.T_ladder.size());
  std::vector<Eigen::VectorXd> a, b;
  for (int ti = 0; ti < n_T; ++ti) {
    a.push_back(table.values(la, ti));
    b.push_back(table.values(lb, ti));
  }
  ExponentGap g;
  g.first = fit_variance_exponent(table.T_ladder, a, false, jackknife_groups);
  g.second = fit_variance_exponent(table.T_ladder, b, false, jackknife_groups);
  g.gap = g.second.slope - g.first.slope;
  const int groups = std::min(jackknife_groups, table.replications);
  if (groups < 2) return g;
  std::vector<double> leave(groups);
  for (int k = 0; k < groups; ++k) {
    std::vector<double> va, vb;
    for (int ti = 0; ti < n_T; ++ti) {
      va.push_back(sample_variance(drop_group(a[ti], k, groups)));
      vb.push_back(sample_variance(drop_group(b[ti], k, groups)));
    }
    leave[k] = log_fit(table.T_ladder, vb, false).slope - log_fit(table.T_ladder, va, false).slope;
  }
  double m = 0.0;
  for (double v : leave) m += v / groups;
  double ss = 0.0;
  for (double v : leave) ss += (v - m) * (v - m);
  g.se = std::sqrt((groups - 1.0) / groups * ss);
  return g;
}

DistributionTest test_distribution(const Eigen::VectorXd& samples, const DistributionReference& ref) {
  if (samples.size() < 2 || !samples.allFinite() || !(sample_variance(samples) > 0.0))
    throw std::invalid_argument("test_distribution: samples are not standardized (variance <= 0 or non-finite)");
  DistributionTest t;
  if (ref.kind == DistributionReference::Kind::Normal) {
    t.statistic_name = "anderson_darling";
    t.statistic = anderson_darling_normal(samples);
    t.threshold = kAndersonDarling1Percent;
  } else {
    if (ref.reference_samples.size() < 2)
      throw std::invalid_argument("test_distribution: composite reference needs reference samples");
    t.statistic_name = "kolmogorov_two_sample";
    t.statistic = kolmogorov_distance(samples, ref.reference_samples);
    t.threshold = permutation_threshold(samples, ref.reference_samples, ref.shuffles, 0.01, ref.seed);
  }
  t.pass = t.statistic <= t.threshold;
  return t;
}

CorrelationReport correlation_from_table(const ReplicateTable& table, int ell_star, int level_index) {
  if (!table.has_mono) throw std::invalid_argument("correlation: the table has no monochromatic column");
  if (table.replications < 4) throw std::invalid_argument("correlation: need at least 4 replications");
  CorrelationReport rep;
  rep.ell_star = ell_star;
  Eigen::VectorXd Ts(table.T_ladder.size()), cs(table.T_ladder.size());
  for (std::size_t ti = 0; ti < table.T_ladder.size(); ++ti) {
    const Eigen::VectorXd m = table.values(level_index, static_cast<int>(ti));
    const Eigen::VectorXd mono = table.mono(level_index, static_cast<int>(ti));
    CorrelationPoint p;
    p.T = table.T_ladder[ti];
    p.corr = pearson(m, mono);
    // Large-sample normal-theory standard error.
    p.se = (1.0 - p.corr * p.corr) / std::sqrt(table.replications - 3.0);
    rep.points.push_back(p);
    Ts(ti) = p.T;
    cs(ti) = p.corr;
  }
  rep.rank_trend = Ts.size() >= 2 ? spearman(Ts, cs) : 0.0;
  rep.increasing = true;
  for (std::size_t i = 1; i < rep.points.size(); ++i)
    rep.increasing = rep.increasing && rep.points[i].corr > rep.points[i - 1].corr;
  return rep;
}

CorrelationReport correlation_experiment(ExperimentConfig config) {
  const double u = config.levels.at(0);
  const RegimeReport regime = classify_regime(config.model, u);
  if (regime.dominating != Chaos::SecondChaos)
    throw ModelError("correlation experiment needs the second-chaos regime, got " + to_string(regime.dominating));
  if (regime.I_star.size() != 1)
    throw ModelError("correlation experiment needs a unique minimizing multipole, got " +
                     std::to_string(regime.I_star.size()));
  if (config.ell_star && *config.ell_star != regime.I_star.front())
    throw ModelError("ell_star " + std::to_string(*config.ell_star) + " does not minimize beta (expected " +
                     std::to_string(regime.I_star.front()) + ")");
  config.ell_star = regime.I_star.front();
  config.levels = {u};
  return correlation_from_table(run_experiment(config), *config.ell_star);
}

Estimate fourth_cumulant_diagnostic(const Eigen::VectorXd& chaos_samples, int q, int jackknife_groups) {
  if (q < 2) throw std::invalid_argument("fourth_cumulant_diagnostic: q must be >= 2");
  if (chaos_samples.size() < 1000) throw std::invalid_argument("fourth_cumulant_diagnostic: need at least 1000 samples");
  auto standardized_k4 = [](const Eigen::VectorXd& x) {
    const KStatistics k = k_statistics(x);
    return k.k4 / (k.k2 * k.k2);
  };
  const JackknifeResult j = jackknife(chaos_samples, jackknife_groups, standardized_k4);
  return {j.estimate, j.se};
}

}  // namespace sxt
