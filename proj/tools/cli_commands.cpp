#include "cli_commands.hpp"

#include "sxt/covariance_model.hpp"
#include "sxt/excursion.hpp"
#include "sxt/field_simulator.hpp"
#include "sxt/mc_harness.hpp"
#include "sxt/model_io.hpp"
#include "sxt/rosenblatt.hpp"
#include "sxt/stats.hpp"
#include "sxt/variance_engine.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#ifndef SXT_VERSION
#define SXT_VERSION "0.0.0"
#endif

namespace sxt::cli {

using nlohmann::json;
namespace fs = std::filesystem;

std::string content_hash(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string brief(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Data files carry the manifest hash on a leading comment line; manifest.json lists every file
// with the hash of its bytes. Timestamps live only in manifest.json, so numeric files repeat
// byte for byte.
class Manifest {
 public:
  Manifest(std::string command, const std::string& config_text, std::uint64_t seed)
      : command_(std::move(command)), config_hash_(content_hash(config_text)), seed_(seed) {
    hash_ = content_hash(command_ + '\n' + config_hash_ + '\n' + std::to_string(seed_) + '\n' + SXT_VERSION);
  }
  const std::string& hash() const { return hash_; }

  void write_csv(const fs::path& dir, const std::string& name, const std::string& body) {
    write(dir, name, "# manifest=" + hash_ + '\n' + body);
  }
  void write_json(const fs::path& dir, const std::string& name, json j) {
    j["manifest"] = hash_;
    write(dir, name, j.dump(2) + '\n');
  }
  void finish(const fs::path& dir) const {
    json m;
    m["manifest"] = hash_;
    m["command"] = command_;
    m["config_hash"] = config_hash_;
    m["master_seed"] = seed_;
    m["version"] = SXT_VERSION;
    const std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    m["created"] = stamp;
    m["outputs"] = outputs_;
    std::ofstream(dir / "manifest.json") << m.dump(2) << '\n';
  }

 private:
  void write(const fs::path& dir, const std::string& name, const std::string& bytes) {
    fs::create_directories(dir);
    std::ofstream f(dir / name, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + (dir / name).string());
    f << bytes;
    outputs_.push_back({{"path", name}, {"hash", content_hash(bytes)}});
  }

  std::string command_, config_hash_, hash_;
  std::uint64_t seed_;
  json outputs_ = json::array();
};

std::string growth_text(double exponent, bool log_factor) {
  return "T^" + brief(exponent) + (log_factor ? " log T" : "");
}

json regime_json(const RegimeReport& r, double u) {
  json j;
  j["u"] = u;
  j["dominating"] = to_string(r.dominating);
  j["exponent"] = r.exponent;
  j["log_factor"] = r.log_factor;
  j["limit_law"] = to_string(r.limit_law);
  j["limit_constant"] = std::isfinite(r.limit_constant) ? json(r.limit_constant) : json(nullptr);
  j["beta_star"] = std::isfinite(r.beta_star) ? json(r.beta_star) : json(nullptr);
  j["I_star"] = r.I_star;
  j["beta_starstar"] = r.beta_starstar ? json(*r.beta_starstar) : json(nullptr);
  j["diagnostic"] = r.diagnostic;
  return j;
}

std::string config_text_of_model(const std::string& path) { return load_model(path).canonical_text(); }

std::vector<double> levels_or_default(const Options& o) { return o.u.empty() ? std::vector<double>{1.0} : o.u; }

}  // namespace

int cmd_regime(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceModel model = load_model(o.model);
  json all = json::array();
  int status = kPass;
  for (double u : levels_or_default(o)) {
    const RegimeReport r = classify_regime(model, u);
    all.push_back(regime_json(r, u));
    if (r.dominating == Chaos::Boundary) status = kMismatch;
    if (o.json) continue;
    out << "u=" << brief(u) << ": ";
    if (r.dominating == Chaos::Boundary) {
      out << "Boundary: " << r.diagnostic << '\n';
    } else {
      out << to_string(r.dominating) << ", " << growth_text(r.exponent, r.log_factor) << ", "
          << to_string(r.limit_law) << " (constant " << brief(r.limit_constant) << ")\n";
    }
  }
  if (o.json) out << all.dump(2) << '\n';
  if (!o.out_dir.empty()) {
    Manifest m("regime", model.canonical_text(), 0);
    m.write_json(o.out_dir, "regime.json", json{{"levels", all}});
    m.finish(o.out_dir);
  }
  return status;
}

int cmd_variance(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceModel model = load_model(o.model);
  if (o.T.empty()) throw CLI::ValidationError("--T", "at least one horizon is required");
  std::ostringstream csv;
  csv << "u,T,q,variance,share\n";
  json rows = json::array();
  for (double u : levels_or_default(o))
    for (double T : o.T) {
      const ChaosVarianceBreakdown b = var_total(model, u, T, o.qmax);
      const double denom = b.total + b.tail_bound;
      if (!o.json) out << "u=" << brief(u) << " T=" << brief(T) << "\n  q  variance        share\n";
      json jb;
      jb["u"] = u;
      jb["T"] = T;
      jb["per_q"] = json::array();
      for (int q = 1; q <= b.q_max; ++q) {
        // J_q(u) = 0 exactly (odd Hermite polynomials at 0): the row is absent, not zero.
        if (j_coefficient(q, u) == 0.0) continue;
        const double v = b.per_q[q - 1];
        csv << num(u) << ',' << num(T) << ',' << q << ',' << num(v) << ',' << num(v / denom) << '\n';
        jb["per_q"].push_back({{"q", q}, {"variance", v}, {"share", v / denom}});
        if (!o.json) {
          char line[96];
          std::snprintf(line, sizeof line, "  %-2d %-15.8g %.6f\n", q, v, v / denom);
          out << line;
        }
      }
      csv << num(u) << ',' << num(T) << ",tail," << num(b.tail_bound) << ',' << num(b.tail_bound / denom) << '\n';
      jb["tail_bound"] = b.tail_bound;
      jb["tail_share"] = b.tail_bound / denom;
      jb["total"] = b.total;
      rows.push_back(jb);
      if (!o.json)
        out << "  tail <= " << brief(b.tail_bound) << " (share " << brief(b.tail_bound / denom) << ")\n  total "
            << num(b.total) << '\n';
    }
  if (o.json) out << rows.dump(2) << '\n';
  if (!o.out_dir.empty()) {
    Manifest m("variance", model.canonical_text(), 0);
    m.write_csv(o.out_dir, "variance.csv", csv.str());
    m.write_json(o.out_dir, "variance.json", json{{"breakdowns", rows}});
    m.finish(o.out_dir);
  }
  return kPass;
}

int cmd_simulate(const Options& o, std::ostream& out, std::ostream&) {
  const CovarianceModel model = load_model(o.model);
  const double T = o.T.empty() ? 16.0 : o.T.front();
  const std::uint64_t seed = o.seed.value_or(12345);
  const SphereQuadrature sphere(o.n_colatitude, o.n_longitude);
  const FieldSimulator sim(model, sphere, TimeGrid::from_step(T, o.dt));
  const FieldSample s = sim.sample(seed, 0);
  json summary;
  summary["T"] = T;
  summary["dt"] = o.dt;
  summary["n_steps"] = s.grid.n_steps;
  summary["sphere"] = {{"n_colatitude", o.n_colatitude}, {"n_longitude", o.n_longitude}};
  summary["master_seed"] = seed;
  summary["model_hash"] = content_hash(model.canonical_text());
  summary["M_T"] = json::array();
  for (double u : levels_or_default(o)) summary["M_T"].push_back({{"u", u}, {"value", m_functional(s, sphere, u)}});
  if (o.json) {
    out << summary.dump(2) << '\n';
  } else {
    out << "simulated " << s.grid.n_steps << " time slices on " << sphere.size() << " sphere points\n";
    for (const auto& e : summary["M_T"])
      out << "  M_T(" << brief(e["u"].get<double>()) << ") = " << num(e["value"].get<double>()) << '\n';
  }
  if (!o.out_dir.empty()) {
    Manifest m("simulate", model.canonical_text() + "T=" + num(T) + " dt=" + num(o.dt), seed);
    std::ostringstream csv;
    write_field_csv(s, csv);
    m.write_csv(o.out_dir, "field.csv", csv.str());
    m.write_json(o.out_dir, "field.json", summary);
    m.finish(o.out_dir);
  }
  return kPass;
}

namespace {

ExperimentConfig experiment_from(const Options& o) {
  ExperimentConfig c = load_experiment(o.config);
  if (o.seed) c.master_seed = *o.seed;
  if (!o.u.empty()) c.levels = o.u;
  if (!o.T.empty()) c.T_ladder = o.T;
  c.threads = o.threads;
  c.validate();
  return c;
}

}  // namespace

int cmd_mc(const Options& o, std::ostream& out, std::ostream&) {
  const ExperimentConfig c = experiment_from(o);
  const ReplicateTable table = run_experiment(c);
  const int last = static_cast<int>(c.T_ladder.size()) - 1;
  const double T_max = c.T_ladder.back();
  json levels = json::array();
  bool all_pass = true;
  std::ostringstream report;
  for (std::size_t li = 0; li < c.levels.size(); ++li) {
    const double u = c.levels[li];
    const RegimeReport regime = classify_regime(c.model, u);
    json j = regime_json(regime, u);
    report << "u=" << brief(u) << "  " << to_string(regime.dominating) << ", "
           << growth_text(regime.exponent, regime.log_factor) << ", " << to_string(regime.limit_law) << '\n';
    if (c.T_ladder.size() >= 4) {
      const VarianceFit fit = fit_variance_exponent(table, u, regime.log_factor);
      // The log-corrected fit regresses V / log T, whose slope targets the power alone.
      const bool ok = regime.dominating != Chaos::Boundary && std::abs(fit.slope - regime.exponent) <= o.tolerance;
      all_pass = all_pass && ok;
      j["fit"] = {{"slope", fit.slope},         {"slope_se", fit.slope_se}, {"intercept", fit.intercept},
                  {"r_squared", fit.r_squared}, {"log_corrected", fit.log_corrected},
                  {"T", fit.T},                 {"variance", fit.variance}, {"variance_se", fit.variance_se},
                  {"tolerance", o.tolerance},   {"pass", ok}};
      report << "  slope " << brief(fit.slope) << " +- " << brief(fit.slope_se) << " (r^2 " << brief(fit.r_squared)
             << ") vs " << brief(regime.exponent) << " +- " << brief(o.tolerance) << ": " << (ok ? "PASS" : "FAIL")
             << '\n';
    } else {
      report << "  slope: ladder has fewer than 4 points, no fit\n";
    }
    if (c.replications >= 200 && regime.dominating != Chaos::Boundary) {
      const double v = var_total_discrete(c.model, u, T_max, c.q_max, c.dt).total;
      const Eigen::VectorXd z = table.values(static_cast<int>(li), last) / std::sqrt(v);
      DistributionReference ref;
      ref.seed = stream_seed(c.master_seed, li, 0, 0, 11);
      if (regime.limit_law == LimitLaw::CompositeRosenblatt2) {
        const RosenblattWeights w = composite_weights(c.model);
        RosenblattParams p;
        p.beta = w.beta;
        p.n_terms = o.n_terms;
        p.weights = w.weights;
        ref.kind = DistributionReference::Kind::CompositeRosenblatt;
        ref.reference_samples = sample_composite(p, c.replications, stream_seed(c.master_seed, li, 0, 0, 12), c.threads);
      }
      const bool gaussian = regime.limit_law == LimitLaw::Gaussian;
      if (gaussian || regime.limit_law == LimitLaw::CompositeRosenblatt2) {
        const DistributionTest t = test_distribution(z, ref);
        all_pass = all_pass && t.pass;
        j["distribution"] = {{"T", T_max},        {"reference", gaussian ? "Normal" : "CompositeRosenblatt"},
                             {"statistic_name", t.statistic_name}, {"statistic", t.statistic},
                             {"threshold", t.threshold},           {"pass", t.pass},
                             {"standardizing_variance", v}};
        report << "  " << (gaussian ? "normality" : "composite law") << " at T=" << brief(T_max) << ": "
               << t.statistic_name << " " << brief(t.statistic) << " vs " << brief(t.threshold) << ": "
               << (t.pass ? "PASS" : "FAIL") << '\n';
      } else {
        report << "  no reference law implemented for " << to_string(regime.limit_law) << '\n';
      }
    }
    levels.push_back(j);
  }
  json summary{{"levels", levels},
               {"replications", c.replications},
               {"T_ladder", c.T_ladder},
               {"master_seed", c.master_seed},
               {"policy", "distribution tests at the largest ladder T"},
               {"pass", all_pass}};
  if (o.json)
    out << summary.dump(2) << '\n';
  else
    out << report.str() << (all_pass ? "overall: PASS\n" : "overall: FAIL\n");
  if (!o.out_dir.empty()) {
    Manifest m("mc", read_text_file(o.config) + "levels=" + json(c.levels).dump() + " T=" + json(c.T_ladder).dump(),
               c.master_seed);
    std::ostringstream csv;
    write_table_csv(table, csv);
    m.write_csv(o.out_dir, "replicates.csv", csv.str());
    m.write_json(o.out_dir, "summary.json", summary);
    m.finish(o.out_dir);
  }
  return all_pass ? kPass : kMismatch;
}

int cmd_corr(const Options& o, std::ostream& out, std::ostream&) {
  const ExperimentConfig c = experiment_from(o);
  const CorrelationReport r = correlation_experiment(c);
  const bool pass = !r.points.empty() && r.points.back().corr >= 0.9 && r.rank_trend > 0.0;
  json pts = json::array();
  std::ostringstream csv;
  csv << "T,corr,se\n";
  for (const auto& p : r.points) {
    pts.push_back({{"T", p.T}, {"corr", p.corr}, {"se", p.se}});
    csv << num(p.T) << ',' << num(p.corr) << ',' << num(p.se) << '\n';
  }
  json summary{{"ell_star", r.ell_star}, {"points", pts},   {"rank_trend", r.rank_trend},
               {"increasing", r.increasing}, {"pass", pass}, {"master_seed", c.master_seed}};
  if (o.json) {
    out << summary.dump(2) << '\n';
  } else {
    out << "l* = " << r.ell_star << '\n';
    for (const auto& p : r.points) out << "  T=" << brief(p.T) << "  corr " << brief(p.corr) << " +- " << brief(p.se) << '\n';
    out << "  rank trend " << brief(r.rank_trend) << (pass ? ": PASS\n" : ": FAIL\n");
  }
  if (!o.out_dir.empty()) {
    Manifest m("corr", read_text_file(o.config) + "T=" + json(c.T_ladder).dump(), c.master_seed);
    m.write_csv(o.out_dir, "correlation.csv", csv.str());
    m.write_json(o.out_dir, "correlation.json", summary);
    m.finish(o.out_dir);
  }
  return pass ? kPass : kMismatch;
}

int cmd_rosenblatt(const Options& o, std::ostream& out, std::ostream&) {
  RosenblattParams p;
  p.beta = o.beta;
  p.n_terms = o.n_terms;
  if (!o.weights.empty()) p.weights = Eigen::Map<const Eigen::VectorXd>(o.weights.data(), o.weights.size());
  const std::uint64_t seed = o.seed.value_or(12345);
  const RosenblattSampler sampler(p);
  const Eigen::VectorXd x = sampler.composite(o.samples, seed, o.threads);
  const KStatistics k = k_statistics(x);
  const double m = mean(x), m_se = mean_se(x), v = sample_variance(x), v_se = variance_se(x);
  // Unit variance holds for the standard law and for weights with unit norm.
  const double v_target = o.weights.empty() ? 1.0 : p.weights.squaredNorm();
  const bool pass = std::abs(m) <= 4.0 * m_se && std::abs(v - v_target) <= 4.0 * v_se;
  json summary{{"beta", p.beta},   {"n_terms", p.n_terms},   {"samples", o.samples}, {"master_seed", seed},
               {"weights", o.weights}, {"mean", m},         {"mean_se", m_se},      {"variance", v},
               {"variance_se", v_se},  {"k3", k.k3},        {"k4", k.k4},           {"pass", pass}};
  if (o.weights.empty()) {
    summary["kappa3"] = cumulant(3, p.beta).value;
    summary["kappa4"] = cumulant(4, p.beta).value;
  }
  if (o.json) {
    out << summary.dump(2) << '\n';
  } else {
    out << (o.weights.empty() ? "Rosenblatt" : "composite Rosenblatt") << " beta=" << brief(p.beta) << ", "
        << o.samples << " samples, n_terms=" << p.n_terms << '\n'
        << "  mean " << brief(m) << " +- " << brief(m_se) << "\n  variance " << brief(v) << " +- " << brief(v_se)
        << " (target " << brief(v_target) << ")\n  k3 " << brief(k.k3) << "  k4 " << brief(k.k4) << '\n';
    if (o.weights.empty())
      out << "  cumulant route: kappa3 " << brief(summary["kappa3"].get<double>()) << "  kappa4 "
          << brief(summary["kappa4"].get<double>()) << '\n';
    out << (pass ? "moments: PASS\n" : "moments: FAIL\n");
  }
  if (!o.out_dir.empty()) {
    std::ostringstream params;
    params << "beta=" << num(p.beta) << " n_terms=" << p.n_terms << " samples=" << o.samples << " weights=";
    for (double w : o.weights) params << num(w) << ';';
    Manifest man("rosenblatt", params.str(), seed);
    std::ostringstream csv;
    csv << "x\n";
    for (Eigen::Index i = 0; i < x.size(); ++i) csv << num(x(i)) << '\n';
    man.write_csv(o.out_dir, "samples.csv", csv.str());
    man.write_json(o.out_dir, "summary.json", summary);
    man.finish(o.out_dir);
  }
  return pass ? kPass : kMismatch;
}

int cmd_verify(const Options& o, std::ostream& out, std::ostream& err) {
  const fs::path dir = o.out_dir.empty() ? fs::path(".") : fs::path(o.out_dir);
  const json m = json::parse(read_text_file((dir / "manifest.json").string()));
  bool ok = true;
  for (const auto& entry : m.at("outputs")) {
    const std::string name = entry.at("path");
    std::string bytes;
    try {
      bytes = read_text_file((dir / name).string());
    } catch (const std::exception&) {
      err << "integrity error: " << name << " is missing\n";
      ok = false;
      continue;
    }
    const bool same = content_hash(bytes) == entry.at("hash").get<std::string>();
    const std::string tag = "# manifest=" + m.at("manifest").get<std::string>();
    const bool stamped = name.ends_with(".csv") ? bytes.rfind(tag, 0) == 0 : true;
    if (!same || !stamped) {
      err << "integrity error: " << name << " does not match the manifest\n";
      ok = false;
    } else {
      out << name << ": ok\n";
    }
  }
  return ok ? kPass : kMismatch;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Excursion functionals of Gaussian fields on the sphere cross time"};
  app.require_subcommand(1);
  Options o;
  o.threads = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));

  auto common = [&](CLI::App* s) {
    s->add_option("--u", o.u, "levels");
    s->add_option("--seed", o.seed, "master seed");
    s->add_option("--threads", o.threads, "worker threads (wall time only)")->check(CLI::PositiveNumber);
    s->add_option("--out-dir", o.out_dir, "directory for data files and the manifest");
    s->add_flag("--json", o.json, "print the JSON record instead of the text report");
  };
  auto* regime = app.add_subcommand("regime", "classify the asymptotic regime of a model");
  regime->add_option("--model", o.model, "model file")->required();
  common(regime);

  auto* simulate = app.add_subcommand("simulate", "simulate one field and report M_T(u)");
  simulate->add_option("--model", o.model, "model file")->required();
  simulate->add_option("--T", o.T, "horizon (first value used)");
  simulate->add_option("--dt", o.dt, "time step")->check(CLI::PositiveNumber);
  simulate->add_option("--n-colatitude", o.n_colatitude, "Gauss-Legendre colatitude nodes");
  simulate->add_option("--n-longitude", o.n_longitude, "longitude nodes");
  common(simulate);

  auto* variance = app.add_subcommand("variance", "exact chaos variance breakdown");
  variance->add_option("--model", o.model, "model file")->required();
  variance->add_option("--T", o.T, "horizons")->required();
  variance->add_option("--qmax", o.qmax, "largest chaos order")->check(CLI::PositiveNumber);
  common(variance);

  auto* mc = app.add_subcommand("mc", "Monte Carlo campaign: slopes and limit laws");
  mc->add_option("--config", o.config, "experiment file")->required();
  mc->add_option("--T", o.T, "override the T ladder");
  mc->add_option("--tolerance", o.tolerance, "allowed |slope - predicted|");
  mc->add_option("--n-terms", o.n_terms, "terms in the Rosenblatt reference sums");
  common(mc);

  auto* ros = app.add_subcommand("rosenblatt", "sample the (composite) Rosenblatt law");
  ros->add_option("--beta", o.beta, "memory parameter in (0, 1/2)");
  ros->add_option("--n", o.samples, "number of samples")->check(CLI::PositiveNumber);
  ros->add_option("--n-terms", o.n_terms, "terms in each approximating sum");
  ros->add_option("--weights", o.weights, "composite weights")->delimiter(',');
  common(ros);

  auto* corr = app.add_subcommand("corr", "correlation with the monochromatic functional");
  corr->add_option("--config", o.config, "experiment file")->required();
  corr->add_option("--T", o.T, "override the T ladder");
  common(corr);

  auto* verify = app.add_subcommand("verify", "check output files against their manifest");
  verify->add_option("--out-dir", o.out_dir, "directory holding manifest.json");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsage;
  }
  try {
    if (*regime) return cmd_regime(o, out, err);
    if (*simulate) return cmd_simulate(o, out, err);
    if (*variance) return cmd_variance(o, out, err);
    if (*mc) return cmd_mc(o, out, err);
    if (*ros) return cmd_rosenblatt(o, out, err);
    if (*corr) return cmd_corr(o, out, err);
    if (*verify) return cmd_verify(o, out, err);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kUsage;
  } catch (const ModelError& e) {
    err << "model error: " << e.what() << '\n';
    return kUsage;
  } catch (const CLI::Error& e) {
    err << "usage error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::logic_error& e) {
    // domain_error and invalid_argument: bad parameters rather than a failed check.
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kMismatch;
  }
  return kUsage;
}

}  // namespace sxt::cli
