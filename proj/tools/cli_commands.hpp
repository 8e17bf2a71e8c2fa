#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace sxt::cli {

/// Exit statuses shared by every subcommand.
enum Exit : int { kPass = 0, kMismatch = 1, kUsage = 2 };

struct Options {
  std::string model;
  std::string config;
  std::string out_dir;
  std::vector<double> u;
  std::vector<double> T;
  int qmax = 7;
  std::optional<std::uint64_t> seed;
  int threads = 1;
  bool json = false;  // JSON on stdout instead of the text report

  // simulate
  double dt = 0.25;
  int n_colatitude = 12;
  int n_longitude = 24;
  // rosenblatt
  double beta = 0.25;
  long samples = 10000;
  int n_terms = 1 << 16;
  std::vector<double> weights;
  // mc, corr
  double tolerance = 0.15;
};

/// Each returns an Exit value; reports go to out, diagnostics to err.
int cmd_regime(const Options& o, std::ostream& out, std::ostream& err);
int cmd_simulate(const Options& o, std::ostream& out, std::ostream& err);
int cmd_variance(const Options& o, std::ostream& out, std::ostream& err);
int cmd_mc(const Options& o, std::ostream& out, std::ostream& err);
int cmd_rosenblatt(const Options& o, std::ostream& out, std::ostream& err);
int cmd_corr(const Options& o, std::ostream& out, std::ostream& err);
/// Recomputes the content hashes listed in <out-dir>/manifest.json.
int cmd_verify(const Options& o, std::ostream& out, std::ostream& err);

/// Parses argv and dispatches; never throws.
int run(int argc, char** argv, std::ostream& out, std::ostream& err);

/// 64-bit FNV-1a, printed as 16 hex digits.
std::string content_hash(const std::string& bytes);

}  // namespace sxt::cli
