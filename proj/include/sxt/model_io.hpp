#pragma once

#include "sxt/covariance_model.hpp"
#include "sxt/mc_harness.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace sxt {

/// Parse/validation failure carrying the 1-based line and column when known.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_, column_;
};

/// Model document:
///   autonormalize: false        # optional
///   multipoles:
///     - {ell: 0, c0: 12.566370614359172, beta: 1, alpha: 2}
/// Unknown keys are rejected.
CovarianceModel parse_model(const std::string& yaml_text);
CovarianceModel load_model(const std::string& path);

/// Experiment document: a `model` block (inline, as above) or `model_file`, plus
///   levels: [1.0]
///   T_ladder: [64, 128, 256, 512, 1024]
///   replications: 400
///   master_seed: 12345
///   dt: 0.25
///   sphere: {n_colatitude: 12, n_longitude: 24}
///   q_max: 7
///   ell_star: 1                 # optional, enables the monochromatic functional
ExperimentConfig parse_experiment(const std::string& yaml_text, const std::string& base_dir = ".");
ExperimentConfig load_experiment(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace sxt
