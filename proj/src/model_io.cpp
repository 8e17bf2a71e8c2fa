#include "sxt/model_io.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace sxt {

ConfigError::ConfigError(const std::string& what, int line, int column)
    : std::runtime_error(line > 0 ? what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"
                                  : what),
      line_(line),
      column_(column) {}

namespace {

[[noreturn]] void fail(const YAML::Node& at, const std::string& what) {
  const YAML::Mark m = at.Mark();
  if (m.is_null()) throw ConfigError(what);
  throw ConfigError(what, m.line + 1, m.column + 1);
}

void require_map(const YAML::Node& n, const std::string& what) {
  if (!n.IsMap()) fail(n, what + " must be a mapping");
}

void only_keys(const YAML::Node& n, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& kv : n) {
    const auto key = kv.first.as<std::string>();
    if (!allowed.count(key)) fail(kv.first, "unknown key '" + key + "' in " + where);
  }
}

template <typename T>
T scalar(const YAML::Node& n, const std::string& name) {
  if (!n.IsScalar()) fail(n, "'" + name + "' must be a scalar");
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    fail(n, "'" + name + "' has the wrong type");
  }
}

template <typename T>
std::vector<T> sequence(const YAML::Node& n, const std::string& name) {
  if (!n.IsSequence()) fail(n, "'" + name + "' must be a list");
  std::vector<T> out;
  for (const auto& item : n) out.push_back(scalar<T>(item, name));
  return out;
}

CovarianceModel model_from_node(const YAML::Node& root) {
  require_map(root, "model");
  only_keys(root, {"autonormalize", "multipoles"}, "model");
  const bool autonormalize = root["autonormalize"] ? scalar<bool>(root["autonormalize"], "autonormalize") : false;
  const YAML::Node list = root["multipoles"];
  if (!list) fail(root, "model needs a 'multipoles' list");
  if (!list.IsSequence()) fail(list, "'multipoles' must be a list");
  std::vector<Multipole> entries;
  for (const auto& item : list) {
    require_map(item, "multipole entry");
    only_keys(item, {"ell", "c0", "beta", "alpha"}, "multipole entry");
    if (!item["ell"] || !item["c0"]) fail(item, "multipole entry needs 'ell' and 'c0'");
    Multipole m;
    m.ell = scalar<int>(item["ell"], "ell");
    m.c0 = scalar<double>(item["c0"], "c0");
    if (item["beta"]) m.beta = scalar<double>(item["beta"], "beta");
    if (item["alpha"]) m.alpha = scalar<double>(item["alpha"], "alpha");
    entries.push_back(m);
  }
  try {
    return CovarianceModel::create(std::move(entries), autonormalize);
  } catch (const ModelError& e) {
    fail(list, e.what());
  }
}

YAML::Node load_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(e.msg, e.mark.line + 1, e.mark.column + 1);
  }
}

}  // namespace

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CovarianceModel parse_model(const std::string& yaml_text) { return model_from_node(load_yaml(yaml_text)); }

CovarianceModel load_model(const std::string& path) {
  try {
    return parse_model(read_text_file(path));
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

ExperimentConfig parse_experiment(const std::string& yaml_text, const std::string& base_dir) {
  const YAML::Node root = load_yaml(yaml_text);
  require_map(root, "experiment");
  only_keys(root,
            {"model", "model_file", "levels", "T_ladder", "replications", "master_seed", "dt", "sphere", "q_max",
             "ell_star"},
            "experiment");
  if (root["model"] && root["model_file"]) fail(root, "give either 'model' or 'model_file', not both");
  std::optional<CovarianceModel> model;
  if (root["model"]) {
    model = model_from_node(root["model"]);
  } else if (root["model_file"]) {
    std::filesystem::path p = scalar<std::string>(root["model_file"], "model_file");
    if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
    model = load_model(p.string());
  } else {
    fail(root, "experiment needs 'model' or 'model_file'");
  }
  ExperimentConfig c{*model};
  if (root["levels"]) c.levels = sequence<double>(root["levels"], "levels");
  if (root["T_ladder"]) c.T_ladder = sequence<double>(root["T_ladder"], "T_ladder");
  if (root["replications"]) c.replications = scalar<int>(root["replications"], "replications");
  if (root["master_seed"]) c.master_seed = scalar<std::uint64_t>(root["master_seed"], "master_seed");
  if (root["dt"]) c.dt = scalar<double>(root["dt"], "dt");
  if (root["q_max"]) c.q_max = scalar<int>(root["q_max"], "q_max");
  if (root["ell_star"]) c.ell_star = scalar<int>(root["ell_star"], "ell_star");
  if (const YAML::Node s = root["sphere"]) {
    require_map(s, "sphere");
    only_keys(s, {"n_colatitude", "n_longitude"}, "sphere");
    if (s["n_colatitude"]) c.n_colatitude = scalar<int>(s["n_colatitude"], "n_colatitude");
    if (s["n_longitude"]) c.n_longitude = scalar<int>(s["n_longitude"], "n_longitude");
  }
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    fail(root, e.what());
  }
  return c;
}

ExperimentConfig load_experiment(const std::string& path) {
  const std::string base = std::filesystem::path(path).parent_path().string();
  try {
    return parse_experiment(read_text_file(path), base.empty() ? "." : base);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what(), e.line(), e.column());
  }
}

}  // namespace sxt
