#include "ggc/config.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "ggc/errors.hpp"
#include "ggc/version.hpp"

namespace ggc {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& scope) {
  for (const auto& [key, value] : obj.items()) {
    (void)value;
    if (!allowed.count(key))
      throw SchemaError(scope.empty() ? key : scope + "." + key, "unknown key (strict schema)");
  }
}

int require_positive_int(const json& obj, const std::string& key, const std::string& scope) {
  const std::string field = scope.empty() ? key : scope + "." + key;
  if (!obj.contains(key)) throw SchemaError(field, "missing");
  const json& v = obj.at(key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw SchemaError(field, "must be a positive integer");
  return v.get<int>();
}

MatrixXd parse_matrix(const json& rows, int n, const std::string& field) {
  if (!rows.is_array() || static_cast<int>(rows.size()) != n)
    throw SchemaError(field, "expected " + std::to_string(n) + " rows");
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    const json& row = rows.at(i);
    if (!row.is_array() || static_cast<int>(row.size()) != n)
      throw SchemaError(field, "expected " + std::to_string(n) + " columns per row");
    for (int j = 0; j < n; ++j) {
      const json& v = row.at(j);
      if (!v.is_number()) throw SchemaError(field, "matrix entries must be numbers");
      m(i, j) = v.get<double>();
    }
  }
  return m;
}

McConfig parse_experiment(const json& exp) {
  static const std::set<std::string> allowed{"n_realisations", "T",         "p_fit",
                                             "n_freq",         "alpha_threshold",
                                             "ci_mass",        "n_null",    "master_seed",
                                             "estimators"};
  reject_unknown_keys(exp, allowed, "experiment");

  McConfig cfg;
  if (exp.contains("n_realisations"))
    cfg.n_realisations = require_positive_int(exp, "n_realisations", "experiment");
  if (exp.contains("T")) {
    const json& t = exp.at("T");
    cfg.T_list.clear();
    if (t.is_number_integer()) {
      cfg.T_list.push_back(t.get<int>());
    } else if (t.is_array() && !t.empty()) {
      for (const json& v : t) {
        if (!v.is_number_integer()) throw SchemaError("experiment.T", "lengths must be integers");
        cfg.T_list.push_back(v.get<int>());
      }
    } else {
      throw SchemaError("experiment.T", "must be an integer or a non-empty integer array");
    }
    for (int T : cfg.T_list)
      if (T < 1) throw SchemaError("experiment.T", "lengths must be positive");
  }
  if (exp.contains("p_fit")) cfg.p_fit = require_positive_int(exp, "p_fit", "experiment");
  if (exp.contains("n_freq")) cfg.n_freq = require_positive_int(exp, "n_freq", "experiment");
  if (exp.contains("alpha_threshold")) {
    const json& v = exp.at("alpha_threshold");
    if (!v.is_number()) throw SchemaError("experiment.alpha_threshold", "must be a number");
    cfg.alpha_threshold = v.get<double>();
  }
  if (exp.contains("ci_mass")) {
    const json& v = exp.at("ci_mass");
    if (!v.is_number()) throw SchemaError("experiment.ci_mass", "must be a number");
    cfg.ci_mass = v.get<double>();
  }
  if (exp.contains("n_null")) cfg.n_null = require_positive_int(exp, "n_null", "experiment");
  if (exp.contains("master_seed")) {
    const json& v = exp.at("master_seed");
    if (!v.is_number_integer())
      throw SchemaError("experiment.master_seed", "must be an integer");
    cfg.master_seed = v.get<std::uint64_t>();
  }
  if (exp.contains("estimators")) {
    const json& v = exp.at("estimators");
    if (!v.is_array() || v.empty())
      throw SchemaError("experiment.estimators", "must be a non-empty array");
    cfg.use_single = false;
    cfg.use_dual = false;
    for (const json& e : v) {
      if (e == "single" && !cfg.use_single)
        cfg.use_single = true;
      else if (e == "dual" && !cfg.use_dual)
        cfg.use_dual = true;
      else
        throw SchemaError("experiment.estimators", "entries must be unique, 'single' or 'dual'");
    }
  }
  validate_config(cfg);
  return cfg;
}

int line_of_byte(const std::string& text, std::size_t byte) {
  int line = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i)
    if (text[i] == '\n') ++line;
  return line;
}

json model_to_json(const VarModel& model) {
  json coeffs = json::array();
  for (const auto& a : model.coeffs) {
    json rows = json::array();
    for (int i = 0; i < model.n; ++i) {
      json row = json::array();
      for (int j = 0; j < model.n; ++j) row.push_back(a(i, j));
      rows.push_back(std::move(row));
    }
    coeffs.push_back(std::move(rows));
  }
  json sigma = json::array();
  for (int i = 0; i < model.n; ++i) {
    json row = json::array();
    for (int j = 0; j < model.n; ++j) row.push_back(model.sigma(i, j));
    sigma.push_back(std::move(row));
  }
  return json{{"n", model.n}, {"p", model.p}, {"coeffs", coeffs}, {"sigma", sigma}};
}

json experiment_to_json(const McConfig& cfg) {
  json estimators = json::array();
  if (cfg.use_single) estimators.push_back("single");
  if (cfg.use_dual) estimators.push_back("dual");
  return json{{"n_realisations", cfg.n_realisations},
              {"T", cfg.T_list},
              {"p_fit", cfg.p_fit},
              {"n_freq", cfg.n_freq},
              {"alpha_threshold", cfg.alpha_threshold},
              {"ci_mass", cfg.ci_mass},
              {"n_null", cfg.n_null},
              {"master_seed", cfg.master_seed},
              {"estimators", estimators}};
}

}  // namespace

std::pair<VarModel, McConfig> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open config file: " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();

  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(line_of_byte(text, e.byte), e.what());
  }
  if (!root.is_object()) throw SchemaError("", "top level must be an object");
  reject_unknown_keys(root, {"n", "p", "coeffs", "sigma", "experiment"}, "");

  const int n = require_positive_int(root, "n", "");
  const int p = require_positive_int(root, "p", "");
  if (!root.contains("coeffs")) throw SchemaError("coeffs", "missing");
  const json& coeffs_json = root.at("coeffs");
  if (!coeffs_json.is_array() || static_cast<int>(coeffs_json.size()) != p)
    throw SchemaError("coeffs", "expected " + std::to_string(p) + " lag matrices");
  std::vector<MatrixXd> coeffs;
  coeffs.reserve(p);
  for (int k = 0; k < p; ++k)
    coeffs.push_back(parse_matrix(coeffs_json.at(k), n, "coeffs[" + std::to_string(k) + "]"));
  if (!root.contains("sigma")) throw SchemaError("sigma", "missing");
  const MatrixXd sigma = parse_matrix(root.at("sigma"), n, "sigma");

  VarModel model = validate_and_build_model(coeffs, sigma);

  McConfig cfg;
  if (root.contains("experiment")) {
    if (!root.at("experiment").is_object())
      throw SchemaError("experiment", "must be an object");
    cfg = parse_experiment(root.at("experiment"));
  }
  return {std::move(model), cfg};
}

void write_run_manifest(const std::string& path, const RunManifest& manifest,
                        const VarModel& model, const McConfig& cfg) {
  for (const std::string& out : manifest.outputs) {
    std::error_code ec;
    const auto size = std::filesystem::file_size(out, ec);
    if (ec || size == 0) throw Error("manifest output missing or empty: " + out);
  }
  json j{{"tool_version", manifest.tool_version},
         {"duration_seconds", manifest.duration_seconds},
         {"failures", manifest.failures},
         {"outputs", manifest.outputs},
         {"config", model_to_json(model)}};
  j["config"]["experiment"] = experiment_to_json(cfg);
  std::ofstream out(path);
  if (!out) throw Error("cannot write manifest: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace ggc
