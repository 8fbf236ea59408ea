#ifndef GGC_CONFIG_HPP
#define GGC_CONFIG_HPP

#include <string>
#include <vector>

#include "ggc/mc.hpp"
#include "ggc/types.hpp"

namespace ggc {

/// Loads a model + experiment configuration file. The schema is closed:
/// unknown keys anywhere are rejected.
///
/// {
///   "n": int, "p": int,
///   "coeffs": [p row-major n x n matrices],
///   "sigma":  [n x n matrix],
///   "experiment": {                      // optional, defaults applied
///     "n_realisations": int, "T": int | [int], "p_fit": int, "n_freq": int,
///     "alpha_threshold": float, "ci_mass": float, "n_null": int,
///     "master_seed": int, "estimators": ["single", "dual"]
///   }
/// }
///
/// Throws ParseError(line), SchemaError(field), and model validation errors.
std::pair<VarModel, McConfig> load_config(const std::string& path);

/// Run metadata written next to experiment outputs.
struct RunManifest {
  std::string tool_version;
  double duration_seconds = 0.0;
  int failures = 0;
  std::vector<std::string> outputs;
};

/// Writes the manifest as JSON, echoing the model and experiment config.
/// Every listed output must exist and be non-empty.
void write_run_manifest(const std::string& path, const RunManifest& manifest,
                        const VarModel& model, const McConfig& cfg);

}  // namespace ggc

#endif  // GGC_CONFIG_HPP
