#ifndef GGC_MC_HPP
#define GGC_MC_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <vector>

#include "ggc/gc.hpp"
#include "ggc/types.hpp"

namespace ggc {

enum class Estimator { Single, Dual };

/// Experiment configuration. T_list holds a single length for the spectral
/// experiment or the sweep grid for the bias/variance experiment.
struct McConfig {
  int n_realisations = 1000;
  std::vector<int> T_list{500};
  int p_fit = 0;  // 0 = model order
  int n_freq = 256;
  double alpha_threshold = 0.95;
  double ci_mass = 0.9;
  int n_null = 1000;
  std::uint64_t master_seed = 42;
  bool use_single = true;
  bool use_dual = true;
  int burn_in = 1000;
  int workers = 0;  // 0 = hardware concurrency
};

/// Throws SchemaError on out-of-range fields.
void validate_config(const McConfig& cfg);

struct SummaryStats {
  double median = 0, lower = 0, upper = 0, mad = 0;
};

/// Median, central ci_mass quantile band (linear interpolation between order
/// statistics) and mean absolute deviation around the median.
SummaryStats summarize(std::vector<double> samples, double ci_mass);

struct PairSpectralSummary {
  int source = 0, target = 0;  // 0-based
  Eigen::ArrayXd exact, median, lower, upper;
  double threshold = 0.0;  // critical value of the max-over-frequency null statistic
};

struct SpectralSummary {
  std::vector<double> grid;
  std::vector<PairSpectralSummary> pairs;  // ordered by (source, target)
  int n_failures = 0;
  int n_used = 0;
  McConfig config;
};

struct SweepCell {
  int source = 0, target = 0, T = 0;
  Estimator estimator = Estimator::Single;
  double exact = 0, median = 0, bias = 0, mad = 0;
};

struct SweepSummary {
  std::vector<SweepCell> cells;  // ordered by (source, target, T, estimator name)
  std::map<int, int> failures_by_T;
  McConfig config;
};

/// Deterministic work distribution: items are indexed, each worker pulls the
/// next index, and every side effect is keyed by the item index, so results
/// do not depend on the worker count.
void parallel_for(int n_items, int workers, const std::function<void(int)>& body);

/// Requested worker count, falling back to GGC_WORKERS and then to the
/// hardware concurrency.
int resolve_workers(int requested);

/// Per-realisation seed stream: the spectral/sweep experiments use stream
/// ids starting at 0; null-model simulation lives in a disjoint id range.
std::uint64_t null_stream_id(int pair_index, int realisation);

/// Null model for testing source -> target: every (A_k)_{target,source}
/// entry zeroed. Throws UnstableNullModel if the result is not stable.
VarModel null_model(const VarModel& model, int source, int target);

/// Critical value at level cfg.alpha_threshold of the max-over-frequency
/// single-regression statistic under the null model, from cfg.n_null
/// simulated realisations of length T_list[0].
double null_threshold(const VarModel& model, int source, int target, const McConfig& cfg);

/// Spectral experiment: per (pair, frequency) sample medians and central
/// confidence bands of the single-regression estimator over
/// cfg.n_realisations realisations, exact curves, and per-pair null
/// thresholds. Realisations with unstable fits are excluded and counted;
/// more than 1% of failures raises TooManyFailures.
SpectralSummary run_spectral_experiment(const VarModel& model, const McConfig& cfg);

/// Bias / mean-absolute-deviation sweep over cfg.T_list for the configured
/// estimators; bias is the sample median minus the exact value.
SweepSummary run_bias_variance_experiment(const VarModel& model, const McConfig& cfg);

}  // namespace ggc

#endif  // GGC_MC_HPP
