#include "ggc/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>

#include "ggc/errors.hpp"
#include "ggc/rng.hpp"
#include "ggc/var.hpp"

namespace ggc {

void validate_config(const McConfig& cfg) {
  if (cfg.n_realisations < 1) throw SchemaError("n_realisations", "must be positive");
  if (cfg.T_list.empty()) throw SchemaError("T", "must list at least one length");
  for (int T : cfg.T_list)
    if (T < 1) throw SchemaError("T", "lengths must be positive");
  if (cfg.p_fit < 0) throw SchemaError("p_fit", "must be positive (or omitted)");
  if (cfg.n_freq < 2) throw SchemaError("n_freq", "must be at least 2");
  if (!(cfg.alpha_threshold > 0.0 && cfg.alpha_threshold < 1.0))
    throw SchemaError("alpha_threshold", "must lie in (0, 1)");
  if (!(cfg.ci_mass > 0.0 && cfg.ci_mass < 1.0))
    throw SchemaError("ci_mass", "must lie in (0, 1)");
  if (cfg.n_null < 1) throw SchemaError("n_null", "must be positive");
  if (!cfg.use_single && !cfg.use_dual)
    throw SchemaError("estimators", "at least one estimator required");
  if (cfg.burn_in < 0) throw SchemaError("burn_in", "must be non-negative");
  if (cfg.workers < 0) throw SchemaError("workers", "must be non-negative");
}

namespace {

double quantile_sorted(const std::vector<double>& x, double q) {
  const std::size_t n = x.size();
  if (n == 1) return x[0];
  const double h = (static_cast<double>(n) - 1.0) * q;
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double frac = h - static_cast<double>(lo);
  return x[lo] + frac * (x[hi] - x[lo]);
}

}  // namespace

SummaryStats summarize(std::vector<double> samples, double ci_mass) {
  if (samples.empty()) throw EmptySample("summarize: no samples");
  if (!(ci_mass > 0.0 && ci_mass < 1.0)) throw Error("summarize: ci_mass must lie in (0,1)");
  for (double v : samples)
    if (!std::isfinite(v)) throw Error("summarize: non-finite sample");
  std::sort(samples.begin(), samples.end());

  SummaryStats s;
  s.median = quantile_sorted(samples, 0.5);
  s.lower = quantile_sorted(samples, (1.0 - ci_mass) / 2.0);
  s.upper = quantile_sorted(samples, 1.0 - (1.0 - ci_mass) / 2.0);
  double acc = 0.0;
  for (double v : samples) acc += std::abs(v - s.median);
  s.mad = acc / static_cast<double>(samples.size());
  return s;
}

void parallel_for(int n_items, int workers, const std::function<void(int)>& body) {
  if (n_items <= 0) return;
  workers = std::max(1, std::min(workers, n_items));
  if (workers == 1) {
    for (int i = 0; i < n_items; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  auto run = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n_items) return;
      try {
        body(i);
      } catch (...) {
        std::scoped_lock lock(error_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("GGC_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

std::uint64_t null_stream_id(int pair_index, int realisation) {
  return (1ull << 40) + static_cast<std::uint64_t>(pair_index) * (1ull << 24) +
         static_cast<std::uint64_t>(realisation);
}

VarModel null_model(const VarModel& model, int source, int target) {
  if (source == target || source < 0 || source >= model.n || target < 0 || target >= model.n)
    throw IndexError("null_model: bad channel pair");
  std::vector<MatrixXd> coeffs = model.coeffs;
  for (auto& a : coeffs) a(target, source) = 0.0;
  const double rho = companion_spectral_radius(coeffs);
  if (rho >= 1.0) throw UnstableNullModel(rho);

  VarModel out = model;
  out.coeffs = std::move(coeffs);
  out.spectral_radius = rho;
  return out;
}

namespace {

struct NullStats {
  std::vector<double> max_stats;  // included realisations only, in stream order
  int failures = 0;
};

// Max-over-frequency single-regression statistic for one pair under a given
// model, across `count` realisations seeded from the dedicated null stream.
NullStats null_max_statistics(const VarModel& model, int source, int target, int pair_index,
                              int count, const McConfig& cfg, int workers) {
  const int T = cfg.T_list.front();
  const int p = cfg.p_fit > 0 ? cfg.p_fit : model.p;

  std::vector<double> stats(count, 0.0);
  std::vector<char> failed(count, 0);
  parallel_for(count, workers, [&](int k) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, null_stream_id(pair_index, k));
    try {
      const TimeSeries ts = simulate_var(model, T, cfg.burn_in, seed);
      const VarModel fitted = fit_var_ols(ts, p);
      if (!fitted.stable()) throw UnstableFit(fitted.spectral_radius);
      stats[k] = gc_spectral_exact(fitted, source, target, cfg.n_freq).maxCoeff();
    } catch (const Error&) {
      failed[k] = 1;
    }
  });

  NullStats out;
  out.max_stats.reserve(count);
  for (int k = 0; k < count; ++k) {
    if (failed[k])
      ++out.failures;
    else
      out.max_stats.push_back(stats[k]);
  }
  return out;
}

}  // namespace

double null_threshold(const VarModel& model, int source, int target, const McConfig& cfg) {
  validate_config(cfg);
  const VarModel null = null_model(model, source, target);
  const int workers = resolve_workers(cfg.workers);
  const int pair_index = source * model.n + target;
  NullStats stats = null_max_statistics(null, source, target, pair_index, cfg.n_null, cfg, workers);
  if (stats.failures > 0.01 * cfg.n_null)
    throw TooManyFailures("null_threshold: " + std::to_string(stats.failures) + " of " +
                          std::to_string(cfg.n_null) + " null realisations failed");
  if (stats.max_stats.empty()) throw TooManyFailures("null_threshold: no usable realisations");
  std::sort(stats.max_stats.begin(), stats.max_stats.end());
  return quantile_sorted(stats.max_stats, cfg.alpha_threshold);
}

SpectralSummary run_spectral_experiment(const VarModel& model, const McConfig& cfg) {
  validate_config(cfg);
  if (!cfg.use_single)
    throw SchemaError("estimators", "the spectral experiment requires the single estimator");
  const int n = model.n;
  const int R = cfg.n_realisations;
  const int T = cfg.T_list.front();
  const int p = cfg.p_fit > 0 ? cfg.p_fit : model.p;
  const int workers = resolve_workers(cfg.workers);
  const int n_pairs = n * (n - 1);

  // estimates[pair][freq, realisation]; slots written by index, never shared.
  std::vector<Eigen::ArrayXXd> estimates(n_pairs);
  for (auto& e : estimates) e.resize(cfg.n_freq, R);
  std::vector<char> failed(R, 0);

  auto pair_slot = [&](int source, int target) {
    // dense ordering over source-major (source, target) pairs
    int slot = 0;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t) {
        if (s == t) continue;
        if (s == source && t == target) return slot;
        ++slot;
      }
    throw IndexError("pair_slot");
  };

  parallel_for(R, workers, [&](int k) {
    const std::uint64_t seed = derive_seed(cfg.master_seed, static_cast<std::uint64_t>(k));
    try {
      const TimeSeries ts = simulate_var(model, T, cfg.burn_in, seed);
      const auto [time_res, spec_res] = single_regression_gc(ts, p, cfg.n_freq);
      (void)time_res;
      for (int s = 0; s < n; ++s)
        for (int t = 0; t < n; ++t) {
          if (s == t) continue;
          estimates[pair_slot(s, t)].col(k) = spec_res.f(t, s);
        }
    } catch (const Error&) {
      failed[k] = 1;
    }
  });

  SpectralSummary summary;
  summary.grid = frequency_grid(cfg.n_freq);
  summary.config = cfg;
  summary.n_failures = static_cast<int>(std::count(failed.begin(), failed.end(), 1));
  summary.n_used = R - summary.n_failures;
  if (summary.n_failures > 0.01 * R)
    throw TooManyFailures("run_spectral_experiment: " + std::to_string(summary.n_failures) +
                          " of " + std::to_string(R) + " realisations failed");
  if (summary.n_used == 0) throw TooManyFailures("run_spectral_experiment: no usable realisations");

  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      PairSpectralSummary ps;
      ps.source = s;
      ps.target = t;
      ps.exact = gc_spectral_exact(model, s, t, cfg.n_freq);
      ps.median.resize(cfg.n_freq);
      ps.lower.resize(cfg.n_freq);
      ps.upper.resize(cfg.n_freq);
      const Eigen::ArrayXXd& est = estimates[pair_slot(s, t)];
      std::vector<double> column;
      column.reserve(summary.n_used);
      for (int f = 0; f < cfg.n_freq; ++f) {
        column.clear();
        for (int k = 0; k < R; ++k)
          if (!failed[k]) column.push_back(est(f, k));
        const SummaryStats st = summarize(column, cfg.ci_mass);
        ps.median(f) = st.median;
        ps.lower(f) = st.lower;
        ps.upper(f) = st.upper;
      }
      ps.threshold = null_threshold(model, s, t, cfg);
      summary.pairs.push_back(std::move(ps));
    }
  return summary;
}

SweepSummary run_bias_variance_experiment(const VarModel& model, const McConfig& cfg) {
  validate_config(cfg);
  const int n = model.n;
  const int R = cfg.n_realisations;
  const int workers = resolve_workers(cfg.workers);
  const GcTimeResult exact = gc_all_pairs_time(model);

  SweepSummary summary;
  summary.config = cfg;

  const int n_T = static_cast<int>(cfg.T_list.size());
  // values[T, estimator][pair][realisation]
  struct Table {
    std::vector<std::vector<double>> single, dual;  // [pair slot][k]
    std::vector<char> failed;
  };
  std::vector<Table> tables(n_T);

  for (int ti = 0; ti < n_T; ++ti) {
    const int T = cfg.T_list[ti];
    const int p = cfg.p_fit > 0 ? cfg.p_fit : model.p;
    Table& tab = tables[ti];
    tab.single.assign(n * n, std::vector<double>(R, 0.0));
    tab.dual.assign(n * n, std::vector<double>(R, 0.0));
    tab.failed.assign(R, 0);

    parallel_for(R, workers, [&](int k) {
      const std::uint64_t stream =
          static_cast<std::uint64_t>(ti) * static_cast<std::uint64_t>(R) + k;
      const std::uint64_t seed = derive_seed(cfg.master_seed, stream);
      try {
        const TimeSeries ts = simulate_var(model, T, cfg.burn_in, seed);
        if (cfg.use_single) {
          const GcTimeResult res = single_regression_gc_time(ts, p);
          for (int t = 0; t < n; ++t)
            for (int s = 0; s < n; ++s)
              if (s != t) tab.single[t * n + s][k] = res.F(t, s);
        }
        if (cfg.use_dual) {
          const GcTimeResult res = dual_regression_all_pairs(ts, p, p);
          for (int t = 0; t < n; ++t)
            for (int s = 0; s < n; ++s)
              if (s != t) tab.dual[t * n + s][k] = res.F(t, s);
        }
      } catch (const Error&) {
        tab.failed[k] = 1;
      }
    });

    const int failures = static_cast<int>(std::count(tab.failed.begin(), tab.failed.end(), 1));
    summary.failures_by_T[T] = failures;
    if (failures > 0.01 * R)
      throw TooManyFailures("run_bias_variance_experiment: " + std::to_string(failures) + " of " +
                            std::to_string(R) + " realisations failed at T = " + std::to_string(T));
    if (failures == R)
      throw TooManyFailures("run_bias_variance_experiment: no usable realisations");
  }

  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      for (int ti = 0; ti < n_T; ++ti) {
        const Table& tab = tables[ti];
        auto make_cell = [&](Estimator est, const std::vector<double>& all) {
          std::vector<double> included;
          included.reserve(R);
          for (int k = 0; k < R; ++k)
            if (!tab.failed[k]) included.push_back(all[k]);
          const SummaryStats st = summarize(included, cfg.ci_mass);
          SweepCell cell;
          cell.source = s;
          cell.target = t;
          cell.T = cfg.T_list[ti];
          cell.estimator = est;
          cell.exact = exact.F(t, s);
          cell.median = st.median;
          cell.bias = st.median - cell.exact;
          cell.mad = st.mad;
          return cell;
        };
        // "dual" sorts before "single"
        if (cfg.use_dual) summary.cells.push_back(make_cell(Estimator::Dual, tab.dual[t * n + s]));
        if (cfg.use_single)
          summary.cells.push_back(make_cell(Estimator::Single, tab.single[t * n + s]));
      }
    }
  return summary;
}

}  // namespace ggc
