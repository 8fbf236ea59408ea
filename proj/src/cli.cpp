#include "ggc/cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>

#include "ggc/config.hpp"
#include "ggc/csv.hpp"
#include "ggc/errors.hpp"
#include "ggc/gc.hpp"
#include "ggc/mc.hpp"
#include "ggc/var.hpp"
#include "ggc/version.hpp"

namespace ggc {

namespace {

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ExperimentArgs {
  std::string model_path;
  std::string out_path;
  std::int64_t seed = -1;
  int realisations = 0;
  int workers = 0;
};

void add_experiment_flags(CLI::App* cmd, ExperimentArgs& args, const std::string& default_out) {
  cmd->add_option("--model", args.model_path, "model/experiment config (JSON)")->required();
  args.out_path = default_out;
  cmd->add_option("--out", args.out_path, "output CSV path");
  cmd->add_option("--seed", args.seed, "master seed override");
  cmd->add_option("--realisations", args.realisations, "realisation count override");
  cmd->add_option("--workers", args.workers, "worker thread count (env GGC_WORKERS)");
}

McConfig apply_overrides(McConfig cfg, const ExperimentArgs& args) {
  if (args.seed >= 0) cfg.master_seed = static_cast<std::uint64_t>(args.seed);
  if (args.realisations > 0) cfg.n_realisations = args.realisations;
  if (args.workers > 0) cfg.workers = args.workers;
  return cfg;
}

void print_time_result(const GcTimeResult& res, const char* estimator) {
  for (int s = 0; s < res.n; ++s)
    for (int t = 0; t < res.n; ++t) {
      if (s == t) continue;
      if (estimator)
        std::printf("%d,%d,%s,%s\n", s + 1, t + 1, estimator, fmt(res.F(t, s)).c_str());
      else
        std::printf("%d,%d,%s\n", s + 1, t + 1, fmt(res.F(t, s)).c_str());
    }
}

int cmd_exact(const std::string& model_path, int n_freq, const std::string& out_path) {
  const auto [model, cfg] = load_config(model_path);
  (void)cfg;
  std::printf("source,target,F\n");
  print_time_result(gc_all_pairs_time(model), nullptr);
  if (!out_path.empty()) {
    const GcSpectralResult spec = gc_all_pairs_spectral(model, n_freq);
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path);
    out << "source,target,freq,exact\n";
    for (int s = 0; s < model.n; ++s)
      for (int t = 0; t < model.n; ++t) {
        if (s == t) continue;
        const auto& f = spec.f(t, s);
        for (std::size_t k = 0; k < spec.grid.size(); ++k)
          out << (s + 1) << ',' << (t + 1) << ',' << fmt(spec.grid[k]) << ',' << fmt(f(k)) << '\n';
      }
  }
  return 0;
}

int cmd_estimate(const std::string& data_path, int p, int p_reduced, int n_freq,
                 const std::string& out_path) {
  const TimeSeries ts = read_time_series_csv(data_path);
  const auto [time_res, spec_res] = single_regression_gc(ts, p, n_freq);
  const GcTimeResult dual = dual_regression_all_pairs(ts, p, p_reduced > 0 ? p_reduced : p);
  std::printf("source,target,estimator,F\n");
  print_time_result(time_res, "single");
  print_time_result(dual, "dual");
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write " + out_path);
    out << "source,target,freq,single\n";
    for (int s = 0; s < ts.n; ++s)
      for (int t = 0; t < ts.n; ++t) {
        if (s == t) continue;
        const auto& f = spec_res.f(t, s);
        for (std::size_t k = 0; k < spec_res.grid.size(); ++k)
          out << (s + 1) << ',' << (t + 1) << ',' << fmt(spec_res.grid[k]) << ',' << fmt(f(k))
              << '\n';
      }
  }
  return 0;
}

int cmd_fig1(const ExperimentArgs& args) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [model, loaded] = load_config(args.model_path);
  const McConfig cfg = apply_overrides(loaded, args);
  const SpectralSummary summary = run_spectral_experiment(model, cfg);
  write_spectral_csv(summary, args.out_path);
  const auto t1 = std::chrono::steady_clock::now();

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.duration_seconds = std::chrono::duration<double>(t1 - t0).count();
  manifest.failures = summary.n_failures;
  manifest.outputs = {args.out_path};
  write_run_manifest(args.out_path + ".manifest.json", manifest, model, cfg);
  std::fprintf(stderr, "fig1: %d/%d realisations used, output %s\n", summary.n_used,
               cfg.n_realisations, args.out_path.c_str());
  return 0;
}

int cmd_fig2(const ExperimentArgs& args, const std::vector<int>& T_override) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto [model, loaded] = load_config(args.model_path);
  McConfig cfg = apply_overrides(loaded, args);
  if (!T_override.empty()) cfg.T_list = T_override;
  const SweepSummary summary = run_bias_variance_experiment(model, cfg);
  write_sweep_csv(summary, args.out_path);
  const auto t1 = std::chrono::steady_clock::now();

  RunManifest manifest;
  manifest.tool_version = kVersion;
  manifest.duration_seconds = std::chrono::duration<double>(t1 - t0).count();
  for (const auto& [T, count] : summary.failures_by_T) manifest.failures += count;
  manifest.outputs = {args.out_path};
  write_run_manifest(args.out_path + ".manifest.json", manifest, model, cfg);
  std::fprintf(stderr, "fig2: output %s\n", args.out_path.c_str());
  return 0;
}

int cmd_threshold(const ExperimentArgs& args) {
  const auto [model, loaded] = load_config(args.model_path);
  const McConfig cfg = apply_overrides(loaded, args);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.out_path.empty()) {
    file.open(args.out_path, std::ios::binary);
    if (!file) throw Error("cannot write " + args.out_path);
    out = &file;
  }
  (*out) << "source,target,threshold\n";
  for (int s = 0; s < model.n; ++s)
    for (int t = 0; t < model.n; ++t) {
      if (s == t) continue;
      (*out) << (s + 1) << ',' << (t + 1) << ',' << fmt(null_threshold(model, s, t, cfg)) << '\n';
    }
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"Granger-Geweke causality via the state-space single-regression method"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  // exact
  auto* exact = app.add_subcommand("exact", "all-pairs exact GGC of a model config");
  std::string exact_model, exact_out;
  int exact_nfreq = 256;
  exact->add_option("--model", exact_model, "model config (JSON)")->required();
  exact->add_option("--nfreq", exact_nfreq, "spectral grid size");
  exact->add_option("--out", exact_out, "write exact spectral CSV here");

  // estimate
  auto* estimate = app.add_subcommand("estimate", "run both estimators on a data file");
  std::string est_data, est_out;
  int est_p = 0, est_p_red = 0, est_nfreq = 256;
  estimate->add_option("--data", est_data, "headerless CSV, rows = time steps, columns = channels")
      ->required();
  estimate->add_option("--order", est_p, "VAR order for the fits")->required();
  estimate->add_option("--order-reduced", est_p_red, "reduced-model order (default: --order)");
  estimate->add_option("--nfreq", est_nfreq, "spectral grid size");
  estimate->add_option("--out", est_out, "write single-regression spectral CSV here");

  // fig1 / fig2 / threshold
  ExperimentArgs fig1_args, fig2_args, thr_args;
  auto* fig1 = app.add_subcommand("fig1", "spectral experiment: medians, bands, thresholds");
  add_experiment_flags(fig1, fig1_args, "fig1.csv");
  auto* fig2 = app.add_subcommand("fig2", "bias/variance sweep over time-series lengths");
  add_experiment_flags(fig2, fig2_args, "fig2.csv");
  std::vector<int> fig2_T;
  fig2->add_option("--T", fig2_T, "sweep lengths override");
  auto* threshold = app.add_subcommand("threshold", "per-pair null thresholds");
  add_experiment_flags(threshold, thr_args, "");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (exact->parsed()) return cmd_exact(exact_model, exact_nfreq, exact_out);
    if (estimate->parsed()) return cmd_estimate(est_data, est_p, est_p_red, est_nfreq, est_out);
    if (fig1->parsed()) return cmd_fig1(fig1_args);
    if (fig2->parsed()) return cmd_fig2(fig2_args, fig2_T);
    if (threshold->parsed()) return cmd_threshold(thr_args);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 1;
}

}  // namespace ggc
