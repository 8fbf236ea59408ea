#ifndef GGC_GC_HPP
#define GGC_GC_HPP

#include <utility>
#include <vector>

#include "ggc/state_space.hpp"
#include "ggc/types.hpp"

namespace ggc {

enum class GcMethod { SingleRegressionExact, SingleRegressionEstimated, DualRegression };

/// All-pairs time-domain conditional causality. F(target, source) holds
/// F_{source -> target | rest} in nats; the diagonal is undefined and
/// stored as zero.
struct GcTimeResult {
  int n = 0;
  MatrixXd F;
  GcMethod method = GcMethod::SingleRegressionExact;
  double min_unclamped = 0.0;  // smallest value seen before the roundoff clamp

  bool defined(int target, int source) const { return target != source; }
};

/// All-pairs spectral conditional causality on a uniform [0, pi] grid.
struct GcSpectralResult {
  int n = 0;
  std::vector<double> grid;
  std::vector<Eigen::ArrayXd> curves;  // index target*n + source; empty on diagonal
  GcMethod method = GcMethod::SingleRegressionExact;
  double min_unclamped = 0.0;

  const Eigen::ArrayXd& f(int target, int source) const { return curves[target * n + source]; }
};

/// Exact conditional time-domain GGC of a stable model,
/// F = ln(det V'_tt / det Sigma_tt), with V' the innovations covariance of
/// the source-omitted subprocess obtained through the Riccati reduction.
/// The two-argument overload conditions on all remaining channels.
double gc_time_exact(const VarModel& model, int source, int target,
                     const std::vector<int>& conditioning);
double gc_time_exact(const VarModel& model, int source, int target);

/// Exact conditional spectral GGC on the uniform [0, pi] grid: the reduced
/// subprocess innovations filter is applied to the full-model transfer
/// function and the target's (flat) reduced-innovations spectrum is split
/// into an intrinsic part and the part driven by source innovations
/// orthogonalized against all kept channels. With empty conditioning this
/// reduces to Geweke's bivariate measure
/// f(w) = ln(|S_tt| / |S_tt - H_ts Sigma_{s|t} H_ts*|).
Eigen::ArrayXd gc_spectral_exact(const VarModel& model, int source, int target,
                                 const std::vector<int>& conditioning, int n_freq);
Eigen::ArrayXd gc_spectral_exact(const VarModel& model, int source, int target, int n_freq);

/// All ordered pairs, one Riccati reduction per source channel.
GcTimeResult gc_all_pairs_time(const VarModel& model);
GcTimeResult gc_all_pairs_time(const StateSpaceInnovations& ss,
                               GcMethod method = GcMethod::SingleRegressionExact);

GcSpectralResult gc_all_pairs_spectral(const VarModel& model, int n_freq);
GcSpectralResult gc_all_pairs_spectral(const StateSpaceInnovations& ss, int n_freq,
                                       GcMethod method = GcMethod::SingleRegressionExact);

/// Single-regression estimator: fits ONE full VAR(p) by OLS, embeds it in
/// state space and computes all-pairs time and spectral GGC exactly from the
/// fitted parameters. No reduced regression ever touches the data.
///
/// Throws UnstableFit(rho) when the fitted model is unstable.
std::pair<GcTimeResult, GcSpectralResult> single_regression_gc(const TimeSeries& ts, int p,
                                                               int n_freq);

/// Time-domain-only variant, for sweeps that do not need spectra.
GcTimeResult single_regression_gc_time(const TimeSeries& ts, int p);

/// Dual-regression baseline: independent full and source-omitted OLS fits,
/// F = ln(det Sigma'_tt / det Sigma_tt). Values may be negative; they are
/// reported unclamped.
double dual_regression_gc_time(const TimeSeries& ts, int p_full, int p_reduced, int source,
                               int target, const std::vector<int>& conditioning);
double dual_regression_gc_time(const TimeSeries& ts, int p_full, int p_reduced, int source,
                               int target);

/// All ordered pairs for the dual baseline; the full model is fitted once
/// and one reduced fit is shared per source.
GcTimeResult dual_regression_all_pairs(const TimeSeries& ts, int p_full, int p_reduced);

/// Rescales channel i by scale[i] (coefficients and sigma conjugated),
/// recomputes exact all-pairs GGC and returns the max-abs discrepancy
/// against the original model. Scale factors must be nonzero.
double affine_invariance_check(const VarModel& model, const VectorXd& scales);

}  // namespace ggc

#endif  // GGC_GC_HPP
