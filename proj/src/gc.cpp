#include "ggc/gc.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

#include "ggc/errors.hpp"
#include "ggc/var.hpp"

namespace ggc {

namespace {

constexpr double kNegClamp = 1e-10;

MatrixXd submatrix(const MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

MatrixXcd select_rows(const MatrixXcd& m, const std::vector<int>& rows) {
  MatrixXcd out(rows.size(), m.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(i) = m.row(rows[i]);
  return out;
}

std::vector<int> positions_in(const std::vector<int>& space, const std::vector<int>& values) {
  std::vector<int> pos;
  pos.reserve(values.size());
  for (int v : values) {
    const auto it = std::find(space.begin(), space.end(), v);
    if (it == space.end()) throw IndexError("index not present in kept set");
    pos.push_back(static_cast<int>(it - space.begin()));
  }
  return pos;
}

double logdet_hermitian(const MatrixXcd& m) {
  Eigen::LLT<MatrixXcd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("spectral block is not positive-definite");
  double s = 0.0;
  const MatrixXcd L = llt.matrixL();
  for (Eigen::Index i = 0; i < L.rows(); ++i) s += std::log(L(i, i).real());
  return 2.0 * s;
}

// Projection coefficients of the non-target innovations onto the target's:
// B = V(rest, target) V(target, target)^{-1}. Re-expressing e_rest through
// B e_target + (orthogonal remainder) isolates the intrinsic part of the
// target's reduced-innovations spectrum.
MatrixXd projection_on_target(const MatrixXd& V, const std::vector<int>& rest,
                              const std::vector<int>& target) {
  const MatrixXd Vrt = submatrix(V, rest, target);
  const MatrixXd Vtt = submatrix(V, target, target);
  return Vtt.ldlt().solve(Vrt.transpose()).transpose();  // |rest| x |target|
}

struct ClampTracker {
  double min_raw = std::numeric_limits<double>::infinity();

  double clamp(double v) {
    min_raw = std::min(min_raw, v);
    if (v >= 0.0) return v;
    if (v >= -kNegClamp) return 0.0;
    throw Error("causality value " + std::to_string(v) + " negative beyond roundoff");
  }
  double finish() const { return std::isfinite(min_raw) ? min_raw : 0.0; }
};

// One frequency of the conditional spectral measure for a target block:
// Qt holds the target rows of the transformed transfer G^{-1}(w) H_kept(w)
// (columns indexed by the analysis-full observation space). The numerator is
// the flat reduced-innovations spectrum of the target; the denominator keeps
// only the target-own-innovation term, all other innovations orthogonalized
// against the target's. Geweke's measure: the conditional problem becomes
// an unconditional one from (source, reduced conditioning innovations) to
// the white target innovations.
double spectral_gc_value(const MatrixXcd& Qt, const MatrixXcd& Vc, const MatrixXd& Vtt,
                         const MatrixXd& proj, const std::vector<int>& target,
                         const std::vector<int>& rest) {
  const MatrixXcd N = Qt * Vc * Qt.adjoint();
  MatrixXcd Qtilde = Qt(Eigen::all, target);
  Qtilde.noalias() += Qt(Eigen::all, rest) * proj.cast<std::complex<double>>();
  const MatrixXcd D = Qtilde * Vtt.cast<std::complex<double>>() * Qtilde.adjoint();
  return logdet_hermitian(N) - logdet_hermitian(D);
}

// Spectral curves of one source block against every singleton target in
// `kept`. H_grid holds the analysis-full transfer function per frequency.
// Curves come back indexed like `kept`; the caller maps them to channels.
std::vector<Eigen::ArrayXd> spectral_curves_for_source(
    const StateSpaceInnovations& analysis, const std::vector<MatrixXcd>& H_grid,
    const StateSpaceInnovations& reduced, const std::vector<int>& kept,
    const std::vector<double>& grid) {
  const int nk = static_cast<int>(kept.size());
  const int r = analysis.r;
  const MatrixXcd Vc = analysis.V.cast<std::complex<double>>();

  std::vector<std::vector<int>> rest_of(nk);
  std::vector<MatrixXd> proj_of(nk), vtt_of(nk);
  for (int ti = 0; ti < nk; ++ti) {
    const int t = kept[ti];
    for (int c = 0; c < r; ++c)
      if (c != t) rest_of[ti].push_back(c);
    proj_of[ti] = projection_on_target(analysis.V, rest_of[ti], {t});
    vtt_of[ti] = submatrix(analysis.V, {t}, {t});
  }

  std::vector<Eigen::ArrayXd> curves(nk);
  for (auto& c : curves) c.resize(grid.size());

  for (std::size_t fi = 0; fi < grid.size(); ++fi) {
    const MatrixXcd Ginv = ss_inverse_transfer(reduced, grid[fi]);
    const MatrixXcd Q = Ginv * select_rows(H_grid[fi], kept);
    for (int ti = 0; ti < nk; ++ti) {
      curves[ti](fi) = spectral_gc_value(Q.row(ti), Vc, vtt_of[ti], proj_of[ti], {kept[ti]},
                                         rest_of[ti]);
    }
  }
  return curves;
}

// General-block spectral curve for one (source, target) pair inside an
// analysis-full system whose observations are exactly source + kept.
Eigen::ArrayXd spectral_curve_for_pair(const StateSpaceInnovations& analysis,
                                       const std::vector<int>& target,
                                       const std::vector<int>& kept,
                                       const std::vector<double>& grid) {
  const StateSpaceInnovations reduced = subprocess_innovations(analysis, kept);
  const std::vector<int> tpos = positions_in(kept, target);
  const MatrixXcd Vc = analysis.V.cast<std::complex<double>>();
  std::vector<int> rest;
  for (int c = 0; c < analysis.r; ++c)
    if (std::find(target.begin(), target.end(), c) == target.end()) rest.push_back(c);
  const MatrixXd proj = projection_on_target(analysis.V, rest, target);
  const MatrixXd Vtt = submatrix(analysis.V, target, target);

  Eigen::ArrayXd curve(grid.size());
  for (std::size_t fi = 0; fi < grid.size(); ++fi) {
    const MatrixXcd H = ss_transfer(analysis, grid[fi]);
    const MatrixXcd Ginv = ss_inverse_transfer(reduced, grid[fi]);
    const MatrixXcd Q = Ginv * select_rows(H, kept);
    MatrixXcd Qt(tpos.size(), Q.cols());
    for (std::size_t i = 0; i < tpos.size(); ++i) Qt.row(i) = Q.row(tpos[i]);
    curve(fi) = spectral_gc_value(Qt, Vc, Vtt, proj, target, rest);
  }
  return curve;
}

void check_pair_indices(int n, int source, int target, const std::vector<int>& conditioning) {
  if (source == target) throw IndexError("source equals target");
  if (source < 0 || source >= n || target < 0 || target >= n)
    throw IndexError("channel index out of range");
  std::vector<int> seen{source, target};
  for (int c : conditioning) {
    if (c < 0 || c >= n) throw IndexError("conditioning index out of range");
    if (std::find(seen.begin(), seen.end(), c) != seen.end())
      throw IndexError("conditioning set overlaps source/target or repeats");
    seen.push_back(c);
  }
}

// Analysis system over {source, target} + conditioning with indices remapped;
// equals the VAR embedding itself when every channel participates.
struct AnalysisSystem {
  StateSpaceInnovations ss;
  std::vector<int> source;  // remapped singleton blocks
  std::vector<int> target;
  std::vector<int> kept;    // all analysis indices except source
};

AnalysisSystem build_analysis(const VarModel& model, int source, int target,
                              const std::vector<int>& conditioning) {
  check_pair_indices(model.n, source, target, conditioning);
  std::vector<int> members = conditioning;
  members.push_back(source);
  members.push_back(target);
  std::sort(members.begin(), members.end());

  AnalysisSystem out;
  const StateSpaceInnovations base = var_to_ss(model);
  if (static_cast<int>(members.size()) == model.n) {
    out.ss = base;
  } else {
    out.ss = subprocess_innovations(base, members);
  }
  out.source = positions_in(members, {source});
  out.target = positions_in(members, {target});
  for (int i = 0; i < static_cast<int>(members.size()); ++i)
    if (i != out.source[0]) out.kept.push_back(i);
  return out;
}

}  // namespace

double gc_time_exact(const VarModel& model, int source, int target,
                     const std::vector<int>& conditioning) {
  const AnalysisSystem a = build_analysis(model, source, target, conditioning);
  const StateSpaceInnovations reduced = subprocess_innovations(a.ss, a.kept);
  const std::vector<int> tpos = positions_in(a.kept, a.target);
  const double raw = logdet_spd(submatrix(reduced.V, tpos, tpos)) -
                     logdet_spd(submatrix(a.ss.V, a.target, a.target));
  ClampTracker tr;
  return tr.clamp(raw);
}

double gc_time_exact(const VarModel& model, int source, int target) {
  std::vector<int> conditioning;
  for (int c = 0; c < model.n; ++c)
    if (c != source && c != target) conditioning.push_back(c);
  return gc_time_exact(model, source, target, conditioning);
}

Eigen::ArrayXd gc_spectral_exact(const VarModel& model, int source, int target,
                                 const std::vector<int>& conditioning, int n_freq) {
  const AnalysisSystem a = build_analysis(model, source, target, conditioning);
  const std::vector<double> grid = frequency_grid(n_freq);
  Eigen::ArrayXd curve = spectral_curve_for_pair(a.ss, a.target, a.kept, grid);
  ClampTracker tr;
  for (Eigen::Index i = 0; i < curve.size(); ++i) curve(i) = tr.clamp(curve(i));
  return curve;
}

Eigen::ArrayXd gc_spectral_exact(const VarModel& model, int source, int target, int n_freq) {
  std::vector<int> conditioning;
  for (int c = 0; c < model.n; ++c)
    if (c != source && c != target) conditioning.push_back(c);
  return gc_spectral_exact(model, source, target, conditioning, n_freq);
}

GcTimeResult gc_all_pairs_time(const StateSpaceInnovations& ss, GcMethod method) {
  const int n = ss.r;
  GcTimeResult result;
  result.n = n;
  result.F = MatrixXd::Zero(n, n);
  result.method = method;

  ClampTracker tr;
  for (int s = 0; s < n; ++s) {
    std::vector<int> kept;
    for (int c = 0; c < n; ++c)
      if (c != s) kept.push_back(c);
    const StateSpaceInnovations reduced = subprocess_innovations(ss, kept);
    for (int ti = 0; ti < static_cast<int>(kept.size()); ++ti) {
      const int t = kept[ti];
      const double raw =
          logdet_spd(submatrix(reduced.V, {ti}, {ti})) - logdet_spd(submatrix(ss.V, {t}, {t}));
      result.F(t, s) = tr.clamp(raw);
    }
  }
  result.min_unclamped = tr.finish();
  return result;
}

GcTimeResult gc_all_pairs_time(const VarModel& model) {
  return gc_all_pairs_time(var_to_ss(model), GcMethod::SingleRegressionExact);
}

GcSpectralResult gc_all_pairs_spectral(const StateSpaceInnovations& ss, int n_freq,
                                       GcMethod method) {
  const int n = ss.r;
  GcSpectralResult result;
  result.n = n;
  result.grid = frequency_grid(n_freq);
  result.curves.resize(n * n);
  result.method = method;

  std::vector<MatrixXcd> H_grid;
  H_grid.reserve(result.grid.size());
  for (const double w : result.grid) H_grid.push_back(ss_transfer(ss, w));

  ClampTracker tr;
  for (int s = 0; s < n; ++s) {
    std::vector<int> kept;
    for (int c = 0; c < n; ++c)
      if (c != s) kept.push_back(c);
    const StateSpaceInnovations reduced = subprocess_innovations(ss, kept);
    std::vector<Eigen::ArrayXd> curves =
        spectral_curves_for_source(ss, H_grid, reduced, kept, result.grid);
    for (int ti = 0; ti < static_cast<int>(kept.size()); ++ti) {
      Eigen::ArrayXd& c = curves[ti];
      for (Eigen::Index i = 0; i < c.size(); ++i) c(i) = tr.clamp(c(i));
      result.curves[kept[ti] * n + s] = std::move(c);
    }
  }
  result.min_unclamped = tr.finish();
  return result;
}

GcSpectralResult gc_all_pairs_spectral(const VarModel& model, int n_freq) {
  return gc_all_pairs_spectral(var_to_ss(model), n_freq, GcMethod::SingleRegressionExact);
}

std::pair<GcTimeResult, GcSpectralResult> single_regression_gc(const TimeSeries& ts, int p,
                                                               int n_freq) {
  const VarModel fitted = fit_var_ols(ts, p);
  if (!fitted.stable()) throw UnstableFit(fitted.spectral_radius);
  const StateSpaceInnovations ss = var_to_ss(fitted);
  GcTimeResult time = gc_all_pairs_time(ss, GcMethod::SingleRegressionEstimated);
  GcSpectralResult spec = gc_all_pairs_spectral(ss, n_freq, GcMethod::SingleRegressionEstimated);
  return {std::move(time), std::move(spec)};
}

GcTimeResult single_regression_gc_time(const TimeSeries& ts, int p) {
  const VarModel fitted = fit_var_ols(ts, p);
  if (!fitted.stable()) throw UnstableFit(fitted.spectral_radius);
  return gc_all_pairs_time(var_to_ss(fitted), GcMethod::SingleRegressionEstimated);
}

namespace {

TimeSeries restrict_channels(const TimeSeries& ts, const std::vector<int>& keep) {
  MatrixXd data(keep.size(), ts.T);
  for (std::size_t i = 0; i < keep.size(); ++i) data.row(i) = ts.data.row(keep[i]);
  TimeSeries out = make_time_series(data, ts.demeaned);
  return out;
}

}  // namespace

double dual_regression_gc_time(const TimeSeries& ts, int p_full, int p_reduced, int source,
                               int target, const std::vector<int>& conditioning) {
  check_pair_indices(ts.n, source, target, conditioning);
  std::vector<int> members = conditioning;
  members.push_back(source);
  members.push_back(target);
  std::sort(members.begin(), members.end());
  std::vector<int> reduced_keep;
  for (int c : members)
    if (c != source) reduced_keep.push_back(c);

  const TimeSeries full_ts =
      static_cast<int>(members.size()) == ts.n ? ts : restrict_channels(ts, members);
  const VarModel full = fit_var_ols(full_ts, p_full);
  const VarModel reduced = fit_var_ols(restrict_channels(ts, reduced_keep), p_reduced);

  const std::vector<int> t_full = positions_in(members, {target});
  const std::vector<int> t_red = positions_in(reduced_keep, {target});
  return logdet_spd(submatrix(reduced.sigma, t_red, t_red)) -
         logdet_spd(submatrix(full.sigma, t_full, t_full));
}

double dual_regression_gc_time(const TimeSeries& ts, int p_full, int p_reduced, int source,
                               int target) {
  std::vector<int> conditioning;
  for (int c = 0; c < ts.n; ++c)
    if (c != source && c != target) conditioning.push_back(c);
  return dual_regression_gc_time(ts, p_full, p_reduced, source, target, conditioning);
}

GcTimeResult dual_regression_all_pairs(const TimeSeries& ts, int p_full, int p_reduced) {
  const int n = ts.n;
  const VarModel full = fit_var_ols(ts, p_full);

  GcTimeResult result;
  result.n = n;
  result.F = MatrixXd::Zero(n, n);
  result.method = GcMethod::DualRegression;

  double min_raw = std::numeric_limits<double>::infinity();
  for (int s = 0; s < n; ++s) {
    std::vector<int> kept;
    for (int c = 0; c < n; ++c)
      if (c != s) kept.push_back(c);
    const VarModel reduced = fit_var_ols(restrict_channels(ts, kept), p_reduced);
    for (int ti = 0; ti < static_cast<int>(kept.size()); ++ti) {
      const int t = kept[ti];
      const double v = logdet_spd(submatrix(reduced.sigma, {ti}, {ti})) -
                       logdet_spd(submatrix(full.sigma, {t}, {t}));
      result.F(t, s) = v;
      min_raw = std::min(min_raw, v);
    }
  }
  result.min_unclamped = std::isfinite(min_raw) ? min_raw : 0.0;
  return result;
}

double affine_invariance_check(const VarModel& model, const VectorXd& scales) {
  if (scales.size() != model.n) throw ShapeMismatch("affine_invariance_check: scale count != n");
  for (Eigen::Index i = 0; i < scales.size(); ++i)
    if (scales(i) == 0.0) throw Error("affine_invariance_check: scale factors must be nonzero");

  const MatrixXd D = scales.asDiagonal();
  const MatrixXd Dinv = scales.cwiseInverse().asDiagonal();
  std::vector<MatrixXd> coeffs;
  coeffs.reserve(model.coeffs.size());
  for (const auto& a : model.coeffs) coeffs.push_back(D * a * Dinv);
  const VarModel scaled = validate_and_build_model(coeffs, D * model.sigma * D.transpose());

  const GcTimeResult before = gc_all_pairs_time(model);
  const GcTimeResult after = gc_all_pairs_time(scaled);
  return (before.F - after.F).cwiseAbs().maxCoeff();
}

}  // namespace ggc
