#include "ggc/whittle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ggc/errors.hpp"

namespace ggc {

namespace {

MatrixXd submatrix(const MatrixXd& m, const std::vector<int>& rows, const std::vector<int>& cols) {
  MatrixXd out(rows.size(), cols.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < cols.size(); ++j) out(i, j) = m(rows[i], cols[j]);
  return out;
}

AutocovSequence restrict_autocov(const AutocovSequence& acov, const std::vector<int>& keep) {
  std::vector<MatrixXd> gammas;
  gammas.reserve(acov.gammas.size());
  for (const auto& g : acov.gammas) gammas.push_back(submatrix(g, keep, keep));
  return make_autocov_sequence(gammas);
}

void check_pd(const MatrixXd& m, int step, const char* which) {
  Eigen::LLT<MatrixXd> llt((m + m.transpose()) / 2.0);
  if (llt.info() != Eigen::Success)
    throw DegenerateStep(std::string("whittle_factorize: ") + which +
                         " prediction-error covariance lost positive-definiteness at order " +
                         std::to_string(step));
}

}  // namespace

WhittleResult whittle_factorize(const AutocovSequence& acov, int order) {
  if (order < 0 || order > acov.q)
    throw Error("whittle_factorize: order must lie in [0, acov.q]");
  const int n = acov.n;
  const auto& G = acov.gammas;

  check_pd(G[0], 0, "forward");

  // Forward model  x_t     = sum_j A_j x_{t-j}     + f_t,  cov f = Vf
  // Backward model x_{t-k} = sum_j B_j x_{t-k+j}   + b_t,  cov b = Vb
  std::vector<MatrixXd> fwd, bwd;
  MatrixXd Vf = G[0];
  MatrixXd Vb = G[0];
  std::vector<MatrixXd> step_covs{Vf};

  for (int k = 0; k < order; ++k) {
    MatrixXd delta = G[k + 1];
    for (int j = 1; j <= k; ++j) delta.noalias() -= fwd[j - 1] * G[k + 1 - j];

    const MatrixXd a_new = Vb.ldlt().solve(delta.transpose()).transpose();
    const MatrixXd b_new = Vf.ldlt().solve(delta).transpose();

    std::vector<MatrixXd> fwd_next(k + 1), bwd_next(k + 1);
    for (int j = 1; j <= k; ++j) {
      fwd_next[j - 1] = fwd[j - 1] - a_new * bwd[k - j];
      bwd_next[j - 1] = bwd[j - 1] - b_new * fwd[k - j];
    }
    fwd_next[k] = a_new;
    bwd_next[k] = b_new;
    fwd.swap(fwd_next);
    bwd.swap(bwd_next);

    Vf -= a_new * delta.transpose();
    Vb -= b_new * delta;
    Vf = (Vf + Vf.transpose().eval()) / 2.0;
    Vb = (Vb + Vb.transpose().eval()) / 2.0;
    check_pd(Vf, k + 1, "forward");
    check_pd(Vb, k + 1, "backward");
    step_covs.push_back(Vf);
  }

  WhittleResult result;
  result.model.n = n;
  result.model.p = std::max(order, 1);
  result.model.coeffs = fwd;
  if (order == 0) result.model.coeffs.assign(1, MatrixXd::Zero(n, n));
  result.model.sigma = Vf;
  result.model.spectral_radius = (n * std::max(order, 1) <= 600)
                                     ? companion_spectral_radius(result.model.coeffs)
                                     : std::numeric_limits<double>::quiet_NaN();
  result.step_covs = std::move(step_covs);
  return result;
}

double gc_time_via_whittle(const VarModel& model, int source, int target,
                           const std::vector<int>& conditioning, double tol) {
  if (source == target) throw IndexError("gc_time_via_whittle: source equals target");
  if (source < 0 || source >= model.n || target < 0 || target >= model.n)
    throw IndexError("gc_time_via_whittle: channel index out of range");
  for (int c : conditioning)
    if (c == source || c == target || c < 0 || c >= model.n)
      throw IndexError("gc_time_via_whittle: bad conditioning index");

  std::vector<int> full_keep = conditioning;
  full_keep.push_back(target);
  full_keep.push_back(source);
  std::sort(full_keep.begin(), full_keep.end());

  std::vector<int> reduced_keep;
  for (int c : full_keep)
    if (c != source) reduced_keep.push_back(c);

  const AutocovSequence acov = var_autocov(model, tol);

  // Denominator: target innovations variance of the analysis-full process.
  double logdet_full;
  std::vector<int> tgt{target};
  if (static_cast<int>(full_keep.size()) == model.n) {
    logdet_full = logdet_spd(submatrix(model.sigma, tgt, tgt));
  } else {
    const AutocovSequence sub = restrict_autocov(acov, full_keep);
    const WhittleResult w = whittle_factorize(sub, sub.q);
    std::vector<int> tpos;
    for (std::size_t i = 0; i < full_keep.size(); ++i)
      if (full_keep[i] == target) tpos.push_back(static_cast<int>(i));
    logdet_full = logdet_spd(submatrix(w.model.sigma, tpos, tpos));
  }

  const AutocovSequence sub = restrict_autocov(acov, reduced_keep);
  const WhittleResult w = whittle_factorize(sub, sub.q);
  std::vector<int> tpos;
  for (std::size_t i = 0; i < reduced_keep.size(); ++i)
    if (reduced_keep[i] == target) tpos.push_back(static_cast<int>(i));
  const double logdet_reduced = logdet_spd(submatrix(w.model.sigma, tpos, tpos));

  return logdet_reduced - logdet_full;
}

double gc_time_via_whittle(const VarModel& model, int source, int target, double tol) {
  std::vector<int> conditioning;
  for (int c = 0; c < model.n; ++c)
    if (c != source && c != target) conditioning.push_back(c);
  return gc_time_via_whittle(model, source, target, conditioning, tol);
}

}  // namespace ggc
