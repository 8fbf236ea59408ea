#include "ggc/var.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <limits>

#include "ggc/errors.hpp"
#include "ggc/rng.hpp"

namespace ggc {

TimeSeries simulate_var(const VarModel& model, int T, int burn_in, std::uint64_t seed) {
  if (T < 1) throw Error("simulate_var: T must be >= 1");
  if (burn_in < 0) throw Error("simulate_var: burn_in must be >= 0");
  if (!model.stable()) throw Unstable(model.spectral_radius, "simulate_var requires a stable model");

  const int n = model.n;
  const int p = model.p;
  const int total = burn_in + T;

  Eigen::LLT<MatrixXd> llt(model.sigma);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("simulate_var: sigma Cholesky failed");
  const MatrixXd chol = llt.matrixL();

  CounterRng rng(seed);
  MatrixXd data(n, total);
  VectorXd shock(n);
  for (int t = 0; t < total; ++t) {
    for (int i = 0; i < n; ++i) shock(i) = rng.normal();
    VectorXd x = chol * shock;
    for (int j = 0; j < p; ++j) {
      const int lag = t - 1 - j;
      if (lag < 0) break;
      x.noalias() += model.coeffs[j] * data.col(lag);
    }
    data.col(t) = x;
  }
  return make_time_series(data.rightCols(T));
}

VarModel fit_var_ols(const TimeSeries& ts, int p) {
  if (p < 1) throw Error("fit_var_ols: order must be >= 1");
  const int n = ts.n;
  const int T = ts.T;
  const int rows = T - p;
  const int cols = n * p;
  if (rows < cols + 1)
    throw InsufficientData("fit_var_ols: need T - p > n*p, got T = " + std::to_string(T) +
                           ", n = " + std::to_string(n) + ", p = " + std::to_string(p));

  const TimeSeries work = ts.demeaned ? ts : demean(ts);

  // Regressor rows r_t = [x_{t-1}; ...; x_{t-p}], responses x_t.
  MatrixXd X(rows, cols);
  MatrixXd Y(rows, n);
  for (int t = p; t < T; ++t) {
    for (int j = 0; j < p; ++j)
      X.block(t - p, j * n, 1, n) = work.data.col(t - 1 - j).transpose();
    Y.row(t - p) = work.data.col(t).transpose();
  }

  const MatrixXd gram = X.transpose() * X;
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(gram);
  const double lam_max = eig.eigenvalues().maxCoeff();
  const double lam_min = eig.eigenvalues().minCoeff();
  if (!(lam_max > 0.0) || lam_min / lam_max < 1e-12)
    throw SingularRegressors("fit_var_ols: lag Gram matrix reciprocal condition below 1e-12");

  Eigen::LDLT<MatrixXd> ldlt(gram);
  const MatrixXd B = ldlt.solve(X.transpose() * Y);  // cols x n

  VarModel model;
  model.n = n;
  model.p = p;
  model.coeffs.resize(p);
  for (int j = 0; j < p; ++j) model.coeffs[j] = B.block(j * n, 0, n, n).transpose();

  // Common divisor T-p for every fit. A per-model degrees-of-freedom divisor
  // would break the nestedness of full vs. source-omitted regressions that
  // keeps the dual-regression log-ratio non-negative, and single-regression
  // GGC is invariant to the divisor anyway (the Riccati reduction is jointly
  // homogeneous in its covariance inputs).
  const MatrixXd resid = Y - X * B;
  MatrixXd sigma = resid.transpose() * resid / rows;
  sigma = (sigma + sigma.transpose()) / 2.0;
  Eigen::LLT<MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("fit_var_ols: residual covariance is not positive-definite");
  model.sigma = sigma;
  model.spectral_radius = companion_spectral_radius(model.coeffs);
  return model;
}

namespace {

// Discrete Lyapunov solve P = A P A' + Q by doubling:
// P_{k+1} = P_k + M_k P_k M_k',  M_{k+1} = M_k^2  with M_0 = A, P_0 = Q.
MatrixXd solve_discrete_lyapunov(const MatrixXd& A, const MatrixXd& Q) {
  MatrixXd P = Q;
  MatrixXd M = A;
  for (int it = 0; it < 200; ++it) {
    if (M.norm() < 1e-30) return (P + P.transpose()) / 2.0;
    P = P + M * P * M.transpose();
    if (!P.allFinite()) break;
    M = (M * M).eval();
  }
  throw Unstable(std::numeric_limits<double>::quiet_NaN(),
                 "Lyapunov doubling did not converge; system is not stable");
}

}  // namespace

AutocovSequence var_autocov(const VarModel& model, double tol, int q_max) {
  if (!model.stable()) throw Unstable(model.spectral_radius, "var_autocov requires a stable model");
  const int n = model.n;
  const int p = model.p;
  const int m = n * p;

  const MatrixXd comp = companion_matrix(model.coeffs);
  MatrixXd Q = MatrixXd::Zero(m, m);
  Q.topLeftCorner(n, n) = model.sigma;
  const MatrixXd P = solve_discrete_lyapunov(comp, Q);

  // First block row of the stacked-state covariance holds Gamma_0..Gamma_{p-1}.
  std::vector<MatrixXd> gammas;
  gammas.reserve(p + 1);
  for (int k = 0; k < p; ++k) gammas.push_back(P.block(0, k * n, n, n));
  gammas[0] = (gammas[0] + gammas[0].transpose().eval()) / 2.0;

  const double scale = gammas[0].norm();
  auto negligible = [&](const MatrixXd& g) { return g.norm() < tol * scale; };

  // Extend by Gamma_k = sum_j A_j Gamma_{k-j} (Gamma_{-m} = Gamma_m') until p
  // consecutive lags fall below tol; a single small lag can be a zero of an
  // oscillatory sequence, p consecutive ones pin the whole tail down.
  int consecutive = 0;
  for (int k = static_cast<int>(gammas.size()) - 1; k >= 1 && negligible(gammas[k]); --k)
    ++consecutive;
  while (consecutive < p) {
    const int k = static_cast<int>(gammas.size());
    if (k > q_max)
      throw TruncationCapReached("var_autocov: no decay below tol within q_max = " +
                                 std::to_string(q_max) + " lags");
    MatrixXd g = MatrixXd::Zero(n, n);
    for (int j = 1; j <= p; ++j) {
      const int lag = k - j;
      if (lag >= 0)
        g.noalias() += model.coeffs[j - 1] * gammas[lag];
      else
        g.noalias() += model.coeffs[j - 1] * gammas[-lag].transpose();
    }
    consecutive = negligible(g) ? consecutive + 1 : 0;
    gammas.push_back(std::move(g));
  }
  while (gammas.size() > 1 && negligible(gammas.back())) gammas.pop_back();
  return make_autocov_sequence(gammas);
}

SpectralMatrix var_spectrum(const VarModel& model, int n_freq) {
  if (n_freq < 2) throw Error("var_spectrum: n_freq must be >= 2");
  const int n = model.n;
  const std::vector<double> grid = frequency_grid(n_freq);
  const std::complex<double> im(0.0, 1.0);

  std::vector<MatrixXcd> values;
  values.reserve(grid.size());
  for (const double w : grid) {
    MatrixXcd phi = MatrixXcd::Identity(n, n);
    for (int j = 1; j <= model.p; ++j)
      phi -= model.coeffs[j - 1] * std::exp(-im * (static_cast<double>(j) * w));
    Eigen::FullPivLU<MatrixXcd> lu(phi);
    if (!lu.isInvertible())
      throw SingularTransfer("var_spectrum: transfer function singular at w = " + std::to_string(w));
    const MatrixXcd H = lu.inverse();
    values.push_back(H * model.sigma * H.adjoint());
  }
  return make_spectral_matrix(grid, std::move(values));
}

}  // namespace ggc
