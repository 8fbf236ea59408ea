#include "ggc/types.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "ggc/errors.hpp"

namespace ggc {

MatrixXd companion_matrix(const std::vector<MatrixXd>& coeffs) {
  const int p = static_cast<int>(coeffs.size());
  const int n = static_cast<int>(coeffs[0].rows());
  const int m = n * p;
  MatrixXd comp = MatrixXd::Zero(m, m);
  for (int j = 0; j < p; ++j) comp.block(0, j * n, n, n) = coeffs[j];
  if (p > 1) comp.block(n, 0, m - n, m - n).setIdentity();
  return comp;
}

double companion_spectral_radius(const std::vector<MatrixXd>& coeffs) {
  const MatrixXd comp = companion_matrix(coeffs);
  Eigen::EigenSolver<MatrixXd> eig(comp, /*computeEigenvectors=*/false);
  return eig.eigenvalues().cwiseAbs().maxCoeff();
}

VarModel validate_and_build_model(const std::vector<MatrixXd>& coeffs, const MatrixXd& sigma) {
  if (coeffs.empty()) throw ShapeMismatch("coefficient list is empty");
  const auto n = coeffs[0].rows();
  if (n < 1) throw ShapeMismatch("coefficient matrices must be non-empty");
  for (const auto& a : coeffs) {
    if (a.rows() != n || a.cols() != n)
      throw ShapeMismatch("coefficient matrices must all be square of one dimension");
  }
  if (sigma.rows() != n || sigma.cols() != n)
    throw ShapeMismatch("sigma dimension does not match coefficients");
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NotPositiveDefinite("sigma is not symmetric");

  Eigen::LLT<MatrixXd> llt(sigma);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("sigma has a non-positive Cholesky pivot");

  const double rho = companion_spectral_radius(coeffs);
  if (rho >= 1.0) throw Unstable(rho);

  VarModel model;
  model.n = static_cast<int>(n);
  model.p = static_cast<int>(coeffs.size());
  model.coeffs = coeffs;
  model.sigma = (sigma + sigma.transpose()) / 2.0;
  model.spectral_radius = rho;
  return model;
}

TimeSeries make_time_series(const MatrixXd& data, bool demeaned) {
  if (data.rows() < 1 || data.cols() < 1)
    throw ShapeMismatch("time series must have n >= 1 and T >= 1");
  if (!data.allFinite()) throw Error("time series contains non-finite entries");
  TimeSeries ts;
  ts.n = static_cast<int>(data.rows());
  ts.T = static_cast<int>(data.cols());
  ts.data = data;
  ts.demeaned = demeaned;
  return ts;
}

TimeSeries demean(const TimeSeries& ts) {
  TimeSeries out = ts;
  out.data.colwise() -= ts.data.rowwise().mean();
  out.demeaned = true;
  return out;
}

AutocovSequence make_autocov_sequence(const std::vector<MatrixXd>& gammas) {
  if (gammas.empty()) throw ShapeMismatch("autocovariance sequence is empty");
  const auto n = gammas[0].rows();
  for (const auto& g : gammas)
    if (g.rows() != n || g.cols() != n)
      throw ShapeMismatch("autocovariance matrices must share one dimension");
  const MatrixXd& g0 = gammas[0];
  if ((g0 - g0.transpose()).cwiseAbs().maxCoeff() > 1e-12)
    throw NotPositiveDefinite("Gamma_0 is not symmetric");
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(g0);
  const double floor = -1e-10 * std::max(1.0, g0.trace());
  if (eig.eigenvalues().minCoeff() < floor)
    throw NotPositiveDefinite("Gamma_0 is not positive-semidefinite");

  AutocovSequence seq;
  seq.n = static_cast<int>(n);
  seq.q = static_cast<int>(gammas.size()) - 1;
  seq.gammas = gammas;
  return seq;
}

SpectralMatrix make_spectral_matrix(std::vector<double> grid, std::vector<MatrixXcd> values) {
  if (grid.size() != values.size())
    throw ShapeMismatch("spectral grid and value counts differ");
  if (grid.empty()) throw ShapeMismatch("spectral matrix has no grid points");
  const auto n = values[0].rows();
  for (auto& s : values) {
    if (s.rows() != n || s.cols() != n)
      throw ShapeMismatch("spectral matrices must share one dimension");
    const double scale = std::max(1.0, s.cwiseAbs().maxCoeff());
    if ((s - s.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * scale)
      throw Error("spectral matrix is not Hermitian");
    s = (s + s.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(s);
    if (eig.eigenvalues().minCoeff() < -1e-10 * std::abs(s.trace().real()))
      throw Error("spectral matrix is not positive-semidefinite");
  }
  SpectralMatrix sm;
  sm.n = static_cast<int>(n);
  sm.grid = std::move(grid);
  sm.values = std::move(values);
  return sm;
}

double logdet_spd(const MatrixXd& m) {
  Eigen::LLT<MatrixXd> llt(m);
  if (llt.info() != Eigen::Success)
    throw NotPositiveDefinite("matrix is not positive-definite in logdet");
  return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
}

std::vector<double> frequency_grid(int n_freq) {
  if (n_freq < 2) throw Error("frequency grid needs at least 2 points");
  std::vector<double> grid(n_freq);
  const double pi = 3.14159265358979323846;
  for (int k = 0; k < n_freq; ++k) grid[k] = pi * k / (n_freq - 1);
  return grid;
}

}  // namespace ggc
